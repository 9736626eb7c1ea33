/**
 * The model-runtime surface the adapter drives: a greedy per-step decode
 * loop exposing each token's text, the final-layer hidden state at the
 * last position (the state that produced the token), and the EOS flag.
 *
 * The built-in implementation is a scripted stub for tests and offline
 * pipelines; a real runtime plugs in by implementing ModelHandle.
 */

import fs from "node:fs";

export interface ModelStep {
  text: string;
  hidden: number[];
  isEos: boolean;
}

export interface ModelHandle {
  readonly name: string;
  readonly featureDim: number;
  /** Start one greedy generation for the prompt. */
  generate(promptText: string): Iterable<ModelStep>;
}

export interface ScriptedStep {
  text: string;
  /** Which side of the synthetic feature space the hidden lands on. */
  side: "continue" | "stop";
  isEos?: boolean;
}

export interface ScriptFile {
  name?: string;
  feature_dim?: number;
  separation?: number;
  /** One scripted generation per prompt id; "*" is the fallback script. */
  scripts: Record<string, ScriptedStep[]>;
}

/**
 * Deterministic stub model: per prompt it replays a scripted token list,
 * synthesizing oracle-separable hidden states (continue side at -mu on
 * axis 0, stop side at +mu). The values are exact f32 so exports
 * round-trip bitwise.
 */
export class ScriptedModel implements ModelHandle {
  readonly name: string;
  readonly featureDim: number;
  private readonly separation: number;
  private readonly scripts: Record<string, ScriptedStep[]>;

  constructor(script: ScriptFile) {
    this.name = script.name ?? "scripted-stub";
    this.featureDim = script.feature_dim ?? 8;
    this.separation = script.separation ?? 8;
    this.scripts = script.scripts;
  }

  static fromFile(path: string): ScriptedModel {
    return new ScriptedModel(JSON.parse(fs.readFileSync(path, "utf-8")));
  }

  scriptFor(promptId: string): ScriptedStep[] {
    const script = this.scripts[promptId] ?? this.scripts["*"];
    if (!script) {
      throw new Error(`no script for prompt ${promptId} and no "*" fallback`);
    }
    return script;
  }

  hiddenFor(side: "continue" | "stop", position: number): number[] {
    const mu = this.separation / 2;
    const hidden = new Array<number>(this.featureDim).fill(0);
    hidden[0] = side === "stop" ? mu : -mu;
    // a small deterministic ripple so vectors differ position to position
    hidden[1 % this.featureDim] = Math.fround(0.125 * ((position % 7) - 3));
    return hidden;
  }

  *generateScript(promptId: string): Iterable<ModelStep> {
    const script = this.scriptFor(promptId);
    for (let i = 0; i < script.length; i++) {
      const s = script[i];
      yield {
        text: s.text,
        hidden: this.hiddenFor(s.side, i),
        isEos: s.isEos ?? false,
      };
    }
  }

  generate(promptText: string): Iterable<ModelStep> {
    // prompts carry their id on the first comment line in stub pipelines;
    // fall back to the shared script otherwise
    const match = promptText.match(/id:([\w-]+)/);
    return this.generateScript(match ? match[1] : "*");
  }
}
