/**
 * The adapter proper: drives a model runtime against a core serve process
 * in lockstep (never sending step N+1 before decision N), and exports
 * hidden-state generation corpora in the core's JSONL schema.
 */

import fs from "node:fs";

import { CoreClient } from "./core.js";
import { ModelHandle } from "./model.js";
import { DecisionReply, VotingMode, expectReply } from "./protocol.js";

export interface GenerationConfig {
  theta: number;
  maxNewTokens: number;
  mode: VotingMode;
}

export const DEFAULT_CONFIG: GenerationConfig = {
  theta: 0.5,
  maxNewTokens: 300,
  mode: "line_voting",
};

export interface GenerationResult {
  text: string;
  stepsSent: number;
  stopReason: DecisionReply["reason"] | "exhausted";
}

/**
 * Run one controlled generation: init the session, stream (token, hidden,
 * eos) steps, stop the decode loop on the core's stop decision, and return
 * the core's finalized output.
 */
export async function runGeneration(
  promptText: string,
  model: ModelHandle,
  core: CoreClient,
  config: GenerationConfig = DEFAULT_CONFIG,
): Promise<GenerationResult> {
  const ready = await core.request({
    type: "init",
    feature_dim: model.featureDim,
    theta: config.theta,
    max_new_tokens: config.maxNewTokens,
    mode: config.mode,
  });
  expectReply(ready, "ready");

  let stepsSent = 0;
  let stopReason: GenerationResult["stopReason"] = "exhausted";
  for (const step of model.generate(promptText)) {
    const reply = await core.request({
      type: "step",
      text: step.text,
      hidden: step.hidden,
      is_eos: step.isEos,
    });
    const decision = expectReply(reply, "decision");
    stepsSent += 1;
    if (decision.action === "stop") {
      stopReason = decision.reason;
      break;
    }
  }
  const output = expectReply(await core.request({ type: "finalize" }), "output");
  return { text: output.text, stepsSent, stopReason };
}

export interface PromptRecord {
  id: string;
  language: string;
  prompt_text: string;
  source: string;
}

export interface ExportOptions {
  maxNewTokens: number;
  onSkip?: (promptId: string, err: Error) => void;
}

/**
 * Sample raw generations with hidden-state capture and write the core's
 * generations.jsonl schema. Hidden values are captured as exact f32
 * up-conversions; records that fail mid-generation are skipped with a
 * diagnostic rather than aborting the export.
 */
export function exportRecords(
  prompts: PromptRecord[],
  model: ModelHandle,
  outPath: string,
  options: ExportOptions = { maxNewTokens: 300 },
): number {
  const lines: string[] = [];
  for (const prompt of prompts) {
    try {
      const steps = [];
      for (const step of model.generate(prompt.prompt_text)) {
        if (steps.length >= options.maxNewTokens) break;
        steps.push({
          index: steps.length,
          text: step.text,
          hidden: step.hidden.map((v) => Math.fround(v)),
          is_eos: step.isEos,
        });
        if (step.isEos) break;
      }
      lines.push(
        JSON.stringify({
          prompt_id: prompt.id,
          model_name: model.name,
          max_new_tokens_used: options.maxNewTokens,
          pass_outcome: null,
          steps,
        }),
      );
    } catch (err) {
      options.onSkip?.(prompt.id, err as Error);
    }
  }
  fs.writeFileSync(outPath, lines.map((l) => l + "\n").join(""), "utf-8");
  return lines.length;
}

/** Write the core's binary classifier format (magic GGRD, version 1). */
export function writeStopModel(
  path: string,
  continueRow: number[],
  stopRow: number[],
): void {
  if (continueRow.length !== stopRow.length) {
    throw new Error("weight rows must have equal length");
  }
  const d = continueRow.length;
  const meta = Buffer.from(
    JSON.stringify({ feature_dim: d, use_bias: false, source: "adapter" }),
    "utf-8",
  );
  const buf = Buffer.alloc(4 + 4 + 4 + 2 * d * 4 + 4 + meta.length);
  let off = buf.write("GGRD", 0, "ascii");
  off = buf.writeUInt32LE(1, off);
  off = buf.writeUInt32LE(d, off);
  for (const row of [continueRow, stopRow]) {
    for (const v of row) {
      off = buf.writeFloatLE(v, off);
    }
  }
  off = buf.writeUInt32LE(meta.length, off);
  meta.copy(buf, off);
  fs.writeFileSync(path, buf);
}
