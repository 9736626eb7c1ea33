#!/usr/bin/env node
/**
 * Adapter CLI.
 *
 *   run    --model scripted:script.json --prompts prompts.jsonl \
 *          --core-cmd "python3 -m genstop.cli serve --model model.ggrd" \
 *          [--theta 0.5] [--max-new-tokens 300] [--mode line_voting]
 *   export --model scripted:script.json --prompts prompts.jsonl \
 *          --output generations.jsonl [--max-new-tokens 300] \
 *          [--device cpu] [--precision f32]
 *
 * The scripted model is the only built-in runtime; real runtimes implement
 * the ModelHandle interface. --device and --precision are accepted for
 * runtime parity; the stub ignores them (values are already exact f32).
 */

import fs from "node:fs";

import { CoreClient } from "./core.js";
import { DEFAULT_CONFIG, exportRecords, runGeneration } from "./adapter.js";
import { ModelHandle, ScriptedModel } from "./model.js";
import { VotingMode } from "./protocol.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    if (!argv[i].startsWith("--")) {
      throw new Error(`unexpected argument ${argv[i]}`);
    }
    const key = argv[i].slice(2);
    const value = argv[i + 1];
    if (value === undefined || value.startsWith("--")) {
      flags.set(key, "true");
    } else {
      flags.set(key, value);
      i++;
    }
  }
  return flags;
}

function loadModel(spec: string | undefined): ModelHandle {
  if (!spec) throw new Error("--model is required");
  if (spec.startsWith("scripted:")) {
    return ScriptedModel.fromFile(spec.slice("scripted:".length));
  }
  throw new Error(
    `unknown model id ${spec}; only scripted:<script.json> is built in`,
  );
}

function loadPrompts(path: string | undefined) {
  if (!path) throw new Error("--prompts is required");
  return fs
    .readFileSync(path, "utf-8")
    .split("\n")
    .filter((l) => l.trim())
    .map((l) => JSON.parse(l));
}

async function cmdRun(flags: Map<string, string>): Promise<number> {
  const model = loadModel(flags.get("model"));
  const prompts = loadPrompts(flags.get("prompts"));
  const coreCmd = flags.get("core-cmd");
  if (!coreCmd) throw new Error("--core-cmd is required");
  const [command, ...args] = coreCmd.split(/\s+/);
  const config = {
    theta: parseFloat(flags.get("theta") ?? String(DEFAULT_CONFIG.theta)),
    maxNewTokens: parseInt(
      flags.get("max-new-tokens") ?? String(DEFAULT_CONFIG.maxNewTokens),
      10,
    ),
    mode: (flags.get("mode") ?? DEFAULT_CONFIG.mode) as VotingMode,
  };
  for (const prompt of prompts) {
    const core = new CoreClient({ command, args });
    try {
      const result = await runGeneration(prompt.prompt_text, model, core, config);
      process.stdout.write(
        JSON.stringify({
          prompt_id: prompt.id,
          stop_reason: result.stopReason,
          steps: result.stepsSent,
          text: result.text,
        }) + "\n",
      );
    } finally {
      await core.close();
    }
  }
  return 0;
}

function cmdExport(flags: Map<string, string>): number {
  const model = loadModel(flags.get("model"));
  const prompts = loadPrompts(flags.get("prompts"));
  const output = flags.get("output");
  if (!output) throw new Error("--output is required");
  const written = exportRecords(prompts, model, output, {
    maxNewTokens: parseInt(flags.get("max-new-tokens") ?? "300", 10),
    onSkip: (id, err) =>
      process.stderr.write(`skipping ${id}: ${err.message}\n`),
  });
  process.stdout.write(`wrote ${written} records to ${output}\n`);
  return 0;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  try {
    const flags = parseFlags(rest);
    if (command === "run") return await cmdRun(flags);
    if (command === "export") return cmdExport(flags);
    process.stderr.write(
      "usage: cli.js <run|export> --model scripted:<script.json> ...\n",
    );
    return 1;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

main().then((code) => process.exit(code));
