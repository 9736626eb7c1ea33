/**
 * Wire types for the step protocol: single lines of UTF-8 JSON, one
 * decision per step, exchanged with a core `serve` process over stdio.
 */

export type VotingMode = "line_voting" | "token_voting";

export interface InitMessage {
  type: "init";
  feature_dim: number;
  theta: number;
  max_new_tokens: number;
  mode: VotingMode;
}

export interface StepMessage {
  type: "step";
  text: string;
  hidden: number[];
  is_eos: boolean;
}

export interface FinalizeMessage {
  type: "finalize";
}

export type OutgoingMessage = InitMessage | StepMessage | FinalizeMessage;

export interface ReadyReply {
  type: "ready";
}

export interface DecisionReply {
  type: "decision";
  action: "continue" | "stop";
  reason: "none" | "voted_stop" | "eos" | "length_cap";
}

export interface OutputReply {
  type: "output";
  text: string;
}

export interface ErrorReply {
  type: "error";
  message: string;
}

export type IncomingMessage = ReadyReply | DecisionReply | OutputReply | ErrorReply;

export class ProtocolDesyncError extends Error {}

export function encodeLine(message: OutgoingMessage): string {
  return JSON.stringify(message) + "\n";
}

export function decodeLine(line: string): IncomingMessage {
  let parsed: unknown;
  try {
    parsed = JSON.parse(line);
  } catch {
    throw new ProtocolDesyncError(`reply is not JSON: ${line.slice(0, 120)}`);
  }
  if (typeof parsed !== "object" || parsed === null || !("type" in parsed)) {
    throw new ProtocolDesyncError(`reply has no type: ${line.slice(0, 120)}`);
  }
  const message = parsed as IncomingMessage;
  switch (message.type) {
    case "ready":
    case "output":
    case "error":
      return message;
    case "decision":
      if (message.action !== "continue" && message.action !== "stop") {
        throw new ProtocolDesyncError(`bad decision action: ${line}`);
      }
      return message;
    default:
      throw new ProtocolDesyncError(`unknown reply type: ${line.slice(0, 120)}`);
  }
}

/** Expect a specific reply type; anything else aborts the session. */
export function expectReply<T extends IncomingMessage["type"]>(
  reply: IncomingMessage,
  type: T,
): Extract<IncomingMessage, { type: T }> {
  if (reply.type === "error") {
    throw new ProtocolDesyncError(`core error: ${(reply as ErrorReply).message}`);
  }
  if (reply.type !== type) {
    throw new ProtocolDesyncError(
      `expected ${type} reply, got ${reply.type}`,
    );
  }
  return reply as Extract<IncomingMessage, { type: T }>;
}
