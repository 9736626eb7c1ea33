/**
 * Client for a core `serve` process: spawns it, speaks the line protocol
 * in strict lockstep (one outstanding request at a time), and surfaces
 * crashes as transport errors.
 */

import { ChildProcessWithoutNullStreams, spawn } from "node:child_process";
import readline from "node:readline";

import {
  IncomingMessage,
  OutgoingMessage,
  ProtocolDesyncError,
  decodeLine,
  encodeLine,
} from "./protocol.js";

export class CoreTransportError extends Error {}

export interface CoreClientOptions {
  command: string;
  args: string[];
  replyTimeoutMs?: number;
}

export class CoreClient {
  private child: ChildProcessWithoutNullStreams;
  private pending: Array<{
    resolve: (reply: IncomingMessage) => void;
    reject: (err: Error) => void;
  }> = [];
  private stderrTail = "";
  private closed = false;
  private readonly replyTimeoutMs: number;

  constructor(options: CoreClientOptions) {
    this.replyTimeoutMs = options.replyTimeoutMs ?? 60_000;
    this.child = spawn(options.command, options.args, {
      stdio: ["pipe", "pipe", "pipe"],
    });
    const rl = readline.createInterface({ input: this.child.stdout });
    rl.on("line", (line) => this.onLine(line));
    this.child.stderr.on("data", (buf: Buffer) => {
      this.stderrTail = (this.stderrTail + buf.toString()).slice(-2000);
    });
    this.child.on("close", (code) => {
      this.closed = true;
      const waiting = this.pending.splice(0);
      for (const p of waiting) {
        p.reject(
          new CoreTransportError(
            `core process exited (code ${code}) before replying` +
              (this.stderrTail ? `; stderr: ${this.stderrTail}` : ""),
          ),
        );
      }
    });
  }

  private onLine(line: string): void {
    if (!line.trim()) return;
    const waiter = this.pending.shift();
    if (!waiter) return; // unsolicited output; nothing waits on it
    try {
      waiter.resolve(decodeLine(line));
    } catch (err) {
      waiter.reject(err as Error);
    }
  }

  /** Send one message and wait for its single reply (lockstep). */
  request(message: OutgoingMessage): Promise<IncomingMessage> {
    if (this.closed) {
      return Promise.reject(new CoreTransportError("core process is closed"));
    }
    if (this.pending.length > 0) {
      return Promise.reject(
        new ProtocolDesyncError("a request is already outstanding"),
      );
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => {
        this.pending = this.pending.filter((p) => p.resolve !== wrapped);
        reject(new CoreTransportError("timed out waiting for core reply"));
      }, this.replyTimeoutMs);
      const wrapped = (reply: IncomingMessage) => {
        clearTimeout(timer);
        resolve(reply);
      };
      this.pending.push({
        resolve: wrapped,
        reject: (err) => {
          clearTimeout(timer);
          reject(err);
        },
      });
      this.child.stdin.write(encodeLine(message));
    });
  }

  async close(): Promise<void> {
    if (!this.closed) {
      this.child.stdin.end();
      await new Promise<void>((resolve) => {
        this.child.once("close", () => resolve());
        setTimeout(() => {
          this.child.kill();
          resolve();
        }, 5_000).unref();
      });
    }
  }
}
