/** Test helpers: run the prover as a child process. */

import { spawn, ChildProcessWithoutNullStreams } from "node:child_process";
import { once } from "node:events";
import * as path from "node:path";
import { LineTransport } from "../src/transport";

export const CORPUS = path.resolve(__dirname, "..", "..", "corpus");

const PYTHON = process.env.PYTHON ?? "python3";

export interface ServerHandle {
  transport: LineTransport;
  stop(): Promise<void>;
}

/** Spawn `serve --stdio` and wire a LineTransport to it. */
export function startServer(cwd: string = CORPUS): ServerHandle {
  const child: ChildProcessWithoutNullStreams = spawn(
    PYTHON,
    ["-m", "nabella.cli", "serve", "--stdio"],
    { cwd },
  );
  const transport = new LineTransport((line) => {
    child.stdin.write(line + "\n");
  });
  child.stdout.setEncoding("utf8");
  child.stdout.on("data", (chunk: string) => transport.feed(chunk));
  child.on("close", () => transport.close());
  return {
    transport,
    stop: async () => {
      child.stdin.end();
      if (child.exitCode === null) await once(child, "close");
    },
  };
}

/** Run `repl --json` over a whole script and return the emitted state
 * objects, one per statement. */
export async function replJson(
  script: string,
  cwd: string = CORPUS,
): Promise<Record<string, unknown>[]> {
  const child = spawn(PYTHON, ["-m", "nabella.cli", "repl", "--json"], {
    cwd,
  });
  let out = "";
  child.stdout.setEncoding("utf8");
  child.stdout.on("data", (chunk: string) => (out += chunk));
  child.stdin.write(script);
  child.stdin.end();
  await once(child, "close");
  return out
    .split("\n")
    .filter((l) => l.trim().length > 0)
    .map((l) => JSON.parse(l) as Record<string, unknown>);
}
