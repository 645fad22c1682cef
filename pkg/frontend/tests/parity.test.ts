import * as fs from "node:fs";
import * as path from "node:path";
import { afterEach, describe, expect, it } from "vitest";

import { canonicalJson, splitStatements } from "../src/protocol";
import { UiSession } from "../src/session";
import { CORPUS, replJson, startServer, ServerHandle } from "./helpers";

let server: ServerHandle | null = null;

afterEach(async () => {
  if (server) {
    await server.stop();
    server = null;
  }
});

async function checkParity(file: string): Promise<void> {
  const script = fs.readFileSync(path.join(CORPUS, file), "utf8");
  const statements = splitStatements(script);
  const cli = await replJson(script);
  expect(cli.length).toBe(statements.length);

  server = startServer();
  const session = new UiSession(server.transport);
  await session.setScript(script);

  for (let i = 0; i < statements.length; i++) {
    const okStep = await session.stepForward();
    expect(okStep, statements[i]).toBe(true);
    expect((cli[i] as { status: string }).status).toBe("ok");
    // byte-for-byte identical subgoal payloads at every step
    expect(canonicalJson(session.subgoals)).toBe(
      canonicalJson(cli[i].subgoals),
    );
  }
}

describe("workbench parity with the CLI", () => {
  it("replays the even/odd script byte-identically", async () => {
    await checkParity("even_odd.thm");
  }, 60000);

  it("replays the preservation script byte-identically", async () => {
    await checkParity("preservation.thm");
  }, 60000);

  it("live session: fork, inspect, undo", async () => {
    server = startServer();
    const session = new UiSession(server.transport);
    await session.setScript(
      [
        "Kind nat type.",
        "Type z nat.",
        "Type s nat -> nat.",
        "Define even : nat -> prop by even z ; even (s (s N)) := even N.",
        "Theorem t : even (s (s z)).",
        "unfold.",
        "search.",
      ].join("\n"),
    );
    const steps: boolean[] = [];
    while (session.canStepForward) steps.push(await session.stepForward());
    expect(steps.every(Boolean)).toBe(true);
    expect(session.view().banner).toBe("Proof completed");
    expect(session.lastMessage).toContain("completed");

    // stepping back re-opens the proof on the server
    expect(await session.stepBack()).toBe(true);
    expect(session.subgoals.length).toBe(1);
    expect(session.subgoals[0].goal).toBe("even z");
  }, 60000);
});
