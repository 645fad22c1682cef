import { describe, expect, it } from "vitest";

import { renderSubgoals } from "../src/render";
import { Subgoal } from "../src/protocol";

const subgoal = (over: Partial<Subgoal> = {}): Subgoal => ({
  sig: [{ name: "N", ty: "nat" }],
  hyps: [
    { name: "IH", formula: "forall N, even N* -> odd (s N)", ann: "" },
    { name: "H1", formula: "even N@", ann: "@" },
  ],
  goal: "odd (s N)",
  ...over,
});

describe("renderSubgoals", () => {
  it("shows annotation badges on hypotheses", () => {
    const v = renderSubgoals([
      subgoal({
        hyps: [
          { name: "H2", formula: "even N1*", ann: "*" },
          { name: "H3", formula: "nat N1", ann: "" },
        ],
      }),
    ]);
    expect(v.error).toBeNull();
    expect(v.subgoals[0].hyps[0].badge).toBe("*");
    expect(v.subgoals[0].hyps[0].level).toBe(1);
    expect(v.subgoals[0].hyps[1].badge).toBe("");
  });

  it("distinguishes nesting levels", () => {
    const v = renderSubgoals([
      subgoal({
        hyps: [
          { name: "H1", formula: "ack M N R**", ann: "**" },
          { name: "H2", formula: "nat R@@", ann: "@@" },
        ],
      }),
    ]);
    expect(v.subgoals[0].hyps[0].level).toBe(2);
    expect(v.subgoals[0].hyps[1].badge).toBe("@@");
  });

  it("shows a completion banner for zero subgoals", () => {
    const v = renderSubgoals([]);
    expect(v.banner).toBe("Proof completed");
    expect(v.error).toBeNull();
    expect(v.count).toBe(0);
  });

  it("lists nominal constants in a dedicated strip", () => {
    const v = renderSubgoals([
      subgoal({
        hyps: [{ name: "H1", formula: "ctx (of n1 T :: L)", ann: "" }],
        goal: "of n2 T2 -> of n1 T1",
      }),
    ]);
    expect(v.subgoals[0].nominals).toEqual(["n1", "n2"]);
  });

  it("rejects malformed payloads with an error banner", () => {
    for (const bad of [
      null,
      "nope",
      [{ sig: [], hyps: [{ name: "H1" }], goal: "g" }],
      [{ sig: [], hyps: [] }],
      [{ hyps: [], goal: "g" }],
    ]) {
      const v = renderSubgoals(bad);
      expect(v.error).toBe("malformed subgoal payload");
      expect(v.subgoals).toEqual([]);
    }
  });

  it("keeps the subgoal count", () => {
    const v = renderSubgoals([subgoal(), subgoal()]);
    expect(v.count).toBe(2);
    expect(v.banner).toBeNull();
  });
});
