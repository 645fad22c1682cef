/** Render model for the subgoal panel.
 *
 * Pure functions from protocol payloads to display structures; nothing
 * here mutates or reinterprets proof state.
 */

import { Subgoal } from "./protocol";

export interface HypView {
  name: string;
  formula: string;
  /** Annotation badge: "*", "@", "+" or "#", repeated once per nesting
   * level ("**" for an inner induction), or "" for none. */
  badge: string;
  /** Nesting level the badge belongs to: badge.length, 0 for none. */
  level: number;
}

export interface SubgoalView {
  sig: string[];
  nominals: string[];
  hyps: HypView[];
  goal: string;
}

export interface View {
  banner: string | null;
  error: string | null;
  count: number;
  subgoals: SubgoalView[];
}

function isSubgoal(x: unknown): x is Subgoal {
  if (typeof x !== "object" || x === null) return false;
  const o = x as Record<string, unknown>;
  if (!Array.isArray(o.sig) || !Array.isArray(o.hyps)) return false;
  if (typeof o.goal !== "string") return false;
  for (const s of o.sig) {
    const e = s as Record<string, unknown>;
    if (typeof e.name !== "string" || typeof e.ty !== "string") return false;
  }
  for (const h of o.hyps) {
    const e = h as Record<string, unknown>;
    if (typeof e.name !== "string" || typeof e.formula !== "string")
      return false;
    if (typeof e.ann !== "string") return false;
  }
  return true;
}

const BADGE = /^(\*+|@+|\++|#+)$/;
const NOMINAL = /\bn\d+\b/g;

/** Nominal constants mentioned in a subgoal, for the dedicated strip. */
export function nominalStrip(sg: Subgoal): string[] {
  const found = new Set<string>();
  const scan = (s: string) => {
    for (const m of s.matchAll(NOMINAL)) found.add(m[0]);
  };
  for (const h of sg.hyps) scan(h.formula);
  scan(sg.goal);
  return Array.from(found).sort(
    (a, b) => parseInt(a.slice(1), 10) - parseInt(b.slice(1), 10),
  );
}

export function renderSubgoals(payload: unknown): View {
  if (!Array.isArray(payload) || !payload.every(isSubgoal)) {
    return {
      banner: null,
      error: "malformed subgoal payload",
      count: 0,
      subgoals: [],
    };
  }
  const subgoals: SubgoalView[] = payload.map((sg) => ({
    sig: sg.sig.map((e) => `${e.name} : ${e.ty}`),
    nominals: nominalStrip(sg),
    hyps: sg.hyps.map((h) => {
      const badge = BADGE.test(h.ann) ? h.ann : "";
      return {
        name: h.name,
        formula: h.formula,
        badge,
        level: badge.length,
      };
    }),
    goal: sg.goal,
  }));
  return {
    banner: subgoals.length === 0 ? "Proof completed" : null,
    error: null,
    count: subgoals.length,
    subgoals,
  };
}
