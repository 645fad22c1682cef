/** Session protocol types and helpers.
 *
 * The workbench consumes the prover's newline-delimited JSON protocol and
 * nothing else; all proof state lives on the server.
 */

export interface SigEntry {
  name: string;
  ty: string;
}

export interface Hyp {
  name: string;
  formula: string;
  ann: string;
}

export interface Subgoal {
  sig: SigEntry[];
  hyps: Hyp[];
  goal: string;
}

export type RequestCmd = "load_spec" | "command" | "tactic" | "undo" | "state";

export interface Request {
  id: number;
  cmd: RequestCmd;
  text?: string;
}

export interface Response {
  id: number | null;
  status: "ok" | "error";
  subgoals: Subgoal[];
  message?: string;
  error?: string;
  kind?: string;
}

/** Serialize a value exactly like the server's canonical JSON: keys
 * sorted, no whitespace, non-ASCII escaped. */
export function canonicalJson(value: unknown): string {
  if (value === null) return "null";
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "number") {
    if (Number.isInteger(value)) return String(value);
    return JSON.stringify(value);
  }
  if (typeof value === "string") return canonicalString(value);
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  if (typeof value === "object") {
    const obj = value as Record<string, unknown>;
    const keys = Object.keys(obj).sort();
    const parts = keys.map(
      (k) => canonicalString(k) + ":" + canonicalJson(obj[k]),
    );
    return "{" + parts.join(",") + "}";
  }
  throw new Error("cannot serialize value of type " + typeof value);
}

function canonicalString(s: string): string {
  let out = '"';
  for (const ch of s) {
    const code = ch.codePointAt(0) as number;
    if (ch === '"') out += '\\"';
    else if (ch === "\\") out += "\\\\";
    else if (ch === "\n") out += "\\n";
    else if (ch === "\r") out += "\\r";
    else if (ch === "\t") out += "\\t";
    else if (code < 0x20 || code > 0x7e) {
      if (code > 0xffff) {
        // encode as a surrogate pair, as the server does
        const c = code - 0x10000;
        const hi = 0xd800 + (c >> 10);
        const lo = 0xdc00 + (c & 0x3ff);
        out += "\\u" + hex4(hi) + "\\u" + hex4(lo);
      } else {
        out += "\\u" + hex4(code);
      }
    } else out += ch;
  }
  return out + '"';
}

function hex4(n: number): string {
  return n.toString(16).padStart(4, "0");
}

/** Split a proof script into '.'-terminated statements, respecting
 * string literals and %-comments. */
export function splitStatements(text: string): string[] {
  const out: string[] = [];
  let cur = "";
  let inString = false;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (inString) {
      cur += ch;
      if (ch === '"') inString = false;
      continue;
    }
    if (ch === "%") {
      while (i < text.length && text[i] !== "\n") i++;
      cur += " ";
      continue;
    }
    if (ch === '"') {
      inString = true;
      cur += ch;
      continue;
    }
    if (ch === ".") {
      const stmt = cur.trim();
      if (stmt.length > 0) out.push(stmt + ".");
      cur = "";
      continue;
    }
    cur += ch;
  }
  if (cur.trim().length > 0) out.push(cur.trim());
  return out;
}

/** Top-level commands start with an uppercase word; everything else is a
 * tactic. */
export function classifyStatement(stmt: string): "command" | "tactic" {
  const first = stmt.trim()[0] ?? "";
  return first >= "A" && first <= "Z" ? "command" : "tactic";
}
