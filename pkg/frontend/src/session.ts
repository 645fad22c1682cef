/** The workbench session view: a script buffer with an executed/pending
 * boundary that mirrors the server state exactly.
 *
 * Every boundary move is a server round-trip; the client never computes
 * proof state on its own.  Editing the pending part of the script never
 * talks to the server.
 */

import {
  classifyStatement,
  Response,
  splitStatements,
  Subgoal,
} from "./protocol";
import { renderSubgoals, View } from "./render";
import { Transport } from "./transport";

export class UiSession {
  private statements: string[] = [];
  private boundary = 0;
  private _subgoals: Subgoal[] = [];
  private _lastMessage = "";
  private _lastError: string | null = null;

  constructor(private transport: Transport) {}

  /** Replace the script.  Statements before the executed boundary that
   * changed force the boundary back (via server undos) so that the
   * executed prefix always matches the server. */
  async setScript(text: string): Promise<void> {
    const next = splitStatements(text);
    let common = 0;
    while (
      common < this.boundary &&
      common < next.length &&
      next[common] === this.statements[common]
    ) {
      common++;
    }
    while (this.boundary > common) {
      await this.stepBack();
    }
    this.statements = next;
  }

  get script(): string[] {
    return this.statements.slice();
  }

  get executedBoundary(): number {
    return this.boundary;
  }

  get pending(): string[] {
    return this.statements.slice(this.boundary);
  }

  get canStepForward(): boolean {
    return this.boundary < this.statements.length;
  }

  get canStepBack(): boolean {
    return this.boundary > 0;
  }

  get subgoals(): Subgoal[] {
    return this._subgoals;
  }

  get lastError(): string | null {
    return this._lastError;
  }

  get lastMessage(): string {
    return this._lastMessage;
  }

  /** Execute the next pending statement.  On a server error the boundary
   * stays put and the error is recorded for inline display. */
  async stepForward(): Promise<boolean> {
    if (!this.canStepForward) return false;
    const stmt = this.statements[this.boundary];
    const resp = await this.transport.request(classifyStatement(stmt), stmt);
    if (resp.status !== "ok") {
      this._lastError = resp.error ?? "unknown server error";
      return false;
    }
    this.boundary++;
    this.accept(resp);
    return true;
  }

  /** Undo the last executed statement. */
  async stepBack(): Promise<boolean> {
    if (!this.canStepBack) return false;
    const resp = await this.transport.request("undo");
    if (resp.status !== "ok") {
      this._lastError = resp.error ?? "unknown server error";
      return false;
    }
    this.boundary--;
    this.accept(resp);
    return true;
  }

  /** Run every remaining statement, stopping at the first error. */
  async runToEnd(): Promise<boolean> {
    while (this.canStepForward) {
      if (!(await this.stepForward())) return false;
    }
    return true;
  }

  /** Re-query the server state without moving the boundary. */
  async refresh(): Promise<void> {
    const resp = await this.transport.request("state");
    if (resp.status === "ok") this.accept(resp);
  }

  view(): View {
    const v = renderSubgoals(this._subgoals);
    if (this._lastError !== null) {
      return { ...v, error: this._lastError };
    }
    return v;
  }

  private accept(resp: Response): void {
    this._subgoals = resp.subgoals ?? [];
    this._lastMessage = resp.message ?? "";
    this._lastError = null;
  }
}
