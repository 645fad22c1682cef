/** Line-based request/response transport.
 *
 * One request is in flight at a time; further requests queue.  The
 * concrete byte channel (child process pipe, TCP socket, WebSocket) is
 * supplied by the caller.
 */

import { Request, RequestCmd, Response } from "./protocol";

export interface Transport {
  request(cmd: RequestCmd, text?: string): Promise<Response>;
  close(): void;
}

interface PendingEntry {
  req: Request;
  resolve: (r: Response) => void;
  reject: (e: Error) => void;
}

export class LineTransport implements Transport {
  private nextId = 1;
  private buffer = "";
  private queue: PendingEntry[] = [];
  private inflight: PendingEntry | null = null;
  private closed = false;

  constructor(
    private writeLine: (line: string) => void,
    private onClose?: () => void,
  ) {}

  /** Feed raw bytes received from the channel. */
  feed(data: string): void {
    this.buffer += data;
    let idx: number;
    while ((idx = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, idx).trim();
      this.buffer = this.buffer.slice(idx + 1);
      if (line.length > 0) this.handleLine(line);
    }
  }

  request(cmd: RequestCmd, text?: string): Promise<Response> {
    if (this.closed) {
      return Promise.reject(new Error("transport closed"));
    }
    const req: Request = { id: this.nextId++, cmd };
    if (text !== undefined) req.text = text;
    return new Promise<Response>((resolve, reject) => {
      this.queue.push({ req, resolve, reject });
      this.pump();
    });
  }

  close(): void {
    this.closed = true;
    const err = new Error("transport closed");
    if (this.inflight) this.inflight.reject(err);
    for (const p of this.queue) p.reject(err);
    this.queue = [];
    this.inflight = null;
    if (this.onClose) this.onClose();
  }

  private pump(): void {
    if (this.inflight !== null || this.queue.length === 0) return;
    this.inflight = this.queue.shift() as PendingEntry;
    this.writeLine(JSON.stringify(this.inflight.req));
  }

  private handleLine(line: string): void {
    let resp: Response;
    try {
      resp = JSON.parse(line) as Response;
    } catch {
      if (this.inflight) {
        this.inflight.reject(new Error("malformed response: " + line));
        this.inflight = null;
        this.pump();
      }
      return;
    }
    const p = this.inflight;
    if (p === null) return;
    if (resp.id !== null && resp.id !== p.req.id) return;
    this.inflight = null;
    p.resolve(resp);
    this.pump();
  }
}
