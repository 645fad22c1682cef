/** Browser entry point: wires the session view to the DOM.
 *
 * The page talks to a `nabella serve` endpoint through a WebSocket-to-TCP
 * bridge (any line-preserving bridge works; the protocol is plain
 * newline-delimited JSON).
 */

import { LineTransport } from "./transport";
import { UiSession } from "./session";
import { View } from "./render";

export function websocketTransport(url: string): LineTransport {
  const ws = new WebSocket(url);
  const t = new LineTransport((line) => ws.send(line + "\n"));
  ws.onmessage = (ev) => t.feed(String(ev.data));
  ws.onclose = () => t.close();
  return t;
}

export function renderInto(root: HTMLElement, view: View): void {
  root.textContent = "";
  if (view.error !== null) {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = view.error;
    root.appendChild(banner);
    return;
  }
  if (view.banner !== null) {
    const banner = document.createElement("div");
    banner.className = "done-banner";
    banner.textContent = view.banner;
    root.appendChild(banner);
    return;
  }
  view.subgoals.forEach((sg, i) => {
    const box = document.createElement("section");
    box.className = "subgoal";
    const head = document.createElement("h3");
    head.textContent = `Subgoal ${i + 1} of ${view.count}`;
    box.appendChild(head);
    if (sg.sig.length > 0) {
      const sig = document.createElement("div");
      sig.className = "sig";
      sig.textContent = "Variables: " + sg.sig.join("  ");
      box.appendChild(sig);
    }
    if (sg.nominals.length > 0) {
      const strip = document.createElement("div");
      strip.className = "nominals";
      strip.textContent = "Nominals: " + sg.nominals.join("  ");
      box.appendChild(strip);
    }
    for (const h of sg.hyps) {
      const row = document.createElement("div");
      row.className = "hyp";
      const name = document.createElement("span");
      name.className = "hyp-name";
      name.textContent = h.name;
      row.appendChild(name);
      if (h.badge !== "") {
        const badge = document.createElement("span");
        badge.className = `badge badge-level-${h.level}`;
        badge.textContent = h.badge;
        row.appendChild(badge);
      }
      const body = document.createElement("span");
      body.className = "hyp-formula";
      body.textContent = " : " + h.formula;
      row.appendChild(body);
      box.appendChild(row);
    }
    const goal = document.createElement("div");
    goal.className = "goal";
    goal.textContent = sg.goal;
    box.appendChild(goal);
    root.appendChild(box);
  });
}

export function mount(root: HTMLElement, url: string): UiSession {
  const session = new UiSession(websocketTransport(url));
  const editor = document.createElement("textarea");
  editor.className = "script";
  const panel = document.createElement("div");
  panel.className = "subgoal-panel";
  const forward = document.createElement("button");
  forward.textContent = "Step";
  const back = document.createElement("button");
  back.textContent = "Back";

  const refresh = () => {
    renderInto(panel, session.view());
    back.disabled = !session.canStepBack;
    forward.disabled = !session.canStepForward;
  };
  forward.onclick = async () => {
    await session.setScript(editor.value);
    await session.stepForward();
    refresh();
  };
  back.onclick = async () => {
    await session.stepBack();
    refresh();
  };
  root.append(editor, forward, back, panel);
  refresh();
  return session;
}
