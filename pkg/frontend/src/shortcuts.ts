/**
 * Keyboard shortcuts. Every command the toolbar exposes is reachable
 * through a key; buttons and keys dispatch the same action ids, so the
 * two paths cannot drift apart.
 */

export type ActionId =
  | "tool:pencil"
  | "tool:line"
  | "tool:eraser"
  | "thickness:1"
  | "thickness:2"
  | "thickness:4"
  | "thickness:8"
  | "category:next"
  | "category:prev"
  | "toggle:trace"
  | "toggle:mask"
  | "zoom:in"
  | "zoom:out"
  | "refine"
  | "submit"
  | "image:next"
  | "image:prev";

export const KEYMAP: Record<string, ActionId> = {
  p: "tool:pencil",
  l: "tool:line",
  e: "tool:eraser",
  "1": "thickness:1",
  "2": "thickness:2",
  "3": "thickness:4",
  "4": "thickness:8",
  "]": "category:next",
  "[": "category:prev",
  t: "toggle:trace",
  m: "toggle:mask",
  "+": "zoom:in",
  "=": "zoom:in",
  "-": "zoom:out",
  r: "refine",
  s: "submit",
  ".": "image:next",
  ",": "image:prev",
};

export class Dispatcher {
  private handlers = new Map<ActionId, () => void>();

  register(id: ActionId, handler: () => void): void {
    this.handlers.set(id, handler);
  }

  dispatch(id: ActionId): boolean {
    const handler = this.handlers.get(id);
    if (!handler) return false;
    handler();
    return true;
  }

  /** Route a keypress; returns true when it triggered an action. */
  handleKey(key: string): boolean {
    const id = KEYMAP[key];
    return id ? this.dispatch(id) : false;
  }
}
