/**
 * Keyboard-first grading: one keystroke per decision, since a session
 * covers hundreds of cases. The mapping is a pure function from
 * (screen, key) to an action so it can be tested without a DOM.
 */

export type Screen = "sufficiency" | "grading";

export type Action =
  | { kind: "sufficient" }
  | { kind: "insufficient" }
  | { kind: "verdict"; verdict: "correct" | "incorrect" }
  | { kind: "focus-next-issue" }
  | { kind: "focus-previous-issue" }
  | { kind: "intervention"; verdict: "correct" | "partial" | "incorrect" }
  | { kind: "flag"; required: boolean }
  | { kind: "add-missed" }
  | { kind: "submit" };

const SUFFICIENCY_KEYS: Record<string, Action> = {
  y: { kind: "sufficient" },
  n: { kind: "insufficient" },
};

const GRADING_KEYS: Record<string, Action> = {
  c: { kind: "verdict", verdict: "correct" },
  x: { kind: "verdict", verdict: "incorrect" },
  j: { kind: "focus-next-issue" },
  k: { kind: "focus-previous-issue" },
  "1": { kind: "intervention", verdict: "correct" },
  "2": { kind: "intervention", verdict: "partial" },
  "3": { kind: "intervention", verdict: "incorrect" },
  f: { kind: "flag", required: true },
  g: { kind: "flag", required: false },
  m: { kind: "add-missed" },
  Enter: { kind: "submit" },
};

/** Returns the action for a keypress, or null when the key is unbound. */
export function keyToAction(screen: Screen, key: string): Action | null {
  const table = screen === "sufficiency" ? SUFFICIENCY_KEYS : GRADING_KEYS;
  return table[key] ?? null;
}
