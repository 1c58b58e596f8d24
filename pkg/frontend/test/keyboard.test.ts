import { describe, expect, it } from "vitest";

import { keyToAction } from "../src/keyboard.js";

describe("keyboard mapping", () => {
  it("maps sufficiency keys on screen 1", () => {
    expect(keyToAction("sufficiency", "y")).toEqual({ kind: "sufficient" });
    expect(keyToAction("sufficiency", "n")).toEqual({ kind: "insufficient" });
  });

  it("maps grading keys on screen 2", () => {
    expect(keyToAction("grading", "c")).toEqual({ kind: "verdict", verdict: "correct" });
    expect(keyToAction("grading", "x")).toEqual({ kind: "verdict", verdict: "incorrect" });
    expect(keyToAction("grading", "1")).toEqual({ kind: "intervention", verdict: "correct" });
    expect(keyToAction("grading", "2")).toEqual({ kind: "intervention", verdict: "partial" });
    expect(keyToAction("grading", "3")).toEqual({ kind: "intervention", verdict: "incorrect" });
    expect(keyToAction("grading", "f")).toEqual({ kind: "flag", required: true });
    expect(keyToAction("grading", "g")).toEqual({ kind: "flag", required: false });
    expect(keyToAction("grading", "Enter")).toEqual({ kind: "submit" });
  });

  it("keeps the screens isolated", () => {
    expect(keyToAction("sufficiency", "c")).toBeNull();
    expect(keyToAction("grading", "y")).toBeNull();
  });

  it("returns null for unbound keys", () => {
    expect(keyToAction("grading", "q")).toBeNull();
    expect(keyToAction("sufficiency", "Escape")).toBeNull();
  });
});
