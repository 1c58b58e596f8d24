/**
 * Contract tests against a real API server.
 *
 * A python fixture server is spawned with a 300-patient session whose
 * first six patients carry seeded reviews with (3,3,1,2,0,2) issues.
 * Screen-2 form states are submitted through the client exactly as the
 * UI would build them; the resulting stored records are then checked
 * for the downstream (precision, recall, intervention-credit) triples
 * with a helper that runs the backend's own scoring functions. The UI
 * side never computes any of those numbers.
 */

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { once } from "node:events";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import {
  addMissedIssue,
  buildAssessment,
  newGradingForm,
  setVerdict,
  type GradingForm,
} from "../src/form.js";
import type { InterventionVerdict, IssueVerdict } from "../src/schema.js";

const execFileAsync = promisify(execFile);
const serverDir = fileURLToPath(new URL("./server/", import.meta.url));
const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let fixture: { session: string; store: string; reviewed: string[]; pending: string[] };
let api: ApiClient;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/v1/sessions/${fixture.session}/progress`);
      if (response.ok) return;
    } catch {
      // Not up yet.
    }
    if (Date.now() > deadline) throw new Error("fixture server did not start");
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["fixture_server.py", "--port", String(PORT), "--patients", "300",
     "--issues", "3,3,1,2,0,2"],
    { cwd: serverDir, stdio: ["ignore", "pipe", "inherit"] },
  );
  const [chunk] = (await once(server.stdout!, "data")) as [Buffer];
  fixture = JSON.parse(chunk.toString().split("\n")[0]!);
  api = new ApiClient(BASE, fixture.session);
  await waitForServer();
});

afterAll(() => {
  server?.kill();
});

interface GradingCase {
  verdicts: IssueVerdict[];
  missed: string[];
  flag: boolean;
  intervention: InterventionVerdict;
  annotate?: boolean;
  expected: { precision: number | null; recall: number; s_int: number };
}

// Screen-2 form states for the six seeded reviews (3,3,1,2,0,2 issues).
const CASES: GradingCase[] = [
  {
    verdicts: ["correct", "correct", "correct"],
    missed: [], flag: true, intervention: "correct",
    expected: { precision: 1.0, recall: 1.0, s_int: 1.0 },
  },
  {
    verdicts: ["correct", "incorrect", "incorrect"],
    missed: ["Missed renal dose adjustment"], flag: true, intervention: "partial",
    expected: { precision: 1 / 3, recall: 0.5, s_int: 0.5 },
  },
  {
    verdicts: ["correct"],
    missed: [], flag: true, intervention: "correct",
    expected: { precision: 1.0, recall: 1.0, s_int: 1.0 },
  },
  {
    verdicts: ["incorrect", "incorrect"],
    missed: ["Missed interaction"], flag: true, intervention: "incorrect",
    annotate: true,
    expected: { precision: 0.0, recall: 0.0, s_int: 0.0 },
  },
  {
    verdicts: [],
    missed: [], flag: false, intervention: "not_applicable",
    expected: { precision: null, recall: 1.0, s_int: 1.0 },
  },
  {
    verdicts: ["correct", "correct"],
    missed: ["Missed monitoring gap"], flag: true, intervention: "correct",
    expected: { precision: 1.0, recall: 0.5, s_int: 1.0 },
  },
];

function fillForm(form: GradingForm, c: GradingCase): void {
  c.verdicts.forEach((verdict, i) => setVerdict(form, i, verdict));
  c.missed.forEach((text) => addMissedIssue(form, text));
  form.clinicianFlag = c.flag;
  form.interventionVerdict = c.intervention;
  if (c.annotate) {
    form.failureAnnotations.push({
      reason: "process_blindness",
      mode: "ignored pathway context",
      harm: "mild",
    });
  }
}

describe("grading contract", () => {
  it("serves the next reviewed patient", async () => {
    const pid = await api.nextPatient();
    expect(fixture.reviewed).toContain(pid);
  });

  it("accepts all six Screen-2 form states and drives the intended scores", async () => {
    for (const [i, c] of CASES.entries()) {
      const pid = fixture.reviewed[i]!;
      const review = await api.review(pid);
      expect(review.review.clinical_issues).toHaveLength(c.verdicts.length);

      await api.submitSufficiency(pid, true);
      const form = newGradingForm(pid, review.review);
      fillForm(form, c);
      const result = await api.submitAssessment(buildAssessment(form));
      expect(result.status).toBe("assessed");
    }

    const { stdout } = await execFileAsync(
      "python3",
      ["compute_scores.py", "--store", fixture.store, "--session", fixture.session],
      { cwd: serverDir },
    );
    const downstream = JSON.parse(stdout) as {
      scores: Record<string, { precision: number | null; recall: number; s_int: number }>;
      failures: { total: number; by_reason: Record<string, number>; by_harm: Record<string, number> };
    };

    for (const [i, c] of CASES.entries()) {
      const pid = fixture.reviewed[i]!;
      const got = downstream.scores[pid]!;
      if (c.expected.precision === null) {
        expect(got.precision).toBeNull();
      } else {
        expect(got.precision).toBeCloseTo(c.expected.precision, 9);
      }
      expect(got.recall).toBeCloseTo(c.expected.recall, 9);
      expect(got.s_int).toBeCloseTo(c.expected.s_int, 9);
    }

    // The annotation entered on Screen 2 appears in the failure tally.
    expect(downstream.failures.total).toBe(1);
    expect(downstream.failures.by_reason["process_blindness"]).toBe(1);
    expect(downstream.failures.by_harm["mild"]).toBe(1);
  });

  it("returns 204 once the review queue is exhausted", async () => {
    expect(await api.nextPatient()).toBeNull();
  });

  it("reproduces the 300 -> 277 sufficiency exclusion pattern", async () => {
    for (const pid of fixture.pending.slice(0, 23)) {
      const result = await api.submitSufficiency(pid, false);
      expect(result.status).toBe("excluded_insufficient");
    }
    const progress = await api.progress();
    expect(progress.total).toBe(300);
    expect(progress.excluded_insufficient).toBe(23);
    expect(progress.evaluable).toBe(277);
  });

  it("surfaces server rejections as coded errors for the retry banner", async () => {
    await expect(api.profile("not-a-patient")).rejects.toMatchObject({
      name: "ApiError",
      status: 404,
      code: "unknown_patient",
    });

    // Shared contract: a verdict list that does not match the review is 422.
    const pid = fixture.reviewed[0]!;
    const response = await fetch(`${BASE}/v1/patients/${pid}/assessment`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        sufficient_information: true,
        clinician_flag: true,
        issue_verdicts: ["correct"],
        missed_issues: [],
        intervention_verdict: "correct",
        failure_annotations: [],
        notes: "",
      }),
    });
    expect(response.status).toBe(422);
    const doc = (await response.json()) as { code: string };
    expect(doc.code).toBe("schema_violation");
  });

  it("rejects a double assessment with a conflict", async () => {
    const pid = fixture.reviewed[0]!;
    const review = await api.review(pid);
    const form = newGradingForm(pid, review.review);
    fillForm(form, CASES[0]!);
    await expect(api.submitAssessment(buildAssessment(form))).rejects.toMatchObject({
      status: 409,
      code: "invalid_transition",
    });
  });
});
