import { describe, expect, it } from "vitest";

import {
  addMissedIssue,
  afterSufficiency,
  buildAssessment,
  insufficientAssessment,
  newGradingForm,
  setVerdict,
  validate,
} from "../src/form.js";
import { ReviewOutput } from "../src/schema.js";

function review(nIssues: number): ReviewOutput {
  return {
    patient_review: "Narrative.",
    clinical_issues: Array.from({ length: nIssues }, (_, i) => ({
      issue: `Issue ${i}`,
      evidence: `Evidence ${i}`,
      intervention_required: true,
    })),
    intervention: nIssues > 0 ? "Stop the drug" : "",
    intervention_required: nIssues > 0,
    intervention_probability: 0.8,
  };
}

describe("grading form", () => {
  it("keeps issues in emitted order", () => {
    const form = newGradingForm("p1", review(3));
    expect(form.issues.map((i) => i.issue)).toEqual(["Issue 0", "Issue 1", "Issue 2"]);
    expect(form.verdicts).toEqual([null, null, null]);
  });

  it("blocks submit with field-level messages while incomplete", () => {
    const form = newGradingForm("p1", review(2));
    setVerdict(form, 0, "correct");
    const errors = validate(form);
    expect(errors.map((e) => e.field)).toEqual([
      "issue_verdicts[1]",
      "clinician_flag",
      "intervention_verdict",
    ]);
    expect(() => buildAssessment(form)).toThrow(/incomplete/);
  });

  it("builds a complete record once every field is graded", () => {
    const form = newGradingForm("p1", review(2));
    setVerdict(form, 0, "correct");
    setVerdict(form, 1, "incorrect");
    form.clinicianFlag = true;
    form.interventionVerdict = "partial";
    addMissedIssue(form, "  Missed renal dosing  ");
    const record = buildAssessment(form);
    expect(record).toEqual({
      patient_id: "p1",
      sufficient_information: true,
      clinician_flag: true,
      issue_verdicts: ["correct", "incorrect"],
      missed_issues: ["Missed renal dosing"],
      intervention_verdict: "partial",
      failure_annotations: [],
      notes: "",
    });
  });

  it("ignores empty missed-issue input", () => {
    const form = newGradingForm("p1", review(0));
    addMissedIssue(form, "   ");
    expect(form.missedIssues).toEqual([]);
  });

  it("rejects verdicts for issues that do not exist", () => {
    const form = newGradingForm("p1", review(1));
    expect(() => setVerdict(form, 1, "correct")).toThrow(RangeError);
  });

  it("routes the sufficiency outcome", () => {
    expect(afterSufficiency(true)).toBe("grade");
    expect(afterSufficiency(false)).toBe("next");
  });

  it("builds the exclusion record for insufficient patients", () => {
    const record = insufficientAssessment("p9");
    expect(record.sufficient_information).toBe(false);
    expect(record.issue_verdicts).toEqual([]);
  });
});
