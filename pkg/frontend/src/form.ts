/**
 * Screen-2 grading form state and validation.
 *
 * The form is a pure capture surface: it never computes scores, it only
 * assembles a complete AssessmentRecord. Issues keep the order the
 * system emitted them. Validation mirrors the API schema so an
 * incomplete form is blocked client-side with field-level messages.
 */

import {
  AssessmentRecord,
  FailureAnnotation,
  InterventionVerdict,
  IssueVerdict,
  ReviewOutput,
} from "./schema.js";

export interface GradingForm {
  patientId: string;
  /** System issues in emitted order; never re-ranked. */
  issues: ReadonlyArray<{ issue: string; evidence: string }>;
  verdicts: Array<IssueVerdict | null>;
  missedIssues: string[];
  clinicianFlag: boolean | null;
  interventionVerdict: InterventionVerdict | null;
  failureAnnotations: FailureAnnotation[];
  notes: string;
}

export interface FieldError {
  field: string;
  message: string;
}

export function newGradingForm(patientId: string, review: ReviewOutput): GradingForm {
  return {
    patientId,
    issues: review.clinical_issues.map(({ issue, evidence }) => ({ issue, evidence })),
    verdicts: review.clinical_issues.map(() => null),
    missedIssues: [],
    clinicianFlag: null,
    interventionVerdict: null,
    failureAnnotations: [],
    notes: "",
  };
}

export function setVerdict(form: GradingForm, index: number, verdict: IssueVerdict): void {
  if (index < 0 || index >= form.verdicts.length) {
    throw new RangeError(`no issue at index ${index}`);
  }
  form.verdicts[index] = verdict;
}

export function addMissedIssue(form: GradingForm, text: string): void {
  const trimmed = text.trim();
  if (trimmed.length > 0) form.missedIssues.push(trimmed);
}

export function validate(form: GradingForm): FieldError[] {
  const errors: FieldError[] = [];
  form.verdicts.forEach((verdict, i) => {
    if (verdict === null) {
      errors.push({
        field: `issue_verdicts[${i}]`,
        message: `grade issue ${i + 1} as correct or incorrect`,
      });
    }
  });
  if (form.clinicianFlag === null) {
    errors.push({
      field: "clinician_flag",
      message: "record whether an intervention is required",
    });
  }
  if (form.interventionVerdict === null) {
    errors.push({
      field: "intervention_verdict",
      message: "grade the proposed intervention",
    });
  }
  return errors;
}

/** Assemble the record; throws if validation would block submit. */
export function buildAssessment(form: GradingForm): AssessmentRecord {
  const errors = validate(form);
  if (errors.length > 0) {
    const fields = errors.map((e) => e.field).join(", ");
    throw new Error(`form incomplete: ${fields}`);
  }
  return AssessmentRecord.parse({
    patient_id: form.patientId,
    sufficient_information: true,
    clinician_flag: form.clinicianFlag,
    issue_verdicts: form.verdicts as IssueVerdict[],
    missed_issues: form.missedIssues,
    intervention_verdict: form.interventionVerdict,
    failure_annotations: form.failureAnnotations,
    notes: form.notes,
  });
}

/** Screen-1 outcome: insufficient skips grading and advances the queue. */
export function afterSufficiency(sufficient: boolean): "grade" | "next" {
  return sufficient ? "grade" : "next";
}

/** Record for a patient excluded at sufficiency review. */
export function insufficientAssessment(patientId: string): AssessmentRecord {
  return AssessmentRecord.parse({
    patient_id: patientId,
    sufficient_information: false,
    clinician_flag: false,
    issue_verdicts: [],
    missed_issues: [],
    intervention_verdict: "not_applicable",
    failure_annotations: [],
    notes: "",
  });
}
