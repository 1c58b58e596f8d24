/**
 * Zod schemas mirroring the /v1 grading API contract.
 *
 * The client validates every payload it sends and every response it
 * receives against these, so a drift between UI and server surfaces as
 * a schema error instead of a silently wrong form.
 */

import { z } from "zod";

export const IssueVerdict = z.enum(["correct", "incorrect"]);
export type IssueVerdict = z.infer<typeof IssueVerdict>;

export const InterventionVerdict = z.enum([
  "correct",
  "partial",
  "incorrect",
  "not_applicable",
]);
export type InterventionVerdict = z.infer<typeof InterventionVerdict>;

export const FailureReason = z.enum([
  "overconfidence_in_uncertainty",
  "protocol_vs_patient_gap",
  "protocol_vs_practice_gap",
  "coherent_but_factually_incorrect",
  "process_blindness",
]);
export type FailureReason = z.infer<typeof FailureReason>;

export const HarmCategory = z.enum(["none", "mild", "moderate", "severe", "death"]);
export type HarmCategory = z.infer<typeof HarmCategory>;

export const FailureAnnotation = z.object({
  reason: FailureReason,
  mode: z.string(),
  harm: HarmCategory,
  vignette_ref: z.string().optional(),
});
export type FailureAnnotation = z.infer<typeof FailureAnnotation>;

export const ClinicalIssue = z.object({
  issue: z.string(),
  evidence: z.string(),
  intervention_required: z.boolean(),
});
export type ClinicalIssue = z.infer<typeof ClinicalIssue>;

export const ReviewOutput = z.object({
  patient_review: z.string(),
  clinical_issues: z.array(ClinicalIssue),
  intervention: z.string(),
  intervention_required: z.boolean(),
  intervention_probability: z.number().min(0).max(1),
});
export type ReviewOutput = z.infer<typeof ReviewOutput>;

export const AssessmentRecord = z.object({
  patient_id: z.string().min(1),
  sufficient_information: z.boolean(),
  clinician_flag: z.boolean(),
  issue_verdicts: z.array(IssueVerdict),
  missed_issues: z.array(z.string().min(1)),
  intervention_verdict: InterventionVerdict,
  failure_annotations: z.array(FailureAnnotation),
  notes: z.string(),
});
export type AssessmentRecord = z.infer<typeof AssessmentRecord>;

export const ErrorDocument = z.object({
  code: z.string(),
  message: z.string(),
});
export type ErrorDocument = z.infer<typeof ErrorDocument>;

export const NextResponse = z.object({ patient_id: z.string() });

export const Progress = z.object({
  pending: z.number().int(),
  reviewed: z.number().int(),
  assessed: z.number().int(),
  excluded_insufficient: z.number().int(),
  total: z.number().int(),
  evaluable: z.number().int(),
});
export type Progress = z.infer<typeof Progress>;

export const ProfileResponse = z.object({
  patient_id: z.string(),
  markdown: z.string(),
  profile: z.record(z.unknown()),
});
export type ProfileResponse = z.infer<typeof ProfileResponse>;

export const ReviewResponse = z.object({
  patient_id: z.string(),
  review: ReviewOutput,
  epoch_count: z.number().int().min(1),
  model_name: z.string(),
});
export type ReviewResponse = z.infer<typeof ReviewResponse>;

export const MutationResponse = z.object({
  patient_id: z.string(),
  status: z.enum(["pending", "reviewed", "assessed", "excluded_insufficient"]),
});
export type MutationResponse = z.infer<typeof MutationResponse>;
