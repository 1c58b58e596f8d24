/**
 * Two-screen grading flow.
 *
 * Screen 1 shows the chronological patient profile exactly as served
 * and asks whether there is sufficient information to decide if an
 * intervention is required. Insufficient excludes the patient and
 * advances the queue; sufficient moves to Screen 2 for the same
 * patient. Screen 2 shows profile and system analysis side by side and
 * captures the full assessment. API failures surface a non-blocking
 * banner with a retry button; the server remains the source of truth.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  GradingForm,
  addMissedIssue,
  afterSufficiency,
  buildAssessment,
  newGradingForm,
  setVerdict,
  validate,
} from "./form.js";
import { keyToAction, Screen } from "./keyboard.js";
import { FailureAnnotation, ProfileResponse, ReviewResponse } from "./schema.js";

interface AppState {
  screen: Screen;
  patientId: string | null;
  profile: ProfileResponse | null;
  review: ReviewResponse | null;
  form: GradingForm | null;
  focusedIssue: number;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export class App {
  private state: AppState = {
    screen: "sufficiency",
    patientId: null,
    profile: null,
    review: null,
    form: null,
    focusedIssue: 0,
  };

  constructor(private readonly api: ApiClient) {}

  start(): void {
    document.addEventListener("keydown", (event) => {
      if (event.target instanceof HTMLInputElement) return;
      if (event.target instanceof HTMLTextAreaElement) return;
      const action = keyToAction(this.state.screen, event.key);
      if (action) {
        event.preventDefault();
        void this.dispatch(action);
      }
    });
    el<HTMLButtonElement>("retry").addEventListener("click", () => {
      this.hideBanner();
      void this.loadNext();
    });
    void this.loadNext();
  }

  private async dispatch(action: ReturnType<typeof keyToAction>): Promise<void> {
    if (!action) return;
    try {
      switch (action.kind) {
        case "sufficient":
        case "insufficient":
          await this.recordSufficiency(action.kind === "sufficient");
          break;
        case "verdict":
          this.withForm((form) => {
            setVerdict(form, this.state.focusedIssue, action.verdict);
            this.advanceFocus(1);
          });
          break;
        case "focus-next-issue":
          this.advanceFocus(1);
          break;
        case "focus-previous-issue":
          this.advanceFocus(-1);
          break;
        case "intervention":
          this.withForm((form) => {
            form.interventionVerdict = action.verdict;
          });
          break;
        case "flag":
          this.withForm((form) => {
            form.clinicianFlag = action.required;
          });
          break;
        case "add-missed":
          this.withForm((form) => {
            addMissedIssue(form, el<HTMLInputElement>("missed-input").value);
            el<HTMLInputElement>("missed-input").value = "";
          });
          break;
        case "submit":
          await this.submit();
          break;
      }
      this.render();
    } catch (error) {
      this.showBanner(error);
    }
  }

  private withForm(fn: (form: GradingForm) => void): void {
    if (this.state.form) fn(this.state.form);
  }

  private advanceFocus(delta: number): void {
    const n = this.state.form?.issues.length ?? 0;
    if (n === 0) return;
    this.state.focusedIssue = Math.min(n - 1, Math.max(0, this.state.focusedIssue + delta));
  }

  private async loadNext(): Promise<void> {
    try {
      const patientId = await this.api.nextPatient();
      if (patientId === null) {
        this.state = { ...this.state, patientId: null, screen: "sufficiency" };
        el("status").textContent = "Queue empty: all patients graded.";
        await this.refreshProgress();
        return;
      }
      const [profile, review] = await Promise.all([
        this.api.profile(patientId),
        this.api.review(patientId),
      ]);
      this.state = {
        screen: "sufficiency",
        patientId,
        profile,
        review,
        form: null,
        focusedIssue: 0,
      };
      await this.refreshProgress();
      this.render();
    } catch (error) {
      this.showBanner(error);
    }
  }

  private async recordSufficiency(sufficient: boolean): Promise<void> {
    const { patientId, review } = this.state;
    if (!patientId || !review) return;
    await this.api.submitSufficiency(patientId, sufficient);
    if (afterSufficiency(sufficient) === "grade") {
      this.state.screen = "grading";
      this.state.form = newGradingForm(patientId, review.review);
    } else {
      await this.loadNext();
    }
  }

  addFailureAnnotation(annotation: FailureAnnotation): void {
    this.withForm((form) => form.failureAnnotations.push(annotation));
    this.render();
  }

  private async submit(): Promise<void> {
    const form = this.state.form;
    if (!form) return;
    const errors = validate(form);
    if (errors.length > 0) {
      this.renderFieldErrors(errors);
      return;
    }
    await this.api.submitAssessment(buildAssessment(form));
    await this.loadNext();
  }

  private async refreshProgress(): Promise<void> {
    const progress = await this.api.progress();
    el("progress").textContent =
      `${progress.assessed} graded · ${progress.excluded_insufficient} excluded · ` +
      `${progress.evaluable} evaluable of ${progress.total}`;
  }

  private render(): void {
    const { screen, profile, review, form } = this.state;
    el("screen-sufficiency").hidden = screen !== "sufficiency";
    el("screen-grading").hidden = screen !== "grading";
    if (profile) el("profile").textContent = profile.markdown;
    if (screen === "grading" && review && form) {
      el("profile-side").textContent = profile?.markdown ?? "";
      el("narrative").textContent = review.review.patient_review;
      el("intervention-text").textContent = review.review.intervention || "(none proposed)";
      const list = el<HTMLOListElement>("issues");
      list.replaceChildren(
        ...form.issues.map((issue, i) => {
          const item = document.createElement("li");
          const verdict = form.verdicts[i];
          item.textContent =
            `${issue.issue} — ${issue.evidence} ` +
            `[${verdict ?? "ungraded"}]${i === this.state.focusedIssue ? " ←" : ""}`;
          return item;
        }),
      );
      el("missed-list").textContent = form.missedIssues.join("; ");
      el("verdict-state").textContent =
        `flag: ${form.clinicianFlag ?? "unset"} · ` +
        `intervention: ${form.interventionVerdict ?? "unset"} · ` +
        `annotations: ${form.failureAnnotations.length}`;
      this.renderFieldErrors([]);
    }
  }

  private renderFieldErrors(errors: ReturnType<typeof validate>): void {
    el("field-errors").replaceChildren(
      ...errors.map((e) => {
        const item = document.createElement("li");
        item.textContent = e.message;
        return item;
      }),
    );
  }

  private showBanner(error: unknown): void {
    const banner = el("banner");
    banner.hidden = false;
    banner.querySelector("span")!.textContent =
      error instanceof ApiError
        ? `${error.code}: ${error.message}`
        : `request failed: ${String(error)}`;
  }

  private hideBanner(): void {
    el("banner").hidden = true;
  }
}

export function mount(baseUrl: string, sessionId: string): App {
  const app = new App(new ApiClient(baseUrl, sessionId));
  app.start();
  return app;
}
