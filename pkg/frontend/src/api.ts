/**
 * Typed client for the /v1 grading API. The server is the source of
 * truth; every response is parsed against the shared schemas and
 * non-2xx responses become ApiError values carrying the server's
 * {code, message} document so the UI can show a retry banner.
 */

import {
  AssessmentRecord,
  ErrorDocument,
  MutationResponse,
  NextResponse,
  ProfileResponse,
  Progress,
  ReviewResponse,
} from "./schema.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raiseFor(response: Response): Promise<never> {
  let code = "unknown_error";
  let message = `request failed with status ${response.status}`;
  try {
    const doc = ErrorDocument.parse(await response.json());
    code = doc.code;
    message = doc.message;
  } catch {
    // Non-JSON error body; keep the generic message.
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly sessionId: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async get(path: string): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!response.ok) await raiseFor(response);
    return response;
  }

  private async post(path: string, body: unknown): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await raiseFor(response);
    return response;
  }

  /** Next patient awaiting grading, or null when the queue is empty. */
  async nextPatient(): Promise<string | null> {
    const response = await this.get(`/v1/sessions/${this.sessionId}/next`);
    if (response.status === 204) return null;
    return NextResponse.parse(await response.json()).patient_id;
  }

  async progress(): Promise<Progress> {
    const response = await this.get(`/v1/sessions/${this.sessionId}/progress`);
    return Progress.parse(await response.json());
  }

  async profile(patientId: string): Promise<ProfileResponse> {
    const response = await this.get(`/v1/patients/${patientId}/profile`);
    return ProfileResponse.parse(await response.json());
  }

  async review(patientId: string): Promise<ReviewResponse> {
    const response = await this.get(`/v1/patients/${patientId}/review`);
    return ReviewResponse.parse(await response.json());
  }

  async submitSufficiency(
    patientId: string,
    sufficient: boolean,
  ): Promise<MutationResponse> {
    const response = await this.post(`/v1/patients/${patientId}/sufficiency`, {
      sufficient,
    });
    return MutationResponse.parse(await response.json());
  }

  async submitAssessment(record: AssessmentRecord): Promise<MutationResponse> {
    const payload = AssessmentRecord.parse(record);
    const { patient_id: patientId, ...body } = payload;
    const response = await this.post(`/v1/patients/${patientId}/assessment`, body);
    return MutationResponse.parse(await response.json());
  }
}
