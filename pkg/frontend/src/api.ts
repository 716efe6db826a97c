// Typed client for the annotation service. The UI never fabricates data:
// everything rendered comes out of one of these calls.

import type {
  AlignmentReport,
  AnnotationBody,
  AnnotationRecord,
  ObjectiveReport,
  PostAnnotationResponse,
  Progress,
  Sample,
  TargetedReport,
  ThreadView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`API error ${status}: ${JSON.stringify(detail)}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      throw new ApiError(response.status, (body as { detail?: unknown })?.detail ?? body);
    }
    return body as T;
  }

  async listSamples(): Promise<Sample[]> {
    const data = await this.request<{ samples: Sample[] }>("/api/samples");
    return data.samples;
  }

  getSample(name: string): Promise<Sample> {
    return this.request(`/api/samples/${encodeURIComponent(name)}`);
  }

  getProgress(sample: string, annotator: string): Promise<Progress> {
    const query = new URLSearchParams({ annotator });
    return this.request(
      `/api/samples/${encodeURIComponent(sample)}/progress?${query}`,
    );
  }

  getThread(threadId: string): Promise<ThreadView> {
    return this.request(`/api/threads/${encodeURIComponent(threadId)}`);
  }

  postAnnotation(body: AnnotationBody): Promise<PostAnnotationResponse> {
    return this.request("/api/annotations", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async listAnnotations(filter: {
    sample?: string;
    annotator?: string;
  }): Promise<AnnotationRecord[]> {
    const query = new URLSearchParams();
    if (filter.sample) query.set("sample", filter.sample);
    if (filter.annotator) query.set("annotator", filter.annotator);
    const data = await this.request<{ annotations: AnnotationRecord[] }>(
      `/api/annotations?${query}`,
    );
    return data.annotations;
  }

  getAlignmentReport(sample: string): Promise<AlignmentReport> {
    return this.request(`/api/reports/alignment?${new URLSearchParams({ sample })}`);
  }

  getObjectiveReport(sample: string): Promise<ObjectiveReport> {
    return this.request(`/api/reports/objective?${new URLSearchParams({ sample })}`);
  }

  getTargetedReport(sample: string): Promise<TargetedReport> {
    return this.request(`/api/reports/targeted?${new URLSearchParams({ sample })}`);
  }
}
