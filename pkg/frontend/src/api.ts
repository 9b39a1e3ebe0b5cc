/**
 * Typed client for the annotation service REST API.
 *
 * The response types mirror the server's client views; none of them
 * carries any ground-truth information, by design of the service.
 */

export interface DatasetCategory {
  id: number;
  name: string;
  color: [number, number, number];
}

export interface DatasetSummary {
  dataset_id: string;
  categories: DatasetCategory[];
  image_count: number;
  checkpoint: { batch_size: number; threshold: number };
}

export interface BatchImageView {
  image_id: string;
  width: number;
  height: number;
  object_count: number;
  boxes: number[][];
  stroke_count: number;
  labeled_pixels: number;
  refine_count: number;
  refined: boolean;
  elapsed_s: number;
}

export interface SessionView {
  session_id: string;
  user_id: string;
  dataset_id: string;
  batch_status: "in_progress" | "passed" | "failed";
  attempt: number;
  images: BatchImageView[];
}

export interface ScoreView {
  base_score: number;
  bonus: number;
  final_score: number;
  expected_time: number;
}

export interface SubmitResponse {
  passed: boolean;
  scores: ScoreView[];
  session: SessionView;
}

export interface LikelihoodSummaryEntry {
  category: number;
  pixel_fraction: number;
  mean_likelihood: number;
}

export interface RefineResponse {
  image_id: string;
  refine_count: number;
  mask_png_base64: string;
  likelihood_summary: LikelihoodSummaryEntry[];
}

export interface StrokeDocument {
  version: 1;
  width: number;
  height: number;
  strokes: {
    tool: string;
    category: number;
    thickness: number;
    points: [number, number][];
  }[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listDatasets(): Promise<{ datasets: DatasetSummary[] }> {
    return this.request("/datasets");
  }

  createSession(userId: string, datasetId: string): Promise<SessionView> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ user_id: userId, dataset_id: datasetId }),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request(`/sessions/${sessionId}`);
  }

  putTrace(
    sessionId: string,
    imageId: string,
    doc: StrokeDocument,
  ): Promise<{ image_id: string; stroke_count: number; labeled_pixels: number }> {
    return this.request(`/sessions/${sessionId}/images/${imageId}/trace`, {
      method: "PUT",
      body: JSON.stringify(doc),
    });
  }

  refine(sessionId: string, imageId: string): Promise<RefineResponse> {
    return this.request(`/sessions/${sessionId}/images/${imageId}/refine`, {
      method: "POST",
    });
  }

  submit(sessionId: string): Promise<SubmitResponse> {
    return this.request(`/sessions/${sessionId}/submit`, { method: "POST" });
  }

  imageUrl(imageId: string, datasetId?: string): string {
    const query = datasetId ? `?dataset_id=${encodeURIComponent(datasetId)}` : "";
    return `${this.base}/images/${encodeURIComponent(imageId)}${query}`;
  }

  exportUrl(datasetId: string): string {
    return `${this.base}/datasets/${encodeURIComponent(datasetId)}/export`;
  }
}
