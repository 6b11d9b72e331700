// Typed client for the review service. All state changes go through here;
// the UI never mutates anything except via these endpoints.

import type {
  Dimension, JobStatus, Label, QueueItem, StatsPayload, SubmitResult,
  VideoDetail,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }
}

async function parseBody(resp: Response): Promise<unknown> {
  try {
    return await resp.json();
  } catch {
    return null;
  }
}

export class ApiClient {
  constructor(private baseUrl = '') {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const resp = await fetch(this.baseUrl + path, init);
    const body = await parseBody(resp);
    if (!resp.ok) {
      const detail = (body as { detail?: unknown } | null)?.detail ?? body;
      throw new ApiError(resp.status, detail);
    }
    return body;
  }

  getQueue(dimension: Dimension): Promise<QueueItem[]> {
    return this.request(`/api/queue?dimension=${dimension}`) as Promise<QueueItem[]>;
  }

  submitLabel(videoId: string, dimension: Dimension, label: Label,
              resolver: string, revision: number): Promise<SubmitResult> {
    return this.request('/api/labels', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({
        video_id: videoId, dimension, label, resolver, revision,
      }),
    }) as Promise<SubmitResult>;
  }

  advanceRound(dimension: Dimension): Promise<{ job_id: string }> {
    return this.request(`/api/rounds/advance?dimension=${dimension}`, {
      method: 'POST',
    }) as Promise<{ job_id: string }>;
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request(`/api/rounds/status/${jobId}`) as Promise<JobStatus>;
  }

  getStats(dimension: Dimension): Promise<StatsPayload> {
    return this.request(`/api/stats?dimension=${dimension}`) as Promise<StatsPayload>;
  }

  getVideo(videoId: string): Promise<VideoDetail> {
    return this.request(`/api/videos/${videoId}`) as Promise<VideoDetail>;
  }
}
