// In-memory stand-in for the review service, implementing the same endpoint
// semantics (revisions, idempotent duplicates, 409/404, polled advance jobs)
// so UI behavior can be tested without a backend.

import type {
  Dimension, HistoryPoint, QueueItem, StatsPayload, TermHit,
} from '../src/types.js';

interface StoredItem extends QueueItem {
  status: 'pending' | 'resolved';
  resolved_label: string | null;
}

export class FixtureService {
  items: StoredItem[] = [];
  round = 0;
  labeled = 10;
  unlabeled = 20;
  discarded = 0;
  history: HistoryPoint[] = [
    { round: 0, macro_f1: 0.71, accuracy: 0.72, auc: 0.8 },
  ];
  jobs = new Map<string, { status: 'running' | 'done' | 'failed'; error?: string }>();
  hits: Record<string, TermHit[]> = {};
  unreachable = false;
  submissions: Array<{ video_id: string; label: string; revision: number }> = [];
  private jobCounter = 0;

  addPending(videoId: string, round: number, title = '', excerpt = ''): void {
    this.items.push({
      video_id: videoId,
      dimension: 'MED',
      title: title || `Video ${videoId}`,
      excerpt: excerpt || `about ${videoId}`,
      f1_proba: 0.95,
      f2_proba: 0.04,
      created_round: round,
      revision: 0,
      status: 'pending',
      resolved_label: null,
    });
  }

  resolveExternally(videoId: string, label: string): void {
    const item = this.items.find((it) => it.video_id === videoId)!;
    item.status = 'resolved';
    item.resolved_label = label;
    item.revision += 1;
    this.labeled += 1;
  }

  pending(): StoredItem[] {
    return this.items.filter((it) => it.status === 'pending');
  }

  stats(dimension: Dimension): StatsPayload {
    return {
      dimension,
      round: this.round,
      labeled: this.labeled,
      unlabeled: this.unlabeled,
      queue_depth: this.pending().length,
      discarded: this.discarded,
      history: this.history,
      should_stop: false,
      stop_reason: '',
    };
  }

  handle(url: string, init?: RequestInit):
      { status: number; body: unknown } {
    const parsed = new URL(url, 'http://fixture');
    const path = parsed.pathname;
    if (path === '/api/queue') {
      return {
        status: 200,
        body: this.pending().map(({ status, resolved_label, ...pub }) => pub),
      };
    }
    if (path === '/api/labels' && init?.method === 'POST') {
      const body = JSON.parse(String(init.body));
      this.submissions.push({
        video_id: body.video_id, label: body.label, revision: body.revision,
      });
      const item = this.items.find((it) => it.video_id === body.video_id);
      if (!item) {
        return { status: 404, body: { detail: `no review item for ${body.video_id}` } };
      }
      if (item.status === 'resolved') {
        if (item.resolved_label === body.label) {
          return { status: 200, body: { status: 'noop', revision: item.revision } };
        }
        return {
          status: 409,
          body: { detail: `already resolved as ${item.resolved_label}` },
        };
      }
      if (item.revision !== body.revision) {
        return {
          status: 409,
          body: { detail: `stale revision ${body.revision}, current ${item.revision}` },
        };
      }
      item.status = 'resolved';
      item.resolved_label = body.label;
      item.revision += 1;
      this.labeled += 1;
      return { status: 200, body: { status: 'applied', revision: item.revision } };
    }
    if (path === '/api/rounds/advance' && init?.method === 'POST') {
      if (this.pending().length > 0) {
        return {
          status: 409,
          body: {
            detail: {
              message: 'pending review items',
              pending: this.pending().map((it) => it.video_id),
            },
          },
        };
      }
      this.jobCounter += 1;
      const jobId = `job-${this.jobCounter}`;
      this.jobs.set(jobId, { status: 'done' });
      this.round += 1;
      this.history = [...this.history, {
        round: this.round,
        macro_f1: Math.min(0.99, 0.71 + 0.05 * this.round),
        accuracy: 0.8,
        auc: 0.85,
      }];
      return { status: 202, body: { job_id: jobId } };
    }
    if (path.startsWith('/api/rounds/status/')) {
      const jobId = path.split('/').pop()!;
      const job = this.jobs.get(jobId);
      if (!job) return { status: 404, body: { detail: `unknown job ${jobId}` } };
      return { status: 200, body: { ...job, dimension: 'MED', report: null } };
    }
    if (path === '/api/stats') {
      const dimension = (parsed.searchParams.get('dimension') ?? 'MED') as Dimension;
      return { status: 200, body: this.stats(dimension) };
    }
    if (path.startsWith('/api/videos/')) {
      const videoId = path.split('/').pop()!;
      return {
        status: 200,
        body: { metadata: { video_id: videoId }, term_hits: this.hits[videoId] ?? [] },
      };
    }
    return { status: 404, body: { detail: `no route ${path}` } };
  }

  installFetch(): void {
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      if (this.unreachable) {
        throw new TypeError('fetch failed: service unreachable');
      }
      const { status, body } = this.handle(String(input), init);
      return new Response(JSON.stringify(body), {
        status,
        headers: { 'Content-Type': 'application/json' },
      });
    }) as typeof fetch;
  }
}
