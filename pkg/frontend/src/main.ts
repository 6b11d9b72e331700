// Application shell: dimension selector, review queue, stats panel.
//
// Submissions are optimistic: the card leaves the queue immediately and is
// restored (with a banner and a server refresh) if the service answers
// 409/404. Every state change flows through the documented API; the UI owns
// nothing durable, so a failed fetch only shows a retry banner and keeps the
// last good view.

import { ApiClient, ApiError } from './api.js';
import { renderQueue } from './queue.js';
import { renderStats } from './stats.js';
import type { Dimension, Label, QueueItem, TermHit } from './types.js';

const POLL_DELAY_MS = 250;

export interface AppOptions {
  resolver?: string;
  jobPollDelayMs?: number;
}

export class App {
  readonly root: HTMLElement;
  private client: ApiClient;
  private resolver: string;
  private jobPollDelayMs: number;

  dimension: Dimension = 'MED';
  items: QueueItem[] = [];
  private hitsById = new Map<string, TermHit[]>();

  private queueEl!: HTMLElement;
  private statsEl!: HTMLElement;
  private bannerEl!: HTMLElement;

  constructor(root: HTMLElement, client: ApiClient, options: AppOptions = {}) {
    this.root = root;
    this.client = client;
    this.resolver = options.resolver ?? 'labeler';
    this.jobPollDelayMs = options.jobPollDelayMs ?? POLL_DELAY_MS;
    this.buildLayout();
  }

  private buildLayout(): void {
    this.root.innerHTML = `
      <header class="topbar">
        <h1>review queue</h1>
        <select class="dimension-select">
          <option value="MED">medical information</option>
          <option value="UND">understandability</option>
        </select>
      </header>
      <div class="banner" hidden></div>
      <main class="layout">
        <section class="queue"></section>
        <aside class="stats"></aside>
      </main>`;
    this.queueEl = this.root.querySelector<HTMLElement>('.queue')!;
    this.statsEl = this.root.querySelector<HTMLElement>('.stats')!;
    this.bannerEl = this.root.querySelector<HTMLElement>('.banner')!;
    this.root.querySelector<HTMLSelectElement>('.dimension-select')!
      .addEventListener('change', (ev) => {
        this.dimension = (ev.target as HTMLSelectElement).value as Dimension;
        void this.refresh();
      });
  }

  banner(message: string, kind: 'error' | 'conflict' | 'info' = 'info'): void {
    this.bannerEl.hidden = false;
    this.bannerEl.className = `banner banner-${kind}`;
    this.bannerEl.textContent = message;
  }

  clearBanner(): void {
    this.bannerEl.hidden = true;
    this.bannerEl.textContent = '';
  }

  async refresh(): Promise<void> {
    try {
      const [items, stats] = await Promise.all([
        this.client.getQueue(this.dimension),
        this.client.getStats(this.dimension),
      ]);
      this.items = items;
      await this.fetchHighlights(items);
      this.clearBanner();
      this.renderAll(stats);
    } catch (err) {
      // keep the last good view; just surface the outage
      this.banner(`service unreachable - retrying may help (${String(err)})`,
        'error');
    }
  }

  private async fetchHighlights(items: QueueItem[]): Promise<void> {
    await Promise.all(items.map(async (item) => {
      if (this.hitsById.has(item.video_id)) return;
      try {
        const detail = await this.client.getVideo(item.video_id);
        this.hitsById.set(item.video_id, detail.term_hits);
      } catch {
        this.hitsById.set(item.video_id, []);
      }
    }));
  }

  private renderAll(stats: Parameters<typeof renderStats>[1]): void {
    renderQueue(this.queueEl, this.items, this.hitsById, {
      onSubmit: (item, label) => void this.submit(item, label),
    });
    renderStats(this.statsEl, stats, {
      onAdvance: () => void this.advance(),
    });
  }

  async submit(item: QueueItem, label: Label): Promise<void> {
    // optimistic: drop the card now, roll back on rejection
    const before = this.items;
    this.items = this.items.filter((it) => it.video_id !== item.video_id);
    renderQueue(this.queueEl, this.items, this.hitsById, {
      onSubmit: (it, lab) => void this.submit(it, lab),
    });
    try {
      await this.client.submitLabel(
        item.video_id, this.dimension, label, this.resolver, item.revision);
      await this.refresh();
    } catch (err) {
      this.items = before;
      if (err instanceof ApiError && (err.status === 409 || err.status === 404)) {
        this.banner(
          `label for ${item.video_id} was rejected (${JSON.stringify(err.detail)}); `
          + 'the card was refreshed from the server', 'conflict');
        await this.refreshKeepingBanner();
      } else {
        this.banner(`submission failed: ${String(err)}`, 'error');
        this.renderAll(await this.safeStats());
      }
    }
  }

  private async refreshKeepingBanner(): Promise<void> {
    try {
      const [items, stats] = await Promise.all([
        this.client.getQueue(this.dimension),
        this.client.getStats(this.dimension),
      ]);
      this.items = items;
      await this.fetchHighlights(items);
      this.renderAll(stats);
    } catch {
      // banner already explains; keep the rolled-back view
      this.renderAll(await this.safeStats());
    }
  }

  private async safeStats() {
    try {
      return await this.client.getStats(this.dimension);
    } catch {
      return {
        dimension: this.dimension, round: 0, labeled: 0, unlabeled: 0,
        queue_depth: this.items.length, discarded: 0, history: [],
        should_stop: false, stop_reason: '',
      };
    }
  }

  async advance(): Promise<void> {
    try {
      const { job_id } = await this.client.advanceRound(this.dimension);
      let status = await this.client.jobStatus(job_id);
      while (status.status === 'running') {
        await new Promise((resolve) => setTimeout(resolve, this.jobPollDelayMs));
        status = await this.client.jobStatus(job_id);
      }
      if (status.status === 'failed') {
        this.banner(`round advance failed (job ${job_id}): ${status.error}`,
          'error');
        return;
      }
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.banner('cannot advance: items are still pending review', 'conflict');
      } else {
        this.banner(`round advance failed: ${String(err)}`, 'error');
      }
    }
  }
}

export function init(root: HTMLElement, baseUrl = ''): App {
  const app = new App(root, new ApiClient(baseUrl));
  void app.refresh();
  return app;
}
