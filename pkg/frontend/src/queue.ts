// Queue rendering: one card per pending conflict, both classifier
// confidences side by side, label buttons wired to the submit handler.

import type { Label, QueueItem, TermHit } from './types.js';

export interface QueueHandlers {
  onSubmit: (item: QueueItem, label: Label) => void;
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

// Highlight known term surfaces in the excerpt (presentation only; spans in
// the API refer to the full metadata text, not the excerpt). One combined
// longest-first alternation keeps marks from nesting.
export function highlightTerms(text: string, hits: TermHit[]): string {
  const surfaces = [...new Set(hits.map((h) => h.surface))]
    .filter((s) => s.length > 0)
    .sort((a, b) => b.length - a.length)
    .map((s) => s.replace(/[.*+?^${}()|[\]\\]/g, '\\$&'));
  if (surfaces.length === 0) {
    return escapeHtml(text);
  }
  const pattern = new RegExp(surfaces.join('|'), 'gi');
  let html = '';
  let last = 0;
  for (const match of text.matchAll(pattern)) {
    html += escapeHtml(text.slice(last, match.index));
    html += `<mark>${escapeHtml(match[0])}</mark>`;
    last = match.index + match[0].length;
  }
  return html + escapeHtml(text.slice(last));
}

function confidenceBar(name: string, proba: number): string {
  const pct = Math.round(proba * 100);
  return `
    <div class="confidence">
      <span class="confidence-name">${name}</span>
      <div class="confidence-track"><div class="confidence-fill" style="width:${pct}%"></div></div>
      <span class="confidence-value">${proba.toFixed(3)}</span>
    </div>`;
}

export function sortQueue(items: QueueItem[]): QueueItem[] {
  return [...items].sort((a, b) =>
    a.created_round - b.created_round
    || a.video_id.localeCompare(b.video_id));
}

export function renderQueue(
  container: HTMLElement,
  items: QueueItem[],
  hitsById: Map<string, TermHit[]>,
  handlers: QueueHandlers,
): void {
  container.textContent = '';
  if (items.length === 0) {
    const empty = document.createElement('div');
    empty.className = 'queue-empty';
    empty.textContent = 'All caught up - no conflicts waiting for review.';
    container.appendChild(empty);
    return;
  }
  for (const item of sortQueue(items)) {
    const card = document.createElement('article');
    card.className = 'queue-card';
    card.dataset.videoId = item.video_id;
    card.dataset.revision = String(item.revision);
    const hits = hitsById.get(item.video_id) ?? [];
    card.innerHTML = `
      <header>
        <h3>${escapeHtml(item.title || item.video_id)}</h3>
        <span class="card-meta">round ${item.created_round} &middot;
          <a href="https://www.youtube.com/watch?v=${encodeURIComponent(item.video_id)}"
             target="_blank" rel="noopener">open video</a></span>
      </header>
      <p class="excerpt">${highlightTerms(item.excerpt, hits)}</p>
      <div class="confidences">
        ${confidenceBar('metadata view', item.f1_proba)}
        ${confidenceBar('content view', item.f2_proba)}
      </div>
      <div class="actions">
        <button class="label-high">label high</button>
        <button class="label-low">label low</button>
      </div>`;
    card.querySelector<HTMLButtonElement>('.label-high')!
      .addEventListener('click', () => handlers.onSubmit(item, 'high'));
    card.querySelector<HTMLButtonElement>('.label-low')!
      .addEventListener('click', () => handlers.onSubmit(item, 'low'));
    container.appendChild(card);
  }
}
