// Round stats panel: labeled/unlabeled/queue counts and the per-round
// validation macro-F1 chart, plus the advance-round control.

import type { StatsPayload } from './types.js';

export interface StatsHandlers {
  onAdvance: () => void;
}

function chartSvg(values: number[]): string {
  const width = 260;
  const height = 80;
  const pad = 6;
  if (values.length === 0) {
    return `<svg class="f1-chart" viewBox="0 0 ${width} ${height}" data-points="">
      <text x="8" y="45" class="chart-note">no validation history</text></svg>`;
  }
  const step = values.length > 1 ? (width - 2 * pad) / (values.length - 1) : 0;
  const y = (v: number) => height - pad - v * (height - 2 * pad);
  const points = values
    .map((v, i) => `${(pad + i * step).toFixed(1)},${y(v).toFixed(1)}`)
    .join(' ');
  const dots = values
    .map((v, i) => `<circle cx="${(pad + i * step).toFixed(1)}" cy="${y(v).toFixed(1)}" r="2.5" />`)
    .join('');
  return `<svg class="f1-chart" viewBox="0 0 ${width} ${height}"
       data-points="${values.map((v) => v.toFixed(6)).join(',')}">
    <polyline points="${points}" fill="none" />
    ${dots}
  </svg>`;
}

export function renderStats(
  container: HTMLElement,
  stats: StatsPayload,
  handlers: StatsHandlers,
): void {
  const f1s = stats.history.map((h) => h.macro_f1);
  container.innerHTML = `
    <h2>Round ${stats.round} &middot; ${stats.dimension}</h2>
    <dl class="counts">
      <div><dt>labeled</dt><dd data-stat="labeled">${stats.labeled}</dd></div>
      <div><dt>unlabeled</dt><dd data-stat="unlabeled">${stats.unlabeled}</dd></div>
      <div><dt>queue</dt><dd data-stat="queue_depth">${stats.queue_depth}</dd></div>
      <div><dt>discarded</dt><dd data-stat="discarded">${stats.discarded}</dd></div>
    </dl>
    <div class="chart-block">
      <h3>validation macro-F1 by round</h3>
      ${chartSvg(f1s)}
    </div>
    <button class="advance-round"
      ${stats.queue_depth > 0 || stats.should_stop ? 'disabled' : ''}>
      advance round
    </button>
    ${stats.should_stop
      ? `<p class="stopped">stopped: ${stats.stop_reason}</p>` : ''}`;
  container.querySelector<HTMLButtonElement>('.advance-round')!
    .addEventListener('click', handlers.onAdvance);
}
