// Payload shapes of the review service API.

export type Dimension = 'MED' | 'UND';
export type Label = 'high' | 'low';

export interface QueueItem {
  video_id: string;
  dimension: Dimension;
  title: string;
  excerpt: string;
  f1_proba: number;
  f2_proba: number;
  created_round: number;
  revision: number;
}

export interface HistoryPoint {
  round: number;
  macro_f1: number;
  accuracy: number;
  auc: number | null;
}

export interface StatsPayload {
  dimension: Dimension;
  round: number;
  labeled: number;
  unlabeled: number;
  queue_depth: number;
  discarded: number;
  history: HistoryPoint[];
  should_stop: boolean;
  stop_reason: string;
}

export interface SubmitResult {
  status: 'applied' | 'noop';
  revision: number;
}

export interface TermHit {
  span: [number, number];
  surface: string;
  canonical: string;
  semtype: string;
}

export interface VideoDetail {
  metadata: Record<string, unknown>;
  term_hits: TermHit[];
}

export interface JobStatus {
  status: 'running' | 'done' | 'failed';
  dimension: Dimension;
  report: unknown;
  error?: string;
}
