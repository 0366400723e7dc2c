/** Wire types for the blind session service. */

export interface ServedBar {
  index: number;
  open: number;
  high: number;
  low: number;
  close: number;
}

export interface SessionCreated {
  session_id: string;
  commitment: string;
}

export interface PredictionRequest {
  bar_index: number;
  expected_direction: "up" | "down";
  note: string;
}

export interface PredictionAccepted {
  entry_hash: string;
  chain_length: number;
}

export interface Manifest {
  symbol: string;
  timeframe: string;
  start_timestamp: string;
  end_timestamp: string;
  affine_a: number;
  affine_b: number;
  rng_seed: number;
  series_digest: string;
}

export interface Verification {
  chain_ok: boolean;
  commitment_ok: boolean;
  lookahead_ok: boolean;
  first_broken_link: number | null;
  entry_count: number;
}

export interface RevealResponse {
  manifest: Manifest;
  verification: Verification;
}

export interface PredictionOutcome {
  bar_index: number;
  direction: "up" | "down";
  mfe: number;
  mae: number;
  rr: number | null;
  no_adverse: boolean;
  hit: boolean;
  truncated: boolean;
}

export interface MetricsReport {
  records: PredictionOutcome[];
  hit_rate: number | null;
  mean_rr: number | null;
  max_drawdown_over_series: number;
}

export interface ErrorBody {
  code: string;
  message: string;
}

/** A prediction the analyst made, with the hash the server chained it under. */
export interface LedgerViewEntry {
  bar_index: number;
  expected_direction: "up" | "down";
  note: string;
  entry_hash: string;
  chain_length: number;
}
