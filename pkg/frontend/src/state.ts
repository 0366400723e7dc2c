/** Console state machine for one replay session.

Protocol discipline lives here, not in the DOM layer:

- bars are append-only and only arrive through `drawNextBar`;
- the zone form can only reference bars that have been served;
- nothing reveal-related (manifest, verification, report) exists in the
  state until the user explicitly reveals, and the client never calls the
  reveal endpoint on its own;
- after reveal the form is disabled and mutating actions refuse to run.
*/

import { ApiClient, ApiError } from "./api.js";
import type {
  LedgerViewEntry,
  Manifest,
  MetricsReport,
  ServedBar,
  Verification,
} from "./types.js";

export interface Banner {
  code: string;
  message: string;
}

export interface SessionViewState {
  sessionId: string | null;
  commitment: string | null;
  bars: ServedBar[];
  endOfStream: boolean;
  sealed: boolean;
  revealed: boolean;
  ledger: LedgerViewEntry[];
  manifest: Manifest | null;
  verification: Verification | null;
  report: MetricsReport | null;
  banner: Banner | null;
}

export function initialState(): SessionViewState {
  return {
    sessionId: null,
    commitment: null,
    bars: [],
    endOfStream: false,
    sealed: false,
    revealed: false,
    ledger: [],
    manifest: null,
    verification: null,
    report: null,
    banner: null,
  };
}

type Listener = (state: SessionViewState) => void;

export class ConsoleStore {
  private state: SessionViewState = initialState();
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  getState(): SessionViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<SessionViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private banner(err: unknown): void {
    if (err instanceof ApiError) {
      this.update({ banner: { code: err.code, message: err.message } });
    } else {
      this.update({ banner: { code: "NETWORK", message: String(err) } });
    }
  }

  clearBanner(): void {
    this.update({ banner: null });
  }

  /** Bars the zone picker may legally offer (served bars only). */
  selectableBars(): number[] {
    return this.state.bars.map((b) => b.index);
  }

  get cursor(): number {
    return this.state.bars.length;
  }

  async startSession(body: {
    inline_bars?: unknown[];
    csv_path?: string;
    symbol?: string;
    timeframe?: string;
    seed: number;
  }): Promise<void> {
    try {
      const created = await this.api.createSession(body);
      this.update({
        ...initialState(),
        sessionId: created.session_id,
        commitment: created.commitment,
      });
    } catch (err) {
      this.banner(err);
      throw err;
    }
  }

  private requireSession(): string {
    const id = this.state.sessionId;
    if (id === null) throw new Error("no active session");
    return id;
  }

  async drawNextBar(): Promise<ServedBar | null> {
    const id = this.requireSession();
    if (this.state.revealed || this.state.sealed) {
      this.update({ banner: { code: "SESSION_CLOSED", message: "replay is over" } });
      return null;
    }
    try {
      const bar = await this.api.nextBar(id);
      if (bar === null) {
        this.update({ endOfStream: true });
        return null;
      }
      // append-only: existing bars are never replaced
      this.update({ bars: [...this.state.bars, bar], banner: null });
      return bar;
    } catch (err) {
      this.banner(err);
      return null;
    }
  }

  async markZone(barIndex: number, direction: "up" | "down", note: string): Promise<void> {
    const id = this.requireSession();
    if (this.state.revealed) {
      this.update({ banner: { code: "SESSION_REVEALED", message: "form is disabled after reveal" } });
      return;
    }
    if (!this.selectableBars().includes(barIndex)) {
      // UI-level no-lookahead guard; the server enforces it independently
      this.update({
        banner: { code: "LOOKAHEAD_REJECTED", message: `bar ${barIndex} has not been served` },
      });
      return;
    }
    try {
      const accepted = await this.api.submitPrediction(id, {
        bar_index: barIndex,
        expected_direction: direction,
        note,
      });
      const entry: LedgerViewEntry = {
        bar_index: barIndex,
        expected_direction: direction,
        note,
        entry_hash: accepted.entry_hash,
        chain_length: accepted.chain_length,
      };
      this.update({ ledger: [...this.state.ledger, entry], banner: null });
    } catch (err) {
      this.banner(err);
    }
  }

  async sealSession(): Promise<void> {
    const id = this.requireSession();
    try {
      await this.api.seal(id);
      this.update({ sealed: true, banner: null });
    } catch (err) {
      this.banner(err);
    }
  }

  async revealSession(): Promise<void> {
    const id = this.requireSession();
    try {
      const result = await this.api.reveal(id);
      this.update({
        revealed: true,
        sealed: true,
        manifest: result.manifest,
        verification: result.verification,
        banner: null,
      });
    } catch (err) {
      this.banner(err);
    }
  }

  async loadReport(params: { horizon?: number; atr?: number; k?: number } = {}): Promise<void> {
    const id = this.requireSession();
    try {
      const report = await this.api.report(id, params);
      this.update({ report, banner: null });
    } catch (err) {
      this.banner(err);
    }
  }
}

/** De-anonymize a disguised price with the revealed affine parameters. */
export function truePrice(anonymized: number, manifest: Manifest): number {
  return (anonymized - manifest.affine_b) / manifest.affine_a;
}
