// Session controller: the one place that talks to the server and mutates the
// view state. The DOM layer and the scripted end-to-end test both drive this.

import { ArenaClient, ServerError } from "./api.js";
import type { ActionResult, MarketView, ProjectionView, RecordsView, NoteView } from "./api.js";
import {
  applyActionResult,
  applyBudget,
  applyError,
  applyMarket,
  applyNotes,
  applyProjection,
  applyRecords,
  applySessionStart,
  applyVerifiedCash,
  emptyState,
  type CockpitState,
} from "./state.js";
import { parseTranscript, type ReplayData } from "./replay.js";

// Scoring constants of the environment, displayed in the scorecard breakdown.
export const VALUATION_MULTIPLE = 5;
export const TOOL_PENALTY_CENTS = 500_000;

export interface Scorecard {
  total: number;        // cents, the server's terminal score
  cashTerm: number;     // cents, final snapshot cash
  penaltyTerm: number;  // cents, tool_penalty * N_tools
  valuationTerm: number; // cents, multiple * trailing revenue (derived)
  nTools: number;
  survived: boolean;
  monthsLived: number;
}

export class Cockpit {
  state: CockpitState = emptyState();
  private listeners: (() => void)[] = [];

  constructor(private client: ArenaClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | null> {
    try {
      const result = await work();
      this.notify();
      return result;
    } catch (err) {
      if (err instanceof ServerError) {
        applyError(this.state, `${err.payload.code}: ${err.payload.message}`);
        if (err.payload.budget_remaining !== undefined) {
          applyBudget(this.state, err.payload.budget_remaining);
        }
        this.notify();
        return null;
      }
      throw err;
    }
  }

  async start(scenarioId: string, seed: number): Promise<void> {
    this.state = emptyState();
    await this.guarded(async () => {
      const body = await this.client.createSession(scenarioId, seed);
      applySessionStart(this.state, scenarioId, body.session_id, body.observation, body.terminal);
    });
  }

  private sessionId(): string {
    if (!this.state.sessionId) throw new Error("no active session");
    return this.state.sessionId;
  }

  async verifyCash(): Promise<number | null> {
    return this.guarded(async () => {
      const res = await this.client.callTool<number>(this.sessionId(), "verify_cash_position");
      applyVerifiedCash(this.state, res.result);
      applyBudget(this.state, res.budget_remaining);
      return res.result;
    });
  }

  async reviewRecords(): Promise<RecordsView | null> {
    return this.guarded(async () => {
      const res = await this.client.callTool<RecordsView>(this.sessionId(), "review_financial_records");
      applyRecords(this.state, res.result);
      applyBudget(this.state, res.budget_remaining);
      return res.result;
    });
  }

  async analyzeMarket(): Promise<MarketView | null> {
    return this.guarded(async () => {
      const res = await this.client.callTool<MarketView>(this.sessionId(), "analyze_market_conditions");
      applyMarket(this.state, res.result);
      applyBudget(this.state, res.budget_remaining);
      return res.result;
    });
  }

  async runProjection(assumptions: {
    horizon_months: number;
    monthly_revenue_growth: number;
    monthly_burn: number;
    expected_inflows: { month: number; amount: number }[];
  }): Promise<ProjectionView | null> {
    return this.guarded(async () => {
      const res = await this.client.callTool<ProjectionView>(
        this.sessionId(), "conduct_cashflow_projection", assumptions);
      applyProjection(this.state, res.result);
      applyBudget(this.state, res.budget_remaining);
      return res.result;
    });
  }

  async saveNote(content: string, tags: string[]): Promise<void> {
    await this.guarded(async () => {
      await this.client.memory<number>(this.sessionId(), "save_note", { content, tags });
      const recent = await this.client.memory<NoteView[]>(this.sessionId(), "recall_notes", {});
      applyNotes(this.state, recent.result);
    });
  }

  async recallNotes(query: string, tags: string[]): Promise<void> {
    await this.guarded(async () => {
      const payload: Record<string, unknown> = {};
      if (query) payload.query = query;
      if (tags.length > 0) payload.tags = tags;
      const res = await this.client.memory<NoteView[]>(this.sessionId(), "recall_notes", payload);
      applyNotes(this.state, res.result);
    });
  }

  private async doAction(name: string, params: Record<string, unknown> = {}): Promise<ActionResult | null> {
    return this.guarded(async () => {
      const result = await this.client.act(this.sessionId(), name, params);
      applyActionResult(this.state, result.resolution, result.observation, result.terminal);
      return result;
    });
  }

  pass(): Promise<ActionResult | null> {
    return this.doAction("pass");
  }

  closeBooks(): Promise<ActionResult | null> {
    return this.doAction("book_closing");
  }

  raise(instrument: "equity" | "debt", amountCents: number): Promise<ActionResult | null> {
    return this.doAction("fund_raising_request", { instrument, amount: amountCents });
  }

  async fetchTranscript(): Promise<ReplayData | null> {
    return this.guarded(async () => {
      const text = await this.client.transcript(this.sessionId());
      return parseTranscript(text);
    });
  }

  /** Terminal score decomposition from server-returned data only. */
  async scorecard(): Promise<Scorecard | null> {
    const terminal = this.state.terminal;
    if (!terminal) return null;
    const replay = await this.fetchTranscript();
    if (!replay) return null;
    const last = replay.cashSeries[replay.cashSeries.length - 1];
    const cashTerm = terminal.survived && last ? last.value : 0;
    let nTools = 0;
    for (const month of replay.months) {
      for (const event of month.events) {
        if (event.kind === "tool_call" && event.payload.ok) nTools += 1;
      }
    }
    const penaltyTerm = terminal.survived ? TOOL_PENALTY_CENTS * nTools : 0;
    return {
      total: terminal.score,
      cashTerm,
      penaltyTerm,
      valuationTerm: terminal.survived ? terminal.score - cashTerm + penaltyTerm : 0,
      nTools,
      survived: terminal.survived,
      monthsLived: terminal.months_lived,
    };
  }
}
