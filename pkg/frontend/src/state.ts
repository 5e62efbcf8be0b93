// Cockpit view state. Everything rendered comes from this store, and the
// store is only ever fed from server responses, so partial observability is
// preserved client-side by construction: if the server never returned a
// value, the cockpit cannot draw it.

import type {
  ActionResolution,
  MarketMonth,
  NoteView,
  Observation,
  ProjectionView,
  RecordsView,
  Terminal,
} from "./api.js";

export interface VerifiedCashPoint {
  month: number;
  cash: number; // cents
}

export interface FeedEvent {
  month: number;
  label: string;
  kind: "tool" | "memory" | "action" | "system" | "error";
  text: string;
}

export interface CockpitState {
  sessionId: string | null;
  scenarioId: string | null;
  observation: Observation | null;
  terminal: Terminal | null;
  actedThisMonth: boolean;
  // Revealed-information cache: only what tools returned this episode.
  verifiedCash: VerifiedCashPoint[];
  market: MarketMonth[] | null;
  records: RecordsView | null;
  projection: ProjectionView | null;
  notes: NoteView[];
  toolCallsTotal: number;
  feed: FeedEvent[];
}

export function emptyState(): CockpitState {
  return {
    sessionId: null,
    scenarioId: null,
    observation: null,
    terminal: null,
    actedThisMonth: false,
    verifiedCash: [],
    market: null,
    records: null,
    projection: null,
    notes: [],
    toolCallsTotal: 0,
    feed: [],
  };
}

function push(state: CockpitState, kind: FeedEvent["kind"], text: string): void {
  const month = state.observation?.t ?? 0;
  const label = state.observation?.month_label ?? "";
  state.feed.push({ month, label, kind, text });
}

export function applySessionStart(
  state: CockpitState,
  scenarioId: string,
  sessionId: string,
  observation: Observation | undefined,
  terminal: Terminal | undefined,
): void {
  state.scenarioId = scenarioId;
  state.sessionId = sessionId;
  state.observation = observation ?? null;
  state.terminal = terminal ?? null;
  state.actedThisMonth = false;
  push(state, "system", terminal ? "episode ended immediately" : "session started");
}

export function applyVerifiedCash(state: CockpitState, cash: number): void {
  const month = state.observation?.t ?? 0;
  const existing = state.verifiedCash.find((p) => p.month === month);
  if (existing) {
    existing.cash = cash;
  } else {
    state.verifiedCash.push({ month, cash });
    state.verifiedCash.sort((a, b) => a.month - b.month);
  }
  state.toolCallsTotal += 1;
  push(state, "tool", "verified cash position");
}

export function applyRecords(state: CockpitState, records: RecordsView): void {
  state.records = records;
  state.toolCallsTotal += 1;
  push(state, "tool", records.statements
    ? `reviewed records (statements through month ${records.statements.as_of_month})`
    : "reviewed records (no reconciliation yet: raw events only)");
}

export function applyMarket(state: CockpitState, market: { months: MarketMonth[] }): void {
  state.market = market.months;
  state.toolCallsTotal += 1;
  push(state, "tool", `analyzed market conditions (${market.months.length} months)`);
}

export function applyProjection(state: CockpitState, projection: ProjectionView): void {
  state.projection = projection;
  state.toolCallsTotal += 1;
  push(state, "tool", projection.crosses_zero_at === null
    ? "projection: cash stays positive over the window"
    : `projection: cash crosses zero at +${projection.crosses_zero_at} months`);
}

export function applyNotes(state: CockpitState, notes: NoteView[]): void {
  state.notes = notes;
}

export function applyBudget(state: CockpitState, budgetRemaining: number): void {
  if (state.observation) state.observation.budget_remaining = budgetRemaining;
}

export function applyActionResult(
  state: CockpitState,
  resolution: ActionResolution,
  observation: Observation | undefined,
  terminal: Terminal | undefined,
): void {
  state.actedThisMonth = true;
  if (resolution.action === "pass") {
    push(state, "action", "passed");
  } else if (resolution.action === "book_closing") {
    push(state, "action", `closed books through month ${resolution.as_of_month}`);
  } else {
    const outcome = resolution.outcome;
    if (outcome?.success) {
      push(state, "action",
        `raise ${resolution.instrument} succeeded: filled ${(100 * (outcome.fill_rate ?? 0)).toFixed(1)}% `
        + `of request, settles month ${outcome.settlement_month}`);
    } else {
      push(state, "action", `raise ${resolution.instrument} failed (p was ${(outcome?.p_adj ?? 0).toFixed(2)})`);
    }
  }
  if (terminal) {
    state.terminal = terminal;
    push(state, "system", terminal.survived
      ? `survived all ${terminal.months_lived} months`
      : `cash went negative: dead at month ${terminal.months_lived}`);
  } else if (observation) {
    state.observation = observation;
    state.actedThisMonth = false;
  }
}

export function applyError(state: CockpitState, message: string): void {
  push(state, "error", message);
}

/** Indicative debt quote from revealed data only; null until both legs are revealed. */
export function indicativeDebtQuote(state: CockpitState): number | null {
  if (!state.market || state.market.length === 0) return null;
  const latest = state.market[state.market.length - 1]!;
  const base = (latest.tsy2y + latest.baa_oas) / 100;
  const sheet = state.records?.statements?.balance_sheet;
  if (!sheet) return base; // leverage unknown: quote the unlevered base rate
  const leverage = sheet.equity > 0 ? sheet.debt / sheet.equity : 10;
  return base + 0.05 * Math.max(0, leverage - 0.5);
}
