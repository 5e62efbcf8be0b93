// Typed client for the session service /v1 endpoints. The cockpit talks to
// the server through this module only, so tests can stub `fetchImpl`.

export interface NoteView {
  id: number;
  month_created: number;
  content: string;
  tags: string[];
}

export interface Observation {
  t: number;
  month_label: string;
  raw_signals: {
    active_borrowers: number;
    unreconciled_events: number;
    last_close_month: number | null;
  };
  recent_notes: NoteView[];
  budget_remaining: number;
}

export interface Terminal {
  survived: boolean;
  months_lived: number;
  score: number; // cents
}

export interface BalanceSheetView {
  cash: number;
  receivables: number;
  total_assets: number;
  debt: number;
  equity: number;
  retained_earnings: number;
}

export interface IncomeRowView {
  month: number;
  revenue: number;
  cogs: number;
  gross_profit: number;
  opex: number;
  ebitda: number;
  interest_expense: number;
  net_income: number;
}

export interface CashFlowRowView {
  month: number;
  operating: number;
  financing: number;
  net_change: number;
}

export interface StatementsView {
  as_of_month: number;
  income_statement: IncomeRowView[];
  balance_sheet: BalanceSheetView;
  cash_flow: CashFlowRowView[];
}

export interface RecordsView {
  last_close_month: number | null;
  statements: StatementsView | null;
  raw_events: { month: number; amount: number; memo: string }[];
}

export interface MarketMonth {
  label: string;
  gdp_growth: number;
  cpi: number;
  unemployment: number;
  fed_funds: number;
  sofr: number;
  tsy2y: number;
  tsy5y: number;
  tsy10y: number;
  tsy30y: number;
  baa_oas: number;
  vix: number;
  pe_ratio: number;
  ps_ratio: number;
  industry_user_growth: number;
  industry_gross_margin: number;
  industry_ebitda_margin: number;
}

export interface MarketView {
  months: MarketMonth[];
}

export interface ProjectionView {
  rows: { month_offset: number; projected_cash: number }[];
  crosses_zero_at: number | null;
}

export interface FundraisingOutcomeView {
  success: boolean;
  p_macro: number;
  m_company: number;
  p_adj: number;
  fill_rate: number | null;
  amount_actual: number | null;
  settlement_month: number | null;
  indicative_rate: number | null;
}

export interface ActionResolution {
  action: "pass" | "book_closing" | "fund_raising_request";
  as_of_month?: number;
  balance_sheet?: BalanceSheetView;
  instrument?: string;
  amount_requested?: number;
  outcome?: FundraisingOutcomeView;
}

export interface ActionResult {
  resolution: ActionResolution;
  observation?: Observation;
  terminal?: Terminal;
}

export interface ScenarioEntry {
  id: string;
  horizon: number;
}

export interface ApiError {
  code: string;
  message: string;
  budget_remaining?: number;
  month?: number;
}

export class ServerError extends Error {
  constructor(public status: number, public payload: ApiError) {
    super(`${payload.code}: ${payload.message}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ArenaClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      let payload: ApiError = { code: `http_${res.status}`, message: res.statusText };
      try {
        const parsed = (await res.json()) as { error?: ApiError };
        if (parsed.error) payload = parsed.error;
      } catch {
        // non-JSON error body; keep the status fallback
      }
      throw new ServerError(res.status, payload);
    }
    return (await res.json()) as T;
  }

  listScenarios(): Promise<{ scenarios: ScenarioEntry[] }> {
    return this.request("GET", "/v1/scenarios");
  }

  createSession(
    scenarioId: string,
    seed: number,
    agentLabel = "human-cockpit",
  ): Promise<{ session_id: string; observation?: Observation; terminal?: Terminal }> {
    return this.request("POST", "/v1/sessions", {
      scenario_id: scenarioId,
      seed,
      config: { agent_label: agentLabel, client_kind: "human" },
    });
  }

  callTool<T>(sessionId: string, name: string, params: Record<string, unknown> = {}):
      Promise<{ result: T; budget_remaining: number }> {
    return this.request("POST", `/v1/sessions/${sessionId}/tools`, { name, params });
  }

  memory<T>(sessionId: string, op: string, payload: Record<string, unknown>): Promise<{ result: T }> {
    return this.request("POST", `/v1/sessions/${sessionId}/memory`, { op, payload });
  }

  act(sessionId: string, name: string, params: Record<string, unknown> = {}): Promise<ActionResult> {
    return this.request("POST", `/v1/sessions/${sessionId}/action`, { name, params });
  }

  async transcript(sessionId: string): Promise<string> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1/sessions/${sessionId}/transcript`);
    if (!res.ok) throw new ServerError(res.status, { code: `http_${res.status}`, message: res.statusText });
    return res.text();
  }
}
