// Test support: a canned in-memory session service speaking the /v1 wire
// format, for exercising the client, store, and DOM without a real backend.

import type { FetchLike, Observation, Terminal } from "../src/api.js";

const MONTH_NAMES = ["Jan", "Feb", "Mar", "Apr", "May", "Jun",
  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];

export function maskedLabel(month: number): string {
  return `${MONTH_NAMES[month % 12]} 2xx${Math.floor(month / 12)}`;
}

interface FakeEpisode {
  month: number;
  cash: number;
  budget: number;
  nTools: number;
  acted: number;
  notes: { id: number; month_created: number; content: string; tags: string[] }[];
  log: { t: number; kind: string; payload: Record<string, unknown> }[];
  terminal: Terminal | null;
}

export class FakeServer {
  episode: FakeEpisode | null = null;

  constructor(
    public horizon = 6,
    public monthlyBurn = 100_000_00, // cents
  ) {}

  private observation(): Observation {
    const ep = this.episode!;
    return {
      t: ep.month,
      month_label: maskedLabel(ep.month),
      raw_signals: { active_borrowers: 5000, unreconciled_events: ep.month * 3, last_close_month: null },
      recent_notes: ep.notes.slice(-5).reverse(),
      budget_remaining: ep.budget,
    };
  }

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }

  private error(code: string, message: string, status: number): Response {
    const ep = this.episode;
    return this.json({
      error: { code, message, budget_remaining: ep?.budget ?? 0, month: ep?.month ?? 0 },
    }, status);
  }

  fetch: FetchLike = async (input, init) => {
    const url = typeof input === "string" ? input : String(input);
    const body = init?.body ? JSON.parse(String(init.body)) : {};

    if (url.endsWith("/v1/scenarios")) {
      return this.json({ scenarios: [{ id: "fake-6", horizon: this.horizon }] });
    }
    if (url.endsWith("/v1/sessions") && init?.method === "POST") {
      this.episode = {
        month: 0, cash: 15_000_000_00, budget: 20, nTools: 0, acted: 0,
        notes: [], log: [], terminal: null,
      };
      this.snapshotless("config", { scenario_id: "fake-6", seed: body.seed, agent_label: "fake", horizon: this.horizon }, -1);
      this.snapshotless("observation", this.observation() as unknown as Record<string, unknown>);
      return this.json({ session_id: "fake-session", observation: this.observation() });
    }
    const ep = this.episode;
    if (!ep) return this.error("session_not_found", "no session", 404);
    if (url.endsWith("/transcript")) {
      return new Response(ep.log.map((r) => JSON.stringify(r)).join("\n") + "\n", { status: 200 });
    }
    if (ep.terminal && !url.endsWith("/transcript")) {
      return this.error("contract_violation", "episode has ended", 409);
    }

    if (url.endsWith("/tools")) {
      if (ep.budget <= 0) return this.error("budget_exhausted", "tool budget exhausted", 409);
      ep.budget -= 1;
      ep.nTools += 1;
      let result: unknown;
      if (body.name === "verify_cash_position") {
        result = ep.cash;
      } else if (body.name === "analyze_market_conditions") {
        result = {
          months: Array.from({ length: ep.month + 1 }, (_, m) => ({
            label: maskedLabel(m), gdp_growth: 2, cpi: 100, unemployment: 4, fed_funds: 1.95,
            sofr: 2, tsy2y: 2, tsy5y: 2.35, tsy10y: 2.7, tsy30y: 3, baa_oas: 3, vix: 15,
            pe_ratio: 18, ps_ratio: 4, industry_user_growth: 1,
            industry_gross_margin: 55, industry_ebitda_margin: 15,
          })),
        };
      } else if (body.name === "review_financial_records") {
        result = {
          last_close_month: null,
          statements: null,
          raw_events: [{ month: ep.month, amount: -this.monthlyBurn, memo: "operating spend" }],
        };
      } else if (body.name === "conduct_cashflow_projection") {
        const horizon = body.params.horizon_months as number;
        if (!horizon || horizon < 1) return this.error("bad_assumptions", "bad horizon", 400);
        const burn = body.params.monthly_burn as number;
        const rows = Array.from({ length: horizon + 1 }, (_, k) => ({
          month_offset: k, projected_cash: ep.cash - k * burn,
        }));
        result = { rows, crosses_zero_at: rows.find((r) => r.projected_cash <= 0)?.month_offset ?? null };
      } else {
        return this.error("contract_violation", `unknown tool ${body.name}`, 409);
      }
      this.snapshotless("tool_call", { name: body.name, params: body.params ?? {}, ok: true, result, budget_remaining: ep.budget });
      return this.json({ result, budget_remaining: ep.budget });
    }

    if (url.endsWith("/memory")) {
      if (body.op === "save_note") {
        ep.notes.push({
          id: ep.notes.length + 1, month_created: ep.month,
          content: body.payload.content, tags: body.payload.tags ?? [],
        });
        return this.json({ result: ep.notes.length });
      }
      const tags: string[] = body.payload.tags ?? [];
      const query: string | undefined = body.payload.query;
      const hits = ep.notes.filter((n) =>
        (!query && tags.length === 0)
        || (query && n.content.toLowerCase().includes(query.toLowerCase()))
        || tags.some((t) => n.tags.includes(t))).slice(-5).reverse();
      return this.json({ result: hits });
    }

    if (url.endsWith("/action")) {
      let resolution: Record<string, unknown>;
      if (body.name === "pass") {
        resolution = { action: "pass" };
      } else if (body.name === "book_closing") {
        resolution = {
          action: "book_closing", as_of_month: ep.month,
          balance_sheet: { cash: ep.cash, receivables: 0, total_assets: ep.cash, debt: 0, equity: ep.cash, retained_earnings: 0 },
        };
      } else if (body.name === "fund_raising_request") {
        resolution = {
          action: "fund_raising_request", instrument: body.params.instrument,
          amount_requested: body.params.amount,
          outcome: {
            success: true, p_macro: 0.9, m_company: 1, p_adj: 0.9, fill_rate: 0.8,
            amount_actual: Math.round(0.8 * body.params.amount),
            settlement_month: ep.month + 2,
            indicative_rate: body.params.instrument === "debt" ? 0.05 : null,
          },
        };
      } else {
        return this.error("contract_violation", `unknown action ${body.name}`, 409);
      }
      this.snapshotless("action", { name: body.name, params: body.params ?? {} });
      this.snapshotless("env_feedback", resolution);
      this.snapshotless("monthly_snapshot", {
        cash: ep.cash, borrowers: 5000,
        indicators: { gross_margin: 55, ebitda_margin: 15, user_growth: 0, collection_rate: 0.97 },
        n_tools: ep.nTools,
      });
      ep.acted += 1;
      ep.month += 1;
      ep.cash -= this.monthlyBurn;
      if (ep.month >= this.horizon) {
        ep.terminal = { survived: true, months_lived: this.horizon, score: ep.cash + 123_00 - ep.nTools * 500_000 };
        this.snapshotless("terminal", ep.terminal as unknown as Record<string, unknown>);
        return this.json({ resolution, terminal: ep.terminal });
      }
      ep.budget = 20;
      this.snapshotless("observation", this.observation() as unknown as Record<string, unknown>);
      return this.json({ resolution, observation: this.observation() });
    }
    return this.error("session_not_found", `unhandled ${url}`, 404);
  };

  private snapshotless(kind: string, payload: Record<string, unknown>, t?: number): void {
    this.episode!.log.push({ t: t ?? this.episode!.month, kind, payload });
  }
}

export async function until(condition: () => boolean, timeoutMs = 5000): Promise<void> {
  const start = Date.now();
  while (!condition()) {
    if (Date.now() - start > timeoutMs) throw new Error("condition not met in time");
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}
