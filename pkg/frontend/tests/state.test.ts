import { describe, expect, it } from "vitest";

import type { Observation } from "../src/api.js";
import {
  applyActionResult,
  applyMarket,
  applyRecords,
  applySessionStart,
  applyVerifiedCash,
  emptyState,
  indicativeDebtQuote,
} from "../src/state.js";

function observation(t: number): Observation {
  return {
    t,
    month_label: `m${t}`,
    raw_signals: { active_borrowers: 5000, unreconciled_events: 0, last_close_month: null },
    recent_notes: [],
    budget_remaining: 20,
  };
}

function marketMonth(overrides: Partial<Record<string, number>> = {}) {
  return {
    label: "Jan 2xx0", gdp_growth: 2, cpi: 100, unemployment: 4, fed_funds: 1.95,
    sofr: 2, tsy2y: 2, tsy5y: 2.35, tsy10y: 2.7, tsy30y: 3, baa_oas: 3, vix: 15,
    pe_ratio: 18, ps_ratio: 4, industry_user_growth: 1, industry_gross_margin: 55,
    industry_ebitda_margin: 15, ...overrides,
  };
}

describe("revealed-information cache", () => {
  it("starts with nothing revealed", () => {
    const state = emptyState();
    expect(state.verifiedCash).toEqual([]);
    expect(state.market).toBeNull();
    expect(state.records).toBeNull();
    expect(indicativeDebtQuote(state)).toBeNull();
  });

  it("verified cash accumulates sparse, sorted points", () => {
    const state = emptyState();
    applySessionStart(state, "s", "id", observation(0), undefined);
    applyVerifiedCash(state, 100);
    state.observation = observation(5);
    applyVerifiedCash(state, 60);
    state.observation = observation(3);
    applyVerifiedCash(state, 80);
    expect(state.verifiedCash).toEqual([
      { month: 0, cash: 100 }, { month: 3, cash: 80 }, { month: 5, cash: 60 },
    ]);
    expect(state.toolCallsTotal).toBe(3);
  });

  it("re-verifying a month overwrites instead of duplicating", () => {
    const state = emptyState();
    applySessionStart(state, "s", "id", observation(0), undefined);
    applyVerifiedCash(state, 100);
    applyVerifiedCash(state, 90);
    expect(state.verifiedCash).toEqual([{ month: 0, cash: 90 }]);
  });
});

describe("indicative debt quote", () => {
  it("needs revealed market data", () => {
    const state = emptyState();
    applySessionStart(state, "s", "id", observation(0), undefined);
    expect(indicativeDebtQuote(state)).toBeNull();
  });

  it("uses the unlevered base rate until statements are revealed", () => {
    const state = emptyState();
    applySessionStart(state, "s", "id", observation(0), undefined);
    applyMarket(state, { months: [marketMonth({ tsy2y: 2, baa_oas: 3 })] });
    expect(indicativeDebtQuote(state)).toBeCloseTo(0.05, 10);
  });

  it("adds the leverage spread once a balance sheet is revealed", () => {
    const state = emptyState();
    applySessionStart(state, "s", "id", observation(0), undefined);
    applyMarket(state, { months: [marketMonth({ tsy2y: 2, baa_oas: 3 })] });
    applyRecords(state, {
      last_close_month: 0,
      statements: {
        as_of_month: 0,
        income_statement: [],
        cash_flow: [],
        balance_sheet: { cash: 100, receivables: 0, total_assets: 100, debt: 80, equity: 100, retained_earnings: 0 },
      },
      raw_events: [],
    });
    // L = 0.8: base 5% + 0.05 * 0.3
    expect(indicativeDebtQuote(state)).toBeCloseTo(0.065, 10);
  });
});

describe("action results", () => {
  it("advances the observation and resets the acted flag", () => {
    const state = emptyState();
    applySessionStart(state, "s", "id", observation(0), undefined);
    applyActionResult(state, { action: "pass" }, observation(1), undefined);
    expect(state.observation?.t).toBe(1);
    expect(state.actedThisMonth).toBe(false);
    expect(state.feed.some((e) => e.kind === "action")).toBe(true);
  });

  it("terminal result freezes the session", () => {
    const state = emptyState();
    applySessionStart(state, "s", "id", observation(0), undefined);
    applyActionResult(state, { action: "pass" }, undefined,
      { survived: false, months_lived: 1, score: 0 });
    expect(state.terminal).toEqual({ survived: false, months_lived: 1, score: 0 });
    expect(state.feed[state.feed.length - 1]?.kind).toBe("system");
  });
});
