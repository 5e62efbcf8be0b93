import { describe, expect, it } from "vitest";

import { ReplayCursor, describeEvent, parseTranscript } from "../src/replay.js";

const FIXTURE = [
  { t: -1, kind: "config", payload: { scenario_id: "s", seed: 4, agent_label: "x", horizon: 3 } },
  { t: 0, kind: "observation", payload: { month_label: "Jan 2xx0", budget_remaining: 20 } },
  { t: 0, kind: "tool_call", payload: { name: "verify_cash_position", ok: true, result: 100 } },
  { t: 0, kind: "action", payload: { name: "pass", params: {} } },
  { t: 0, kind: "monthly_snapshot", payload: { cash: 100, borrowers: 10, n_tools: 1 } },
  { t: 1, kind: "observation", payload: { month_label: "Feb 2xx0", budget_remaining: 20 } },
  { t: 1, kind: "action", payload: { name: "book_closing", params: {} } },
  { t: 1, kind: "monthly_snapshot", payload: { cash: 80, borrowers: 10, n_tools: 1 } },
  { t: 2, kind: "observation", payload: { month_label: "Mar 2xx0", budget_remaining: 20 } },
  { t: 2, kind: "action", payload: { name: "pass", params: {} } },
  { t: 2, kind: "monthly_snapshot", payload: { cash: 60, borrowers: 10, n_tools: 1 } },
  { t: 2, kind: "terminal", payload: { survived: true, months_lived: 3, score: 60 } },
].map((r) => JSON.stringify(r)).join("\n") + "\n";

describe("transcript parsing", () => {
  it("groups records by month and extracts the cash series", () => {
    const data = parseTranscript(FIXTURE);
    expect(data.horizon).toBe(3);
    expect(data.months.map((m) => m.month)).toEqual([0, 1, 2]);
    expect(data.cashSeries).toEqual([
      { month: 0, value: 100 }, { month: 1, value: 80 }, { month: 2, value: 60 },
    ]);
    expect(data.terminal).toEqual({ survived: true, months_lived: 3, score: 60 });
  });

  it("rejects transcripts without a config header", () => {
    expect(() => parseTranscript('{"t":0,"kind":"action","payload":{}}')).toThrow(/config/);
  });
});

describe("replay cursor", () => {
  it("steps forward and back with a growing cash curve", () => {
    const cursor = new ReplayCursor(parseTranscript(FIXTURE));
    expect(cursor.month?.month).toBe(0);
    expect(cursor.cashSoFar).toHaveLength(1);
    expect(cursor.next()).toBe(true);
    expect(cursor.cashSoFar).toHaveLength(2);
    expect(cursor.next()).toBe(true);
    expect(cursor.next()).toBe(false); // clamped at the end
    expect(cursor.cashSoFar.map((p) => p.value)).toEqual([100, 80, 60]);
    expect(cursor.prev()).toBe(true);
    expect(cursor.month?.month).toBe(1);
  });

  it("seeks by month", () => {
    const cursor = new ReplayCursor(parseTranscript(FIXTURE));
    cursor.seek(2);
    expect(cursor.month?.month).toBe(2);
    cursor.seek(99);
    expect(cursor.month?.month).toBe(2);
  });
});

describe("event descriptions", () => {
  it("summarizes the interesting kinds", () => {
    expect(describeEvent({ t: 0, kind: "action", payload: { name: "pass" } })).toBe("action pass");
    expect(describeEvent({
      t: 0, kind: "env_feedback",
      payload: { action: "fund_raising_request", instrument: "debt", outcome: { success: true, settlement_month: 4 } },
    })).toContain("settles month 4");
    expect(describeEvent({
      t: 0, kind: "tool_call", payload: { name: "x", ok: false, error: { code: "budget_exhausted" } },
    })).toContain("rejected");
  });
});
