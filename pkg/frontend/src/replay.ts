// Transcript replay: parse line-delimited JSON and step through it month by
// month. Works for any transcript, human or agent.

export interface TranscriptRecord {
  t: number;
  kind: string;
  payload: Record<string, any>;
}

export interface ReplayMonth {
  month: number;
  events: TranscriptRecord[];
  snapshotCash: number | null;
}

export interface ReplayData {
  scenarioId: string;
  seed: number;
  agentLabel: string;
  horizon: number;
  months: ReplayMonth[];
  cashSeries: { month: number; value: number }[];
  terminal: { survived: boolean; months_lived: number; score: number } | null;
}

export function parseTranscript(ndjson: string): ReplayData {
  const records: TranscriptRecord[] = ndjson
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line));
  const config = records.find((r) => r.kind === "config");
  if (!config) throw new Error("transcript has no config record");

  const byMonth = new Map<number, ReplayMonth>();
  let terminal: ReplayData["terminal"] = null;
  for (const record of records) {
    if (record.kind === "config") continue;
    if (record.kind === "terminal") {
      terminal = record.payload as ReplayData["terminal"];
      continue;
    }
    let bucket = byMonth.get(record.t);
    if (!bucket) {
      bucket = { month: record.t, events: [], snapshotCash: null };
      byMonth.set(record.t, bucket);
    }
    bucket.events.push(record);
    if (record.kind === "monthly_snapshot") {
      bucket.snapshotCash = record.payload.cash as number;
    }
  }
  const months = [...byMonth.values()].sort((a, b) => a.month - b.month);
  return {
    scenarioId: config.payload.scenario_id,
    seed: config.payload.seed,
    agentLabel: config.payload.agent_label,
    horizon: config.payload.horizon,
    months,
    cashSeries: months
      .filter((m) => m.snapshotCash !== null)
      .map((m) => ({ month: m.month, value: m.snapshotCash as number })),
    terminal,
  };
}

export class ReplayCursor {
  private index = 0;

  constructor(public readonly data: ReplayData) {}

  get month(): ReplayMonth | null {
    return this.data.months[this.index] ?? null;
  }

  get position(): number {
    return this.index;
  }

  /** Cash curve revealed up to and including the cursor. */
  get cashSoFar(): { month: number; value: number }[] {
    const limit = this.month?.month ?? -1;
    return this.data.cashSeries.filter((p) => p.month <= limit);
  }

  next(): boolean {
    if (this.index + 1 >= this.data.months.length) return false;
    this.index += 1;
    return true;
  }

  prev(): boolean {
    if (this.index === 0) return false;
    this.index -= 1;
    return true;
  }

  seek(month: number): void {
    const at = this.data.months.findIndex((m) => m.month >= month);
    this.index = at === -1 ? this.data.months.length - 1 : at;
  }
}

export function describeEvent(record: TranscriptRecord): string {
  const p = record.payload;
  switch (record.kind) {
    case "observation":
      return `observation: ${p.month_label}, budget ${p.budget_remaining}`;
    case "tool_call":
      return p.ok ? `tool ${p.name}` : `tool ${p.name} rejected (${p.error?.code})`;
    case "memory_op":
      return `memory ${p.op}`;
    case "action":
      return `action ${p.name}`;
    case "env_feedback":
      if (p.action === "fund_raising_request") {
        return p.outcome?.success
          ? `raise ${p.instrument} succeeded, settles month ${p.outcome.settlement_month}`
          : `raise ${p.instrument} failed`;
      }
      return `feedback: ${p.action}`;
    case "monthly_snapshot":
      return `snapshot: cash ${(p.cash / 100_000_000).toFixed(2)}M, ${p.borrowers} borrowers`;
    default:
      return record.kind;
  }
}
