// DOM layer: renders the cockpit from view state and binds controls to the
// controller. Every server call maps to an explicit user gesture; nothing is
// fetched implicitly, so the human pays the same budget economics as an agent.

import type { Cockpit, Scorecard } from "./controller.js";
import type { CockpitState } from "./state.js";
import { indicativeDebtQuote } from "./state.js";
import { fmtMillions, fmtMoney, fmtRate, parseDollars } from "./format.js";
import { renderCashChart } from "./chart.js";
import { describeEvent, ReplayCursor, parseTranscript } from "./replay.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderHeader(state: CockpitState): string {
  const obs = state.observation;
  const terminal = state.terminal;
  const dot = terminal ? (terminal.survived ? "dot idle" : "dot dead") : "dot live";
  return `
    <span class="brand">CFO <span>cockpit</span></span>
    <span class="kpi"><span class="${dot}"></span>${terminal ? (terminal.survived ? "survived" : "dead") : "running"}</span>
    <span class="kpi">month <b id="kpi-month">${obs ? escapeHtml(obs.month_label) : "--"}</b></span>
    <span class="kpi">tool budget <b id="kpi-budget">${obs ? obs.budget_remaining : "--"}</b></span>
    <span class="kpi">tools used <b>${state.toolCallsTotal}</b></span>`;
}

export function renderDashboard(state: CockpitState): string {
  const obs = state.observation;
  if (!obs) return `<p class="muted">no session</p>`;
  const close = obs.raw_signals.last_close_month;
  const notes = obs.recent_notes.length === 0
    ? `<li class="muted">notepad empty</li>`
    : obs.recent_notes.map((n) =>
        `<li><span class="tag-list">${n.tags.map((t) => `<code>${escapeHtml(t)}</code>`).join("")}</span>${escapeHtml(n.content)}</li>`).join("");
  return `
    <table class="signals">
      <tr><td>active borrowers</td><td>${obs.raw_signals.active_borrowers.toLocaleString("en-US")}</td></tr>
      <tr><td>unreconciled events</td><td>${obs.raw_signals.unreconciled_events}</td></tr>
      <tr><td>last book closing</td><td>${close === null ? "never" : `month ${close}`}</td></tr>
    </table>
    <h4>recent notes</h4>
    <ul class="notes" id="recent-notes">${notes}</ul>`;
}

export function renderRecords(state: CockpitState): string {
  const view = state.records;
  if (!view) return `<p class="muted">run review_financial_records to pull internal documents</p>`;
  let statements = `<p class="muted">no reconciliation yet: raw events only</p>`;
  if (view.statements) {
    const sheet = view.statements.balance_sheet;
    const recent = view.statements.income_statement.slice(-6);
    statements = `
      <h4>balance sheet, as of month ${view.statements.as_of_month}</h4>
      <table class="fin">
        <tr><td>cash</td><td>${fmtMoney(sheet.cash)}</td></tr>
        <tr><td>receivables</td><td>${fmtMoney(sheet.receivables)}</td></tr>
        <tr><td>total assets</td><td>${fmtMoney(sheet.total_assets)}</td></tr>
        <tr><td>debt</td><td>${fmtMoney(sheet.debt)}</td></tr>
        <tr><td>equity</td><td>${fmtMoney(sheet.equity)}</td></tr>
        <tr><td>retained earnings</td><td>${fmtMoney(sheet.retained_earnings)}</td></tr>
      </table>
      <h4>income statement, last ${recent.length} closed months</h4>
      <table class="fin wide">
        <tr><th>m</th><th>revenue</th><th>ebitda</th><th>interest</th><th>net income</th></tr>
        ${recent.map((r) => `<tr><td>${r.month}</td><td>${fmtMoney(r.revenue)}</td>
          <td>${fmtMoney(r.ebitda)}</td><td>${fmtMoney(r.interest_expense)}</td>
          <td>${fmtMoney(r.net_income)}</td></tr>`).join("")}
      </table>`;
  }
  const raw = view.raw_events.slice(-8).map((e) =>
    `<tr><td>${e.month}</td><td>${fmtMoney(e.amount)}</td><td>${escapeHtml(e.memo)}</td></tr>`).join("");
  return `${statements}
    <h4>unreconciled raw events (${view.raw_events.length}, last 8 shown)</h4>
    <table class="fin wide">${raw || `<tr><td class="muted">none</td></tr>`}</table>`;
}

export function renderMarket(state: CockpitState): string {
  if (!state.market) return `<p class="muted">run analyze_market_conditions for external history</p>`;
  const recent = state.market.slice(-6);
  return `
    <table class="fin wide">
      <tr><th>month</th><th>vix</th><th>sofr</th><th>tsy2y</th><th>baa oas</th><th>p/s</th><th>ind. ebitda%</th></tr>
      ${recent.map((m) => `<tr><td>${escapeHtml(m.label)}</td><td>${m.vix.toFixed(1)}</td>
        <td>${m.sofr.toFixed(2)}</td><td>${m.tsy2y.toFixed(2)}</td><td>${m.baa_oas.toFixed(2)}</td>
        <td>${m.ps_ratio.toFixed(1)}</td><td>${m.industry_ebitda_margin.toFixed(1)}</td></tr>`).join("")}
    </table>`;
}

export function renderProjection(state: CockpitState): string {
  if (!state.projection) return "";
  const rows = state.projection.rows.map((r) =>
    `<tr><td>+${r.month_offset}</td><td class="${r.projected_cash < 0 ? "neg" : ""}">${fmtMoney(r.projected_cash)}</td></tr>`).join("");
  const crossing = state.projection.crosses_zero_at;
  return `
    <h4>projection ${crossing === null ? "(stays positive)" : `(crosses zero at +${crossing} months)`}</h4>
    <table class="fin">${rows}</table>`;
}

export function renderFeed(state: CockpitState): string {
  if (state.feed.length === 0) return `<p class="muted">nothing yet</p>`;
  return `<ul class="feed">` + state.feed.slice(-40).reverse().map((e) =>
    `<li class="feed-${e.kind}"><span class="feed-month">m${e.month}</span>${escapeHtml(e.text)}</li>`).join("") + `</ul>`;
}

export function renderScorecard(card: Scorecard): string {
  if (!card.survived) {
    return `
      <div class="score dead" id="scorecard" data-total="${card.total}">
        <h3>episode over</h3>
        <p>cash went negative at month ${card.monthsLived}. Terminal score is
        <b class="score-total">${fmtMoney(card.total)}</b>.</p>
      </div>`;
  }
  return `
    <div class="score" id="scorecard" data-total="${card.total}">
      <h3>survived: terminal valuation</h3>
      <table class="fin">
        <tr><td>5 x trailing-twelve-month revenue</td><td>${fmtMoney(card.valuationTerm)}</td></tr>
        <tr><td>+ terminal cash</td><td>${fmtMoney(card.cashTerm)}</td></tr>
        <tr><td>- 5,000 x ${card.nTools} tool calls</td><td>-${fmtMoney(card.penaltyTerm)}</td></tr>
        <tr class="total"><td>score</td><td class="score-total">${fmtMoney(card.total)}</td></tr>
      </table>
    </div>`;
}

export function renderActionConsole(state: CockpitState): string {
  if (state.terminal) return "";
  const quote = indicativeDebtQuote(state);
  const disabled = state.observation === null ? "disabled" : "";
  return `
    <div class="action-row">
      <button id="act-pass" ${disabled}>pass</button>
      <button id="act-close" ${disabled}>close books</button>
    </div>
    <div class="raise-form">
      <select id="raise-instrument">
        <option value="equity">equity</option>
        <option value="debt">debt</option>
      </select>
      <input id="raise-amount" placeholder="amount, $" value="10,000,000"/>
      <button id="act-raise" ${disabled}>request raise</button>
      <p class="muted quote" id="debt-quote">${
        quote === null
          ? "indicative debt rate: run market analysis first"
          : `indicative debt rate ~${fmtRate(quote)} (from revealed data; binding rate set at settlement)`
      }</p>
    </div>`;
}

function replayMonthHtml(cursor: ReplayCursor): string {
  const month = cursor.month;
  if (!month) return `<p class="muted">empty transcript</p>`;
  const events = month.events.map((e) => `<li>${escapeHtml(describeEvent(e))}</li>`).join("");
  return `
    <div class="replay-head">
      <button id="replay-prev">&laquo;</button>
      <b>month ${month.month}</b> (${cursor.position + 1}/${cursor.data.months.length})
      <button id="replay-next">&raquo;</button>
    </div>
    ${renderCashChart(cursor.cashSoFar, cursor.data.horizon)}
    <ul class="feed" id="replay-events">${events}</ul>`;
}

export interface UiHandles {
  refresh: () => void;
  showScorecard: (card: Scorecard) => void;
  loadReplay: (ndjson: string) => void;
}

export function mountCockpit(root: HTMLElement, cockpit: Cockpit): UiHandles {
  root.innerHTML = `
    <header id="header"></header>
    <main>
      <section class="col">
        <div class="panel"><h3>dashboard</h3><div id="dashboard"></div></div>
        <div class="panel"><h3>verified cash</h3><div id="cash-chart"></div></div>
        <div class="panel"><h3>notepad</h3>
          <div class="note-form">
            <input id="note-content" placeholder="note content"/>
            <input id="note-tags" placeholder="tags, comma separated"/>
            <button id="note-save">save note</button>
            <input id="note-query" placeholder="search notes"/>
            <button id="note-recall">recall</button>
          </div>
          <ul class="notes" id="note-results"></ul>
        </div>
      </section>
      <section class="col">
        <div class="panel"><h3>tool console</h3>
          <div class="action-row">
            <button id="tool-cash">verify_cash_position</button>
            <button id="tool-records">review_financial_records</button>
            <button id="tool-market">analyze_market_conditions</button>
          </div>
          <div class="proj-form">
            <input id="proj-horizon" placeholder="horizon (months)" value="12"/>
            <input id="proj-burn" placeholder="monthly burn, $" value="400,000"/>
            <input id="proj-growth" placeholder="growth %/mo" value="0"/>
            <button id="tool-project">conduct_cashflow_projection</button>
          </div>
          <div id="records"></div>
          <div id="market"></div>
          <div id="projection"></div>
        </div>
      </section>
      <section class="col">
        <div class="panel"><h3>action console</h3><div id="actions"></div></div>
        <div class="panel" id="scorecard-panel" hidden><h3>scorecard</h3><div id="scorecard-slot"></div></div>
        <div class="panel"><h3>event feed</h3><div id="feed"></div></div>
        <div class="panel"><h3>replay viewer</h3>
          <div class="action-row">
            <button id="replay-session">replay this session</button>
          </div>
          <textarea id="replay-paste" placeholder="or paste a transcript (.ndjson)"></textarea>
          <button id="replay-load">load pasted transcript</button>
          <div id="replay-view"></div>
        </div>
      </section>
    </main>`;

  const el = <T extends HTMLElement = HTMLElement>(id: string) =>
    root.querySelector<T>(`#${id}`)!;
  let replayCursor: ReplayCursor | null = null;

  const refresh = () => {
    const state = cockpit.state;
    el("header").innerHTML = renderHeader(state);
    el("dashboard").innerHTML = renderDashboard(state);
    el("cash-chart").innerHTML = renderCashChart(state.verifiedCash.map(
      (p) => ({ month: p.month, value: p.cash })), 132);
    el("records").innerHTML = renderRecords(state);
    el("market").innerHTML = renderMarket(state);
    el("projection").innerHTML = renderProjection(state);
    el("feed").innerHTML = renderFeed(state);
    el("actions").innerHTML = renderActionConsole(state);
    el("note-results").innerHTML = state.notes.map((n) =>
      `<li>${escapeHtml(n.content)} <span class="muted">m${n.month_created}</span></li>`).join("");
    bindActions();
  };

  const showScorecard = (card: Scorecard) => {
    el("scorecard-panel").hidden = false;
    el("scorecard-slot").innerHTML = renderScorecard(card);
  };

  const renderReplay = () => {
    if (!replayCursor) return;
    el("replay-view").innerHTML = replayMonthHtml(replayCursor);
    el("replay-prev")?.addEventListener("click", () => { replayCursor!.prev(); renderReplay(); });
    el("replay-next")?.addEventListener("click", () => { replayCursor!.next(); renderReplay(); });
  };

  const loadReplay = (ndjson: string) => {
    replayCursor = new ReplayCursor(parseTranscript(ndjson));
    replayCursor.seek(0);
    renderReplay();
  };

  const maybeFinish = async () => {
    if (cockpit.state.terminal) {
      const card = await cockpit.scorecard();
      if (card) showScorecard(card);
    }
  };

  function bindActions(): void {
    el("act-pass")?.addEventListener("click", async () => { await cockpit.pass(); await maybeFinish(); });
    el("act-close")?.addEventListener("click", async () => { await cockpit.closeBooks(); await maybeFinish(); });
    el("act-raise")?.addEventListener("click", async () => {
      const instrument = el<HTMLSelectElement>("raise-instrument").value as "equity" | "debt";
      const amount = parseDollars(el<HTMLInputElement>("raise-amount").value);
      if (amount === null || amount <= 0) return;
      await cockpit.raise(instrument, amount);
      await maybeFinish();
    });
  }

  el("tool-cash").addEventListener("click", () => cockpit.verifyCash());
  el("tool-records").addEventListener("click", () => cockpit.reviewRecords());
  el("tool-market").addEventListener("click", () => cockpit.analyzeMarket());
  el("tool-project").addEventListener("click", () => {
    const horizon = parseInt(el<HTMLInputElement>("proj-horizon").value, 10);
    const burn = parseDollars(el<HTMLInputElement>("proj-burn").value);
    const growth = parseFloat(el<HTMLInputElement>("proj-growth").value);
    if (!Number.isFinite(horizon) || burn === null) return;
    void cockpit.runProjection({
      horizon_months: horizon,
      monthly_revenue_growth: Number.isFinite(growth) ? growth : 0,
      monthly_burn: burn,
      expected_inflows: [],
    });
  });
  el("note-save").addEventListener("click", () => {
    const content = el<HTMLInputElement>("note-content").value;
    const tags = el<HTMLInputElement>("note-tags").value.split(",").map((t) => t.trim()).filter(Boolean);
    if (content) void cockpit.saveNote(content, tags);
  });
  el("note-recall").addEventListener("click", () => {
    void cockpit.recallNotes(el<HTMLInputElement>("note-query").value, []);
  });
  el("replay-session").addEventListener("click", async () => {
    const data = await cockpit.fetchTranscript();
    if (data) {
      replayCursor = new ReplayCursor(data);
      renderReplay();
    }
  });
  el("replay-load").addEventListener("click", () => {
    const text = el<HTMLTextAreaElement>("replay-paste").value;
    if (text.trim()) loadReplay(text);
  });

  cockpit.onChange(refresh);
  refresh();
  return { refresh, showScorecard, loadReplay };
}
