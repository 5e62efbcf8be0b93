"""Budgeted observation tools and the free persistent notepad.

Four tools spend from a 20-call monthly budget; notepad operations never do.
Tool output is firewalled: nothing beyond the current month leaks, and
statement-level aggregates stop at the last reconciliation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BadAssumptions, BudgetExhausted
from .ledger import EnterpriseState, raw_events, statements_through, statements_to_dict, unreconciled_count
from .money import Cents, round_cents
from .scenario import EpochConfig, Scenario, anonymize_label

TOOL_NAMES = (
    "verify_cash_position",
    "review_financial_records",
    "analyze_market_conditions",
    "conduct_cashflow_projection",
)
MEMORY_OPS = ("save_note", "recall_notes")

MAX_PROJECTION_HORIZON = 24
RECENT_NOTES_SHOWN = 5


@dataclass
class Note:
    id: int
    month_created: int
    content: str
    tags: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"id": self.id, "month_created": self.month_created,
                "content": self.content, "tags": list(self.tags)}


@dataclass
class Notepad:
    notes: list[Note] = field(default_factory=list)

    def save(self, content: str, tags: list[str], month: int) -> int:
        note = Note(id=len(self.notes) + 1, month_created=month,
                    content=str(content), tags=tuple(str(t) for t in tags))
        self.notes.append(note)
        return note.id

    def recall(self, query: str | None = None, tags: list[str] | None = None,
               limit: int = RECENT_NOTES_SHOWN) -> list[Note]:
        """Newest first; case-insensitive substring on content OR tag equality."""
        matches = []
        for note in reversed(self.notes):
            content_hit = bool(query) and query.lower() in note.content.lower()
            tag_hit = bool(tags) and any(t in note.tags for t in tags)
            if content_hit or tag_hit:
                matches.append(note)
                if len(matches) >= max(0, limit):
                    break
        return matches

    def recent(self, limit: int = RECENT_NOTES_SHOWN) -> list[Note]:
        return list(reversed(self.notes[-limit:])) if limit > 0 else []


@dataclass
class ToolBudget:
    limit: int = 20
    used_this_month: int = 0

    def reset(self) -> None:
        self.used_this_month = 0

    @property
    def remaining(self) -> int:
        return self.limit - self.used_this_month


class ToolSuite:
    """Tool handlers for one episode; executes serially within a session."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.budget = ToolBudget(limit=scenario.rules.tool_budget)
        self.notepad = Notepad()
        self._epoch = EpochConfig(horizon=scenario.horizon)

    def begin_month(self) -> None:
        self.budget.reset()

    def _charge(self, state: EnterpriseState) -> None:
        # Rejected calls consume no organizational resources: no budget, no N_tools.
        if self.budget.remaining <= 0:
            raise BudgetExhausted(f"tool budget of {self.budget.limit} exhausted for this month")
        self.budget.used_this_month += 1
        state.tool_calls_total += 1

    def verify_cash_position(self, state: EnterpriseState) -> Cents:
        """Exact current cash, a single scalar with no breakdown."""
        self._charge(state)
        return state.cash

    def review_financial_records(self, state: EnterpriseState) -> dict:
        """Statements as of the last reconciliation plus raw events since then.

        Structured reports lag: without a recent book closing this is raw
        events only.
        """
        self._charge(state)
        close = state.last_close_month
        statements = statements_to_dict(statements_through(state, close)) if close is not None else None
        return {
            "last_close_month": close,
            "statements": statements,
            "raw_events": raw_events(state, close if close is not None else -1),
        }

    def analyze_market_conditions(self, state: EnterpriseState) -> dict:
        """Historical macro and industry snapshots through the current month only."""
        self._charge(state)
        months = []
        for m in range(0, state.month + 1):
            macro = self.scenario.macro_series[m]
            industry = self.scenario.industry_series[m]
            months.append({
                "label": anonymize_label(m, self._epoch),
                "gdp_growth": macro.gdp_growth,
                "cpi": macro.cpi,
                "unemployment": macro.unemployment,
                "fed_funds": macro.fed_funds,
                "sofr": macro.sofr,
                "tsy2y": macro.tsy2y,
                "tsy5y": macro.tsy5y,
                "tsy10y": macro.tsy10y,
                "tsy30y": macro.tsy30y,
                "baa_oas": macro.baa_oas,
                "vix": macro.vix,
                "pe_ratio": macro.pe_ratio,
                "ps_ratio": macro.ps_ratio,
                "industry_user_growth": industry.user_growth,
                "industry_gross_margin": industry.gross_margin,
                "industry_ebitda_margin": industry.ebitda_margin,
            })
        return {"months": months}

    def conduct_cashflow_projection(self, state: EnterpriseState, assumptions: dict) -> dict:
        """Arithmetic projection from true current cash and caller assumptions only.

        Net burn compounds at the supplied monthly growth rate; expected
        inflows land at their stated month offsets. No scenario data is read.
        """
        horizon = assumptions.get("horizon_months")
        growth = assumptions.get("monthly_revenue_growth", 0.0)
        burn = assumptions.get("monthly_burn", 0)
        inflows = assumptions.get("expected_inflows", [])
        if not isinstance(horizon, int) or not 1 <= horizon <= MAX_PROJECTION_HORIZON:
            raise BadAssumptions(f"horizon_months must be an integer in 1..{MAX_PROJECTION_HORIZON}")
        if not isinstance(growth, (int, float)) or not math.isfinite(growth):
            raise BadAssumptions("monthly_revenue_growth must be finite")
        if not isinstance(burn, int) or burn < 0:
            raise BadAssumptions("monthly_burn must be a non-negative integer amount in cents")
        inflow_by_month: dict[int, Cents] = {}
        for item in inflows:
            month_offset = item.get("month")
            amount = item.get("amount")
            if not isinstance(month_offset, int) or not 1 <= month_offset <= horizon:
                raise BadAssumptions(f"inflow month {month_offset!r} outside 1..{horizon}")
            if not isinstance(amount, int):
                raise BadAssumptions("inflow amount must be an integer amount in cents")
            inflow_by_month[month_offset] = inflow_by_month.get(month_offset, 0) + amount

        self._charge(state)  # only well-formed requests consume staff effort
        rows = [{"month_offset": 0, "projected_cash": state.cash}]
        balance = state.cash
        crosses_zero_at = None
        for k in range(1, horizon + 1):
            balance -= round_cents(burn * (1.0 + growth / 100.0) ** (k - 1))
            balance += inflow_by_month.get(k, 0)
            rows.append({"month_offset": k, "projected_cash": balance})
            if crosses_zero_at is None and balance <= 0:
                crosses_zero_at = k
        return {"rows": rows, "crosses_zero_at": crosses_zero_at}

    # Memory operations: always available, never budgeted, never counted.

    def save_note(self, state: EnterpriseState, content: str, tags: list[str] | None = None) -> int:
        return self.notepad.save(content, tags or [], state.month)

    def recall_notes(self, query: str | None = None, tags: list[str] | None = None,
                     limit: int = RECENT_NOTES_SHOWN) -> list[dict]:
        if query is None and not tags:
            return [n.to_dict() for n in self.notepad.recent(limit)]
        return [n.to_dict() for n in self.notepad.recall(query, tags, limit)]

    def observation(self, state: EnterpriseState) -> dict:
        """The free monthly view: masked label, raw signals, recent notes, budget."""
        return {
            "t": state.month,
            "month_label": anonymize_label(state.month, self._epoch),
            "raw_signals": {
                "active_borrowers": state.active_borrowers,
                "unreconciled_events": unreconciled_count(state),
                "last_close_month": state.last_close_month,
            },
            "recent_notes": [n.to_dict() for n in self.notepad.recent(RECENT_NOTES_SHOWN)],
            "budget_remaining": self.budget.remaining,
        }
