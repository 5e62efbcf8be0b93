"""Episode orchestration: the monthly loop, transcripts, scoring, replay.

Month t runs as: post operations (settlement arrivals first), survival check,
observation, budgeted tool phase, exactly one action, advance. Dying on a
posting ends the episode immediately with score 0; completing every month of
the horizon scores trailing revenue times the valuation multiple, plus cash,
minus the tool penalty.

Transcripts are line-delimited JSON with deterministic serialization, so the
same (scenario, seed, decision sequence) reproduces them byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .dynamics import couple_to_industry, initial_indicators, perturb_indicators
from .errors import (
    ArenaError,
    BadAssumptions,
    BudgetExhausted,
    ContractViolation,
    EpisodeOver,
    NoAction,
    NonPositiveAmount,
    SecondAction,
)
from .fundraising import FundraisingRequest, resolve_request
from .ledger import (
    EnterpriseState,
    close_books,
    new_enterprise_state,
    post_month_operations,
    statements_to_dict,
    ttm_revenue,
)
from .money import Cents
from .rng import RandomStreams
from .scenario import Scenario
from .tools import ToolSuite

ACTIONS = ("pass", "book_closing", "fund_raising_request")

_RECORDABLE_ERRORS = (BudgetExhausted, BadAssumptions, NonPositiveAmount)


@dataclass(frozen=True)
class EpisodeConfig:
    seed: int
    agent_label: str = "anonymous"
    horizon_override: int | None = None


def _dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


class Episode:
    """One company, one seed, one agent. Not thread-safe; owned by its driver."""

    def __init__(self, config: EpisodeConfig, scenario: Scenario):
        self.config = config
        self.scenario = scenario
        self.horizon = config.horizon_override or scenario.horizon
        if not 0 < self.horizon <= scenario.horizon:
            raise ArenaError(f"horizon {self.horizon} outside scenario's {scenario.horizon}")
        self.streams = RandomStreams(config.seed)
        self.tools = ToolSuite(scenario)
        self.state: EnterpriseState = new_enterprise_state(
            scenario.initial_company,
            scenario.rules,
            initial_indicators(scenario.industry_series[0], scenario.rules.noise_specs),
            scenario.macro_series[0],
        )
        self.records: list[dict] = []
        self.started = False
        self.done = False
        self.survived = False
        self.months_lived = 0
        self._acted_this_month = False
        self._last_observation: dict | None = None
        self._terminal: dict | None = None
        self._record(-1, "config", {
            "scenario_id": scenario.id,
            "seed": config.seed,
            "agent_label": config.agent_label,
            "horizon": self.horizon,
        })

    # ------------------------------------------------------------------
    # Lifecycle
    # ------------------------------------------------------------------

    def start(self) -> dict:
        """Post month 0 and return the first observation (or terminal payload)."""
        if self.started:
            raise ContractViolation("episode already started")
        self.started = True
        return self._begin_month()

    def _begin_month(self) -> dict:
        t = self.state.month
        macro = self.scenario.macro_series[t]
        industry = self.scenario.industry_series[t]
        rules = self.scenario.rules

        indicators = couple_to_industry(self.state.indicators, industry, rules.coupling)
        indicators = perturb_indicators(indicators, rules.noise_specs, self.streams, t)
        post_month_operations(self.state, indicators, macro, rules)

        if not self.state.alive:
            self._snapshot(t)
            return self._terminate(survived=False)

        self.tools.begin_month()
        self._acted_this_month = False
        observation = self.tools.observation(self.state)
        self._record(t, "observation", observation)
        self._last_observation = observation
        return {"observation": observation}

    def _terminate(self, survived: bool) -> dict:
        self.done = True
        self.survived = survived
        # On death state.month is the fatal, uncompleted month; on survival it
        # already advanced past the last completed one. Both equal months lived.
        self.months_lived = self.state.month
        payload = {
            "survived": survived,
            "months_lived": self.months_lived,
            "score": self.terminal_score(),
        }
        self._terminal = payload
        self._record(self.state.month, "terminal", payload)
        return {"terminal": payload}

    def terminal_score(self) -> Cents:
        """Valuation at the end: multiple * trailing revenue + cash - tool penalty; 0 on death."""
        if not self.survived:
            return 0
        rules = self.scenario.rules
        # TTM window anchored at the last completed month.
        return (ttm_revenue(self.state, self.horizon - 1) * rules.valuation.multiple
                + self.state.cash
                - rules.valuation.tool_penalty * self.state.tool_calls_total)

    # ------------------------------------------------------------------
    # Agent-facing surface
    # ------------------------------------------------------------------

    def observation(self) -> dict:
        if not self.started:
            raise ContractViolation("episode not started")
        if self.done:
            raise EpisodeOver("episode has ended")
        assert self._last_observation is not None
        return self._last_observation

    def call_tool(self, name: str, params: dict | None = None) -> dict:
        """Run one budgeted tool; both results and rejections are transcribed."""
        self._require_live()
        params = params or {}
        t = self.state.month
        try:
            if name == "verify_cash_position":
                result = self.tools.verify_cash_position(self.state)
            elif name == "review_financial_records":
                result = self.tools.review_financial_records(self.state)
            elif name == "analyze_market_conditions":
                result = self.tools.analyze_market_conditions(self.state)
            elif name == "conduct_cashflow_projection":
                result = self.tools.conduct_cashflow_projection(self.state, params)
            else:
                raise ContractViolation(f"unknown tool {name!r}")
        except _RECORDABLE_ERRORS as err:
            self._record(t, "tool_call", {
                "name": name, "params": params, "ok": False,
                "error": {"code": err.code, "message": err.message},
            })
            raise
        payload = {"name": name, "params": params, "ok": True, "result": result,
                   "budget_remaining": self.tools.budget.remaining}
        self._record(t, "tool_call", payload)
        return payload

    def memory_op(self, op: str, payload: dict | None = None) -> dict:
        """Notepad operations: free, unbudgeted, uncounted."""
        self._require_live()
        payload = payload or {}
        t = self.state.month
        if op == "save_note":
            result = self.tools.save_note(self.state, payload.get("content", ""),
                                          payload.get("tags"))
        elif op == "recall_notes":
            result = self.tools.recall_notes(payload.get("query"), payload.get("tags"),
                                             int(payload.get("limit", 5)))
        else:
            raise ContractViolation(f"unknown memory op {op!r}")
        record = {"op": op, "payload": payload, "result": result}
        self._record(t, "memory_op", record)
        return record

    def act(self, name: str, params: dict | None = None) -> dict:
        """Resolve the month's single action, then advance to the next month.

        Returns {"resolution", "observation"} mid-episode, or
        {"resolution", "terminal"} when the episode ends.
        """
        self._require_live()
        if self._acted_this_month:
            raise SecondAction("an action was already taken this month")
        params = params or {}
        t = self.state.month

        if name == "pass":
            resolution: dict = {"action": "pass"}
        elif name == "book_closing":
            statements = close_books(self.state)
            resolution = {
                "action": "book_closing",
                "as_of_month": statements.as_of_month,
                "balance_sheet": statements_to_dict(statements)["balance_sheet"],
            }
        elif name == "fund_raising_request":
            request = FundraisingRequest(
                instrument=str(params.get("instrument", "")),
                amount_requested=int(params.get("amount", 0)),
                request_month=t,
            )
            outcome = resolve_request(request, self.state, self.scenario.macro_series[t],
                                      self.scenario.rules, self.streams)
            resolution = {"action": "fund_raising_request",
                          "instrument": request.instrument,
                          "amount_requested": request.amount_requested,
                          "outcome": outcome.to_dict()}
        else:
            raise ContractViolation(f"unknown action {name!r}")

        self._acted_this_month = True
        self._record(t, "action", {"name": name, "params": params})
        self._record(t, "env_feedback", resolution)
        self._snapshot(t)

        self.months_lived = t + 1
        self.state.month = t + 1
        if self.state.month >= self.horizon:
            terminal = self._terminate(survived=True)
            return {"resolution": resolution, **terminal}
        begun = self._begin_month()
        return {"resolution": resolution, **begun}

    def _snapshot(self, t: int) -> None:
        ind = self.state.indicators
        self._record(t, "monthly_snapshot", {
            "cash": self.state.cash,
            "borrowers": self.state.active_borrowers,
            "indicators": {
                "gross_margin": ind.gross_margin,
                "ebitda_margin": ind.ebitda_margin,
                "user_growth": ind.user_growth,
                "collection_rate": ind.collection_rate,
            },
            "n_tools": self.state.tool_calls_total,
        })

    def _require_live(self) -> None:
        if not self.started:
            raise ContractViolation("episode not started")
        if self.done:
            raise ContractViolation("episode has ended")

    # ------------------------------------------------------------------
    # Transcript
    # ------------------------------------------------------------------

    def _record(self, t: int, kind: str, payload: dict) -> None:
        self.records.append({"t": t, "kind": kind, "payload": payload})

    def terminal_summary(self) -> dict | None:
        return self._terminal

    def transcript_lines(self) -> list[str]:
        return [_dumps(r) for r in self.records]

    def transcript_bytes(self) -> bytes:
        return ("\n".join(self.transcript_lines()) + "\n").encode("utf-8")


def new_episode(config: EpisodeConfig, scenario: Scenario) -> Episode:
    return Episode(config, scenario)


def step_month(episode: Episode, turn: list[dict], strict: bool = False) -> dict:
    """Drive one month from a scripted turn: tool/memory requests then one action.

    A turn that ends without an action is coerced to pass (and logged) unless
    strict is set. Requests after the turn's action are contract violations.
    """
    if not episode.started:
        episode.start()
    if episode.done:
        raise EpisodeOver("episode has ended")
    result: dict | None = None
    for entry in turn:
        kind = entry.get("type")
        if result is not None:
            if kind == "action":
                raise SecondAction("turn contains a second action")
            raise ContractViolation("tool or memory request after this month's action")
        if kind == "tool":
            try:
                episode.call_tool(entry.get("name", ""), entry.get("params"))
            except _RECORDABLE_ERRORS:
                pass  # recorded in the transcript; the scripted turn continues
        elif kind == "memory":
            episode.memory_op(entry.get("op", ""), entry.get("payload"))
        elif kind == "action":
            result = episode.act(entry.get("name", ""), entry.get("params"))
        else:
            raise ContractViolation(f"unknown turn entry type {kind!r}")
    if result is None:
        if strict:
            raise NoAction("turn ended without an action")
        episode.memory_op("save_note", {"content": "coerced pass: turn ended without an action",
                                        "tags": ["harness"]})
        result = episode.act("pass", {})
    return result


def replay(transcript: bytes | str | list[str], scenario: Scenario) -> bytes:
    """Re-execute a transcript's decision sequence; returns the regenerated bytes.

    Feeding the output of an episode back through replay must reproduce it
    exactly; callers compare bytes.
    """
    if isinstance(transcript, bytes):
        lines = transcript.decode("utf-8").splitlines()
    elif isinstance(transcript, str):
        lines = transcript.splitlines()
    else:
        lines = list(transcript)
    records = [json.loads(line) for line in lines if line.strip()]
    if not records or records[0]["kind"] != "config":
        raise ArenaError("transcript missing config record")
    header = records[0]["payload"]
    episode = Episode(EpisodeConfig(seed=header["seed"], agent_label=header["agent_label"],
                                    horizon_override=header["horizon"]), scenario)
    episode.start()
    for record in records[1:]:
        if episode.done:
            break
        kind = record["kind"]
        payload = record["payload"]
        if kind == "tool_call":
            try:
                episode.call_tool(payload["name"], payload["params"])
            except _RECORDABLE_ERRORS:
                pass
        elif kind == "memory_op":
            episode.memory_op(payload["op"], payload["payload"])
        elif kind == "action":
            episode.act(payload["name"], payload["params"])
    return episode.transcript_bytes()
