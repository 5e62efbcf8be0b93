"""Scripted baseline policies.

pass_only and random bracket the low end; steward encodes the disciplined
pattern that beats this environment: regular reconciliation, an early war
chest raised while markets are calm, and runway-triggered raises sized off
the observed burn rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .engine import Episode
from .errors import BudgetExhausted
from .money import Cents, dollars
from .rng import RandomStreams

POLICY_KINDS = ("pass_only", "random", "steward")


@dataclass(frozen=True)
class PolicySpec:
    kind: str
    parameters: dict = field(default_factory=dict)


class PassOnly:
    """Takes no action, ever; the blindfold baseline."""

    def play_month(self, episode: Episode, observation: dict) -> dict:
        return episode.act("pass", {})


class RandomPolicy:
    """Uniformly silly: mostly passes, sometimes closes, sometimes raises."""

    def __init__(self, seed: int, pass_weight: float = 0.6, close_weight: float = 0.25):
        self._streams = RandomStreams(seed, namespace="policy.random")
        self._pass_weight = pass_weight
        self._close_weight = close_weight

    def play_month(self, episode: Episode, observation: dict) -> dict:
        month = observation["t"]
        choice = self._streams.uniform("choice", month)
        if choice < self._pass_weight:
            return episode.act("pass", {})
        if choice < self._pass_weight + self._close_weight:
            return episode.act("book_closing", {})
        instrument = "equity" if self._streams.uniform("instrument", month) < 0.5 else "debt"
        amount = dollars(2_000_000) + int(self._streams.uniform("amount", month) * dollars(18_000_000))
        return episode.act("fund_raising_request", {"instrument": instrument, "amount": amount})


@dataclass
class StewardParams:
    close_cadence_months: int = 3
    cash_floor: Cents = dollars(8_000_000)
    runway_floor_months: int = 15
    raise_multiple_of_burn: int = 24
    vix_equity_threshold: float = 25.0
    amount_bounds: tuple[Cents, Cents] = (dollars(5_000_000), dollars(40_000_000))
    burn_window_months: int = 6
    min_assumed_burn: Cents = dollars(300_000)
    early_window_months: int = 20
    early_rounds: int = 2
    early_amount: Cents = dollars(20_000_000)
    desperate_runway_months: int = 6


class Steward:
    """Deterministic cadence-and-runway rule built on verified cash only."""

    def __init__(self, params: StewardParams | None = None):
        self.params = params or StewardParams()
        self._cash_history: list[tuple[int, Cents]] = []
        self._pending_due: list[int] = []
        self._raises_done = 0

    def _verified_cash(self, episode: Episode) -> Cents:
        return episode.call_tool("verify_cash_position", {})["result"]

    def _latest_vix(self, episode: Episode) -> float:
        market = episode.call_tool("analyze_market_conditions", {})["result"]
        return market["months"][-1]["vix"]

    def _burn_estimate(self, month: int, cash: Cents) -> Cents:
        """Average monthly decline over the trailing window; 0 when growing."""
        window = self.params.burn_window_months
        past = [(m, c) for m, c in self._cash_history if m >= month - window]
        if not past:
            return 0
        ref_month, ref_cash = past[0]
        if month == ref_month:
            return 0
        decline = (ref_cash - cash) / (month - ref_month)
        return max(0, int(decline))

    def _request_raise(self, episode: Episode, month: int, amount: Cents) -> dict:
        try:
            vix = self._latest_vix(episode)
        except BudgetExhausted:
            vix = self.params.vix_equity_threshold  # blind fallback: debt
        instrument = "equity" if vix < self.params.vix_equity_threshold else "debt"
        lo, hi = self.params.amount_bounds
        amount = min(hi, max(lo, amount))
        result = episode.act("fund_raising_request", {"instrument": instrument, "amount": amount})
        outcome = result["resolution"]["outcome"]
        if outcome["success"]:
            self._raises_done += 1
            self._pending_due.append(outcome["settlement_month"])
        return result

    def play_month(self, episode: Episode, observation: dict) -> dict:
        p = self.params
        month = observation["t"]
        cash = self._verified_cash(episode)
        burn = self._burn_estimate(month, cash)
        self._cash_history.append((month, cash))

        pending = any(due > month for due in self._pending_due)
        assumed_burn = max(burn, p.min_assumed_burn)
        runway = cash / assumed_burn if assumed_burn > 0 else math.inf
        low = cash < p.cash_floor or runway < p.runway_floor_months
        desperate = runway < p.desperate_runway_months

        if low and (not pending or desperate):
            return self._request_raise(episode, month, p.raise_multiple_of_burn * assumed_burn)
        if (month < p.early_window_months and self._raises_done < p.early_rounds
                and not pending):
            return self._request_raise(episode, month, p.early_amount)
        if month % p.close_cadence_months == 0:
            return episode.act("book_closing", {})
        return episode.act("pass", {})


def make_policy(spec: PolicySpec, seed: int):
    if spec.kind == "pass_only":
        return PassOnly()
    if spec.kind == "random":
        return RandomPolicy(seed, **spec.parameters)
    if spec.kind == "steward":
        params = StewardParams(**spec.parameters) if spec.parameters else StewardParams()
        return Steward(params)
    raise ValueError(f"unknown policy kind {spec.kind!r}")
