"""Capital raise resolution: success sampling, fill, settlement delay, pricing.

Success is Bernoulli(p_adj) with p_adj = p_macro * m_company. The market leg
comes from instrument-specific piecewise maps (equity off VIX, debt off SOFR);
the company leg is a 0.75^n decay over prior successful equity rounds, or a
linear leverage penalty for debt that hits zero near L = 1.17. Raised cash
lands 1..6 months later at a uniform 70..100% fill.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveAmount
from .ledger import EnterpriseState, leverage
from .money import Cents, round_cents, round_rate_bp
from .rng import RandomStreams
from .scenario import MacroSnapshot, RuleConfig

INSTRUMENTS = ("equity", "debt")

# Rate spread uses (L - 0.5)+; with non-positive equity L is infinite, so the
# spread leg is capped here to keep a settling contract's rate finite.
_RATE_LEVERAGE_CAP = 10.0


@dataclass(frozen=True)
class FundraisingRequest:
    instrument: str
    amount_requested: Cents
    request_month: int


@dataclass(frozen=True)
class PendingSettlement:
    instrument: str
    amount_actual: Cents
    due_month: int
    origin_request_month: int


@dataclass(frozen=True)
class FundraisingOutcome:
    success: bool
    p_macro: float
    m_company: float
    p_adj: float
    fill_rate: float | None = None
    amount_actual: Cents | None = None
    settlement_month: int | None = None
    indicative_rate: float | None = None    # debt only; non-binding quote

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "p_macro": self.p_macro,
            "m_company": self.m_company,
            "p_adj": self.p_adj,
            "fill_rate": self.fill_rate,
            "amount_actual": self.amount_actual,
            "settlement_month": self.settlement_month,
            "indicative_rate": self.indicative_rate,
        }


def macro_probability(instrument: str, macro: MacroSnapshot, rules: RuleConfig) -> float:
    """Market-conditions leg of the success probability."""
    if instrument == "equity":
        return rules.prob_maps["equity"].value(macro.vix)
    return rules.prob_maps["debt"].value(macro.sofr)


def company_multiplier(instrument: str, state: EnterpriseState) -> float:
    """Firm-standing leg: equity round-count decay, or debt leverage penalty."""
    if instrument == "equity":
        return 0.75 ** state.successful_equity_rounds
    ratio = leverage(state)
    if math.isinf(ratio):
        return 0.0
    return max(0.0, 1.0 - 1.5 * max(0.0, ratio - 0.5))


def base_lending_rate(macro: MacroSnapshot) -> float:
    return (macro.tsy2y + macro.baa_oas) / 100.0


def contract_rate(macro: MacroSnapshot, leverage_ratio: float) -> float:
    """Binding debt rate at settlement: base rate plus 500bps per unit of (L - 0.5)+."""
    capped = min(leverage_ratio, _RATE_LEVERAGE_CAP)
    return round_rate_bp(base_lending_rate(macro) + 0.05 * max(0.0, capped - 0.5))


def indicative_rate(macro_at_request: MacroSnapshot, leverage_now: float) -> float:
    """Same formula at request time; a quote only, the binding rate is set at settlement."""
    return contract_rate(macro_at_request, leverage_now)


def resolve_request(
    request: FundraisingRequest,
    state: EnterpriseState,
    macro_at_request: MacroSnapshot,
    rules: RuleConfig,
    streams: RandomStreams,
) -> FundraisingOutcome:
    """Sample the raise outcome and queue the settlement on success.

    Equity successes count against future rounds immediately, before the cash
    settles. Failures leave the books untouched; the month's action slot is
    the only cost.
    """
    if request.amount_requested <= 0:
        raise NonPositiveAmount(f"amount_requested must be positive, got {request.amount_requested}")
    if request.instrument not in INSTRUMENTS:
        raise NonPositiveAmount(f"unknown instrument {request.instrument!r}")

    t = request.request_month
    p_macro = macro_probability(request.instrument, macro_at_request, rules)
    m_company = company_multiplier(request.instrument, state)
    p_adj = p_macro * m_company
    quote = indicative_rate(macro_at_request, leverage(state)) if request.instrument == "debt" else None

    if not streams.bernoulli("fr.success", t, p_adj):
        return FundraisingOutcome(success=False, p_macro=p_macro, m_company=m_company,
                                  p_adj=p_adj, indicative_rate=quote)

    lo, hi = rules.fill_range
    fill = lo + (hi - lo) * streams.uniform("fr.fill", t)
    dlo, dhi = rules.delay_range
    delay = streams.uniform_int("fr.delay", t, dlo, dhi)
    amount = round_cents(fill * request.amount_requested)
    state.pending_settlements.append(PendingSettlement(
        instrument=request.instrument,
        amount_actual=amount,
        due_month=t + delay,
        origin_request_month=t,
    ))
    if request.instrument == "equity":
        state.successful_equity_rounds += 1
    return FundraisingOutcome(success=True, p_macro=p_macro, m_company=m_company, p_adj=p_adj,
                              fill_rate=fill, amount_actual=amount, settlement_month=t + delay,
                              indicative_rate=quote)
