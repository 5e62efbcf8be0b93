"""Internal indicator evolution and exogenous series lookup.

Margins and user growth follow additive-Gaussian random walks inside clip
ranges; collection rate is anchored, redrawn i.i.d. around its fixed baseline
each month. Noise comes from per-(indicator, month) counter streams, so one
indicator's draws never depend on another's.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import OutOfRange
from .rng import RandomStreams
from .scenario import IndustrySnapshot, MacroSnapshot, NoiseSpec, Scenario

INDICATOR_NAMES = ("gross_margin", "ebitda_margin", "user_growth", "collection_rate")


@dataclass(frozen=True)
class OperationalIndicators:
    gross_margin: float      # percent of revenue left after cost of goods
    ebitda_margin: float     # percent of revenue left after operating cost
    user_growth: float       # percent change in borrowers per month
    collection_rate: float   # fraction of receivables converted to cash


def _clip(value: float, spec: NoiseSpec) -> float:
    if spec.clip_min is not None:
        value = max(spec.clip_min, value)
    if spec.clip_max is not None:
        value = min(spec.clip_max, value)
    return value


def initial_indicators(industry: IndustrySnapshot, noise_specs: dict[str, NoiseSpec]) -> OperationalIndicators:
    """Firm starts at the industry benchmark, collections at their anchor."""
    collection_spec = noise_specs["collection_rate"]
    anchor = collection_spec.anchor_value if collection_spec.anchored else 0.97
    return OperationalIndicators(
        gross_margin=_clip(industry.gross_margin, noise_specs["gross_margin"]),
        ebitda_margin=_clip(industry.ebitda_margin, noise_specs["ebitda_margin"]),
        user_growth=industry.user_growth,
        collection_rate=anchor,
    )


def couple_to_industry(
    current: OperationalIndicators,
    industry: IndustrySnapshot,
    coupling: dict[str, float],
) -> OperationalIndicators:
    """Mean-revert user growth and ebitda margin toward the industry series.

    Applied before noise; a coupling of 0 (or an absent key) leaves the
    indicator as a pure random walk.
    """
    ug_pull = coupling.get("user_growth", 0.0)
    em_pull = coupling.get("ebitda_margin", 0.0)
    return replace(
        current,
        user_growth=current.user_growth + ug_pull * (industry.user_growth - current.user_growth),
        ebitda_margin=current.ebitda_margin + em_pull * (industry.ebitda_margin - current.ebitda_margin),
    )


def perturb_indicators(
    current: OperationalIndicators,
    noise_specs: dict[str, NoiseSpec],
    streams: RandomStreams,
    month: int,
) -> OperationalIndicators:
    """One additive-Gaussian step for every indicator, clipped to its range.

    Anchored indicators (collection rate) redraw around their fixed baseline
    instead of walking from the current value.
    """
    updated = {}
    for name in INDICATOR_NAMES:
        spec = noise_specs[name]
        base = spec.anchor_value if spec.anchored else getattr(current, name)
        eps = spec.sigma * streams.normal(f"ind.{name}", month) if spec.sigma > 0 else 0.0
        updated[name] = _clip(base + eps, spec)
    return OperationalIndicators(**updated)


def external_at(scenario: Scenario, t: int) -> tuple[MacroSnapshot, IndustrySnapshot]:
    """Exogenous snapshots for month t; pure lookup."""
    if not 0 <= t < scenario.horizon:
        raise OutOfRange(f"month {t} outside horizon {scenario.horizon}")
    return scenario.macro_series[t], scenario.industry_series[t]
