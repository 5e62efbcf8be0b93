"""Synthetic scenario generation.

Real macro/industry history cannot ship with the package, so bundles are
generated: regime-blocked series (expansion, then recession, then recovery
into neutral) produced by a mean-reverting walk toward per-regime targets,
fully deterministic in (seed, profile). Recessions carry elevated VIX and
credit rates and depressed industry margins, which is what makes the default
scenario's middle stretch lethal for a passive company.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadProfile
from .money import dollars
from .rng import RandomStreams
from .scenario import (
    CompanyConfig,
    DebtTerms,
    EquityPricing,
    IndustrySnapshot,
    MacroSnapshot,
    NoiseSpec,
    ProbMap,
    RuleConfig,
    Scenario,
    UnitEconomics,
    Valuation,
)

DEFAULT_HORIZON = 132
DEFAULT_PROFILE = (40, 30, 62)
DEFAULT_SCENARIO_SEED = 7

# Per-regime targets the walk reverts toward. pull is the monthly reversion
# fraction; sigma the monthly shock; bounds keep values sane.
_SERIES = {
    # name:           (expansion, recession, neutral, pull, sigma, lo,    hi)
    "gdp_growth":     (3.0,       -2.0,      2.0,     0.20, 0.30,  -10.0, 10.0),
    "unemployment":   (4.0,       7.5,       5.5,     0.20, 0.15,  2.0,   15.0),
    "fed_funds":      (1.25,      5.0,       2.5,     0.20, 0.08,  0.05,  12.0),
    "tsy2y":          (1.8,       4.8,       2.8,     0.20, 0.10,  0.05,  12.0),
    "baa_oas":        (1.8,       4.2,       2.6,     0.20, 0.10,  0.30,  10.0),
    "vix":            (14.0,      31.0,      19.0,    0.20, 1.20,  9.0,   70.0),
    "pe_ratio":       (22.0,      13.0,      18.0,    0.20, 0.50,  5.0,   50.0),
    "ps_ratio":       (6.0,       2.5,       4.0,     0.20, 0.15,  0.5,   20.0),
    "ind_user_growth": (2.0,      -2.0,      1.2,     0.20, 0.20,  -15.0, 15.0),
    "ind_gross_margin": (58.0,    47.0,      54.0,    0.20, 0.50,  10.0,  80.0),
    "ind_ebitda_margin": (18.0,   1.0,       12.0,    0.20, 0.50,  -10.0, 60.0),
}

# Monthly CPI inflation by regime (index starts at 100).
_CPI_DRIFT = {"expansion": 0.0020, "recession": 0.0045, "neutral": 0.0025}

_REGIME_ORDER = ("expansion", "recession", "neutral")


@dataclass(frozen=True)
class RegimeProfile:
    expansion_months: int
    recession_months: int
    neutral_months: int

    def labels(self, horizon: int) -> tuple[str, ...]:
        parts = (self.expansion_months, self.recession_months, self.neutral_months)
        if any(p < 0 for p in parts):
            raise BadProfile(f"profile months must be >= 0, got {parts}")
        if sum(parts) != horizon:
            raise BadProfile(f"profile months sum to {sum(parts)}, horizon is {horizon}")
        labels: list[str] = []
        for regime, months in zip(_REGIME_ORDER, parts):
            labels.extend([regime] * months)
        return tuple(labels)


def default_rules() -> RuleConfig:
    """Rule parameters calibrated for the default scenario (see README)."""
    return RuleConfig(
        noise_specs={
            "gross_margin": NoiseSpec(sigma=2.0, clip_min=10.0, clip_max=80.0),
            "ebitda_margin": NoiseSpec(sigma=1.5, clip_min=0.0, clip_max=60.0),
            "user_growth": NoiseSpec(sigma=0.5),
            "collection_rate": NoiseSpec(sigma=0.04, clip_min=0.85, clip_max=1.0,
                                         anchored=True, anchor_value=0.97),
        },
        prob_maps={
            "equity": ProbMap(knots=((12.0, 0.95), (40.0, 0.05))),
            "debt": ProbMap(knots=((0.0, 0.95), (8.0, 0.20))),
        },
        unit_economics=UnitEconomics(monthly_yield=0.015, opex_floor=dollars(400_000), receivable_lag=1),
        debt_terms=DebtTerms(maturity_months=36, repayment="bullet"),
        equity_pricing=EquityPricing(min_share_price=dollars(1)),
        valuation=Valuation(multiple=5, tool_penalty=dollars(5_000)),
        tool_budget=20,
        fill_range=(0.70, 1.00),
        delay_range=(1, 6),
        coupling={"user_growth": 0.2, "ebitda_margin": 0.2},
    )


def default_company() -> CompanyConfig:
    return CompanyConfig(
        initial_cash=dollars(15_000_000),
        initial_borrowers=5_000,
        avg_loan_size=dollars(10_000),
        initial_debt=0,
        shares_outstanding=10_500_000,
        initial_share_price=dollars(10),
        board_materials={
            "business_overview": (
                "Company XYZ is a consumer lending platform. It originates "
                "installment loans to retail borrowers, earns monthly yield on the "
                "outstanding loan book, and collects receivables on a one-month lag. "
                "Operations are funded from cash on hand; the board has authorized "
                "management to raise equity or debt as conditions allow."
            ),
            "cap_table": (
                "Capitalization summary. Common shares outstanding: 10,500,000 at a "
                "$10.00 reference price. No options, warrants, or debt instruments "
                "outstanding at the start of the simulation."
            ),
        },
        vendor_contracts={
            "contracts_register": (
                "Active vendor commitments: loan servicing platform, collections "
                "agency retainer, and cloud infrastructure. Combined vendor spend is "
                "included in the fixed monthly operating cost."
            ),
        },
    )


def generate_synthetic_scenario(
    seed: int,
    profile: tuple[int, int, int] | RegimeProfile,
    horizon: int = DEFAULT_HORIZON,
    rules: RuleConfig | None = None,
    company: CompanyConfig | None = None,
) -> Scenario:
    """Deterministic scenario from (seed, profile); same inputs, same bytes."""
    if not isinstance(profile, RegimeProfile):
        profile = RegimeProfile(*profile)
    labels = profile.labels(horizon)
    streams = RandomStreams(seed, namespace="synth")

    start_regime = labels[0]
    values = {name: spec[_REGIME_ORDER.index(start_regime)] for name, spec in _SERIES.items()}
    paths: dict[str, list[float]] = {name: [] for name in _SERIES}
    cpi = 100.0
    cpi_path: list[float] = []
    for month, regime in enumerate(labels):
        regime_idx = _REGIME_ORDER.index(regime)
        for name, (exp, rec, neu, pull, sigma, lo, hi) in _SERIES.items():
            target = (exp, rec, neu)[regime_idx]
            v = values[name]
            v += pull * (target - v) + sigma * streams.normal(f"series.{name}", month)
            v = min(hi, max(lo, v))
            values[name] = v
            paths[name].append(v)
        cpi *= 1.0 + _CPI_DRIFT[regime] + 0.0005 * streams.normal("series.cpi", month)
        cpi_path.append(cpi)

    macro_series = []
    industry_series = []
    for m in range(horizon):
        tsy2y = paths["tsy2y"][m]
        macro_series.append(MacroSnapshot(
            month_index=m,
            gdp_growth=round(paths["gdp_growth"][m], 4),
            cpi=round(cpi_path[m], 4),
            unemployment=round(paths["unemployment"][m], 4),
            fed_funds=round(paths["fed_funds"][m], 4),
            sofr=round(max(0.01, paths["fed_funds"][m] + 0.05 + 0.03 * streams.normal("series.sofr", m)), 4),
            tsy2y=round(tsy2y, 4),
            tsy5y=round(tsy2y + 0.35 + 0.05 * streams.normal("series.tsy5y", m), 4),
            tsy10y=round(tsy2y + 0.70 + 0.05 * streams.normal("series.tsy10y", m), 4),
            tsy30y=round(tsy2y + 1.00 + 0.05 * streams.normal("series.tsy30y", m), 4),
            baa_oas=round(paths["baa_oas"][m], 4),
            vix=round(paths["vix"][m], 4),
            pe_ratio=round(paths["pe_ratio"][m], 4),
            ps_ratio=round(paths["ps_ratio"][m], 4),
        ))
        industry_series.append(IndustrySnapshot(
            month_index=m,
            user_growth=round(paths["ind_user_growth"][m], 4),
            gross_margin=round(paths["ind_gross_margin"][m], 4),
            ebitda_margin=round(paths["ind_ebitda_margin"][m], 4),
        ))

    profile_tag = f"p{profile.expansion_months}-{profile.recession_months}-{profile.neutral_months}"
    return Scenario(
        id=f"synth-s{seed}-{profile_tag}",
        horizon=horizon,
        macro_series=tuple(macro_series),
        industry_series=tuple(industry_series),
        initial_company=company or default_company(),
        rules=rules or default_rules(),
        regime_labels=labels,
    )


def default_scenario() -> Scenario:
    """The calibrated 132-month favorable / adverse / recovery scenario."""
    return generate_synthetic_scenario(DEFAULT_SCENARIO_SEED, DEFAULT_PROFILE)
