"""Shared fixtures: the calibrated default scenario plus controlled variants."""

from __future__ import annotations

import pytest

from arena.money import dollars
from arena.scenario import (
    CompanyConfig,
    IndustrySnapshot,
    MacroSnapshot,
    NoiseSpec,
    ProbMap,
    RuleConfig,
    Scenario,
    UnitEconomics,
    DebtTerms,
    EquityPricing,
    Valuation,
)
from arena.synth import default_company, default_rules, default_scenario


def make_flat_scenario(
    horizon: int = 132,
    vix: float = 15.0,
    sofr: float = 2.0,
    tsy2y: float = 2.0,
    baa_oas: float = 3.0,
    ps_ratio: float = 4.0,
    user_growth: float = 0.0,
    gross_margin: float = 55.0,
    ebitda_margin: float = 15.0,
    monthly_yield: float = 0.0,
    opex_floor: int = 0,
    sigmas_zero: bool = True,
    collection_anchor: float = 0.97,
    company: CompanyConfig | None = None,
    rules_overrides: dict | None = None,
) -> Scenario:
    """Constant exogenous series with configurable economics; zero noise by default."""
    macro = tuple(
        MacroSnapshot(month_index=m, gdp_growth=2.0, cpi=100.0, unemployment=4.0,
                      fed_funds=sofr - 0.05, sofr=sofr, tsy2y=tsy2y, tsy5y=tsy2y + 0.35,
                      tsy10y=tsy2y + 0.7, tsy30y=tsy2y + 1.0, baa_oas=baa_oas, vix=vix,
                      pe_ratio=18.0, ps_ratio=ps_ratio)
        for m in range(horizon)
    )
    industry = tuple(
        IndustrySnapshot(month_index=m, user_growth=user_growth,
                         gross_margin=gross_margin, ebitda_margin=ebitda_margin)
        for m in range(horizon)
    )
    sigma = 0.0 if sigmas_zero else None
    noise = {
        "gross_margin": NoiseSpec(sigma=sigma if sigma is not None else 2.0, clip_min=10.0, clip_max=80.0),
        "ebitda_margin": NoiseSpec(sigma=sigma if sigma is not None else 1.5, clip_min=0.0, clip_max=60.0),
        "user_growth": NoiseSpec(sigma=sigma if sigma is not None else 0.5),
        "collection_rate": NoiseSpec(sigma=sigma if sigma is not None else 0.04,
                                     clip_min=0.85, clip_max=1.0,
                                     anchored=True, anchor_value=collection_anchor),
    }
    rules_kwargs = dict(
        noise_specs=noise,
        prob_maps={
            "equity": ProbMap(knots=((12.0, 0.95), (40.0, 0.05))),
            "debt": ProbMap(knots=((0.0, 0.95), (8.0, 0.20))),
        },
        unit_economics=UnitEconomics(monthly_yield=monthly_yield, opex_floor=opex_floor, receivable_lag=1),
        debt_terms=DebtTerms(maturity_months=36),
        equity_pricing=EquityPricing(min_share_price=dollars(1)),
        valuation=Valuation(multiple=5, tool_penalty=dollars(5_000)),
        tool_budget=20,
        fill_range=(0.70, 1.00),
        delay_range=(1, 6),
        coupling={},
    )
    rules_kwargs.update(rules_overrides or {})
    return Scenario(
        id=f"flat-{horizon}",
        horizon=horizon,
        macro_series=macro,
        industry_series=industry,
        initial_company=company or default_company(),
        rules=RuleConfig(**rules_kwargs),
        regime_labels=tuple(["neutral"] * horizon),
    )


@pytest.fixture(scope="session")
def calibrated_scenario() -> Scenario:
    return default_scenario()


@pytest.fixture(scope="session")
def benign_scenario() -> Scenario:
    """No yield, no spend, no noise: cash stays at $15M forever."""
    return make_flat_scenario()


@pytest.fixture()
def lending_scenario() -> Scenario:
    """Flat exogenous series with the calibrated unit economics, zero noise."""
    return make_flat_scenario(monthly_yield=0.015, opex_floor=dollars(400_000))


@pytest.fixture(scope="session")
def std_rules():
    return default_rules()


@pytest.fixture(scope="session")
def std_company():
    return default_company()
