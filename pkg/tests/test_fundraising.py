"""Fundraising mechanics: probability legs, sampling, pricing."""

from __future__ import annotations

import dataclasses
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arena.errors import NonPositiveAmount
from arena.fundraising import (
    base_lending_rate,
    company_multiplier,
    contract_rate,
    indicative_rate,
    macro_probability,
    resolve_request,
    FundraisingRequest,
)
from arena.ledger import DebtContract, new_enterprise_state
from arena.money import dollars, round_cents
from arena.rng import RandomStreams
from arena.scenario import MacroSnapshot, ProbMap
from arena.synth import default_rules
from tests.conftest import make_flat_scenario
from tests.test_ledger import IND, fresh_state


def macro_with(vix=15.0, sofr=2.0, tsy2y=2.0, baa_oas=3.0):
    return MacroSnapshot(month_index=0, gdp_growth=2.0, cpi=100.0, unemployment=4.0,
                         fed_funds=sofr - 0.05, sofr=sofr, tsy2y=tsy2y, tsy5y=tsy2y + 0.35,
                         tsy10y=tsy2y + 0.7, tsy30y=tsy2y + 1.0, baa_oas=baa_oas, vix=vix,
                         pe_ratio=18.0, ps_ratio=4.0)


def state_with_leverage(scenario, debt_ratio: float):
    """Contrive a state whose book leverage is exactly debt_ratio."""
    state = fresh_state(scenario)
    equity = state.cash
    debt = round_cents(debt_ratio * equity)
    state.cash += debt  # borrow: assets and liabilities rise together
    state.debt_contracts.append(DebtContract(principal=debt, annual_rate=0.05,
                                             start_month=0, maturity_month=360))
    return state


class TestMacroProbability:
    def test_equity_map_endpoints(self, std_rules):
        assert macro_probability("equity", macro_with(vix=12.0), std_rules) == 0.95
        assert macro_probability("equity", macro_with(vix=5.0), std_rules) == 0.95
        assert macro_probability("equity", macro_with(vix=40.0), std_rules) == 0.05
        assert macro_probability("equity", macro_with(vix=80.0), std_rules) == 0.05

    def test_debt_map_endpoints(self, std_rules):
        assert macro_probability("debt", macro_with(sofr=0.0), std_rules) == 0.95
        assert macro_probability("debt", macro_with(sofr=8.0), std_rules) == 0.20
        assert macro_probability("debt", macro_with(sofr=15.0), std_rules) == 0.20

    def test_monotone_nonincreasing_in_driver(self, std_rules):
        vix_grid = [10, 14, 18, 25, 32, 40, 60]
        probs = [macro_probability("equity", macro_with(vix=v), std_rules) for v in vix_grid]
        assert probs == sorted(probs, reverse=True)
        sofr_grid = [0.0, 1.0, 2.5, 5.0, 8.0, 12.0]
        probs = [macro_probability("debt", macro_with(sofr=r), std_rules) for r in sofr_grid]
        assert probs == sorted(probs, reverse=True)

    @given(st.floats(min_value=0.0, max_value=200.0))
    def test_always_a_probability(self, vix):
        assert 0.0 <= macro_probability("equity", macro_with(vix=vix), default_rules()) <= 1.0


class TestCompanyMultiplier:
    def test_equity_round_decay(self, lending_scenario):
        state = fresh_state(lending_scenario)
        assert company_multiplier("equity", state) == 1.0
        state.successful_equity_rounds = 1
        assert company_multiplier("equity", state) == 0.75
        state.successful_equity_rounds = 3
        assert company_multiplier("equity", state) == pytest.approx(0.75 ** 3)

    def test_debt_penalty_boundaries(self, lending_scenario):
        assert company_multiplier("debt", state_with_leverage(lending_scenario, 0.5)) == pytest.approx(1.0)
        assert company_multiplier("debt", state_with_leverage(lending_scenario, 0.8)) == pytest.approx(0.55)
        assert company_multiplier("debt", state_with_leverage(lending_scenario, 7 / 6)) == pytest.approx(0.0, abs=1e-9)
        assert company_multiplier("debt", state_with_leverage(lending_scenario, 2.0)) == 0.0

    def test_debt_penalty_monotone_in_leverage(self, lending_scenario):
        ratios = [0.0, 0.3, 0.5, 0.7, 0.9, 1.1, 1.5]
        values = [company_multiplier("debt", state_with_leverage(lending_scenario, r)) for r in ratios]
        assert values == sorted(values, reverse=True)

    def test_negative_equity_means_zero(self, lending_scenario):
        state = fresh_state(lending_scenario)
        state.debt_contracts.append(DebtContract(principal=state.cash * 2, annual_rate=0.05,
                                                 start_month=0, maturity_month=360))
        assert company_multiplier("debt", state) == 0.0


class TestContractRate:
    def test_no_spread_below_cutoff(self):
        assert contract_rate(macro_with(tsy2y=2.0, baa_oas=3.0), 0.4) == pytest.approx(0.05)

    def test_spread_above_cutoff(self):
        assert contract_rate(macro_with(tsy2y=2.0, baa_oas=3.0), 0.8) == pytest.approx(0.065)

    def test_cutoff_boundary(self):
        assert contract_rate(macro_with(tsy2y=2.0, baa_oas=3.0), 0.5) == pytest.approx(0.05)

    def test_infinite_leverage_is_capped(self):
        rate = contract_rate(macro_with(tsy2y=2.0, baa_oas=3.0), math.inf)
        assert rate == pytest.approx(0.05 + 0.05 * 9.5)

    def test_indicative_equals_formula_at_request(self):
        macro = macro_with(tsy2y=1.5, baa_oas=2.5)
        assert indicative_rate(macro, 0.9) == contract_rate(macro, 0.9)

    @settings(max_examples=300)
    @given(
        tsy2y=st.floats(min_value=0.0, max_value=12.0),
        baa=st.floats(min_value=0.1, max_value=10.0),
        lev=st.floats(min_value=0.0, max_value=9.0),
    )
    def test_formula_property(self, tsy2y, baa, lev):
        """rate = (tsy2y + baa)/100 + 0.05 (L - 0.5)+, at basis-point precision."""
        rate = contract_rate(macro_with(tsy2y=tsy2y, baa_oas=baa), lev)
        expected = (tsy2y + baa) / 100.0 + 0.05 * max(0.0, lev - 0.5)
        assert rate * 10_000 == pytest.approx(round(rate * 10_000), abs=1e-6)  # bp-quantized
        assert abs(rate - expected) <= 0.5 / 10_000 + 1e-12

    def test_base_rate_definition(self):
        assert base_lending_rate(macro_with(tsy2y=2.0, baa_oas=3.0)) == pytest.approx(0.05)


class TestResolveRequest:
    def request(self, instrument="equity", amount=dollars(10_000_000), month=0):
        return FundraisingRequest(instrument=instrument, amount_requested=amount, request_month=month)

    def test_rejects_non_positive_amount(self, lending_scenario, std_rules):
        state = fresh_state(lending_scenario)
        with pytest.raises(NonPositiveAmount):
            resolve_request(self.request(amount=0), state, macro_with(), std_rules, RandomStreams(0))

    def test_rejects_unknown_instrument(self, lending_scenario, std_rules):
        state = fresh_state(lending_scenario)
        with pytest.raises(NonPositiveAmount):
            resolve_request(self.request(instrument="crypto"), state, macro_with(), std_rules, RandomStreams(0))

    def test_zero_probability_never_succeeds(self, lending_scenario, std_rules):
        for seed in range(200):
            state = state_with_leverage(lending_scenario, 2.0)  # beyond the L=7/6 zero point
            outcome = resolve_request(self.request(instrument="debt", month=seed), state,
                                      macro_with(), std_rules, RandomStreams(seed))
            assert outcome.success is False
            assert outcome.p_adj == 0.0
            assert not state.pending_settlements

    def test_factorization_is_exact(self, lending_scenario, std_rules):
        for seed in range(50):
            state = fresh_state(lending_scenario)
            state.successful_equity_rounds = 2
            outcome = resolve_request(self.request(month=seed), state, macro_with(vix=20.0),
                                      std_rules, RandomStreams(seed))
            assert outcome.p_adj == outcome.p_macro * outcome.m_company

    def test_success_fill_delay_and_settlement(self, lending_scenario, std_rules):
        hits = 0
        for seed in range(300):
            state = fresh_state(lending_scenario)
            outcome = resolve_request(self.request(month=seed), state, macro_with(vix=12.0),
                                      std_rules, RandomStreams(seed))
            if not outcome.success:
                continue
            hits += 1
            assert 0.70 <= outcome.fill_rate <= 1.00
            assert outcome.amount_actual == round_cents(outcome.fill_rate * dollars(10_000_000))
            delay = outcome.settlement_month - seed
            assert 1 <= delay <= 6
            pending = state.pending_settlements[0]
            assert pending.amount_actual == outcome.amount_actual
            assert pending.due_month == outcome.settlement_month
            assert pending.due_month > seed  # never retroactive
        assert hits > 200

    def test_equity_success_counts_immediately(self, lending_scenario, std_rules):
        state = fresh_state(lending_scenario)
        rounds_before = state.successful_equity_rounds
        for seed in range(100):
            outcome = resolve_request(self.request(month=seed), state, macro_with(vix=12.0),
                                      std_rules, RandomStreams(seed))
            if outcome.success:
                assert state.successful_equity_rounds == rounds_before + 1
                break
        else:
            pytest.fail("no success in 100 attempts at p=0.95")

    def test_failure_keeps_books_untouched(self, lending_scenario, std_rules):
        state = fresh_state(lending_scenario)
        cash_before = state.cash
        for seed in range(500):
            outcome = resolve_request(self.request(instrument="debt", month=seed), state,
                                      macro_with(sofr=8.0), std_rules, RandomStreams(seed))
            if not outcome.success:
                assert state.cash == cash_before
                assert not state.debt_contracts
                return
        pytest.fail("no failure in 500 attempts at p=0.20")

    def test_debt_outcome_carries_indicative_quote(self, lending_scenario, std_rules):
        state = fresh_state(lending_scenario)
        outcome = resolve_request(self.request(instrument="debt"), state,
                                  macro_with(tsy2y=2.0, baa_oas=3.0), std_rules, RandomStreams(1))
        assert outcome.indicative_rate == pytest.approx(0.05)

    def test_monte_carlo_success_rate(self):
        """20k trials at a flat p_adj = 0.6 land within a percentage point."""
        flat_map = ProbMap(knots=((0.0, 0.6), (100.0, 0.6)))
        scenario = make_flat_scenario(rules_overrides={
            "prob_maps": {"equity": flat_map, "debt": flat_map},
        })
        streams = RandomStreams(2024)
        hits = 0
        trials = 20_000
        state = fresh_state(scenario)
        for i in range(trials):
            state.pending_settlements.clear()
            state.successful_equity_rounds = 0
            outcome = resolve_request(self.request(month=i), state, macro_with(), scenario.rules, streams)
            hits += outcome.success
        assert abs(hits / trials - 0.6) < 0.01
