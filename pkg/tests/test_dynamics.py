"""Indicator evolution: clipping, anchoring, noise scale, stream isolation."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, stats

from arena.dynamics import OperationalIndicators, couple_to_industry, external_at, initial_indicators, perturb_indicators
from arena.errors import OutOfRange
from arena.rng import RandomStreams
from arena.scenario import IndustrySnapshot, NoiseSpec
from arena.synth import default_rules

BASE = OperationalIndicators(gross_margin=50.0, ebitda_margin=20.0,
                             user_growth=1.0, collection_rate=0.97)


def zero_sigma_specs():
    return {
        "gross_margin": NoiseSpec(sigma=0.0, clip_min=10.0, clip_max=80.0),
        "ebitda_margin": NoiseSpec(sigma=0.0, clip_min=0.0, clip_max=60.0),
        "user_growth": NoiseSpec(sigma=0.0),
        "collection_rate": NoiseSpec(sigma=0.0, clip_min=0.85, clip_max=1.0,
                                     anchored=True, anchor_value=0.97),
    }


class TestPerturb:
    def test_zero_sigma_is_identity_with_anchor(self):
        out = perturb_indicators(BASE, zero_sigma_specs(), RandomStreams(1), month=0)
        assert out.gross_margin == 50.0
        assert out.ebitda_margin == 20.0
        assert out.user_growth == 1.0
        assert out.collection_rate == 0.97

    def test_huge_sigma_pins_to_clip_bounds(self):
        specs = default_rules().noise_specs
        specs = {**specs, "gross_margin": NoiseSpec(sigma=1e6, clip_min=10.0, clip_max=80.0)}
        streams = RandomStreams(123)
        values = {perturb_indicators(BASE, specs, streams, month=m).gross_margin for m in range(50)}
        assert values <= {10.0, 80.0}
        assert values == {10.0, 80.0}

    def test_clip_containment_over_long_walks(self):
        specs = default_rules().noise_specs
        streams = RandomStreams(7)
        current = BASE
        for month in range(10_000):
            current = perturb_indicators(current, specs, streams, month)
            assert 10.0 <= current.gross_margin <= 80.0
            assert 0.0 <= current.ebitda_margin <= 60.0
            assert 0.85 <= current.collection_rate <= 1.0

    def test_one_step_delta_std_matches_sigma(self):
        """Monte Carlo against the configured sigma, interior samples only."""
        specs = default_rules().noise_specs
        streams = RandomStreams(99)
        deltas = np.array([
            perturb_indicators(BASE, specs, streams, month=m).gross_margin - BASE.gross_margin
            for m in range(10_000)
        ])
        assert abs(deltas.std(ddof=1) - 2.0) < 0.1

    def test_collection_rate_is_iid_around_anchor(self):
        """Mean matches the censored-normal expectation, not the raw anchor.

        Clipping to [0.85, 1.0] truncates the upper tail only 0.75 sigma above
        the 0.97 anchor, which drags the true mean to ~0.9648; quadrature over
        the censored density is the oracle.
        """
        specs = default_rules().noise_specs
        spec = specs["collection_rate"]

        def censored(x):
            return min(spec.clip_max, max(spec.clip_min, spec.anchor_value + x)) * stats.norm.pdf(x, scale=spec.sigma)

        expected, _err = integrate.quad(censored, -1.0, 1.0)
        streams = RandomStreams(5)
        draws = np.array([
            perturb_indicators(BASE, specs, streams, month=m).collection_rate
            for m in range(10_000)
        ])
        assert abs(draws.mean() - expected) < 0.002
        assert expected < 0.97  # upper clip binds asymmetrically

    def test_margins_random_walk_but_collection_does_not(self):
        specs = default_rules().noise_specs
        gm_at = {2: [], 25: []}
        coll_at = {2: [], 25: []}
        for seed in range(300):
            streams = RandomStreams(seed)
            current = BASE
            for month in range(26):
                current = perturb_indicators(current, specs, streams, month)
                if month in gm_at:
                    gm_at[month].append(current.gross_margin)
                    coll_at[month].append(current.collection_rate)
        assert np.var(gm_at[25]) > 3 * np.var(gm_at[2])
        assert np.var(coll_at[25]) < 2 * np.var(coll_at[2])

    def test_stream_isolation_across_indicators(self):
        """Silencing one indicator's draws leaves the others' values unchanged."""
        specs = default_rules().noise_specs
        muted = {**specs, "ebitda_margin": NoiseSpec(sigma=0.0, clip_min=0.0, clip_max=60.0)}
        full = perturb_indicators(BASE, specs, RandomStreams(21), month=9)
        partial = perturb_indicators(BASE, muted, RandomStreams(21), month=9)
        assert full.gross_margin == partial.gross_margin
        assert full.user_growth == partial.user_growth
        assert full.collection_rate == partial.collection_rate


class TestCoupling:
    def test_mean_reversion_toward_industry(self):
        industry = IndustrySnapshot(month_index=0, user_growth=3.0, gross_margin=55.0, ebitda_margin=10.0)
        out = couple_to_industry(BASE, industry, {"user_growth": 0.2, "ebitda_margin": 0.2})
        assert out.user_growth == pytest.approx(1.0 + 0.2 * (3.0 - 1.0))
        assert out.ebitda_margin == pytest.approx(20.0 + 0.2 * (10.0 - 20.0))
        assert out.gross_margin == BASE.gross_margin

    def test_no_coupling_is_identity(self):
        industry = IndustrySnapshot(month_index=0, user_growth=3.0, gross_margin=55.0, ebitda_margin=10.0)
        assert couple_to_industry(BASE, industry, {}) == BASE


class TestExternalLookup:
    def test_lookup_is_pure(self, calibrated_scenario):
        macro, industry = external_at(calibrated_scenario, 0)
        assert macro == calibrated_scenario.macro_series[0]
        assert industry == calibrated_scenario.industry_series[0]
        assert external_at(calibrated_scenario, 0) == (macro, industry)

    def test_last_month(self, calibrated_scenario):
        macro, _ = external_at(calibrated_scenario, 131)
        assert macro.month_index == 131

    def test_out_of_range(self, calibrated_scenario):
        with pytest.raises(OutOfRange):
            external_at(calibrated_scenario, 132)
        with pytest.raises(OutOfRange):
            external_at(calibrated_scenario, -1)


class TestInitialIndicators:
    def test_starts_at_industry_benchmark(self):
        industry = IndustrySnapshot(month_index=0, user_growth=2.0, gross_margin=58.0, ebitda_margin=18.0)
        out = initial_indicators(industry, default_rules().noise_specs)
        assert out.gross_margin == 58.0
        assert out.ebitda_margin == 18.0
        assert out.user_growth == 2.0
        assert out.collection_rate == 0.97
