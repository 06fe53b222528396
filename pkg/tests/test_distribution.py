"""Tests for the skewed geometric pmf, cdf, hazard, pgf and moments.

Oracles are brute-force sums of the unnormalized weight
``q p^x (1 - p^(alpha x + 1))``, written out here independently of the
closed forms in the library.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewgeom import distribution as dist
from skewgeom.distribution import RSGParams, SGParams


def brute_weights(p, alpha, K=None):
    """Unnormalized weights and their sum, truncated where ``p^(K+1) < 1e-18``."""
    if K is None:
        K = max(100, int(math.ceil(math.log(1e-18) / math.log(p))))
    x = np.arange(K + 1)
    w = (1 - p) * p ** x * (1 - p ** (alpha * x + 1))
    return w, math.fsum(w)


def brute_pmf(p, alpha):
    w, s = brute_weights(p, alpha)
    return w / s


def grid_params():
    """10 x 5 = 50 (p, alpha) points."""
    return [SGParams(p, a) for p in np.round(np.linspace(0.05, 0.95, 10), 10) for a in (0.0, 0.5, 1.0, 2.0, 5.0)]


GRID = grid_params()

sg_params = st.builds(
    SGParams,
    p=st.floats(min_value=0.01, max_value=0.97),
    alpha=st.floats(min_value=0.0, max_value=50.0),
)


# =============================================================================
# Parameter types and conversion
# =============================================================================


class TestParams:
    def test_rejects_p_outside_unit_interval(self):
        for p in (0.0, 1.0, -0.1, 1.5, float("nan")):
            with pytest.raises(ValueError):
                SGParams(p, 1.0)
            with pytest.raises(ValueError):
                RSGParams(p, 0.5)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            SGParams(0.5, -1.0)
        with pytest.raises(ValueError):
            SGParams(0.5, float("inf"))
        with pytest.raises(ValueError):
            RSGParams(0.5, 0.0)
        with pytest.raises(ValueError):
            RSGParams(0.5, 1.01)

    def test_beta_to_alpha(self):
        assert dist.convert(RSGParams(0.5, 0.25)).alpha == pytest.approx(2.0, abs=1e-15)

    def test_alpha_zero_is_beta_one(self):
        assert dist.convert(SGParams(0.5, 0.0)).beta == 1.0

    def test_ticks_estimate_alpha(self):
        a = dist.convert(RSGParams(0.833, 0.601)).alpha
        assert a == pytest.approx(math.log(0.601) / math.log(0.833), rel=1e-15)

    def test_convert_type_error(self):
        with pytest.raises(TypeError):
            dist.convert((0.5, 1.0))

    @given(sg_params)
    def test_round_trip(self, prm):
        back = dist.convert(dist.convert(prm))
        assert back.p == prm.p
        if prm.beta > 0:
            assert back.beta == pytest.approx(prm.beta, rel=1e-12)


# =============================================================================
# Normalizer and pmf
# =============================================================================


class TestNormalizer:
    def test_alpha_zero(self):
        assert dist.normalizer(SGParams(0.5, 0.0)) == pytest.approx(0.5, abs=1e-15)

    def test_alpha_one(self):
        assert dist.normalizer(SGParams(0.5, 1.0)) == pytest.approx(2 / 3, abs=1e-15)

    def test_matches_series(self):
        _, s = brute_weights(0.2, 2.0)
        assert dist.normalizer(SGParams(0.2, 2.0)) == pytest.approx(s, abs=1e-12)

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_grid_matches_series(self, prm):
        _, s = brute_weights(prm.p, prm.alpha)
        assert dist.normalizer(prm) == pytest.approx(s, abs=1e-12)


class TestPmf:
    def test_geometric_collapse(self):
        assert dist.pmf(RSGParams(0.5, 1.0), 0) == pytest.approx(0.5, abs=1e-15)

    def test_direct_substitution(self):
        assert dist.pmf(SGParams(0.5, 1.0), 0) == pytest.approx(0.375, abs=1e-15)

    def test_against_brute_force(self):
        assert dist.pmf(SGParams(0.2, 2.0), 3) == pytest.approx(brute_pmf(0.2, 2.0)[3], rel=1e-12)

    def test_vectorized(self):
        prm = SGParams(0.6, 1.5)
        xs = np.arange(30)
        np.testing.assert_allclose(dist.pmf(prm, xs), brute_pmf(0.6, 1.5)[:30], rtol=1e-12)

    def test_rejects_negative_and_fractional(self):
        with pytest.raises(ValueError):
            dist.pmf(SGParams(0.5, 1.0), -1)
        with pytest.raises(ValueError):
            dist.pmf(SGParams(0.5, 1.0), 1.5)

    def test_logpmf_finite_where_pmf_underflows(self):
        prm = SGParams(0.5, 3.0)
        assert dist.pmf(prm, 2000) == 0.0
        lp = dist.logpmf(prm, 2000)
        assert math.isfinite(lp)
        assert lp == pytest.approx(math.log(0.5) + 2000 * math.log(0.5) - math.log(dist.normalizer(prm)), rel=1e-12)

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_normalization_with_tail_bound(self, prm):
        X = dist.truncation_point(prm)
        total = math.fsum(dist.pmf(prm, np.arange(X + 1)))
        bound = prm.p ** (X + 1) / dist.normalizer(prm)
        assert 1 - 1e-10 <= total + bound <= 1 + 1e-10
        assert bound < dist.TAIL_TOL

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_parameterizations_agree(self, prm):
        xs = np.arange(60)
        np.testing.assert_allclose(dist.pmf(prm, xs), dist.pmf(dist.convert(prm), xs), rtol=1e-14, atol=1e-300)

    @given(sg_params, st.integers(min_value=0, max_value=60))
    def test_matches_brute_force(self, prm, x):
        assert dist.pmf(prm, x) == pytest.approx(brute_pmf(prm.p, prm.alpha)[x], rel=1e-10, abs=1e-300)


# =============================================================================
# Cdf, survival and hazard
# =============================================================================


class TestCdf:
    def test_first_value(self):
        assert dist.cdf(SGParams(0.5, 1.0), 0) == pytest.approx(0.375, abs=1e-15)

    def test_second_value(self):
        assert dist.cdf(SGParams(0.5, 1.0), 1) == pytest.approx(0.65625, abs=1e-15)

    def test_approaches_one(self):
        for prm in GRID:
            assert dist.cdf(prm, 2000) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_differences_give_pmf(self, prm):
        xs = np.arange(201)
        F = dist.cdf(prm, xs)
        np.testing.assert_allclose(np.diff(F), dist.pmf(prm, xs[1:]), atol=1e-12)

    def test_survival_complement(self):
        prm = SGParams(0.7, 0.8)
        xs = np.arange(50)
        np.testing.assert_allclose(dist.survival(prm, xs) + dist.cdf(prm, xs), 1.0, atol=1e-14)

    def test_log_survival_deep_tail(self):
        prm = SGParams(0.5, 1.0)
        tail = brute_pmf(0.5, 1.0)
        # far beyond double-precision cancellation in 1 - cdf
        assert math.exp(dist.log_survival(prm, 40)) == pytest.approx(math.fsum(tail[41:]), rel=1e-10)


class TestHazard:
    def test_first_value(self):
        prm = SGParams(0.5, 1.0)
        assert dist.survival(prm, 0) == pytest.approx(0.625, abs=1e-15)
        assert dist.hazard(prm, 0) == pytest.approx(0.6, abs=1e-15)

    def test_geometric_hazard_constant(self):
        prm = SGParams(0.4, 0.0)
        np.testing.assert_allclose(dist.hazard(prm, np.arange(100)), 0.6 / 0.4, rtol=1e-12)

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_increasing_failure_rate(self, prm):
        xs = np.arange(201)
        ok = dist.survival(prm, xs) > 1e-300
        h = dist.hazard(prm, xs[ok])
        assert np.all(np.diff(h) >= -1e-12)


# =============================================================================
# Pgf and moments
# =============================================================================


class TestPgf:
    def test_at_one(self):
        for prm in GRID:
            assert dist.pgf(prm, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_at_zero(self):
        assert dist.pgf(SGParams(0.5, 1.0), 0.0) == pytest.approx(0.375, abs=1e-15)

    def test_at_half(self):
        prm = SGParams(0.5, 1.0)
        series = math.fsum(brute_pmf(0.5, 1.0) * 0.5 ** np.arange(len(brute_pmf(0.5, 1.0))))
        assert series == pytest.approx(4 / 7, abs=1e-14)
        assert dist.pgf(prm, 0.5) == pytest.approx(4 / 7, abs=1e-14)

    def test_rejects_outside_unit_disc(self):
        with pytest.raises(ValueError):
            dist.pgf(SGParams(0.5, 1.0), 1.5)

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_derivative_gives_mean(self, prm):
        h = 1e-6
        fd = (dist.pgf(prm, 1.0) - dist.pgf(prm, 1.0 - h)) / h
        # O(h) truncation scaled by the second factorial moment
        assert fd == pytest.approx(dist.mean(prm), abs=h * 10 * (1 + dist.variance(prm) + dist.mean(prm) ** 2))


class TestMoments:
    def test_geometric(self):
        prm = SGParams(0.3, 0.0)
        assert dist.mean(prm) == pytest.approx(0.3 / 0.7, rel=1e-14)
        assert dist.variance(prm) == pytest.approx(0.3 / 0.49, rel=1e-14)

    def test_mean_example(self):
        assert dist.mean(SGParams(0.5, 1.0)) == pytest.approx(4 / 3, rel=1e-14)

    def test_variance_example(self):
        assert dist.variance(SGParams(0.5, 1.0)) == pytest.approx(22 / 9, rel=1e-14)

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_against_series(self, prm):
        f = brute_pmf(prm.p, prm.alpha)
        x = np.arange(len(f))
        m = math.fsum(x * f)
        v = math.fsum((x - m) ** 2 * f)
        assert dist.mean(prm) == pytest.approx(m, rel=1e-10)
        assert dist.variance(prm) == pytest.approx(v, rel=1e-10)

    def test_dispersion_examples(self):
        assert dist.dispersion_index(SGParams(0.3, 0.0)) == pytest.approx(1 / 0.7, rel=1e-14)
        assert dist.dispersion_index(SGParams(0.5, 1.0)) == pytest.approx(11 / 6, rel=1e-14)

    def test_overdispersed_on_sweep(self):
        for p in np.round(np.arange(0.1, 1.0, 0.1), 10):
            for a in (0.5, 1.0, 2.0, 5.0):
                assert dist.dispersion_index(SGParams(float(p), a)) > 1.0

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_overdispersed_on_grid(self, prm):
        assert dist.dispersion_index(prm) > 1.0


# =============================================================================
# Recurrence, limits and mode
# =============================================================================


class TestRecurrence:
    def test_example(self):
        assert dist.recurrence_step(SGParams(0.5, 1.0), 0, 0.375) == pytest.approx(0.28125, abs=1e-15)

    def test_geometric_ratio(self):
        prm = SGParams(0.35, 0.0)
        for x in range(50):
            assert dist.recurrence_step(prm, x, 1.0) == pytest.approx(0.35, abs=1e-15)

    def test_tail_ratio_tends_to_p(self):
        assert dist.recurrence_step(SGParams(0.7, 2.0), 10_000, 1.0) == pytest.approx(0.7, abs=1e-8)

    @given(sg_params, st.integers(min_value=0, max_value=40))
    def test_reproduces_pmf(self, prm, x):
        px = dist.pmf(prm, x)
        if px > 1e-280:
            assert dist.recurrence_step(prm, x, px) == pytest.approx(dist.pmf(prm, x + 1), rel=1e-10)


class TestAlphaLimit:
    def test_values(self):
        assert dist.limit_pmf_alpha_infinity(0.5, 0) == pytest.approx(1 / 3, abs=1e-15)
        assert dist.limit_pmf_alpha_infinity(0.5, 1) == pytest.approx(1 / 3, abs=1e-15)

    def test_large_alpha_agrees(self):
        xs = np.arange(21)
        np.testing.assert_allclose(
            dist.pmf(SGParams(0.5, 200.0), xs), dist.limit_pmf_alpha_infinity(0.5, xs), atol=1e-10
        )

    def test_sums_to_one(self):
        xs = np.arange(400)
        assert math.fsum(dist.limit_pmf_alpha_infinity(0.8, xs)) == pytest.approx(1.0, abs=1e-12)


class TestMode:
    def test_threshold_value(self):
        assert dist.mode_threshold(0.7) == pytest.approx(0.56898, abs=1e-5)

    def test_no_threshold_at_or_below_half(self):
        assert dist.mode_threshold(0.5) is None
        assert dist.mode_threshold(0.3) is None

    def test_argmax_either_side(self):
        xs = np.arange(201)
        assert np.argmax(dist.pmf(SGParams(0.7, 0.6), xs)) > 0
        assert np.argmax(dist.pmf(SGParams(0.7, 0.5), xs)) == 0

    @pytest.mark.parametrize("p", [0.55, 0.6, 0.75, 0.9])
    def test_threshold_separates_modes(self, p):
        t = dist.mode_threshold(p)
        xs = np.arange(201)
        assert np.argmax(dist.pmf(SGParams(p, t * 0.99), xs)) == 0
        assert np.argmax(dist.pmf(SGParams(p, t * 1.01 + 1e-9), xs)) > 0

    def test_half_or_less_always_zero(self):
        xs = np.arange(201)
        for a in (0.5, 2.0, 20.0, 200.0):
            assert np.argmax(dist.pmf(SGParams(0.5, a), xs)) == 0


# =============================================================================
# Shape: log-concavity and unimodality
# =============================================================================


class TestShape:
    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_log_concave(self, prm):
        f = dist.pmf(prm, np.arange(202))
        lhs = f[1:-1] ** 2
        rhs = f[2:] * f[:-2]
        assert np.all(lhs >= rhs * (1 - 1e-12))

    @pytest.mark.parametrize("prm", GRID, ids=str)
    def test_table_unimodal(self, prm):
        probs = dist.materialize(prm).probabilities
        d = np.diff(probs)
        falling = np.flatnonzero(d < 0)
        if falling.size:
            assert np.all(d[falling[0]:] <= 0)


# =============================================================================
# Materialized tables and the general weighting
# =============================================================================


class TestMaterialize:
    def test_mass_accounted(self):
        t = dist.materialize(SGParams(0.9, 1.0))
        assert t.probabilities.sum() + t.tail_mass == pytest.approx(1.0, abs=1e-12)
        assert t.tail_mass < dist.TAIL_TOL

    def test_explicit_xmax(self):
        t = dist.materialize(SGParams(0.5, 1.0), x_max=1)
        np.testing.assert_allclose(t.probabilities, [0.375, 0.28125], atol=1e-15)
        assert t.tail_mass == pytest.approx(1 - 0.65625, abs=1e-15)
        np.testing.assert_allclose(t.cdf(), [0.375, 0.65625], atol=1e-15)

    def test_rejects_bad_table(self):
        with pytest.raises(ValueError):
            dist.PmfTable(np.array([0.5, 0.4]), 0.0)
        with pytest.raises(ValueError):
            dist.PmfTable(np.array([1.1, -0.1]), 0.0)


class TestWeightedBase:
    def test_geometric_base_reproduces_pmf(self):
        w = dist.azzalini_weighted(dist.geometric_base(0.6), 0.6, 1.7)
        prm = SGParams(0.6, 1.7)
        for x in range(30):
            assert w.pmf(x) == pytest.approx(dist.pmf(prm, x), rel=1e-13)
        for z in (0.0, 0.3, 0.9, 1.0):
            assert w.pgf(z) == pytest.approx(dist.pgf(prm, z), rel=1e-13)

    def test_point_mass(self):
        base = dist.DiscreteBase(pmf=lambda x: 1.0 if x == 0 else 0.0, pgf=lambda z: 1.0)
        w = dist.azzalini_weighted(base, 0.4, 2.0)
        assert w.pmf(0) == pytest.approx(1.0, abs=1e-15)

    def test_bernoulli(self):
        theta = 0.3
        base = dist.DiscreteBase(
            pmf=lambda x: (1 - theta) if x == 0 else (theta if x == 1 else 0.0),
            pgf=lambda z: 1 - theta + theta * z,
        )
        w = dist.azzalini_weighted(base, 0.5, 1.0)
        # unnormalized 0.7 * 0.5 and 0.3 * 0.75
        W = 0.35 + 0.225
        assert w.pmf(0) == pytest.approx(0.35 / W, abs=1e-15)
        assert w.pmf(1) == pytest.approx(0.225 / W, abs=1e-15)
        assert w.pmf(0) + w.pmf(1) == pytest.approx(1.0, abs=1e-15)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            dist.azzalini_weighted(dist.geometric_base(0.5), 1.2, 1.0)
