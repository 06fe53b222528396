"""Tests for the competitor count models and the shared grid fitter."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from skewgeom.data import Bin, CountData, claims, default_gof_bins, ticks
from skewgeom.estimation import mle_grid
from skewgeom.models import MODELS, empirical_model, fit_model, get_model, pmf_nb, pmf_nd, pmf_ngpl, pmf_wg
from skewgeom.reference import CLAIMS_TABLE

XS = np.arange(4000)


def total_mass(model, a, b):
    return math.fsum(model.pmf((a, b), XS))


# =============================================================================
# Individual pmfs
# =============================================================================


class TestWeightedGeometric:
    def test_formula(self):
        p, b, x = 2.0, 0.5, 3
        direct = (1 - b) * (1 - b ** (p + 1)) * b ** x * (1 - b ** (p * (x + 1))) / (1 - b ** p)
        assert pmf_wg(p, b, x) == pytest.approx(direct, rel=1e-13)

    def test_sums_to_one(self):
        assert math.fsum(pmf_wg(2.0, 0.5, XS)) == pytest.approx(1.0, abs=1e-10)

    def test_small_p_limit(self):
        # weight and normalizer vanish together; the ratio tends to x + 1, giving NB(2, 1 - b)
        x = np.arange(30)
        np.testing.assert_allclose(pmf_wg(1e-9, 0.5, x), 0.25 * (x + 1) * 0.5 ** x, rtol=1e-6)


class TestNegativeBinomial:
    def test_r_one_is_geometric(self):
        np.testing.assert_allclose(pmf_nb(1.0, 0.3, np.arange(30)), 0.3 * 0.7 ** np.arange(30), rtol=1e-12)

    def test_matches_scipy(self):
        np.testing.assert_allclose(pmf_nb(1.777, 0.271, np.arange(60)), stats.nbinom.pmf(np.arange(60), 1.777, 0.271),
                                   rtol=1e-10)

    def test_sums_to_one(self):
        assert math.fsum(pmf_nb(1.777, 0.271, XS)) == pytest.approx(1.0, abs=1e-10)

    def test_printed_variant_cannot_normalize(self):
        # beta^x (1 - beta^x) in place of beta^r (1-beta)^x gives zero mass at x = 0
        from scipy.special import comb
        vals = comb(1.309 + XS[:200] - 1, XS[:200]) * 0.871 ** XS[:200] * (1 - 0.871 ** XS[:200])
        assert vals[0] == 0.0
        assert abs(math.fsum(vals) - 1.0) > 0.1


class TestNewDiscrete:
    def test_telescoping_cdf(self):
        p, b = -0.454, 0.141
        for X in (0, 3, 10):
            cdf = math.fsum(pmf_nd(p, b, np.arange(X + 1)))
            assert cdf == pytest.approx(1 - math.log(1 - p * b ** (X + 1)) / math.log(1 - p), abs=1e-14)

    def test_sums_to_one(self):
        assert math.fsum(pmf_nd(-0.454, 0.141, XS)) == pytest.approx(1.0, abs=1e-12)
        assert math.fsum(pmf_nd(0.9, 0.6, XS)) == pytest.approx(1.0, abs=1e-12)

    def test_zero_limit_geometric(self):
        np.testing.assert_allclose(pmf_nd(0.0, 0.4, np.arange(20)), 0.6 * 0.4 ** np.arange(20), rtol=1e-12)
        np.testing.assert_allclose(pmf_nd(1e-9, 0.4, np.arange(20)), 0.6 * 0.4 ** np.arange(20), rtol=1e-6)

    def test_printed_ticks_point_inadmissible(self):
        assert not np.isfinite(np.log(pmf_nd(1.276, 0.311, 0)))


class TestPoissonLindley:
    def test_p_zero_geometric(self):
        b = 0.8
        np.testing.assert_allclose(pmf_ngpl(0.0, b, np.arange(30)), (b / (1 + b)) * (1 / (1 + b)) ** np.arange(30),
                                   rtol=1e-12)

    def test_sums_to_one(self):
        assert math.fsum(pmf_ngpl(2.312, 0.808, XS)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("name", ["wg", "nb", "nd", "ngpl", "rsg"])
def test_random_points_normalize(name):
    model = get_model(name)
    rng = np.random.default_rng(17)
    for t1, t2 in rng.uniform(0.05, 0.95, size=(20, 2)):
        a, b = model.lattice_params(t1, t2, 1)
        assert total_mass(model, a, b) == pytest.approx(1.0, abs=1e-8)


# =============================================================================
# Model interface
# =============================================================================


class TestCountModel:
    def test_registry(self):
        assert list(MODELS) == ["rsg", "wg", "nb", "nd", "ngpl"]
        assert get_model("NB").name == "nb"
        with pytest.raises(ValueError):
            get_model("poisson")

    @pytest.mark.parametrize("name", ["rsg", "wg", "nb", "nd", "ngpl"])
    def test_bin_probabilities_sum_to_one(self, name):
        model = get_model(name)
        a, b = model.lattice_params(0.4, 0.6, 1)
        for bins in (default_gof_bins(claims()), list(ticks().bins)):
            assert model.bin_probabilities((a, b), bins).sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("name", ["rsg", "nd", "ngpl"])
    def test_closed_tail_matches_complement(self, name):
        model = get_model(name)
        a, b = model.lattice_params(0.6, 0.7, 1)
        head = math.fsum(model.pmf((a, b), np.arange(9)))
        assert math.exp(model.log_bin_mass(a, b, Bin(9, None))) == pytest.approx(1 - head, rel=1e-9)

    @pytest.mark.parametrize("name", ["wg", "nb", "nd", "ngpl"])
    def test_claims_expected_at_printed_estimates(self, name):
        # printed estimates carry three decimals, which moves the first cell by up to ~0.55
        e = 1875 * get_model(name).bin_probabilities(CLAIMS_TABLE["params"][name], default_gof_bins(claims()))
        np.testing.assert_allclose(e, CLAIMS_TABLE["expected"][name], atol=1.0)

    def test_empirical_model(self):
        d = CountData.from_observations([0, 0, 1, 3])
        m = empirical_model(d)
        assert m.pmf((0.5, 0.5), 0) == pytest.approx(0.5)
        assert m.pmf((0.5, 0.5), 2) == 0.0
        with pytest.raises(ValueError):
            empirical_model(ticks())


# =============================================================================
# Fitting
# =============================================================================


class TestFitModel:
    def test_rsg_delegates(self):
        fit = fit_model("rsg", ticks(), resolution=1e-3)
        res = mle_grid(ticks(), resolution=1e-3)
        assert fit.params == (res.p_hat, res.beta_hat)
        assert fit.loglik == res.loglik

    @pytest.mark.parametrize("name", ["wg", "nb", "nd", "ngpl"])
    def test_claims_aic(self, name):
        fit = fit_model(name, claims())
        assert fit.aic == pytest.approx(CLAIMS_TABLE["aic"][name], abs=0.2)

    @pytest.mark.parametrize("name", ["wg", "nb", "nd"])
    def test_claims_converged_interior(self, name):
        assert fit_model(name, claims(), resolution=1e-3).converged

    @pytest.mark.parametrize("name", ["wg", "nb", "nd", "ngpl"])
    def test_grid_optimum_near_continuous(self, name):
        from scipy import optimize
        model = get_model(name)
        fit = fit_model(name, claims(), resolution=1e-3)
        res = optimize.minimize(lambda t: -model.loglik(t[0], t[1], claims()), fit.params, method="Nelder-Mead",
                                options={"xatol": 1e-9, "fatol": 1e-10})
        assert fit.loglik >= -res.fun - 0.01

    def test_rsg_best_on_claims(self):
        fits = {m: fit_model(m, claims(), resolution=1e-3) for m in MODELS}
        assert min(fits, key=lambda m: fits[m].aic) == "rsg"

    def test_rsg_best_on_ticks(self):
        fits = {m: fit_model(m, ticks(), resolution=1e-3) for m in MODELS}
        assert min(fits, key=lambda m: fits[m].aic) == "rsg"

    def test_ngpl_ticks_flagged_on_edge(self):
        assert not fit_model("ngpl", ticks(), resolution=1e-3).converged

    def test_as_dict(self):
        fit = fit_model("nb", claims(), resolution=1e-3)
        assert set(fit.as_dict()) == {"p", "beta"}
        assert fit.aic == pytest.approx(4 - 2 * fit.loglik)
