"""Tests for the simulation drivers and the table reproduction harness."""

import csv
import io
import json
import math

import numpy as np
import pytest

from skewgeom.data import CountData
from skewgeom.distribution import RSGParams
from skewgeom.estimation import mle_grid
from skewgeom.experiments import (
    Check,
    PerfRow,
    SimCell,
    cell_seed,
    mle_performance,
    performance_checks,
    performance_csv,
    power_checks,
    power_csv,
    power_study,
    reproduce_table,
    to_json,
)
from skewgeom.reference import PERFORMANCE_ROWS, POWER_BETAS, performance_row
from skewgeom.sampling import RngStream, sample


@pytest.fixture(scope="module")
def claims_report():
    return reproduce_table("claims")


@pytest.fixture(scope="module")
def ticks_report():
    return reproduce_table("ticks")


# =============================================================================
# Simulation cells
# =============================================================================


class TestSimCell:
    def test_validation(self):
        with pytest.raises(ValueError):
            SimCell(1.2, 0.5, 50, 10, 0)
        with pytest.raises(ValueError):
            SimCell(0.5, 0.0, 50, 10, 0)
        with pytest.raises(ValueError):
            SimCell(0.5, 0.5, 0, 10, 0)
        with pytest.raises(ValueError):
            SimCell(0.5, 0.5, 50, 0, 0)

    def test_cell_seed_distinct_and_stable(self):
        seeds = {cell_seed(7, i, j) for i in range(5) for j in range(5)}
        assert len(seeds) == 25
        assert cell_seed(7, 1, 2) == cell_seed(7, 1, 2)
        assert cell_seed(7, 1, 2) != cell_seed(8, 1, 2)


class TestMlePerformance:
    def test_single_replication_identity(self):
        cell = SimCell(0.5, 0.5, 50, 1, 3)
        row = mle_performance(cell)
        res = mle_grid(CountData.from_observations(sample(RSGParams(0.5, 0.5), 50, RngStream(3, 0))),
                       resolution=row.resolution)
        assert row.bias_p == pytest.approx(res.p_hat - 0.5, abs=1e-15)
        assert row.mse_p == pytest.approx(row.bias_p ** 2, abs=1e-15)
        assert row.mse_beta == pytest.approx(row.bias_beta ** 2, abs=1e-15)

    def test_deterministic(self):
        cell = SimCell(0.8, 0.8, 50, 20, 11)
        assert mle_performance(cell) == mle_performance(cell)

    def test_seed_changes_result(self):
        a = mle_performance(SimCell(0.8, 0.8, 50, 20, 11))
        b = mle_performance(SimCell(0.8, 0.8, 50, 20, 12))
        assert a.bias_p != b.bias_p

    def test_degenerate_replications_counted(self):
        row = mle_performance(SimCell(0.05, 0.05, 5, 30, 1))
        assert row.degenerate > 0
        assert row.used == 30 - row.degenerate

    @pytest.mark.parametrize("p,beta", [(0.8, 0.8), (0.5, 0.5)])
    def test_large_sample_cell(self, p, beta):
        row = mle_performance(SimCell(p, beta, 500, 200, 20240501))
        ref = performance_row(p, beta, 500)
        assert abs(row.bias_p) < 0.005
        assert row.mse_p < 0.001
        assert row.mean_ci_p[0] == pytest.approx(ref["ci_p"][0], abs=0.02)
        assert row.mean_ci_p[1] == pytest.approx(ref["ci_p"][1], abs=0.02)
        assert all(c.passed for c in performance_checks([row]))


class TestPerformanceChecks:
    def _row(self, n, bias_p, mse_p, se=1e-5):
        return PerfRow(0.5, 0.5, n, 200, bias_p, mse_p, (0.4, 0.6), 0.0, 0.01, (0.1, 0.9),
                       se_mse_p=se, se_mse_beta=se)

    def test_reference_rows_shape(self):
        assert len(PERFORMANCE_ROWS) == 54
        assert performance_row(0.5, 0.5, 500)["ci_p"] == (0.4753, 0.5273)
        with pytest.raises(KeyError):
            performance_row(0.5, 0.5, 123)

    def test_large_bias_fails(self):
        checks = performance_checks([self._row(500, 0.05, 0.0002)])
        assert not all(c.passed for c in checks)

    def test_mse_must_fall_with_n(self):
        rows = [self._row(50, 0.0, 0.001), self._row(500, 0.0, 0.003)]
        assert any(not c.passed and "falls" in c.name for c in performance_checks(rows))


# =============================================================================
# Power study
# =============================================================================


class TestPowerStudy:
    @pytest.fixture(scope="class")
    def small(self):
        return power_study(0.7, (1.0, 0.4, 0.1), (50, 200), reps=60, seed=5)

    def test_shape_and_range(self, small):
        assert small.rates.shape == (3, 2)
        assert np.all((small.rates >= 0) & (small.rates <= 1))
        assert small.critical == pytest.approx(3.841)

    def test_power_grows(self, small):
        assert small.rate(0.1, 200) > small.rate(1.0, 200)
        assert small.rate(0.1, 200) >= small.rate(0.1, 50) - 2 / math.sqrt(60)

    def test_deterministic(self, small):
        again = power_study(0.7, (1.0, 0.4, 0.1), (50, 200), reps=60, seed=5)
        np.testing.assert_array_equal(small.rates, again.rates)

    def test_other_level(self):
        res = power_study(0.5, (1.0,), (30,), reps=5, level=0.1, seed=1)
        assert res.critical == pytest.approx(2.7055, abs=1e-4)

    def test_checks_detect_bad_size(self, small):
        bad = power_study(0.7, (1.0, 0.1), (300,), reps=40, seed=2)
        bad.rates[0, 0] = 0.3
        assert not all(c.passed for c in power_checks([bad]))

    def test_published_grid(self):
        assert POWER_BETAS[0] == 1.0 and POWER_BETAS[-1] == 0.1


# =============================================================================
# Table reproduction
# =============================================================================


class TestReproduceClaims:
    def test_estimates(self, claims_report):
        rsg = claims_report.fits["rsg"]
        assert rsg.params == (0.145, 0.001)
        assert rsg.aic == pytest.approx(1990.58, abs=0.01)

    def test_rsg_checks_pass(self, claims_report):
        failing = [c.name for c in claims_report.checks if not c.passed]
        assert failing == ["aic ordering"]

    def test_ranking(self, claims_report):
        assert claims_report.ranking[0] == "rsg"
        assert claims_report.ranking[-1] == "ngpl"

    def test_lattice_variant(self, claims_report):
        v = claims_report.variants["lattice_1e-4"]
        assert v["p"] == pytest.approx(0.1454)
        assert v["aic"] <= claims_report.fits["rsg"].aic

    def test_json_round_trip(self, claims_report):
        d = json.loads(to_json(claims_report.as_dict()))
        assert d["dataset"] == "claims"
        assert set(d["models"]) == {"rsg", "wg", "nb", "nd", "ngpl"}


class TestReproduceTicks:
    def test_estimates(self, ticks_report):
        p, b = ticks_report.fits["rsg"].params
        assert p == pytest.approx(0.833, abs=0.01)
        assert b == pytest.approx(0.601, abs=0.02)

    def test_decision_matches(self, ticks_report):
        assert ticks_report.lr.reject_at_5pct
        assert next(c for c in ticks_report.checks if c.name == "lr decision").passed

    def test_variants_and_notes(self, ticks_report):
        assert {"grouped", "lower_endpoint", "lattice_1e-4"} <= set(ticks_report.variants)
        assert any("outside the parameter domain" in n for n in ticks_report.notes)

    def test_unknown_dataset(self):
        with pytest.raises(ValueError):
            reproduce_table("cars")


# =============================================================================
# Writers and checks
# =============================================================================


class TestWriters:
    def test_performance_csv(self):
        row = mle_performance(SimCell(0.5, 0.5, 30, 3, 0))
        rows = list(csv.reader(io.StringIO(performance_csv([row]))))
        assert rows[0][:6] == ["p", "beta", "n", "reps", "bias_p", "mse_p"]
        assert float(rows[1][4]) == row.bias_p

    def test_power_csv(self):
        res = power_study(0.5, (1.0, 0.5), (20,), reps=3, seed=0)
        rows = list(csv.reader(io.StringIO(power_csv([res]))))
        assert rows[0] == ["p", "beta", "n", "power"]
        assert len(rows) == 3

    def test_json_numpy(self):
        assert json.loads(to_json({"a": np.arange(3), "b": np.float64(0.5)})) == {"a": [0, 1, 2], "b": 0.5}


class TestCheck:
    def test_two_sided(self):
        assert Check("x", 1.04, 1.0, 0.05).passed
        assert not Check("x", 1.06, 1.0, 0.05).passed

    def test_relative(self):
        assert Check("x", 1.2, 1.0, 0.3, relative=True).passed

    def test_bounds(self):
        assert Check("x", 0.5, 1.0, 0.1, bound="max").passed
        assert not Check("x", 0.5, 1.0, 0.1, bound="min").passed
        assert not Check("x", math.nan, 1.0, 0.1).passed

    def test_line(self):
        assert Check("x", 1.0, 1.0, 0.1).line().startswith("PASS")
