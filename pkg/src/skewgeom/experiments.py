"""Monte-Carlo harnesses and reproduction drivers.

``mle_performance`` measures estimator bias, MSE and mean Wald interval for
one simulation cell. ``power_study`` estimates the rejection rate of the
geometric-vs-RSG likelihood ratio test. ``reproduce_table`` fits every model
to an embedded dataset and compares the result with the published values
stored in :mod:`skewgeom.reference`.

Every replication ``r`` of a cell draws from ``RngStream(seed, r)``, so
results are bit-identical for a given seed and replications can be run in
any order.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from . import reference
from .data import DATASETS, CountData, default_gof_bins
from .distribution import RSGParams
from .estimation import DegenerateDataError, SingularInformationWarning, mle_grid
from .inference import LR_CRITICAL_5PCT, SmallExpectedWarning, gof, lr_test
from .models import MODELS, fit_model
from .sampling import RngStream, sample

__all__ = [
    "SimCell",
    "PerfRow",
    "PowerResult",
    "Check",
    "TableReport",
    "mle_performance",
    "power_study",
    "cell_seed",
    "reproduce_table",
    "performance_checks",
    "power_checks",
    "to_json",
    "performance_csv",
    "power_csv",
]

SIM_RESOLUTION = 1e-3


# ---------------------------------------------------------------------------
# estimator performance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimCell:
    """One simulation setting: true ``(p, beta)``, sample size and replications."""

    p: float
    beta: float
    n: int
    reps: int
    seed: int

    def __post_init__(self):
        RSGParams(self.p, self.beta)
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.reps < 1:
            raise ValueError("reps must be positive")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class PerfRow:
    """Averages over the usable replications of one cell."""

    p: float
    beta: float
    n: int
    reps: int
    bias_p: float
    mse_p: float
    mean_ci_p: tuple
    bias_beta: float
    mse_beta: float
    mean_ci_beta: tuple
    degenerate: int = 0
    no_ci: int = 0
    resolution: float = SIM_RESOLUTION
    se_mse_p: float = math.nan
    se_mse_beta: float = math.nan

    @property
    def used(self) -> int:
        return self.reps - self.degenerate

    def as_dict(self) -> dict:
        d = asdict(self)
        d["mean_ci_p"] = list(self.mean_ci_p)
        d["mean_ci_beta"] = list(self.mean_ci_beta)
        return d


def _mean(values) -> float:
    values = [v for v in values if math.isfinite(v)]
    return math.fsum(values) / len(values) if values else math.nan


def _se(values: np.ndarray) -> float:
    # Monte-Carlo standard error of a mean
    if len(values) < 2:
        return math.nan
    m = _mean(values)
    return math.sqrt(math.fsum((values - m) ** 2) / (len(values) - 1) / len(values))


def mle_performance(
    cell: SimCell,
    resolution: float = SIM_RESOLUTION,
    method: str = "inverse",
) -> PerfRow:
    """Bias, MSE and mean 95% Wald interval of the grid MLE for one cell.

    Replications whose sample is all zeros have no MLE; they are skipped and
    counted in ``degenerate``. Replications with a singular information
    matrix keep their point estimates but contribute no interval (``no_ci``).
    """
    truth = RSGParams(cell.p, cell.beta)
    est_p, est_b, ci_p, ci_b = [], [], [], []
    degenerate = 0
    for r in range(cell.reps):
        x = sample(truth, cell.n, RngStream(cell.seed, r), method=method)
        data = CountData.from_observations(x)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SingularInformationWarning)
                res = mle_grid(data, resolution=resolution)
        except DegenerateDataError:
            degenerate += 1
            continue
        est_p.append(res.p_hat)
        est_b.append(res.beta_hat)
        ci_p.append(res.ci_p)
        ci_b.append(res.ci_beta)
    if not est_p:
        nan2 = (math.nan, math.nan)
        return PerfRow(cell.p, cell.beta, cell.n, cell.reps, math.nan, math.nan, nan2, math.nan, math.nan, nan2,
                       degenerate, 0, resolution)
    ep, eb = np.array(est_p), np.array(est_b)
    no_ci = sum(1 for c in ci_p if not math.isfinite(c[0]))
    return PerfRow(
        p=cell.p,
        beta=cell.beta,
        n=cell.n,
        reps=cell.reps,
        bias_p=_mean(ep - cell.p),
        mse_p=_mean((ep - cell.p) ** 2),
        mean_ci_p=(_mean(c[0] for c in ci_p), _mean(c[1] for c in ci_p)),
        bias_beta=_mean(eb - cell.beta),
        mse_beta=_mean((eb - cell.beta) ** 2),
        mean_ci_beta=(_mean(c[0] for c in ci_b), _mean(c[1] for c in ci_b)),
        degenerate=degenerate,
        no_ci=no_ci,
        resolution=resolution,
        se_mse_p=_se((ep - cell.p) ** 2),
        se_mse_beta=_se((eb - cell.beta) ** 2),
    )


# ---------------------------------------------------------------------------
# power of the likelihood ratio test
# ---------------------------------------------------------------------------


def cell_seed(seed: int, *key: int) -> int:
    """Independent 64-bit seed for a cell labelled by integer ``key``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class PowerResult:
    """Rejection rates indexed ``[beta, n]`` for one ``p``."""

    p: float
    betas: tuple
    sizes: tuple
    reps: int
    level: float
    critical: float
    rates: np.ndarray
    seed: int
    resolution: float = SIM_RESOLUTION

    def rate(self, beta: float, n: int) -> float:
        return float(self.rates[self.betas.index(beta), self.sizes.index(n)])

    def rows(self):
        return [(self.p, b, n, float(self.rates[i, j])) for i, b in enumerate(self.betas) for j, n in enumerate(self.sizes)]


def _critical(level: float) -> float:
    # the conventional rounded 5% point keeps decisions identical to the published ones
    if level == 0.05:
        return LR_CRITICAL_5PCT
    return float(stats.chi2.isf(level, 1))


def power_study(
    p: float,
    betas: Sequence[float],
    sizes: Sequence[int],
    reps: int,
    level: float = 0.05,
    seed: int = 0,
    resolution: float = SIM_RESOLUTION,
) -> PowerResult:
    """Empirical rejection rate of the LR test for each ``(beta, n)``.

    Cell ``(i, j)`` uses seed ``cell_seed(seed, i, j)`` and replication
    ``r`` draws from stream ``r``, so the same seed reuses the same random
    numbers across values of ``p``. An all-zero sample counts as a
    non-rejection.
    """
    betas = tuple(float(b) for b in betas)
    sizes = tuple(int(n) for n in sizes)
    if reps < 1:
        raise ValueError("reps must be positive")
    if not (0.0 < level < 1.0):
        raise ValueError("level must lie in (0, 1)")
    for b in betas:
        if not (0.0 < b <= 1.0):
            raise ValueError("betas must lie in (0, 1]")
    if any(n < 1 for n in sizes):
        raise ValueError("sizes must be positive")
    crit = _critical(level)
    rates = np.zeros((len(betas), len(sizes)))
    for i, b in enumerate(betas):
        truth = RSGParams(p, b)
        for j, n in enumerate(sizes):
            s = cell_seed(seed, i, j)
            hits = 0
            for r in range(reps):
                data = CountData.from_observations(sample(truth, n, RngStream(s, r)))
                if data.all_zero():
                    continue
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", SingularInformationWarning)
                    rep = lr_test(data, resolution=resolution, critical=crit)
                hits += rep.reject_at_5pct
            rates[i, j] = hits / reps
    return PowerResult(float(p), betas, sizes, reps, level, crit, rates, int(seed), resolution)


# ---------------------------------------------------------------------------
# dataset reproduction
# ---------------------------------------------------------------------------


@dataclass
class Check:
    """One comparison of a computed value against a published target."""

    name: str
    value: float
    target: float
    tol: float
    relative: bool = False
    bound: str = "both"

    @property
    def passed(self) -> bool:
        if not (math.isfinite(self.value)):
            return False
        slack = self.tol * abs(self.target) if self.relative else self.tol
        if self.bound == "max":
            return self.value <= self.target + slack + 1e-12
        if self.bound == "min":
            return self.value > self.target - slack
        return abs(self.value - self.target) <= slack + 1e-12

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        if self.bound == "max":
            return f"{mark}  {self.name}: {self.value:.6g} (at most {self.target + self.tol:.6g})"
        if self.bound == "min":
            return f"{mark}  {self.name}: {self.value:.6g} (above {self.target - self.tol:.6g})"
        kind = f"±{self.tol:.0%}" if self.relative else f"±{self.tol:g}"
        return f"{mark}  {self.name}: {self.value:.6g} (target {self.target:g} {kind})"


_TOLERANCES = {
    "claims": {"p": 0.005, "beta": 0.005, "aic": 0.1, "chi2": 0.05, "p_value": 0.005, "lr": 0.02, "expected": 0.5},
    "ticks": {"p": 0.02, "beta": 0.02, "aic": 0.5, "chi2": 0.3, "lr": 0.3},
}
_COMPETITOR_AIC_TOL = 0.5
_DISPERSION_REL_TOL = 0.30


@dataclass
class TableReport:
    """All five fits to one dataset plus the checks against published values."""

    dataset: str
    data: CountData
    fits: dict
    gofs: dict
    lr: object
    checks: list
    notes: list = field(default_factory=list)
    variants: dict = field(default_factory=dict)
    resolution: float = 1e-3

    @property
    def ranking(self) -> list:
        return sorted(self.fits, key=lambda m: self.fits[m].aic)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        models = {}
        for name, fit in self.fits.items():
            g = self.gofs[name]
            models[name] = {
                "params": fit.as_dict(),
                "loglik": fit.loglik,
                "aic": fit.aic,
                "converged": fit.converged,
                "variances": list(fit.variances),
                "cov": fit.cov,
                "gof": {
                    "chi2": g.chi2,
                    "df": g.df,
                    "p_value": g.p_value,
                    "bins": [{"bin": b, "observed": o, "expected": e} for b, o, e in g.rows()],
                },
            }
        return {
            "dataset": self.dataset,
            "n": self.data.n,
            "resolution": self.resolution,
            "models": models,
            "ranking": self.ranking,
            "lr": {
                "lambda": self.lr.lam,
                "p_tilde": self.lr.p_tilde,
                "p_hat": self.lr.p_hat,
                "beta_hat": self.lr.beta_hat,
                "reject": self.lr.reject_at_5pct,
                "decision": self.lr.decision,
            },
            "checks": [
                {"name": c.name, "value": c.value, "target": c.target, "tol": c.tol, "relative": c.relative,
                 "bound": c.bound, "passed": c.passed}
                for c in self.checks
            ],
            "variants": self.variants,
            "notes": list(self.notes),
        }


def _gof_bins(dataset: str, data: CountData):
    # claims: one cell per observed value with an open last cell; ticks: the data's own cells
    return default_gof_bins(data) if data.is_exact else list(data.bins)


def _rsg_variant(data: CountData, resolution: float) -> dict:
    fit = fit_model("rsg", data, resolution=resolution)
    lr = lr_test(data, resolution=resolution, mle=fit.mle)
    return {
        "p": fit.params[0],
        "beta": fit.params[1],
        "loglik": fit.loglik,
        "aic": fit.aic,
        "lambda": lr.lam,
        "var_p": fit.variances[0],
        "var_beta": fit.variances[1],
        "cov": fit.cov,
    }


TABLE_RESOLUTION = 1e-3


def reproduce_table(dataset: str, resolution: float = TABLE_RESOLUTION) -> TableReport:
    """Fit all models to an embedded dataset and check against the published table.

    The default lattice spacing is 1e-3, the spacing on which the published
    estimates lie; the RSG fit on the 1e-4 lattice is reported under
    ``variants["lattice_1e-4"]``.

    For grouped data (ticks) the primary fit uses the grouped likelihood. A
    second variant, with every grouped observation placed at its cell's
    lower endpoint, is reported alongside so the effect of the grouping
    assumption is visible.
    """
    if dataset not in DATASETS:
        raise ValueError(f"unknown dataset {dataset!r}; choose from {', '.join(DATASETS)}")
    data = DATASETS[dataset]()
    ref = reference.CLAIMS_TABLE if dataset == "claims" else reference.TICKS_TABLE
    tol = _TOLERANCES[dataset]
    bins = _gof_bins(dataset, data)

    fits, gofs = {}, {}
    for name in MODELS:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", (SmallExpectedWarning, SingularInformationWarning))
            fits[name] = fit_model(name, data, resolution=resolution)
            gofs[name] = gof(data, name, fits[name].params, bins=bins)
    rsg = fits["rsg"]
    lr = lr_test(data, resolution=resolution, mle=rsg.mle)

    checks = [
        Check("rsg p", rsg.params[0], ref["params"]["rsg"][0], tol["p"]),
        Check("rsg beta", rsg.params[1], ref["params"]["rsg"][1], tol["beta"]),
        Check("rsg aic", rsg.aic, ref["aic"]["rsg"], tol["aic"]),
        Check("rsg chi2", gofs["rsg"].chi2, ref["chi2"]["rsg"][0], tol["chi2"]),
        Check("rsg df", gofs["rsg"].df, ref["chi2"]["rsg"][1], 0),
        Check("lr lambda", lr.lam, ref["lr"], tol["lr"]),
        Check("lr decision", float(lr.reject_at_5pct), float(ref["reject"]), 0),
    ]
    if "p_value" in tol:
        checks.append(Check("rsg p-value", gofs["rsg"].p_value, ref["p_value"]["rsg"], tol["p_value"]))
    if "expected" in tol:
        for (b, _, e), target in zip(gofs["rsg"].rows(), ref["expected"]["rsg"]):
            checks.append(Check(f"rsg expected[{b}]", e, target, tol["expected"]))
    for label, value, target in (
        ("var p", rsg.variances[0], ref["variances"]["rsg"][0]),
        ("var beta", rsg.variances[1], ref["variances"]["rsg"][1]),
        ("cov", rsg.cov, ref["cov_rsg"]),
    ):
        checks.append(Check(f"rsg {label}", value, target, _DISPERSION_REL_TOL, relative=True))

    notes = []
    for name in MODELS:
        if name == "rsg":
            continue
        a, b = ref["params"][name]
        admissible = _admissible(name, a, b)
        if admissible:
            checks.append(Check(f"{name} aic", fits[name].aic, ref["aic"][name], _COMPETITOR_AIC_TOL))
        else:
            notes.append(f"{name}: published estimates ({a}, {b}) lie outside the parameter domain; AIC not compared")
        if not fits[name].converged:
            notes.append(f"{name}: maximum on the edge of the search lattice; estimates may be unbounded")

    order_ok = _ranking_matches(dataset, [m for m in sorted(fits, key=lambda m: fits[m].aic)])
    checks.append(Check("aic ordering", float(order_ok), 1.0, 0))

    variants = {}
    if resolution != 1e-4:
        variants["lattice_1e-4"] = _rsg_variant(data, 1e-4)
    if not data.is_exact:
        variants["grouped"] = _rsg_variant(data, resolution)
        variants["lower_endpoint"] = _rsg_variant(data.point_expansion(), resolution)
        target = ref["aic"]["rsg"]
        placements = {k: variants[k] for k in ("grouped", "lower_endpoint")}
        if any(abs(v["aic"] - target) > tol["aic"] for v in placements.values()):
            notes.append(
                "rsg AIC differs from the published value under both likelihood variants: "
                + ", ".join(f"{k} {v['aic']:.2f}" for k, v in placements.items())
                + f" vs {target}; the published value cannot be recovered from the grouped table"
            )
    return TableReport(dataset, data, fits, gofs, lr, checks, notes, variants, resolution)


def _admissible(name: str, a: float, b: float) -> bool:
    if name == "nd":
        return a < 1.0 and 0.0 < b < 1.0
    if name in ("wg", "nb"):
        return a > 0.0 and 0.0 < b < 1.0
    if name == "ngpl":
        return a > 0.0 and b > 0.0
    return 0.0 < a < 1.0 and 0.0 < b <= 1.0


def _ranking_matches(dataset: str, ranking: list) -> bool:
    if dataset == "claims":
        # nb and nd are tied in the published ordering
        return ranking[:2] == ["rsg", "wg"] and set(ranking[2:4]) == {"nb", "nd"} and ranking[4] == "ngpl"
    return ranking == ["rsg", "wg", "nb", "nd", "ngpl"]


def performance_checks(rows: Sequence[PerfRow]) -> list:
    """Compare simulated rows with the published ones at reduced scale.

    Per cell: ``|bias_p| <= 3 |published bias_p| + 0.003`` and
    ``mse_p <= 3 published mse_p + 0.0005``. Across sizes within a
    ``(p, beta)`` cell: ``mse_p`` at the larger ``n`` may exceed the smaller
    ``n`` value by at most two Monte-Carlo standard errors.
    """
    checks = []
    for r in rows:
        try:
            ref = reference.performance_row(r.p, r.beta, r.n)
        except KeyError:
            continue
        tag = f"p={r.p:g} beta={r.beta:g} n={r.n}"
        checks.append(Check(f"|bias_p| {tag}", abs(r.bias_p), 3 * abs(ref["bias_p"]) + 0.003, 0.0, bound="max"))
        checks.append(Check(f"mse_p {tag}", r.mse_p, 3 * ref["mse_p"] + 0.0005, 0.0, bound="max"))
    by_cell: dict = {}
    for r in rows:
        by_cell.setdefault((r.p, r.beta), []).append(r)
    for (p, b), group in by_cell.items():
        group = sorted(group, key=lambda r: r.n)
        for small, large in zip(group, group[1:]):
            noise = 2.0 * math.hypot(small.se_mse_p, large.se_mse_p)
            checks.append(Check(f"mse_p falls from n={small.n} to n={large.n} (p={p:g} beta={b:g})",
                                large.mse_p, small.mse_p, noise, bound="max"))
    return checks


def power_checks(results: Sequence[PowerResult], size_tol: float = 0.03) -> list:
    """Size near the nominal level at ``beta = 1`` and monotone power.

    Power may not rise with ``beta`` (below 1) or fall with ``n`` by more
    than ``2 / sqrt(reps)``. Where ``p = 0.7, beta = 0.1`` is present the
    rate at the largest ``n`` must exceed 0.9.
    """
    checks = []
    for res in results:
        noise = 2.0 / math.sqrt(res.reps)
        for j, n in enumerate(res.sizes):
            if 1.0 in res.betas:
                checks.append(Check(f"size p={res.p:g} n={n}", res.rate(1.0, n), res.level, size_tol))
            below = sorted((b for b in res.betas if b < 1.0), reverse=True)
            for hi, lo in zip(below, below[1:]):
                checks.append(Check(f"power rises as beta falls {hi:g}->{lo:g} (p={res.p:g} n={n})",
                                    res.rate(hi, n), res.rate(lo, n), noise, bound="max"))
        for i, b in enumerate(res.betas):
            for j in range(len(res.sizes) - 1):
                n1, n2 = res.sizes[j], res.sizes[j + 1]
                checks.append(Check(f"power rises with n {n1}->{n2} (p={res.p:g} beta={b:g})",
                                    res.rates[i, j], res.rates[i, j + 1], noise, bound="max"))
        if math.isclose(res.p, 0.7) and 0.1 in res.betas:
            n = max(res.sizes)
            checks.append(Check(f"power p=0.7 beta=0.1 n={n}", res.rate(0.1, n), 0.9, 0.0, bound="min"))
    return checks


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def performance_csv(rows: Sequence[PerfRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "beta", "n", "reps", "bias_p", "mse_p", "ci_p_lo", "ci_p_hi",
                "bias_beta", "mse_beta", "ci_beta_lo", "ci_beta_hi", "degenerate", "resolution"])
    for r in rows:
        w.writerow([r.p, r.beta, r.n, r.reps, repr(r.bias_p), repr(r.mse_p), repr(r.mean_ci_p[0]),
                    repr(r.mean_ci_p[1]), repr(r.bias_beta), repr(r.mse_beta), repr(r.mean_ci_beta[0]),
                    repr(r.mean_ci_beta[1]), r.degenerate, r.resolution])
    return buf.getvalue()


def power_csv(results: Sequence[PowerResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "beta", "n", "power"])
    for res in results:
        for p, b, n, rate in res.rows():
            w.writerow([p, b, n, repr(rate)])
    return buf.getvalue()


def to_json(obj) -> str:
    """JSON with full float precision; numpy scalars and arrays converted."""

    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return json.dumps(obj, default=default, indent=2, allow_nan=True)
