"""Self-checks of the closed forms against independent computations.

Each check sweeps a parameter grid and reports the worst discrepancy. The
pmf under test can be swapped out, which is how the negative control
(a deliberately perturbed pmf) is exercised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import distribution as dist
from .characterization import (
    ConditionalLawSpec,
    conditional_law_pmf,
    hazard_from_increments,
    tail_identity_sides,
)
from .distribution import RSGParams, SGParams
from .sampling import RngStream, sample

__all__ = ["OracleResult", "parameter_grid", "run_oracles"]


@dataclass
class OracleResult:
    name: str
    worst: float
    tol: float
    points: int

    @property
    def passed(self) -> bool:
        return math.isfinite(self.worst) and self.worst <= self.tol

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name}: worst {self.worst:.3g} (tol {self.tol:g}, {self.points} points)"


def parameter_grid(dense: bool = False) -> list[RSGParams]:
    """50 ``(p, beta)`` points by default, 190 with ``dense``."""
    if dense:
        ps = np.round(np.linspace(0.05, 0.95, 19), 10)
        betas = np.round(np.linspace(0.1, 1.0, 10), 10)
    else:
        ps = np.round(np.linspace(0.05, 0.95, 10), 10)
        betas = (0.05, 0.3, 0.6, 0.9, 1.0)
    return [RSGParams(float(p), float(b)) for p in ps for b in betas]


def _support(params) -> np.ndarray:
    return np.arange(dist.truncation_point(params, tol=1e-17) + 1)


def run_oracles(
    dense: bool = False,
    pmf: Optional[Callable] = None,
    sampler_uniforms: int = 10_000,
) -> list[OracleResult]:
    """Run every check; ``pmf(params, x)`` defaults to the library pmf."""
    pmf = pmf or dist.pmf
    grid = parameter_grid(dense)
    out = []

    worst = 0.0
    for prm in grid:
        xs = _support(prm)
        worst = max(worst, abs(math.fsum(pmf(prm, xs)) - 1.0))
    out.append(OracleResult("normalization", worst, 1e-12, len(grid)))

    worst = 0.0
    for prm in grid:
        xs = _support(prm)
        worst = max(worst, float(np.max(np.abs(np.cumsum(pmf(prm, xs)) - dist.cdf(prm, xs)))))
    out.append(OracleResult("cdf matches cumulative pmf", worst, 1e-12, len(grid)))

    worst = 0.0
    for prm in grid:
        xs = _support(prm)
        probs = pmf(prm, xs)
        m = math.fsum(xs * probs)
        v = math.fsum((xs - m) ** 2 * probs)
        worst = max(worst, abs(m - dist.mean(prm)) / max(1.0, m), abs(v - dist.variance(prm)) / max(1.0, v))
    out.append(OracleResult("mean and variance match series", worst, 1e-10, len(grid)))

    worst = 0.0
    for prm in grid:
        xs = _support(prm)[:-1]
        probs = pmf(prm, xs)
        stepped = np.array([dist.recurrence_step(prm, int(x), float(px)) for x, px in zip(xs, probs)])
        nxt = pmf(prm, xs + 1)
        worst = max(worst, float(np.max(np.abs(stepped - nxt) / np.maximum(nxt, 1e-300))))
    out.append(OracleResult("recurrence reproduces pmf", worst, 1e-9, len(grid)))

    ps = np.linspace(0.05, 0.95, 19 if dense else 7)
    alphas = range(1, 9 if dense else 5)
    worst = 0.0
    for p in ps:
        for a in alphas:
            spec = ConditionalLawSpec(float(p), a)
            prm = SGParams(float(p), float(a))
            for x in range(0, 25):
                worst = max(worst, abs(conditional_law_pmf(spec, x) - float(pmf(prm, x))))
    out.append(OracleResult("conditional geometric law", worst, 1e-10, len(ps) * len(alphas)))

    worst = 0.0
    sg_grid = [SGParams(float(p), float(a)) for p in ps for a in (0.0, 0.5, 1.0, 2.0, 5.0)]
    for prm in sg_grid:
        for k in range(11):
            lhs, rhs = tail_identity_sides(prm, k)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    out.append(OracleResult("conditional tail expectation identity", worst, 1e-9, len(sg_grid)))

    worst = 0.0
    count = 0
    for prm in sg_grid:
        xs = np.arange(101)
        surv = dist.survival(prm, xs)
        ok = surv > 1e-250
        if not np.any(ok):
            continue
        count += 1
        direct = pmf(prm, xs[ok]) / surv[ok]
        rebuilt = hazard_from_increments(prm, 100)[ok]
        worst = max(worst, float(np.max(np.abs(rebuilt - direct) / np.maximum(1.0, np.abs(direct)))))
    out.append(OracleResult("hazard rebuilt from increments", worst, 1e-9, count))

    mismatches = 0
    for i, prm in enumerate(grid):
        rng = RngStream(12345, i)
        a = sample(prm, sampler_uniforms, rng, method="root")
        b = sample(prm, sampler_uniforms, rng, method="inverse")
        mismatches += int(np.count_nonzero(a != b))
    out.append(OracleResult("root-finding sampler equals inversion", float(mismatches), 0.0, len(grid)))
    return out
