"""Brute-force oracles for the characterization identities.

Each routine here recomputes a quantity from first principles (plain
geometric sums, truncated series) so it can be compared against the closed
forms in :mod:`skewgeom.distribution`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distribution import TAIL_TOL, SGParams, hazard, pmf, survival

__all__ = [
    "ConditionalLawSpec",
    "conditional_law_pmf",
    "conditional_law_denominator",
    "tail_identity_sides",
    "hazard_increment",
    "hazard_from_increments",
]


@dataclass(frozen=True)
class ConditionalLawSpec:
    """Two i.i.d. geometric(p) variables ``X1, X2`` conditioned on ``X2 <= alpha X1``."""

    p: float
    alpha: int
    truncation: Optional[int] = None

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must lie in (0, 1), got {self.p!r}")
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise ValueError(f"alpha must be a positive integer, got {self.alpha!r}")
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation must be positive")

    @property
    def n_terms(self) -> int:
        if self.truncation is not None:
            return self.truncation
        # geometric tail p^(J+1) below TAIL_TOL
        return int(math.ceil(math.log(TAIL_TOL) / math.log(self.p)))


def _geometric_tables(spec: ConditionalLawSpec):
    J = spec.n_terms
    a = int(spec.alpha)
    q = 1.0 - spec.p
    probs = q * spec.p ** np.arange(a * J + 1, dtype=float)
    # cdf by accumulation, deliberately not the closed form
    cum = np.cumsum(probs)
    return probs, cum, J, a


def conditional_law_denominator(spec: ConditionalLawSpec) -> float:
    """P(X2 <= alpha X1) by direct summation over ``X1``."""
    probs, cum, J, a = _geometric_tables(spec)
    j = np.arange(J + 1)
    return math.fsum(probs[j] * cum[a * j])


def conditional_law_pmf(spec: ConditionalLawSpec, x: int) -> float:
    """P(X1 = x | X2 <= alpha X1) for i.i.d. geometric ``X1, X2``."""
    if x < 0:
        raise ValueError("x must be non-negative")
    q = 1.0 - spec.p
    a = int(spec.alpha)
    num = q * spec.p ** x * math.fsum(q * spec.p ** k for k in range(a * x + 1))
    return num / conditional_law_denominator(spec)


def _tail_integrand(p, alpha, x):
    pa1 = p ** (alpha + 1)
    den = 1.0 - p + p * p - pa1
    return (p ** x * (1.0 + p) * (1.0 - pa1) - p ** (x * (alpha + 1) + 1) * (1.0 - p) * (1.0 + pa1)) / den


def tail_identity_sides(params: SGParams, k: int) -> tuple[float, float]:
    """Both sides of the conditional-expectation identity given ``X >= k``.

    The left side is a truncated series ``sum_{x>=k} g(x) P(x) / P(X >= k)``;
    the right side is the closed form
    ``p^k (1 - p^(a+1) - p^(a k+1) + p^(a k+2)) / (1 - p + p^2 - p^(a+1))``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    p, a = params.p, params.alpha
    X = k
    while p ** (X + 1) >= TAIL_TOL * 1e-2:
        X += 1
    xs = np.arange(k, X + 1)
    terms = _tail_integrand(p, a, xs.astype(float)) * pmf(params, xs)
    tail_prob = float(survival(params, k - 1))
    lhs = math.fsum(terms) / tail_prob
    rhs = p ** k * (1.0 - p ** (a + 1) - p ** (a * k + 1) + p ** (a * k + 2)) / (1.0 - p + p * p - p ** (a + 1))
    return lhs, rhs


def hazard_increment(params: SGParams, x) -> np.ndarray:
    """``h(x+1) - h(x)`` from its closed form."""
    p, b = params.p, params.beta
    q = 1.0 - p
    x = np.asarray(x, dtype=float)
    bx = b ** x
    d1 = 1.0 - p * b - q * p * bx * b
    d2 = 1.0 - p * b - q * p * bx * b * b
    return q * (1.0 - p * b) * bx * (1.0 - b) ** 2 / (d1 * d2)


def hazard_from_increments(params: SGParams, x_max: int) -> np.ndarray:
    """Rebuild ``h(0..x_max)`` from ``h(0)`` and the increment formula.

    ``h(0) = q^2 (1 - p^(a+1)) / (p (1 - 2 p^(a+1) + p^(a+2)))``.
    """
    p, a = params.p, params.alpha
    q = 1.0 - p
    h0 = q * q * (1.0 - p ** (a + 1)) / (p * (1.0 - 2.0 * p ** (a + 1) + p ** (a + 2)))
    inc = hazard_increment(params, np.arange(x_max))
    return np.concatenate([[h0], h0 + np.cumsum(inc)])

