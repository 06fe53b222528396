"""Closed-form functions of the skewed geometric distribution.

The distribution is obtained by weighting a geometric(p) pmf ``q p^x`` with
its own cdf evaluated at ``alpha * x`` and renormalizing::

    P(x) = q p^x (1 - p^(alpha x + 1)) / W,   W = 1 - p q / (1 - p^(alpha + 1))

Two parameterizations are supported. :class:`SGParams` carries ``(p, alpha)``
and :class:`RSGParams` carries ``(p, beta)`` with ``beta = p**alpha``. Every
function in this module accepts either; internally everything is evaluated
in terms of ``(p, beta)`` so that ``beta = 1`` (the geometric boundary) is
handled without special cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

__all__ = [
    "SGParams",
    "RSGParams",
    "DiscreteBase",
    "PmfTable",
    "convert",
    "normalizer",
    "pmf",
    "logpmf",
    "cdf",
    "survival",
    "log_survival",
    "hazard",
    "pgf",
    "mean",
    "variance",
    "dispersion_index",
    "recurrence_step",
    "limit_pmf_alpha_infinity",
    "mode_threshold",
    "truncation_point",
    "materialize",
    "geometric_base",
    "azzalini_weighted",
]

TAIL_TOL = 1e-14


@dataclass(frozen=True)
class SGParams:
    """Skewed geometric parameters ``(p, alpha)``.

    ``alpha`` may be any non-negative real; ``alpha = 0`` is the geometric
    distribution.
    """

    p: float
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must lie in (0, 1), got {self.p!r}")
        if not (self.alpha >= 0.0) or math.isinf(self.alpha):
            raise ValueError(f"alpha must be a finite non-negative real, got {self.alpha!r}")

    @property
    def beta(self) -> float:
        return self.p ** self.alpha


@dataclass(frozen=True)
class RSGParams:
    """Reparameterized skewed geometric parameters ``(p, beta)``, ``beta = p**alpha``."""

    p: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must lie in (0, 1), got {self.p!r}")
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must lie in (0, 1], got {self.beta!r}")

    @property
    def alpha(self) -> float:
        if self.beta == 1.0:
            return 0.0
        return math.log(self.beta) / math.log(self.p)


Params = Union[SGParams, RSGParams]


def convert(params: Params) -> Params:
    """Switch between the ``(p, alpha)`` and ``(p, beta)`` parameterizations."""
    if isinstance(params, SGParams):
        return RSGParams(params.p, params.beta)
    if isinstance(params, RSGParams):
        return SGParams(params.p, params.alpha)
    raise TypeError(f"expected SGParams or RSGParams, got {type(params).__name__}")


def _pb(params: Params) -> tuple[float, float]:
    if isinstance(params, (SGParams, RSGParams)):
        return params.p, params.beta
    raise TypeError(f"expected SGParams or RSGParams, got {type(params).__name__}")


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _counts(x) -> np.ndarray:
    x = np.asarray(x)
    if np.any(x < 0) or np.any(x != np.floor(x)):
        raise ValueError("support is the non-negative integers")
    return x.astype(float)


def normalizer(params: Params) -> float:
    """Total mass ``W`` of the unnormalized weighted geometric pmf."""
    p, beta = _pb(params)
    q = 1.0 - p
    return (1.0 - p * beta - p * q) / (1.0 - p * beta)


def _log_norm_const(p, beta):
    # log of (1 - p beta) / (1 - p beta - p q), i.e. -log W
    q = 1.0 - p
    return np.log1p(-p * beta) - np.log(1.0 - p * beta - p * q)


def logpmf(params: Params, x):
    """Natural log of the pmf; stays finite where ``pmf`` would underflow."""
    p, beta = _pb(params)
    x = _counts(x)
    val = (
        math.log1p(-p)
        + x * math.log(p)
        + np.log1p(-p * np.power(beta, x))
        + _log_norm_const(p, beta)
    )
    return _out(val)


def pmf(params: Params, x):
    """Probability mass at ``x`` (scalar or array)."""
    return _out(np.exp(logpmf(params, x)))


def log_survival(params: Params, x):
    """log P(X > x).

    Uses ``P(X > x) = p^(x+1) (1 - q p beta^(x+1) / (1 - p beta)) / W``.
    """
    p, beta = _pb(params)
    q = 1.0 - p
    x = np.asarray(x, dtype=float)
    xp1 = x + 1.0
    val = (
        xp1 * math.log(p)
        + np.log1p(-q * p * np.power(beta, xp1) / (1.0 - p * beta))
        + _log_norm_const(p, beta)
    )
    # P(X > x) = 1 for x < 0
    val = np.where(x < 0, 0.0, val)
    return _out(val)


def survival(params: Params, x):
    """P(X > x)."""
    return _out(np.exp(log_survival(params, x)))


def cdf(params: Params, x):
    """P(X <= x) from the closed form."""
    return _out(-np.expm1(log_survival(params, x)))


def hazard(params: Params, x):
    """Failure rate ``P(X = x) / P(X > x)``.

    Raises
    ------
    ValueError
        If ``P(X > x)`` underflows to zero at some requested ``x``.
    """
    p, beta = _pb(params)
    q = 1.0 - p
    x = _counts(x)
    sf = np.exp(log_survival(params, x))
    if np.any(sf == 0.0):
        bad = np.atleast_1d(x)[np.atleast_1d(sf) == 0.0]
        raise ValueError(f"survival function underflows to 0 at x={bad[0]:g}; support numerically exhausted")
    bx = np.power(beta, x)
    num = q * (1.0 - p * bx) * (1.0 - p * beta)
    den = p * (1.0 - p * beta - q * p * bx * beta)
    return _out(num / den)


def pgf(params: Params, z):
    """Probability generating function ``[H(z) - p H(beta z)] / W``, ``H`` geometric."""
    p, beta = _pb(params)
    q = 1.0 - p
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0):
        raise ValueError("pgf is evaluated on |z| <= 1")

    def H(t):
        return q / (1.0 - p * t)

    return _out((H(z) - p * H(beta * z)) / normalizer(params))


def mean(params: Params) -> float:
    p, beta = _pb(params)
    q = 1.0 - p
    g1 = p / q - q * p * p * beta / (1.0 - p * beta) ** 2
    return g1 / normalizer(params)


def variance(params: Params) -> float:
    """Variance as ``G''(1) + mean - mean**2`` from the pgf."""
    p, beta = _pb(params)
    q = 1.0 - p
    g2 = (2.0 * p * p / (q * q) - 2.0 * q * p ** 3 * beta * beta / (1.0 - p * beta) ** 3) / normalizer(params)
    mu = mean(params)
    return g2 + mu - mu * mu


def dispersion_index(params: Params) -> float:
    """Variance-to-mean ratio."""
    return variance(params) / mean(params)


def recurrence_step(params: Params, x: int, p_x: float) -> float:
    """Advance ``P(x)`` to ``P(x + 1)`` with the two-term recurrence."""
    p, beta = _pb(params)
    ratio = p * (1.0 - p * beta ** (x + 1)) / (1.0 - p * beta ** x)
    return ratio * p_x


def limit_pmf_alpha_infinity(p: float, x):
    """Pointwise limit of the pmf as ``alpha`` grows without bound."""
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    q = 1.0 - p
    x = _counts(x)
    val = np.where(x == 0, q * q, q * np.power(p, x)) / (1.0 - p * q)
    return _out(val)


def mode_threshold(p: float) -> Optional[float]:
    """Smallest ``alpha`` above which the mode moves off zero.

    The mode is nonzero exactly when ``P(1) > P(0)``, i.e. when
    ``alpha > log(2p - 1) / log(p) - 2``. For ``p <= 0.5`` the mode is 0 for
    every ``alpha`` and ``None`` is returned.
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    if p <= 0.5:
        return None
    return math.log(2.0 * p - 1.0) / math.log(p) - 2.0


def truncation_point(params: Params, tol: float = TAIL_TOL) -> int:
    """Smallest ``X`` with tail bound ``p^(X+1) / W < tol``.

    Since ``P(x) <= q p^x / W`` the mass beyond ``X`` is below the bound.
    """
    p, _ = _pb(params)
    W = normalizer(params)
    X = math.ceil((math.log(tol) + math.log(W)) / math.log(p)) - 1
    X = max(X, 0)
    while p ** (X + 1) / W >= tol:
        X += 1
    while X > 0 and p ** X / W < tol:
        X -= 1
    return X


@dataclass(frozen=True)
class PmfTable:
    """Truncated pmf for ``x = 0..len(probabilities) - 1`` plus the remaining mass."""

    probabilities: np.ndarray
    tail_mass: float

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        if np.any(probs < 0) or self.tail_mass < 0:
            raise ValueError("probabilities must be non-negative")
        if abs(probs.sum() + self.tail_mass - 1.0) > 1e-12:
            raise ValueError("table mass does not sum to one")
        object.__setattr__(self, "probabilities", probs)

    @property
    def x_max(self) -> int:
        return len(self.probabilities) - 1

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probabilities)

    def expected_frequencies(self, n: float) -> np.ndarray:
        return n * self.probabilities


def materialize(params: Params, x_max: Optional[int] = None, tol: float = TAIL_TOL) -> PmfTable:
    """Tabulate the pmf up to ``x_max`` (default: the truncation point for ``tol``)."""
    if x_max is None:
        x_max = truncation_point(params, tol)
    probs = pmf(params, np.arange(x_max + 1))
    tail = float(survival(params, x_max))
    return PmfTable(np.atleast_1d(probs), tail)


@dataclass(frozen=True)
class DiscreteBase:
    """A pmf on the non-negative integers together with its pgf."""

    pmf: Callable[[int], float]
    pgf: Callable[[float], float]


def geometric_base(p: float) -> DiscreteBase:
    """Geometric ``q p^x`` base distribution."""
    q = 1.0 - p
    return DiscreteBase(pmf=lambda x: q * p ** x, pgf=lambda z: q / (1.0 - p * z))


def azzalini_weighted(base: DiscreteBase, p: float, alpha: float) -> DiscreteBase:
    """Skew an arbitrary base pmf with the weight ``1 - p^(alpha x + 1)``.

    The normalizer is ``W = 1 - p H(p^alpha)`` and the resulting pgf is
    ``[H(z) - p H(p^alpha z)] / W`` where ``H`` is the base pgf.
    """
    if not (0.0 < p < 1.0) or not alpha >= 0.0:
        raise ValueError("need 0 < p < 1 and alpha >= 0")
    beta = p ** alpha
    W = 1.0 - p * base.pgf(beta)

    def weighted_pmf(x):
        return base.pmf(x) * (1.0 - p * beta ** x) / W

    def weighted_pgf(z):
        return (base.pgf(z) - p * base.pgf(beta * z)) / W

    return DiscreteBase(pmf=weighted_pmf, pgf=weighted_pgf)
