"""Maximum likelihood for the ``(p, beta)`` parameterization.

Exact observations use the closed-form log-likelihood

    n log(1-p) + log(p) sum(x) + sum log(1 - p beta^x)
      + n log(1 - p beta) - n log(1 - p beta - p(1-p))

Grouped bins contribute ``count * log(bin mass)``, with open tails taken
from the survival function.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize, special, stats

from . import _grid
from .data import Bin, CountData

__all__ = [
    "DegenerateDataError",
    "SingularInformationWarning",
    "MleResult",
    "loglik_rsg",
    "loglik_sg",
    "loglik_geometric",
    "score_rsg",
    "score_sg",
    "hessian_rsg",
    "numerical_hessian",
    "observed_information",
    "dispersion_matrix",
    "mle_grid",
    "geometric_mle",
    "wald_ci",
]


class DegenerateDataError(ValueError):
    """Likelihood is maximized on the boundary ``p -> 0`` (all observations zero)."""


class SingularInformationWarning(RuntimeWarning):
    pass


# ---------------------------------------------------------------------------
# log-likelihood
# ---------------------------------------------------------------------------


def _log_const(p, beta):
    # log(1-p) + log(1 - p beta) - log(1 - p beta - p(1-p))
    return np.log1p(-p) + np.log1p(-p * beta) - np.log(1.0 - p * beta - p * (1.0 - p))


def _log_point(p, beta, x):
    return _log_const(p, beta) + x * np.log(p) + np.log1p(-p * np.power(beta, x))


def _log_tail(p, beta, lo):
    # log P(X >= lo)
    q = 1.0 - p
    return (
        lo * np.log(p)
        + np.log1p(-q * p * np.power(beta, lo) / (1.0 - p * beta))
        + np.log1p(-p * beta)
        - np.log(1.0 - p * beta - p * q)
    )


def _log_bin(p, beta, b: Bin):
    if b.is_tail:
        if b.lo == 0:
            return np.zeros(np.broadcast(p, beta).shape)
        return _log_tail(p, beta, float(b.lo))
    if b.is_point:
        return _log_point(p, beta, float(b.lo))
    terms = np.stack([_log_point(p, beta, float(x)) for x in b.values()])
    return special.logsumexp(terms, axis=0)


def loglik_rsg(p, beta, data: CountData):
    """Log-likelihood of ``RSG(p, beta)``; broadcasts over array ``p`` and ``beta``.

    Returns ``-inf`` wherever a probability underflows to zero or the
    parameters leave the domain.
    """
    p = np.asarray(p, dtype=float)
    beta = np.asarray(beta, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if data.is_exact:
            x = data.values
            c = data.counts.astype(float)
            total = float(np.dot(x, c))
            ll = data.n * _log_const(p, beta) + total * np.log(p)
            for xi, ci in zip(x, c):
                if xi > 0:
                    ll = ll + ci * np.log1p(-p * np.power(beta, xi))
                else:
                    ll = ll + ci * np.log1p(-p)
        else:
            ll = np.zeros(np.broadcast(p, beta).shape)
            for b, c in zip(data.bins, data.counts):
                if c:
                    ll = ll + c * _log_bin(p, beta, b)
    ll = np.where(np.isfinite(ll), ll, -np.inf)
    return float(ll) if ll.ndim == 0 else ll


def loglik_sg(p, alpha, data: CountData):
    """Log-likelihood in the ``(p, alpha)`` parameterization."""
    return loglik_rsg(p, np.power(p, alpha), data)


def loglik_geometric(p, data: CountData):
    """Geometric log-likelihood, i.e. :func:`loglik_rsg` at ``beta = 1``."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore"):
        if data.is_exact:
            ll = data.n * np.log1p(-p) + data.total() * np.log(p)
        else:
            ll = np.zeros_like(p)
            for b, c in zip(data.bins, data.counts):
                if not c:
                    continue
                if b.is_tail:
                    ll = ll + c * b.lo * np.log(p)
                else:
                    # P(lo <= X <= hi) = p^lo - p^(hi+1)
                    ll = ll + c * (b.lo * np.log(p) + np.log1p(-np.power(p, b.hi - b.lo + 1)))
    return float(ll) if np.ndim(ll) == 0 else ll


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------


def numerical_hessian(f, x0, h=1e-5) -> np.ndarray:
    """Central finite-difference Hessian; ``h`` is a scalar or per-coordinate step."""
    x0 = np.asarray(x0, dtype=float)
    k = len(x0)
    H = np.empty((k, k))
    eye = np.diag(np.broadcast_to(np.asarray(h, dtype=float), (k,)))
    for i in range(k):
        for j in range(i, k):
            if i == j:
                H[i, i] = (f(x0 + eye[i]) - 2.0 * f(x0) + f(x0 - eye[i])) / (eye[i, i] ** 2)
            else:
                H[i, j] = H[j, i] = (
                    f(x0 + eye[i] + eye[j]) - f(x0 + eye[i] - eye[j]) - f(x0 - eye[i] + eye[j]) + f(x0 - eye[i] - eye[j])
                ) / (4.0 * eye[i, i] * eye[j, j])
    return H


def _numerical_gradient(f, x0, h=1e-6) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    return np.array([(f(x0 + e) - f(x0 - e)) / (2.0 * h) for e in np.eye(len(x0)) * h])


def score_rsg(p: float, beta: float, data: CountData) -> np.ndarray:
    """Gradient ``(dl/dp, dl/dbeta)``. Analytic for exact data, central differences otherwise."""
    if not data.is_exact:
        return _numerical_gradient(lambda t: loglik_rsg(t[0], t[1], data), [p, beta])
    x, c, n = data.values, data.counts.astype(float), data.n
    q = 1.0 - p
    D = 1.0 - p * beta - p * q
    bx = np.power(beta, x)
    u = 1.0 - p * bx
    dp = -n / q + np.dot(c, x) / p - np.dot(c, bx / u) - n * beta / (1.0 - p * beta) - n * (-beta - 1.0 + 2.0 * p) / D
    xb = np.where(x > 0, x * np.power(beta, np.maximum(x - 1.0, 0.0)), 0.0)
    db = -p * np.dot(c, xb / u) - n * p / (1.0 - p * beta) + n * p / D
    return np.array([dp, db])


def score_sg(p: float, alpha: float, data: CountData) -> np.ndarray:
    """Gradient ``(dl/dp, dl/dalpha)`` of the ``(p, alpha)`` log-likelihood.

    For exact data::

        dl/dp = -n/q + sum(x)/p - sum((a x + 1) p^(a x) / (1 - p^(a x + 1)))
                - n (a+1) p^a / (1 - p^(a+1)) + n ((a+1) p^a + 1 - 2p) / D
        dl/da = -sum(x p^(a x + 1) log p / (1 - p^(a x + 1)))
                - n p^(a+1) log p / (1 - p^(a+1)) + n p^(a+1) log p / D

    with ``D = 1 - p^(a+1) - p(1-p)``.
    """
    if not data.is_exact:
        return _numerical_gradient(lambda t: loglik_sg(t[0], t[1], data), [p, alpha])
    x, c, n = data.values, data.counts.astype(float), data.n
    a = alpha
    q = 1.0 - p
    lp = math.log(p)
    pa1 = p ** (a + 1)
    D = 1.0 - pa1 - p * q
    pw = np.power(p, a * x + 1)
    dp = (
        -n / q
        + np.dot(c, x) / p
        - np.dot(c, (a * x + 1) * np.power(p, a * x) / (1.0 - pw))
        - n * (a + 1) * p ** a / (1.0 - pa1)
        + n * ((a + 1) * p ** a + 1.0 - 2.0 * p) / D
    )
    da = -np.dot(c, x * pw * lp / (1.0 - pw)) - n * pa1 * lp / (1.0 - pa1) + n * pa1 * lp / D
    return np.array([dp, da])


def hessian_rsg(p: float, beta: float, data: CountData) -> np.ndarray:
    """Second derivatives of :func:`loglik_rsg` in ``(p, beta)``.

    Closed form for exact data; finite differences (step 1e-5) for grouped data.
    """
    if not data.is_exact:
        return numerical_hessian(lambda t: loglik_rsg(t[0], t[1], data), [p, beta], h=1e-5)
    x, c, n = data.values, data.counts.astype(float), data.n
    q = 1.0 - p
    # -log D terms, D = 1 - p beta - p + p^2
    D = 1.0 - p * beta - p * q
    Dp, Db = -beta - 1.0 + 2.0 * p, -p
    Dpp, Dpb = 2.0, -1.0
    hpp = -Dpp / D + Dp * Dp / D ** 2
    hpb = -Dpb / D + Dp * Db / D ** 2
    hbb = Db * Db / D ** 2
    # log(1-p)
    hpp += -1.0 / q ** 2
    # log(1 - p beta)
    v = 1.0 - p * beta
    hpp += -beta ** 2 / v ** 2
    hpb += -1.0 / v - p * beta / v ** 2
    hbb += -p * p / v ** 2
    H = n * np.array([[hpp, hpb], [hpb, hbb]])
    # x log p
    H[0, 0] += -np.dot(c, x) / p ** 2
    # sum log(1 - p beta^x)
    bx = np.power(beta, x)
    u = 1.0 - p * bx
    bx1 = np.where(x > 0, np.power(beta, np.maximum(x - 1.0, 0.0)), 0.0)
    bx2 = np.where(x > 1, np.power(beta, np.maximum(x - 2.0, 0.0)), 0.0)
    H[0, 0] += -np.dot(c, bx ** 2 / u ** 2)
    cross = -np.dot(c, x * bx1 / u + p * x * bx1 * bx / u ** 2)
    H[0, 1] += cross
    H[1, 0] += cross
    H[1, 1] += -np.dot(c, p * x * (x - 1.0) * bx2 / u + (p * x * bx1) ** 2 / u ** 2)
    return H


def observed_information(p: float, beta: float, data: CountData) -> np.ndarray:
    """Negative Hessian of the log-likelihood; warns when it is not positive definite."""
    info = -hessian_rsg(p, beta, data)
    info = 0.5 * (info + info.T)
    if np.linalg.det(info) <= 0 or info[0, 0] <= 0:
        warnings.warn(
            f"observed information is singular or indefinite at p={p:g}, beta={beta:g}",
            SingularInformationWarning,
            stacklevel=2,
        )
    return info


def dispersion_matrix(info: np.ndarray) -> np.ndarray:
    """Inverse of the information, or NaNs when it is not positive definite."""
    info = np.asarray(info, dtype=float)
    if np.linalg.det(info) <= 0 or info[0, 0] <= 0:
        return np.full((2, 2), np.nan)
    return np.linalg.inv(info)


def wald_ci(estimate: float, variance: float, level: float = 0.95) -> tuple[float, float]:
    """``estimate +/- z * sqrt(variance)``. Endpoints are not clamped to the domain."""
    if variance < 0:
        raise ValueError("variance must be non-negative")
    if not (0.0 < level < 1.0):
        raise ValueError("level must lie in (0, 1)")
    z = float(stats.norm.ppf(0.5 + level / 2.0))
    half = z * math.sqrt(variance)
    return (estimate - half, estimate + half)


# ---------------------------------------------------------------------------
# grid search
# ---------------------------------------------------------------------------


@dataclass
class MleResult:
    """Grid maximum likelihood estimate of ``(p, beta)`` with Wald inference."""

    p_hat: float
    beta_hat: float
    loglik: float
    info: np.ndarray
    dispersion: np.ndarray
    ci_p: tuple[float, float]
    ci_beta: tuple[float, float]
    n: int
    resolution: float
    exhaustive: bool = False
    level: float = 0.95
    evaluations: int = field(default=0, repr=False)

    @property
    def alpha_hat(self) -> float:
        return 0.0 if self.beta_hat == 1.0 else math.log(self.beta_hat) / math.log(self.p_hat)

    @property
    def var_p(self) -> float:
        return float(self.dispersion[0, 0])

    @property
    def var_beta(self) -> float:
        return float(self.dispersion[1, 1])

    @property
    def cov(self) -> float:
        return float(self.dispersion[0, 1])

    @property
    def aic(self) -> float:
        return 4.0 - 2.0 * self.loglik


def _lattice_size(resolution: float) -> int:
    N = round(1.0 / resolution)
    if N < 2 or abs(N * resolution - 1.0) > 1e-9:
        raise ValueError(f"resolution must be 1/N for an integer N >= 2, got {resolution!r}")
    return N


def mle_grid(
    data: CountData,
    resolution: float = 1e-4,
    exhaustive: bool = False,
    level: float = 0.95,
) -> MleResult:
    """Grid-search MLE over ``p in {r, ..., 1-r}`` and ``beta in {r, ..., 1}``.

    By default every ``p`` on the lattice is visited and, for each, ``beta``
    is located coarse-to-fine: spacing 0.01 first, then each finer decade
    within two cells of that row's incumbent. ``exhaustive`` evaluates the
    full lattice. Ties go to the smaller ``p``, then the
    smaller ``beta``.

    Raises
    ------
    DegenerateDataError
        If every observation is zero.
    """
    if data.all_zero():
        raise DegenerateDataError("all observations are zero; the likelihood increases as p -> 0")
    N = _lattice_size(resolution)

    def ll(i, j):
        return loglik_rsg(i / N, j / N, data)

    if exhaustive:
        i, j, best, evals = _grid.exhaustive(ll, (1, N - 1), (1, N))
    else:
        i, j, best, evals = _grid.profile(ll, (1, N - 1), (1, N), N)

    p_hat, beta_hat = i / N, j / N
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SingularInformationWarning)
        info = observed_information(p_hat, beta_hat, data)
    disp = dispersion_matrix(info)
    if np.isnan(disp).any():
        warnings.warn(
            f"observed information not positive definite at p={p_hat:g}, beta={beta_hat:g}",
            SingularInformationWarning,
            stacklevel=2,
        )
        ci_p = ci_b = (math.nan, math.nan)
    else:
        ci_p = wald_ci(p_hat, max(disp[0, 0], 0.0), level)
        ci_b = wald_ci(beta_hat, max(disp[1, 1], 0.0), level)
    return MleResult(
        p_hat=p_hat,
        beta_hat=beta_hat,
        loglik=best,
        info=info,
        dispersion=disp,
        ci_p=ci_p,
        ci_beta=ci_b,
        n=data.n,
        resolution=resolution,
        exhaustive=exhaustive,
        level=level,
        evaluations=evals,
    )


def geometric_mle(data: CountData) -> float:
    """MLE of the geometric ``p`` (the ``beta = 1`` sub-model).

    Exact data give the closed form ``xbar / (1 + xbar)``; grouped data are
    maximized numerically on the grouped likelihood.
    """
    if data.is_exact:
        xbar = data.mean()
        return xbar / (1.0 + xbar)
    if data.all_zero():
        return 0.0
    res = optimize.minimize_scalar(
        lambda t: -loglik_geometric(t, data), bounds=(1e-12, 1.0 - 1e-12), method="bounded", options={"xatol": 1e-12}
    )
    return float(res.x)
