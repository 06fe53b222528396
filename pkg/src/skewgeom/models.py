"""Two-parameter count models compared against the skewed geometric.

All models share :class:`CountModel`: a vectorized log-pmf in natural
parameters ``(p, beta)`` plus a map from the unit lattice to each parameter,
so a single grid fitter serves every model.

Competitors
-----------
``wg``   weighted geometric  (1-b)(1-b^(p+1)) b^x (1-b^(p(x+1))) / (1-b^p),  p > 0, 0 < b < 1
``nb``   negative binomial   C(p+x-1, x) b^p (1-b)^x,                       p > 0, 0 < b < 1
``nd``   new discrete        [log(1-p b^x) - log(1-p b^(x+1))] / log(1-p),   p < 1, 0 < b < 1
``ngpl`` generalized Poisson-Lindley
         b^2 / ((b+p)(1+b)^(x+1)) * (1 + p(x+1)/(1+b)),                     p > 0, b > 0
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import _grid
from .data import Bin, CountData
from .estimation import (
    SingularInformationWarning,
    dispersion_matrix,
    loglik_rsg,
    mle_grid,
    numerical_hessian,
)

__all__ = [
    "Transform",
    "CountModel",
    "ModelFit",
    "fit_model",
    "pmf_wg",
    "pmf_nb",
    "pmf_nd",
    "pmf_ngpl",
    "MODELS",
    "get_model",
    "empirical_model",
]


# ---------------------------------------------------------------------------
# lattice transforms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Transform:
    """Monotone map from lattice fraction ``t`` in (0, 1] to a parameter value."""

    name: str
    forward: Callable[[np.ndarray], np.ndarray]
    include_one: bool = False

    def __call__(self, t):
        return self.forward(np.asarray(t, dtype=float))


UNIT = Transform("unit", lambda t: t)
UNIT_CLOSED = Transform("unit", lambda t: t, include_one=True)
POSITIVE = Transform("t/(1-t)", lambda t: t / (1.0 - t))
# (-inf, 1): t = 1/2 maps to 0
BELOW_ONE = Transform("(2t-1)/t", lambda t: (2.0 * t - 1.0) / t)


# ---------------------------------------------------------------------------
# log-pmfs
# ---------------------------------------------------------------------------


def _log1mexp(a):
    # log(1 - exp(a)) for a < 0
    return np.where(a > -0.693, np.log(-np.expm1(a)), np.log1p(-np.exp(a)))


def _logpmf_rsg(p, beta, x):
    q = 1.0 - p
    return np.log1p(-p) + x * np.log(p) + np.log1p(-p * np.power(beta, x)) + np.log1p(-p * beta) - np.log(1.0 - p * beta - p * q)


def _logpmf_wg(p, beta, x):
    lb = np.log(beta)
    return (
        np.log1p(-beta)
        + _log1mexp((p + 1.0) * lb)
        + x * lb
        + _log1mexp(p * (x + 1.0) * lb)
        - _log1mexp(p * lb)
    )


def _logpmf_nb(r, beta, x):
    return special.gammaln(r + x) - special.gammaln(r) - special.gammaln(x + 1.0) + r * np.log(beta) + x * np.log1p(-beta)


def _logpmf_nd(p, beta, x):
    p = np.asarray(p, dtype=float)
    small = np.abs(p) < 1e-12
    ps = np.where(small, 0.5, p)
    num = np.log1p(-ps * np.power(beta, x)) - np.log1p(-ps * np.power(beta, x + 1.0))
    val = np.log(num / np.log1p(-ps))
    # p -> 0 limit is geometric: beta^x (1 - beta)
    geo = x * np.log(beta) + np.log1p(-beta)
    return np.where(small, geo, val)


def _logpmf_ngpl(p, beta, x):
    return (
        2.0 * np.log(beta)
        - np.log(beta + p)
        - (x + 1.0) * np.log1p(beta)
        + np.log1p(p * (x + 1.0) / (1.0 + beta))
    )


def _wrap(logpmf):
    def f(a, b, x):
        with np.errstate(all="ignore"):
            val = np.exp(logpmf(np.asarray(a, float), np.asarray(b, float), np.asarray(x, float)))
        return float(val) if np.ndim(val) == 0 else val

    return f


pmf_wg = _wrap(_logpmf_wg)
pmf_wg.__doc__ = "Weighted geometric pmf ``WG(p, beta)``."
pmf_nb = _wrap(_logpmf_nb)
pmf_nb.__doc__ = "Negative binomial pmf ``C(r+x-1, x) beta^r (1-beta)^x``."
pmf_nd = _wrap(_logpmf_nd)
pmf_nd.__doc__ = "New discrete pmf ``(log(1-p b^x) - log(1-p b^(x+1))) / log(1-p)``."
pmf_ngpl = _wrap(_logpmf_ngpl)
pmf_ngpl.__doc__ = "Generalized Poisson-Lindley pmf."


# ---------------------------------------------------------------------------
# model interface
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountModel:
    """A two-parameter count model.

    Attributes
    ----------
    name : str
        Identifier accepted by :func:`get_model` and the CLI.
    logpmf : callable
        ``logpmf(a, b, x)`` broadcasting over arrays; ``-inf`` or ``nan``
        outside the admissible set.
    transforms : tuple of Transform
        Lattice-to-parameter maps used by the grid fitter.
    log_tail : callable, optional
        ``log P(X >= lo)``; if absent the tail is ``1 - P(X < lo)``.
    """

    name: str
    logpmf: Callable
    transforms: tuple
    param_names: tuple = ("p", "beta")
    log_tail: Optional[Callable] = None
    k: int = 2

    def pmf(self, params, x):
        a, b = params
        with np.errstate(all="ignore"):
            val = np.exp(self.logpmf(np.asarray(a, float), np.asarray(b, float), np.asarray(x, float)))
        val = np.where(np.isnan(val), 0.0, val)
        return float(val) if np.ndim(val) == 0 else val

    def log_bin_mass(self, a, b, bin: Bin):
        """log P(X in bin), broadcasting over parameter arrays."""
        with np.errstate(all="ignore"):
            if bin.is_tail:
                if bin.lo == 0:
                    return np.zeros(np.broadcast(a, b).shape)
                if self.log_tail is not None:
                    return self.log_tail(a, b, float(bin.lo))
                head = special.logsumexp(
                    np.stack([self.logpmf(a, b, float(x)) for x in range(bin.lo)]), axis=0
                )
                return _log1mexp(np.minimum(head, 0.0))
            if bin.is_point:
                return self.logpmf(a, b, float(bin.lo))
            return special.logsumexp(np.stack([self.logpmf(a, b, float(x)) for x in bin.values()]), axis=0)

    def bin_probabilities(self, params, bins) -> np.ndarray:
        """Probability of each bin; an open tail takes the complement of the finite bins."""
        a, b = params
        out = np.array([0.0 if bb.is_tail else float(np.exp(self.log_bin_mass(a, b, bb))) for bb in bins])
        if bins and bins[-1].is_tail:
            if self.log_tail is not None and bins[-1].lo > 0:
                tail = float(np.exp(self.log_tail(a, b, float(bins[-1].lo))))
            else:
                tail = 1.0 - out[:-1].sum()
            out[-1] = tail
        return out

    def loglik(self, a, b, data: CountData):
        """Grouped log-likelihood ``sum count * log P(bin)``; broadcasts over ``a, b``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        ll = np.zeros(np.broadcast(a, b).shape)
        with np.errstate(all="ignore"):
            for bin, c in zip(data.bins, data.counts):
                if c:
                    ll = ll + c * self.log_bin_mass(a, b, bin)
        ll = np.where(np.isfinite(ll), ll, -np.inf)
        return float(ll) if ll.ndim == 0 else ll

    def lattice_params(self, i, j, N):
        return self.transforms[0](np.asarray(i) / N), self.transforms[1](np.asarray(j) / N)


def _rsg_tail(p, beta, lo):
    q = 1.0 - p
    return lo * np.log(p) + np.log1p(-q * p * np.power(beta, lo) / (1.0 - p * beta)) + np.log1p(-p * beta) - np.log(1.0 - p * beta - p * q)


def _nd_tail(p, beta, lo):
    p = np.asarray(p, dtype=float)
    small = np.abs(p) < 1e-12
    ps = np.where(small, 0.5, p)
    val = np.log(np.log1p(-ps * np.power(beta, lo)) / np.log1p(-ps))
    return np.where(small, lo * np.log(beta), val)


def _ngpl_tail(p, beta, lo):
    # sum_{x>=lo} of the pmf: geometric tail plus its first moment
    r = 1.0 / (1.0 + beta)
    c = beta * beta / ((beta + p) * (1.0 + beta))
    s0 = r ** lo / (1.0 - r)
    # sum_{x>=lo} (x+1) r^x
    s1 = r ** lo * ((lo + 1.0) / (1.0 - r) + r / (1.0 - r) ** 2)
    return np.log(c * (s0 + p / (1.0 + beta) * s1))


MODELS = {
    "rsg": CountModel("rsg", _logpmf_rsg, (UNIT, UNIT_CLOSED), log_tail=_rsg_tail),
    "wg": CountModel("wg", _logpmf_wg, (POSITIVE, UNIT)),
    "nb": CountModel("nb", _logpmf_nb, (POSITIVE, UNIT)),
    "nd": CountModel("nd", _logpmf_nd, (BELOW_ONE, UNIT), log_tail=_nd_tail),
    "ngpl": CountModel("ngpl", _logpmf_ngpl, (POSITIVE, POSITIVE), log_tail=_ngpl_tail),
}


def get_model(name: str) -> CountModel:
    try:
        return MODELS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODELS)}") from None


def empirical_model(data: CountData) -> CountModel:
    """Model whose pmf is the observed relative frequency (parameters ignored)."""
    if not data.is_exact:
        raise ValueError("empirical pmf needs exact observations")
    freq = dict(zip(data.values.astype(int), data.counts / data.n))

    def logpmf(a, b, x):
        x = np.asarray(x, dtype=float)
        f = np.vectorize(lambda v: freq.get(int(v), 0.0))(x) if x.ndim else freq.get(int(x), 0.0)
        with np.errstate(divide="ignore"):
            return np.broadcast_to(np.log(f), np.broadcast(a, b, x).shape)

    return CountModel("empirical", logpmf, (UNIT, UNIT))


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------


@dataclass
class ModelFit:
    """Maximum likelihood fit of one :class:`CountModel` to one dataset."""

    model: str
    params: tuple
    loglik: float
    info: np.ndarray
    dispersion: np.ndarray
    converged: bool
    resolution: float
    n: int
    param_names: tuple = ("p", "beta")
    mle: object = field(default=None, repr=False)

    @property
    def aic(self) -> float:
        return 2.0 * len(self.params) - 2.0 * self.loglik

    @property
    def variances(self) -> tuple:
        return tuple(float(v) for v in np.diag(self.dispersion))

    @property
    def cov(self) -> float:
        return float(self.dispersion[0, 1])

    def as_dict(self) -> dict:
        return dict(zip(self.param_names, (float(v) for v in self.params)))


def fit_model(model, data: CountData, resolution: float = 1e-4, exhaustive: bool = False) -> ModelFit:
    """Grid MLE of ``model`` on ``data``.

    RSG delegates to :func:`skewgeom.estimation.mle_grid`. Other models are
    searched on the unit lattice of spacing ``resolution`` mapped through
    their transforms; ``converged`` is False when the incumbent sits on the
    edge of the lattice.
    """
    if isinstance(model, str):
        model = get_model(model)
    if model.name == "rsg":
        res = mle_grid(data, resolution=resolution, exhaustive=exhaustive)
        N = round(1.0 / resolution)
        edge = round(res.p_hat * N) in (1, N - 1) or round(res.beta_hat * N) == 1
        return ModelFit(
            model="rsg",
            params=(res.p_hat, res.beta_hat),
            loglik=res.loglik,
            info=res.info,
            dispersion=res.dispersion,
            converged=not edge,
            resolution=resolution,
            n=data.n,
            mle=res,
        )

    N = round(1.0 / resolution)
    if N < 2 or abs(N * resolution - 1.0) > 1e-9:
        raise ValueError(f"resolution must be 1/N for an integer N >= 2, got {resolution!r}")
    j_hi = N if model.transforms[1].include_one else N - 1

    def ll(i, j):
        a, b = model.lattice_params(i, j, N)
        return model.loglik(a, b, data)

    if exhaustive:
        i, j, best, _ = _grid.exhaustive(ll, (1, N - 1), (1, j_hi))
    else:
        i, j, best, _ = _grid.profile(ll, (1, N - 1), (1, j_hi), N)
    a, b = (float(v) for v in model.lattice_params(i, j, N))
    edge = i in (1, N - 1) or j in (1, j_hi)

    step = np.array([1e-5 * max(1.0, abs(a)), 1e-5 * max(1.0, abs(b))])
    with np.errstate(all="ignore"):
        H = numerical_hessian(lambda t: model.loglik(t[0], t[1], data), [a, b], h=step)
    info = -0.5 * (H + H.T)
    disp = dispersion_matrix(info) if np.all(np.isfinite(info)) else np.full((2, 2), np.nan)
    if np.isnan(disp).any():
        warnings.warn(f"{model.name}: observed information not positive definite", SingularInformationWarning, stacklevel=2)
    return ModelFit(
        model=model.name,
        params=(a, b),
        loglik=best,
        info=info,
        dispersion=disp,
        converged=not edge,
        resolution=resolution,
        n=data.n,
    )
