"""Likelihood-ratio test of geometric vs RSG, chi-square goodness of fit, AIC."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .data import Bin, CountData
from .estimation import MleResult, geometric_mle, loglik_rsg, mle_grid

__all__ = [
    "GofReport",
    "LrReport",
    "SmallExpectedWarning",
    "LR_CRITICAL_5PCT",
    "chi2_sf",
    "aic",
    "gof",
    "lr_test",
]

LR_CRITICAL_5PCT = 3.841


class SmallExpectedWarning(UserWarning):
    """Some expected cell count is below 1; cells are not merged automatically."""


def chi2_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution, ``Q(df/2, x/2)``."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if df < 1:
        raise ValueError("df must be a positive integer")
    return float(special.gammaincc(df / 2.0, x / 2.0))


def aic(loglik: float, k: int = 2) -> float:
    """Akaike information criterion ``2k - 2 loglik``."""
    if not math.isfinite(loglik):
        raise ValueError("loglik must be finite")
    return 2.0 * k - 2.0 * loglik


@dataclass
class GofReport:
    """Pearson chi-square goodness of fit over explicit bins."""

    chi2: float
    df: int
    p_value: float
    bins: tuple
    observed: np.ndarray
    expected: np.ndarray

    @property
    def small_expected(self) -> bool:
        return bool(np.any(self.expected < 1.0))

    def rows(self):
        return [(str(b), int(o), float(e)) for b, o, e in zip(self.bins, self.observed, self.expected)]


def gof(data: CountData, model, params, bins: Optional[Sequence[Bin]] = None, n_params: int = 2) -> GofReport:
    """Chi-square statistic ``sum (O - E)^2 / E`` with ``df = #bins - 1 - n_params``.

    ``expected = n * P(bin)``; an open last bin takes the remaining mass.
    Warns with :class:`SmallExpectedWarning` when any expected count is
    below 1.
    """
    from .data import default_gof_bins
    from .models import get_model

    if isinstance(model, str):
        model = get_model(model)
    if bins is None:
        bins = default_gof_bins(data)
    bins = tuple(bins)
    observed = data.regroup(bins)
    expected = data.n * model.bin_probabilities(tuple(params), list(bins))
    if np.any(expected < 1.0):
        warnings.warn(
            f"expected count below 1 in bin(s) {[str(b) for b, e in zip(bins, expected) if e < 1.0]}",
            SmallExpectedWarning,
            stacklevel=2,
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(expected > 0, (observed - expected) ** 2 / expected, np.where(observed > 0, np.inf, 0.0))
    stat = float(math.fsum(terms))
    df = len(bins) - 1 - n_params
    if df < 1:
        raise ValueError(f"{len(bins)} bins leave no degrees of freedom for {n_params} parameters")
    return GofReport(stat, df, chi2_sf(stat, df) if math.isfinite(stat) else 0.0, bins, observed, expected)


@dataclass
class LrReport:
    """``lambda = -2 (l(p_tilde, 1) - l(p_hat, beta_hat))`` against chi-square(1)."""

    lam: float
    p_tilde: float
    p_hat: float
    beta_hat: float
    loglik_null: float
    loglik_alt: float
    critical: float = LR_CRITICAL_5PCT

    @property
    def reject_at_5pct(self) -> bool:
        return self.lam > self.critical

    @property
    def p_value(self) -> float:
        return chi2_sf(self.lam, 1)

    @property
    def decision(self) -> str:
        return "H0 rejected" if self.reject_at_5pct else "H0 accepted"


def lr_test(
    data: CountData,
    resolution: float = 1e-4,
    mle: Optional[MleResult] = None,
    critical: float = LR_CRITICAL_5PCT,
) -> LrReport:
    """Test ``beta = 1`` (geometric) against the RSG alternative.

    The null fit is :func:`geometric_mle`; the alternative is the grid MLE
    (reused from ``mle`` when given). ``lambda`` is floored at 0 so grid
    error near ``beta = 1`` cannot produce a negative statistic.
    """
    if mle is None:
        mle = mle_grid(data, resolution=resolution)
    p0 = geometric_mle(data)
    l0 = loglik_rsg(p0, 1.0, data) if p0 > 0 else (0.0 if data.all_zero() else -math.inf)
    lam = max(0.0, -2.0 * (l0 - mle.loglik))
    return LrReport(lam, p0, mle.p_hat, mle.beta_hat, float(l0), mle.loglik, critical)
