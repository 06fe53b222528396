"""Skewed geometric count distribution.

A two-parameter extension of the geometric law obtained by weighting the
geometric pmf with its own cdf. Exact pmf, cdf, hazard, pgf and moments;
two samplers; grid-search maximum likelihood with Wald inference; a
likelihood ratio test of the geometric sub-model; four competitor count
models; and Monte-Carlo harnesses.
"""

__version__ = "0.1.0"

from .data import Bin, CountData, FrequencyFileError, claims, read_frequency_file, ticks
from .distribution import (
    RSGParams,
    SGParams,
    cdf,
    hazard,
    logpmf,
    materialize,
    mean,
    normalizer,
    pgf,
    pmf,
    survival,
    variance,
)
from .estimation import DegenerateDataError, MleResult, mle_grid
from .inference import chi2_sf, gof, lr_test
from .models import MODELS, fit_model, get_model
from .sampling import RngStream, sample

__all__ = [
    "__version__",
    "Bin",
    "CountData",
    "FrequencyFileError",
    "claims",
    "ticks",
    "read_frequency_file",
    "SGParams",
    "RSGParams",
    "pmf",
    "logpmf",
    "cdf",
    "survival",
    "hazard",
    "pgf",
    "mean",
    "variance",
    "normalizer",
    "materialize",
    "DegenerateDataError",
    "MleResult",
    "mle_grid",
    "chi2_sf",
    "gof",
    "lr_test",
    "MODELS",
    "fit_model",
    "get_model",
    "RngStream",
    "sample",
]
