"""Fitting the claim-count data: RSG against four competitors."""

import warnings

from skewgeom.data import claims, default_gof_bins
from skewgeom.inference import SmallExpectedWarning, gof, lr_test
from skewgeom.models import MODELS, fit_model

data = claims()
print("n =", data.n, "mean =", round(data.mean(), 4))

# Exact counts, so the likelihood is a product of point masses.
# The 1e-3 lattice is enough here and takes a few milliseconds.
fits = {name: fit_model(name, data, resolution=1e-3) for name in MODELS}
bins = default_gof_bins(data)

print(f"{'model':6} {'a':>8} {'b':>8} {'AIC':>10} {'chi2':>8}")
for name in sorted(fits, key=lambda m: fits[m].aic):
    fit = fits[name]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallExpectedWarning)
        g = gof(data, name, fit.params, bins=bins)
    print(f"{name:6} {fit.params[0]:8.4f} {fit.params[1]:8.4f} {fit.aic:10.2f} {g.chi2:8.3f}")

# beta near zero means a strong excess of zeros relative to the geometric
rsg = fits["rsg"]
print("dispersion matrix:", rsg.variances, rsg.cov)

# Is the geometric sub-model (beta = 1) enough?
lr = lr_test(data, resolution=1e-3)
print(f"lambda = {lr.lam:.4f}, {lr.decision}")
