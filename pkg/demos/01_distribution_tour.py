"""A quick look at the skewed geometric family: shape, moments and sampling."""

import numpy as np

from skewgeom import distribution as dist
from skewgeom.distribution import RSGParams, SGParams
from skewgeom.sampling import RngStream, sample

# Two parameterizations describe the same law; beta = p ** alpha
sg = SGParams(0.6, 1.5)
rsg = dist.convert(sg)
print(sg, "->", rsg)
print(np.allclose(dist.pmf(sg, np.arange(10)), dist.pmf(rsg, np.arange(10))))

# alpha = 0 is the plain geometric, large alpha approaches a limiting law
xs = np.arange(8)
print("alpha=0  ", np.round(dist.pmf(SGParams(0.6, 0.0), xs), 4))
print("geometric", np.round(0.4 * 0.6 ** xs, 4))
print("alpha=300", np.round(dist.pmf(SGParams(0.6, 300.0), xs), 4))
print("limit    ", np.round(dist.limit_pmf_alpha_infinity(0.6, xs), 4))

# Above p = 1/2 the mode moves off zero once alpha passes a threshold
p = 0.8
print("mode threshold at p=0.8:", dist.mode_threshold(p))
for alpha in (0.1, 2.0):
    f = dist.pmf(SGParams(p, alpha), np.arange(40))
    print(f"alpha={alpha}: mode {int(np.argmax(f))}")

# Moments: variance always exceeds the mean
for prm in (RSGParams(0.3, 0.2), RSGParams(0.8, 0.5), RSGParams(0.9, 1.0)):
    print(prm, "mean", round(dist.mean(prm), 4), "var/mean", round(dist.dispersion_index(prm), 4))

# The hazard P(X=x)/P(X>x) never decreases
h = dist.hazard(RSGParams(0.7, 0.3), np.arange(10))
print("hazard", np.round(h, 4), "non-decreasing:", bool(np.all(np.diff(h) >= -1e-12)))

# Sampling is deterministic given (seed, stream); the three methods agree draw for draw
prm = RSGParams(0.7, 0.4)
a = sample(prm, 10_000, RngStream(1, 0), method="inverse")
b = sample(prm, 10_000, RngStream(1, 0), method="root")
print("methods agree:", bool(np.array_equal(a, b)))
print("sample mean", a.mean().round(4), "vs", round(dist.mean(prm), 4))
