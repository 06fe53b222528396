"""A small power study for the LR test of beta = 1."""

from skewgeom.experiments import power_study

# 100 replications per cell keeps this under a minute
res = power_study(0.7, betas=(1.0, 0.7, 0.4, 0.1), sizes=(50, 200), reps=100, seed=7)
print("critical value", res.critical)
print(f"{'beta':>6} " + " ".join(f"n={n:<5}" for n in res.sizes))
for i, b in enumerate(res.betas):
    print(f"{b:6.2f} " + " ".join(f"{r:7.2f}" for r in res.rates[i]))

# The beta = 1 row is the size. Because beta = 1 sits on the edge of the
# parameter space, the chi-square(1) reference is conservative and the size
# tends to land below the nominal 0.05.
