# Mean failure rates and aging intensities of a few textbook lifetimes.
#
# For a hazard r on [l, t] the arithmetic, geometric and harmonic means
# A, G, H of r give the intensities L = r/A, L^G = r/G, L^H = r/H.
# Run with ``python3 notebooks/01_functionals_and_classes.py``.

import numpy as np

from agingmeans import Pareto, Uniform, Weibull, check_bounds, classify, profile

np.set_printoptions(precision=4, suppress=True)

# A Weibull hazard r(t) = alpha*beta*(alpha t)^(beta-1) has constant
# intensities: L = beta, L^G = exp(beta - 1), L^H = 2 - 1/beta.
grid = np.geomspace(0.05, 5, 8)
p = profile(Weibull(0.5, 1.5), grid)
print(p.to_csv())
print("L constant  ", np.ptp(p.ai) < 1e-8, p.ai[0])
print("L^G constant", np.ptp(p.gai) < 1e-8, p.gai[0], np.exp(0.5))

# H <= G <= A always; the intensities are ordered the other way round
print("H <= G <= A:", bool(np.all((p.hfr <= p.gfr) & (p.gfr <= p.afr))))

# With beta >= 2 the reciprocal 1/r is not integrable at 0, so the harmonic
# mean degenerates to 0 and the profile flags it.
q = profile(Weibull(1.0, 2.5), grid)
print("beta=2.5 H:", q.hfr[:3], "flags:", sorted(q.flags[0]))

# -- classification -----------------------------------------------------------
dense = np.linspace(0.05, 1.9, 64)
for model in (Weibull(1.0, 0.7), Weibull(1.0, 1.8), Uniform(0.0, 2.0), Pareto(1.0, 2.0)):
    g = dense if model.left == 0 else np.linspace(model.left + 0.05, model.left + 3, 64)
    verdicts = classify(model, g, targets=["FR", "AFR", "GFR", "AI", "GAI"])
    print(f"{model!r:40s}", {v.target: v.label for v in verdicts})

# The sandwich r/sup r <= L <= ... <= r/inf r holds for every model
print("bounds ok:", check_bounds(profile(Weibull(1.0, 0.7), dense)).ok)
