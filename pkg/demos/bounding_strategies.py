"""
How bound quality drives the cost of A*
=======================================

Posterior over the mean of N unit-variance Gaussian observations with a
N(0, 1) prior as the proposal. Three bounds on the log-likelihood over an
interval: per-term constants, a sum of per-term tangent lines, and the exact
quadratic. Tighter bounds prune more of the search tree.
"""

import numpy as np

from gumbel_astar import astar_sample
from gumbel_astar.models import gaussian_mean_data, gaussian_mean_target

rng = np.random.default_rng(2)
print(f"{'N':>5} {'constant':>10} {'linear':>10} {'quadratic':>10}   likelihood evals")
for N in (16, 64, 256):
    means = {}
    for kind in ("constant", "linear", "quadratic"):
        evals = []
        for run in range(30):
            y = gaussian_mean_data(N, seed=run)
            evals.append(astar_sample(gaussian_mean_target(y, kind), rng=rng)
                         .stats.likelihood_evals)
        means[kind] = np.mean(evals)
    print(f"{N:5d} {means['constant']:10.1f} {means['linear']:10.1f} {means['quadratic']:10.1f}")
