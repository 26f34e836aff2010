"""
The Gumbel-max trick in a few lines
===================================

Perturb log-weights with independent Gumbel noise and take the argmax: the
index is a draw from the normalized weights, and the max itself is Gumbel
distributed around the log of the normalizer.
"""

import math

import numpy as np

from gumbel_astar import EULER_GAMMA, gumbel_max_trick, log_partition_estimate
from gumbel_astar.gumbel import logsumexp

rng = np.random.default_rng(0)
log_w = np.log([0.2, 0.3, 0.5])

draws = [gumbel_max_trick(log_w, rng) for _ in range(20000)]
idx = np.array([i for i, _ in draws])
mx = np.array([m for _, m in draws])

print("argmax frequencies:", np.bincount(idx) / idx.size)   # ~ [0.2, 0.3, 0.5]
print("mean of max - gamma:", mx.mean() - EULER_GAMMA)      # ~ log(1) = 0

# unnormalized weights: the max estimates log Z
log_w = np.array([2.0, -1.0, 0.5, 3.3])
mx = np.array([gumbel_max_trick(log_w, rng)[1] for _ in range(5000)])
est, se = log_partition_estimate(mx)
print(f"log Z estimate {est:.4f} +/- {se:.4f}, exact {logsumexp(log_w):.4f}")

# the variance of one max is pi^2 / 6 regardless of the weights
print("sample variance", mx.var(ddof=1), "vs", math.pi ** 2 / 6)
