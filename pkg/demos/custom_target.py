"""
Sampling a target you write down yourself
=========================================

Any density exp(i(x) + o(x)) works as long as the proposal part i has
region masses and restricted sampling, and o has an upper bound on boxes.
Here o is written as an expression and bounded by interval arithmetic.
"""

import numpy as np

from gumbel_astar import IsotropicGaussian, TargetDecomposition, astar_sample, parse
from gumbel_astar.bounds import interval_bounder, pad
from gumbel_astar.expr import evaluate

# a wiggly log-likelihood on top of a standard normal prior
o_expr = parse("(mul 2 (sin (mul 3 x)))")
bound = interval_bounder(o_expr)

target = TargetDecomposition(
    proposal=IsotropicGaussian([0.0]),
    o=lambda x: float(evaluate(o_expr, {"x": x[0]})),
    bounder=lambda region: pad(bound(region)),
)

rng = np.random.default_rng(4)
runs = [astar_sample(target, rng=rng) for _ in range(3000)]
xs = np.array([r.point[0] for r in runs])
hist, edges = np.histogram(xs, bins=24, range=(-3, 3))
for count, left in zip(hist, edges):
    print(f"{left:5.2f} {'#' * (count // 8)}")
print("mean nodes expanded:", np.mean([r.stats.nodes_expanded for r in runs]))
