"""
Choosing alpha
==============

Sweep alpha for a few systems and see how the best choice moves.
"""

import numpy as np

from alloc_rate import FixedSize, Probabilistic, ScaledExponential, optimal_alpha, sweep_alpha
from alloc_rate.optimizer import tradeoff_frontier, trend

service = ScaledExponential(1.0)

# more pieces per file favours more spreading
for m in (3, 4, 5, 6):
    sweep = sweep_alpha(30, m, FixedSize(5), service)
    best = optimal_alpha(sweep)
    print(f"m={m}: mu_s={np.round(sweep.mu_s, 4)}  best alpha={best.alpha_star_rate}")

# a wider request does too
for r in (6, 7, 8):
    best = optimal_alpha(sweep_alpha(30, 3, FixedSize(r), service))
    print(f"r={r}: best alpha={best.alpha_star_rate}")

# with random failures the single-copy case is the odd one out
for m in (1, 2, 3, 4):
    sweep = sweep_alpha(40, m, Probabilistic(0.3), service, alpha_max=10)
    print(f"p=0.3 m={m}: rate {trend(sweep.mu_s)}, recovery {trend(sweep.p_s)}")

front = tradeoff_frontier(sweep_alpha(30, 5, FixedSize(5), service))
print("rate/recovery frontier for m=5:", [row.alpha for row in front])
