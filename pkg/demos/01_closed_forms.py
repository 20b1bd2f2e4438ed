"""
Service rate of a spread-out allocation
=======================================

Evaluate the closed forms for one small system and look at where the
rate comes from.
"""

from alloc_rate import FixedSize, ScaledExponential, SystemConfig, dss_service_rate

# 30 nodes, a file split into m=3 pieces, a request reaches r=5 nodes
N, m, r = 30, 3, 5
service = ScaledExponential(mu=1.0)

for alpha in range(1, 6):
    rep = dss_service_rate(SystemConfig(N, m, alpha), FixedSize(r), service)
    print(f"alpha={alpha}  mu_s={rep.mu_s:.5f}  P_s={rep.p_s:.5f}")

# with alpha=1 every accessed data node serves alone, so mu_s = mu*m*r/N
print("minimal spreading check:", 1.0 * m * r / N)

# break the alpha=3 rate into per-phi contributions
rep = dss_service_rate(SystemConfig(N, m, 3), FixedSize(r), service)
for term in rep.per_phi:
    print(f"  phi={term.phi}  prob={term.prob:.5f}  rate={term.rate:.5f}")
