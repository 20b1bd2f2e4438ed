"""
Checking the formulas by simulation
===================================

Draw the accessed set and the service times directly, then compare with
the closed form. The z-scores should be small.
"""

from alloc_rate import (
    FixedSize,
    Probabilistic,
    ScaledExponential,
    ShiftedExponential,
    SystemConfig,
    dss_service_rate,
    phi_distribution,
)
from alloc_rate.monte_carlo import chi_squared_gate, simulate_dss

cases = [
    (SystemConfig(30, 5, 3), FixedSize(5), ScaledExponential(1.0)),
    (SystemConfig(30, 5, 3), FixedSize(5), ShiftedExponential(1.0, 3.0)),
    (SystemConfig(30, 2, 4), Probabilistic(0.3), ScaledExponential(1.0)),
]

for cfg, access, service in cases:
    exact = dss_service_rate(cfg, access, service)
    sim = simulate_dss(cfg, access, service, trials=200_000, seed=42)
    print(cfg, access, service)
    print(f"  mu_s exact {exact.mu_s:.5f}  sim {sim.mu_s.mean:.5f}  z={sim.mu_s.z_score(exact.mu_s):+.2f}")
    print(f"  P_s  exact {exact.p_s:.5f}  sim {sim.p_s.mean:.5f}  z={sim.p_s.z_score(exact.p_s):+.2f}")
    stat, crit, ok = chi_squared_gate(sim.phi, dict(phi_distribution(cfg, access).items()))
    print(f"  phi law chi2={stat:.1f} (critical {crit:.1f}) ok={ok}")

# the same seed gives the same answer whatever the number of workers
a = simulate_dss(*cases[0], trials=150_000, seed=1, workers=1)
b = simulate_dss(*cases[0], trials=150_000, seed=1, workers=4)
print("identical across workers:", a == b)
