"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per
criterion in the terminal summary.
"""

import time
from fractions import Fraction

import pytest

from alloc_rate.analytic_rates import dss_service_rate, expected_download_time
from alloc_rate.cli import main
from alloc_rate.model import (
    FixedSize,
    Probabilistic,
    ScaledExponential,
    ShiftedExponential,
    SystemConfig,
    phi_distribution,
)
from alloc_rate.monte_carlo import chi_squared_gate, simulate_dss
from alloc_rate.optimizer import monotonicity_check, optimal_alpha, sweep_alpha, trend
from alloc_rate.theorem_bounds import (
    fixed_scaled_regions,
    fixed_shifted_regions,
    prob_scaled_regions,
    prob_shifted_regions,
    verify_region,
)

from oracles import brute_force_fixed, brute_force_prob

SCALED = ScaledExponential(1.0)
SHIFTED = ShiftedExponential(1.0, 3.0)
Z = 4.0


class Clock:
    def __init__(self, budget):
        self.budget = budget
        self.start = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.start

    def check(self):
        assert self.elapsed < self.budget, f"took {self.elapsed:.2f}s, budget {self.budget}s"


def test_closed_form_baselines(criterion):
    criterion["name"] = "1 closed-form baselines"
    clock = Clock(1.0)
    worst = 0.0
    for mu in (1.0, 2.5):
        service = ScaledExponential(mu)
        for N in (10, 20, 30):
            for m in (1, 2, 3):
                cfg = SystemConfig(N, m, 1)
                for r in range(m, N + 1):
                    got = dss_service_rate(cfg, FixedSize(r), service).mu_s
                    worst = max(worst, abs(got - mu * m * r / N))
                for i in range(11):
                    p = i / 10
                    got = dss_service_rate(cfg, Probabilistic(p), service).mu_s
                    worst = max(worst, abs(got - mu * m * (1 - p)))
    criterion["detail"] = f"max error {worst:.1e}, {clock.elapsed:.2f}s"
    assert worst <= 1e-12
    clock.check()


# (label, report, worse endpoint, better endpoint); None = region absent, SKIP = not reported
SKIP = object()


def _criterion_two():
    return [
        ("(30,2,1,4) fixed/scaled", fixed_scaled_regions(30, 2, 1.0, 4), 6.5, 22.9),
        ("(30,3,1,5) fixed/scaled", fixed_scaled_regions(30, 3, 1.0, 5), None, 22.7),
        ("(2,1,4) prob/scaled", prob_scaled_regions(2, 1.0, 4), 0.81, 0.26),
        ("(30,2,1,10,4) fixed/shifted", fixed_shifted_regions(30, 2, 1.0, 10.0, 4), 5.8, 25.7),
        ("(30,2,1,1,4) fixed/shifted", fixed_shifted_regions(30, 2, 1.0, 1.0, 4), SKIP, None),
        ("(2,1,10,4) prob/shifted", prob_shifted_regions(2, 1.0, 10.0, 4), 0.83, 0.15),
    ]


def test_theorem_regions(criterion):
    criterion["name"] = "2 theorem-region reproduction"
    clock = Clock(1.0)
    cases = _criterion_two()
    for label, rep, worse, better in cases:
        if worse is SKIP:
            pass
        elif worse is None:
            assert not rep.worse_exists, label
        else:
            assert rep.worse_exists, label
            assert abs(rep.worse_threshold - worse) <= 0.15, (label, rep.worse_threshold)
        if better is None:
            assert not rep.better_exists, label
        else:
            assert rep.better_exists, label
            assert abs(rep.better_threshold - better) <= 0.15, (label, rep.better_threshold)
    criterion["detail"] = f"{len(cases)} parameter sets, {clock.elapsed:.3f}s"
    clock.check()


def test_region_verification(criterion):
    criterion["name"] = "3 region verification"
    clock = Clock(5.0)
    checked = 0
    for label, rep, _, _ in _criterion_two():
        rec = verify_region(rep, step=0.01)
        assert rec.ok, (label, rec.counterexamples[:3])
        checked += rec.checked
    criterion["detail"] = f"{checked} points, 0 counterexamples, {clock.elapsed:.2f}s"
    assert checked > 0
    clock.check()


def test_brute_force_equivalence(criterion):
    criterion["name"] = "4 brute-force equivalence"
    clock = Clock(10.0)
    services = (("scaled", 1, 0, SCALED), ("shifted", 1, 3, SHIFTED))
    worst = 0.0
    count = 0
    for N in range(1, 9):
        for m in range(1, N + 1):
            for alpha in range(1, N // m + 1):
                cfg = SystemConfig(N, m, alpha)
                for kind, mu, delta, service in services:
                    for r in range(alpha, N + 1):
                        rate, ok = brute_force_fixed(N, m, alpha, r, kind, mu, delta)
                        rep = dss_service_rate(cfg, FixedSize(r), service)
                        worst = max(worst, abs(rep.mu_s - float(rate)), abs(rep.p_s - float(ok)))
                        count += 1
                    for p in (Fraction(1, 10), Fraction(1, 2)):
                        rate, ok = brute_force_prob(N, m, alpha, p, kind, mu, delta)
                        rep = dss_service_rate(cfg, Probabilistic(float(p)), service)
                        worst = max(worst, abs(rep.mu_s - float(rate)), abs(rep.p_s - float(ok)))
                        count += 1
    criterion["detail"] = f"{count} configs, max error {worst:.1e}, {clock.elapsed:.2f}s"
    assert worst <= 1e-10
    clock.check()


def _mc_grid():
    grid = []
    for service in (SCALED, SHIFTED):
        for m in (3, 5):
            for alpha in (1, 3):
                grid.append((SystemConfig(30, m, alpha), FixedSize(5), service))
    for p in (0.3, 0.7):
        for alpha in (1, 4):
            grid.append((SystemConfig(30, 2, alpha), Probabilistic(p), SCALED))
    return grid


@pytest.mark.slow
def test_monte_carlo_oracle(criterion):
    criterion["name"] = "5 Monte Carlo oracle"
    clock = Clock(60.0)
    grid = _mc_grid()
    assert len(grid) == 12
    worst = 0.0
    for cfg, access, service in grid:
        rep = dss_service_rate(cfg, access, service)
        sim = simulate_dss(cfg, access, service, 10**6, seed=42)
        z_p = sim.p_s.z_score(rep.p_s)
        z_mu = sim.mu_s.z_score(rep.mu_s)
        assert abs(z_p) <= Z, (cfg, access, service, "p_s", z_p)
        assert abs(z_mu) <= Z, (cfg, access, service, "mu_s", z_mu)
        worst = max(worst, abs(z_p), abs(z_mu))
        for st in sim.strata:
            want = expected_download_time(service, cfg.alpha, st.phi)
            z_t = (st.mean_time - want) / st.std_error
            assert abs(z_t) <= Z, (cfg, access, service, st.phi, z_t)
            worst = max(worst, abs(z_t))
        stat, crit, ok = chi_squared_gate(sim.phi, dict(phi_distribution(cfg, access).items()))
        assert ok, (cfg, access, stat, crit)
    criterion["detail"] = f"12 points at 1e6 trials, max |z| {worst:.2f}, {clock.elapsed:.1f}s"
    clock.check()


def test_figure_reproduction(criterion):
    criterion["name"] = "6 figure-level reproduction"
    clock = Clock(5.0)
    fig2 = {m: sweep_alpha(30, m, FixedSize(5), SCALED) for m in (3, 4, 5, 6)}
    assert optimal_alpha(fig2[3]).alpha_star_rate == 1
    assert optimal_alpha(fig2[4]).alpha_star_rate == 1
    assert optimal_alpha(fig2[5]).alpha_star_rate == 3
    assert trend(fig2[6].mu_s) == "increasing"
    assert optimal_alpha(fig2[6]).alpha_star_recovery == 5

    fig3 = {r: sweep_alpha(30, 3, FixedSize(r), SCALED) for r in (6, 7, 8)}
    assert [optimal_alpha(fig3[r]).alpha_star_rate for r in (6, 7, 8)] == [1, 2, 3]

    for m in (1, 2, 3, 4):
        sweep = sweep_alpha(40, m, Probabilistic(0.3), SCALED, alpha_max=10)
        assert sweep.alphas == list(range(1, 11))
        want = "decreasing" if m == 1 else "increasing"
        assert trend(sweep.mu_s) == want, (m, sweep.mu_s)
        assert trend(sweep.p_s) == want, (m, sweep.p_s)
    criterion["detail"] = f"fig2, fig3, fig4 statements, {clock.elapsed:.2f}s"
    clock.check()


def test_monotonicity_claims(criterion):
    criterion["name"] = "7 monotonicity claims"
    clock = Clock(1.0)
    for m in range(1, 7):
        steps = monotonicity_check(SCALED, m, 21)
        assert [s.alpha for s in steps] == list(range(1, 21))
        assert all(s.time > s.next_time for s in steps)
    for m in range(1, 5):
        sweep = sweep_alpha(40, m, Probabilistic(0.0), SCALED)
        assert trend(sweep.mu_s) == "increasing", m
    criterion["detail"] = f"{clock.elapsed:.3f}s"
    clock.check()


@pytest.mark.slow
def test_determinism(criterion, tmp_path):
    criterion["name"] = "8 determinism"
    clock = Clock(120.0)
    runs = 0
    for i, (cfg, access, service) in enumerate(_mc_grid()):
        argv = ["simulate", "--N", str(cfg.N), "--m", str(cfg.m), "--alpha", str(cfg.alpha),
                "--trials", "200000", "--seed", "42"]
        if isinstance(access, FixedSize):
            argv += ["--access", "fixed", "--r", str(access.r)]
        else:
            argv += ["--access", "prob", "--p", str(access.p)]
        if isinstance(service, ShiftedExponential):
            argv += ["--service", "shifted", "--mu", "1", "--delta", "3"]
        else:
            argv += ["--service", "scaled", "--mu", "1"]
        outputs = []
        for j, workers in enumerate(("1", "1", "4")):
            path = tmp_path / f"run{i}_{j}.csv"
            code = main(argv + ["--workers", workers, "--output", str(path)])
            assert code in (0, 1)
            outputs.append(path.read_bytes())
            runs += 1
        assert outputs[0] == outputs[1] == outputs[2], argv
    for fig in ("fig2", "fig3", "fig4", "fig5", "fig6"):
        a = tmp_path / "a"
        b = tmp_path / "b"
        assert main(["figures", fig, "--output-dir", str(a)]) == 0
        assert main(["figures", fig, "--output-dir", str(b)]) == 0
        for pa in a.glob(f"{fig}_*.csv"):
            assert pa.read_bytes() == (b / pa.name).read_bytes()
    criterion["detail"] = f"{runs} simulate runs + 5 figures, {clock.elapsed:.1f}s"
    clock.check()
