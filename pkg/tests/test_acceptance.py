"""Exit criteria. Each test prints one PASS/FAIL line with its measured margin."""

import math

import numpy as np
import pytest

from conftest import GAP_T05, GAP_T1, LN2, S2_T05, S2_T1
from oracles import random_density, random_unitary
from qtentropy import closedform as cf
from qtentropy.audit import extrema_locator, observable_series, run_audit
from qtentropy.dynamics import STANDARD_GRID, TimeGrid, evolve_exact, evolve_rk4
from qtentropy.linalg import Tolerances, kron, partial_trace, von_neumann_entropy
from qtentropy.model import PAPER_PARAMS, CouplingKind, ModelParams, hamiltonian, initial_state, thermal_populations

ISING = PAPER_PARAMS
HEIS = PAPER_PARAMS.with_coupling(CouplingKind.HEISENBERG)
FIG_TEMPS = {"0.5": (S2_T05, GAP_T05), "1": (S2_T1, GAP_T1), "inf": (LN2, 0.0)}
# 2jt runs over [0, 4 pi]; node 500 k sits exactly on 2jt = k pi / 2
ALIGNED_GRID = TimeGrid(0.0, 2 * math.pi / PAPER_PARAMS.j, 4001)
ZERO_NODES = [0, 1000, 2000, 3000, 4000]
PEAK_NODES = [500, 1500, 2500, 3500]


@pytest.fixture
def report(capsys):
    def _report(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, f"{name}: {detail}"

    return _report


@pytest.fixture(scope="module")
def aligned_series():
    return {t: observable_series(ISING, t, ALIGNED_GRID) for t in FIG_TEMPS}


def test_c1_ising_closed_solution(report):
    pops = thermal_populations(1.0, 1.0)
    states = evolve_exact(hamiltonian(ISING), initial_state(pops), STANDARD_GRID)
    dev = max(np.max(np.abs(cf.ising_density(ISING, pops, t).matrix - s.matrix)) for t, s in zip(STANDARD_GRID.times, states))
    report("C1 Ising closed solution vs exact evolution", dev <= 1e-10, f"max dev {dev:.2e} (tol 1e-10)")


def test_c2_entropy_oscillation_range(report, aligned_series):
    worst_zero = worst_peak = 0.0
    for temp, (s2, _) in FIG_TEMPS.items():
        s1 = aligned_series[temp].s1
        for k in ZERO_NODES:
            worst_zero = max(worst_zero, s1[max(k - 1, 0) : k + 2].min())
        for k in PEAK_NODES:
            worst_peak = max(worst_peak, abs(s1[k] - s2))
    ok = worst_zero <= 1e-9 and worst_peak <= 1e-6
    report("C2 entropy oscillates between 0 and S2", ok, f"zeros <= {worst_zero:.2e} (tol 1e-9), peaks off S2 by {worst_peak:.2e} (tol 1e-6)")


def test_c3_thermal_state_constant(report):
    series = observable_series(ISING, 1.0, STANDARD_GRID)
    pops = thermal_populations(1.0, 1.0)
    states = evolve_exact(hamiltonian(ISING), initial_state(pops), STANDARD_GRID)
    dev = max(np.max(np.abs(partial_trace(s, "T").matrix - pops.diag())) for s in states)
    dev = max(dev, np.max(np.abs(series.rho2_diag - [pops.f00, pops.f11])))
    report("C3 Ising thermal state constant", dev <= 1e-12, f"max dev {dev:.2e} (tol 1e-12)")


def test_c4_total_entropy_conserved(report):
    worst = 0.0
    for p in (ISING, HEIS):
        for temp, (s2, _) in FIG_TEMPS.items():
            worst = max(worst, np.max(np.abs(observable_series(p, temp, STANDARD_GRID).s_total - s2)))
    report("C4 total entropy conserved (both couplings)", worst <= 1e-8, f"max |S - S2(0)| {worst:.2e} (tol 1e-8)")


def test_c5_precession_entropy_correspondence(report, aligned_series):
    step = ALIGNED_GRID.step
    worst_index = 0
    worst_value = 0.0
    counts = []
    for temp, (_, gap) in FIG_TEMPS.items():
        s = aligned_series[temp]
        smax = [e.t for e in extrema_locator(s, "s1") if e.kind == "max"]
        amin = [e for e in extrema_locator(s, "abs_sigma_plus") if e.kind == "min"]
        counts.append((len(smax), len(amin)))
        assert len(smax) == len(amin) == len(PEAK_NODES)
        worst_index = max(worst_index, max(round(abs(a.t - b) / step) for a, b in zip(amin, smax)))
        worst_value = max(worst_value, max(abs(a.value - gap) for a in amin))
    ok = worst_index <= 1 and worst_value <= 1e-6
    report(
        "C5 |<sigma_+>| minima at entropy maxima",
        ok,
        f"index offset <= {worst_index} (tol 1), minima off f00-f11 by {worst_value:.2e} (tol 1e-6), extrema {counts}",
    )


def test_c6_heisenberg_regime_limit(report):
    times = STANDARD_GRID.times
    bound = 2 * (HEIS.j / HEIS.e2) ** 2
    d_s1 = d_s1_cf = var_s2 = amp = 0.0
    for temp in FIG_TEMPS:
        pops = thermal_populations(1.0, temp)
        heis = observable_series(HEIS, temp, STANDARD_GRID)
        s1_ising = cf.ising_entropy(pops, ISING.j, times)
        d_s1 = max(d_s1, np.max(np.abs(heis.s1 - s1_ising)))
        d_s1_cf = max(d_s1_cf, np.max(np.abs(cf.heis_entropy(HEIS, pops, times, cf.S1) - s1_ising)))
        var_s2 = max(var_s2, np.ptp(heis.s2))
        a = np.array([np.diag(cf.heis_reduced(HEIS, pops, t, "Q").matrix).real for t in times])
        b = np.array([np.diag(cf.heis_reduced(HEIS, pops, t, "T").matrix).real for t in times])
        rho1_diag = 0.5 * (1 + np.column_stack([heis.bloch[:, 2], -heis.bloch[:, 2]]))
        for diag in (a, b, heis.rho2_diag, rho1_diag):
            amp = max(amp, np.max(np.ptp(diag, axis=0)) / 2)
    ok = d_s1 <= 1e-3 and d_s1_cf <= 1e-3 and var_s2 <= 1e-3 and amp <= bound
    report(
        "C6 Heisenberg reduces to Ising in the E1<<J<<E2 regime",
        ok,
        f"|S1_heis - S1_ising| {d_s1:.2e} (closed form {d_s1_cf:.2e}), S2 variation {var_s2:.2e} (tol 1e-3), "
        f"diagonal amplitude {amp:.2e} (tol {bound:.0e})",
    )


def test_c7_appendix_audit(report):
    first = run_audit(HEIS, 1.0, STANDARD_GRID)
    second = run_audit(HEIS, 1.0, STANDARD_GRID)
    deterministic = first.to_json() == second.to_json()
    consistency = first["eq17_vs_trace_eq15"].max_deviation
    recorded = {f: first[f].verdict for f in ("eq15", "eq16", "eq17", "eq10_11_literal", "eq10_11_repaired", "eq14_literal", "eq14_via_a01")}
    ok = deterministic and consistency <= 1e-10
    report(
        "C7 appendix audit",
        ok,
        f"deterministic={deterministic}, eq17 vs Tr eq15 {consistency:.2e} (tol 1e-10), verdicts {recorded}",
    )


def test_c8_rk4_cross_check(report):
    pops = thermal_populations(1.0, 1.0)
    rho0 = initial_state(pops)
    dev = {}
    for p in (ISING, HEIS):
        h = hamiltonian(p)
        ref = evolve_exact(h, rho0, STANDARD_GRID).as_array()
        dev[p.coupling.value] = np.max(np.abs(evolve_rk4(h, rho0, STANDARD_GRID).as_array() - ref))
    # coarse Ising run: the standard grid leaves only round-off to measure
    coarse = TimeGrid(0.0, 400.0, 41)
    h = hamiltonian(ISING)
    ref = evolve_exact(h, rho0, coarse).as_array()
    loose = Tolerances(psd=1e-4)
    e_h = np.max(np.abs(evolve_rk4(h, rho0, coarse, 4, tol=loose).as_array() - ref))
    e_h2 = np.max(np.abs(evolve_rk4(h, rho0, coarse, 8, tol=loose).as_array() - ref))
    ratio = e_h / e_h2
    ok = max(dev.values()) <= 1e-8 and 10 <= ratio <= 22
    report(
        "C8 RK4 vs exact propagator",
        ok,
        f"standard-grid dev {', '.join(f'{k} {v:.2e}' for k, v in dev.items())} (tol 1e-8), step-halving ratio {ratio:.2f} (range [10, 22])",
    )


def test_c9_property_suites(report):
    rng = np.random.default_rng(9)
    n = 1000
    failures = {k: 0 for k in ("kron/partial trace", "density invariants", "unitary invariance", "subadditivity", "swap symmetry")}
    for _ in range(n):
        a, b = random_density(rng, 2), random_density(rng, 2)
        ab = kron(a, b)
        if not (
            np.allclose(partial_trace(ab, "Q").matrix, a, atol=1e-12)
            and np.allclose(partial_trace(ab, "T").matrix, b, atol=1e-12)
            and abs(np.trace(ab) - 1) <= 1e-12
        ):
            failures["kron/partial trace"] += 1
        rho = random_density(rng, 4, int(rng.integers(1, 5)))
        reds = [partial_trace(rho, k) for k in ("Q", "T")]
        if any(abs(np.trace(r.matrix) - 1) > 1e-12 or r.eigenvalues()[0] < -1e-10 for r in reds):
            failures["density invariants"] += 1
        u = random_unitary(rng, 4)
        s = von_neumann_entropy(rho)
        if abs(von_neumann_entropy(u @ rho @ u.conj().T) - s) > 1e-9:
            failures["unitary invariance"] += 1
        s1, s2 = (von_neumann_entropy(r) for r in reds)
        if s1 + s2 < s - 1e-8 or abs(s1 - s2) > s + 1e-8:
            failures["subadditivity"] += 1
        e1, j = rng.uniform(-0.3, 0.3, size=2)
        e2, temp, t = rng.uniform(0.2, 2.0), rng.uniform(0.05, 10.0), rng.uniform(0, 500)
        pops = thermal_populations(e2, temp)
        swap = pops.swapped()
        pi, ph = ModelParams(e1, e2, j), ModelParams(e1, e2, j, CouplingKind.HEISENBERG)
        pairs = [
            (cf.ising_entropy(pops, j, t), cf.ising_entropy(swap, j, t)),
            (cf.thermal_entropy(pops), cf.thermal_entropy(swap)),
            (abs(cf.ising_sigma_plus(pi, pops, t)), abs(cf.ising_sigma_plus(pi, swap, t))),
            (cf.heis_entropy(ph, pops, t, cf.S1), cf.heis_entropy(ph, swap, t, cf.S1)),
            (cf.heis_entropy(ph, pops, t, cf.S2, "repaired"), cf.heis_entropy(ph, swap, t, cf.S2, "repaired")),
            (cf.heis_entropy(ph, pops, t, cf.S2), cf.heis_entropy(ph, swap, t, cf.S2)),
            (abs(cf.heis_sigma_plus(ph, pops, t)), abs(cf.heis_sigma_plus(ph, swap, t))),
            (abs(cf.heis_sigma_plus_from_reduced(ph, pops, t)), abs(cf.heis_sigma_plus_from_reduced(ph, swap, t))),
        ]
        if any(abs(x - y) > 1e-10 for x, y in pairs):
            failures["swap symmetry"] += 1
    ok = not any(failures.values())
    report("C9 property suites", ok, f"{n} random cases per family, failures {failures}")
