"""Compare closed-form expressions with the numerical evolution.

Every printed expression is evaluated on a time grid next to the exact
propagator result, and the largest deviation decides a verdict. A
discrepant verdict is a finding, never an error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import closedform as cf
from .dynamics import TimeGrid, evolve_exact, evolve_rk4
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, Subsystem, partial_trace, von_neumann_entropy
from .model import CouplingKind, ModelParams, Temperature, hamiltonian, initial_state, thermal_populations

ORACLE = "oracle"
CLOSED_FORM_LITERAL = "closed-form-literal"
CLOSED_FORM_REPAIRED = "closed-form-repaired"
SOURCES = (ORACLE, CLOSED_FORM_LITERAL, CLOSED_FORM_REPAIRED)

QUANTITIES = (
    "s1",
    "s2",
    "s_total",
    "re_sigma_plus",
    "im_sigma_plus",
    "abs_sigma_plus",
    "bloch_x",
    "bloch_y",
    "bloch_z",
    "rho2_00",
    "rho2_11",
)


def _bloch(rho_q: np.ndarray) -> np.ndarray:
    return np.array([np.trace(s @ rho_q).real for s in (PAULI_X, PAULI_Y, PAULI_Z)])


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    """Per-grid-point observables of one run.

    ``sigma_plus`` is complex; ``bloch`` has shape ``(n, 3)`` and
    ``rho2_diag`` shape ``(n, 2)``.
    """

    grid: TimeGrid
    source: str
    s1: np.ndarray
    s2: np.ndarray
    s_total: np.ndarray
    sigma_plus: np.ndarray
    bloch: np.ndarray
    rho2_diag: np.ndarray

    def __post_init__(self):
        n = self.grid.n_points
        for name in ("s1", "s2", "s_total", "sigma_plus", "bloch", "rho2_diag"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length does not match the grid")

    @property
    def t(self) -> np.ndarray:
        return self.grid.times

    def column(self, quantity: str) -> np.ndarray:
        simple = {"s1": self.s1, "s2": self.s2, "s_total": self.s_total}
        if quantity in simple:
            return simple[quantity]
        if quantity == "re_sigma_plus":
            return self.sigma_plus.real
        if quantity == "im_sigma_plus":
            return self.sigma_plus.imag
        if quantity == "abs_sigma_plus":
            return np.abs(self.sigma_plus)
        if quantity.startswith("bloch_") and quantity[-1] in "xyz":
            return self.bloch[:, "xyz".index(quantity[-1])]
        if quantity in ("rho2_00", "rho2_11"):
            return self.rho2_diag[:, int(quantity[-1])]
        raise KeyError(f"unknown quantity {quantity!r}; expected one of {', '.join(QUANTITIES)}")


def _pops_and_params(p: ModelParams, temp):
    if not isinstance(temp, Temperature):
        temp = Temperature.parse(temp)
    return thermal_populations(p.e2, temp)


def _oracle_states(p, pops, grid, method, substeps):
    h = hamiltonian(p)
    rho0 = initial_state(pops)
    if method == "exact":
        return evolve_exact(h, rho0, grid)
    if method == "rk4":
        return evolve_rk4(h, rho0, grid, substeps)
    raise ValueError(f"method must be 'exact' or 'rk4', got {method!r}")


def observable_series(
    p: ModelParams,
    temp: Temperature | float | str,
    grid: TimeGrid,
    source: str = ORACLE,
    method: str = "exact",
    substeps: int | None = None,
) -> ObservableSeries:
    """Entropies, precession and reduced-state observables along ``grid``.

    ``source="oracle"`` derives everything from the evolved joint state
    (``method`` picks the exact propagator or RK4). The closed-form sources
    evaluate the printed expressions; they differ only for Heisenberg
    coupling, where the repaired variant uses the corrected thermal entropy
    and ``2 conj(a_01)`` for the precession.
    """
    if source not in SOURCES:
        raise ValueError(f"source must be one of {SOURCES}, got {source!r}")
    pops = _pops_and_params(p, temp)
    times = grid.times
    n = len(times)
    s_total = np.empty(n)
    bloch = np.empty((n, 3))
    rho2 = np.empty((n, 2))

    if source == ORACLE:
        states = _oracle_states(p, pops, grid, method, substeps)
        s1 = np.empty(n)
        s2 = np.empty(n)
        sp = np.empty(n, dtype=complex)
        for k, rho in enumerate(states):
            rq = partial_trace(rho, Subsystem.Q)
            rt = partial_trace(rho, Subsystem.T)
            s1[k] = von_neumann_entropy(rq)
            s2[k] = von_neumann_entropy(rt)
            s_total[k] = von_neumann_entropy(rho)
            sp[k] = 2.0 * rq.matrix[1, 0]
            bloch[k] = _bloch(rq.matrix)
            rho2[k] = np.diag(rt.matrix).real
        return ObservableSeries(grid, source, s1, s2, s_total, sp, bloch, rho2)

    if p.coupling is CouplingKind.ISING:
        s1 = np.asarray(cf.ising_entropy(pops, p.j, times, cf.S1), dtype=float)
        s2 = np.full(n, cf.thermal_entropy(pops))
        sp = np.asarray(cf.ising_sigma_plus(p, pops, times), dtype=complex)
        for k, t in enumerate(times):
            s_total[k] = von_neumann_entropy(cf.ising_density(p, pops, t))
            bloch[k] = _bloch(cf.ising_reduced(p, pops, t, Subsystem.Q).matrix)
        rho2[:] = (pops.f00, pops.f11)
    else:
        form = "literal" if source == CLOSED_FORM_LITERAL else "repaired"
        s1 = np.asarray(cf.heis_entropy(p, pops, times, cf.S1), dtype=float)
        s2 = np.asarray(cf.heis_entropy(p, pops, times, cf.S2, form=form), dtype=float)
        if form == "literal":
            sp = np.asarray(cf.heis_sigma_plus(p, pops, times), dtype=complex)
        else:
            sp = np.asarray(cf.heis_sigma_plus_from_reduced(p, pops, times), dtype=complex)
        for k, t in enumerate(times):
            s_total[k] = von_neumann_entropy(cf.heis_density(p, pops, t))
            bloch[k] = _bloch(cf.heis_reduced(p, pops, t, Subsystem.Q).matrix)
            rho2[k] = np.diag(cf.heis_reduced(p, pops, t, Subsystem.T).matrix).real
    return ObservableSeries(grid, source, s1, s2, s_total, sp, bloch, rho2)


@dataclass(frozen=True)
class Extremum:
    t: float
    value: float
    kind: str  # "max" or "min"


def extrema_locator(series: ObservableSeries, quantity: str) -> list[Extremum]:
    """Interior local extrema by three-point comparison, without interpolation.

    A plateau of equal values counts once, at its first (smallest-t) point.
    """
    values = np.asarray(series.column(quantity), dtype=float)
    if len(values) < 3:
        raise ValueError("extrema need at least 3 grid points")
    times = series.t
    out = []
    n = len(values)
    start = 0
    while start < n:
        stop = start
        while stop + 1 < n and values[stop + 1] == values[start]:
            stop += 1
        if start > 0 and stop < n - 1:
            left, right, v = values[start - 1], values[stop + 1], values[start]
            if left < v and right < v:
                out.append(Extremum(float(times[start]), float(v), "max"))
            elif left > v and right > v:
                out.append(Extremum(float(times[start]), float(v), "min"))
        start = stop + 1
    return out


# --- audit report ------------------------------------------------------------


@dataclass(frozen=True)
class AuditTolerances:
    exact: float = 1e-9
    regime: float = 1e-3
    consistency: float = 1e-10


@dataclass(frozen=True)
class AuditEntry:
    formula: str
    description: str
    max_deviation: float
    t_at_max: float
    tolerance: float
    kind: str  # "exact" | "regime" | "consistency"

    @property
    def verdict(self) -> str:
        return "confirmed" if self.max_deviation <= self.tolerance else "discrepant"


def _json_float(x: float):
    return x if math.isfinite(x) else ("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))


@dataclass(frozen=True)
class AuditReport:
    params: ModelParams
    temperature: Temperature
    grid: TimeGrid
    entries: tuple[AuditEntry, ...] = field(default_factory=tuple)

    def __getitem__(self, formula: str) -> AuditEntry:
        for e in self.entries:
            if e.formula == formula:
                return e
        raise KeyError(formula)

    def formulas(self) -> list[str]:
        return [e.formula for e in self.entries]

    def to_dict(self) -> dict:
        return {
            "params": {
                "coupling": self.params.coupling.value,
                "e1": self.params.e1,
                "e2": self.params.e2,
                "j": self.params.j,
                "temperature": _json_float(self.temperature.value),
            },
            "grid": {"t_start": self.grid.t_start, "t_end": self.grid.t_end, "n_points": self.grid.n_points},
            "entries": [
                {
                    "formula": e.formula,
                    "description": e.description,
                    "kind": e.kind,
                    "max_deviation": _json_float(e.max_deviation),
                    "t_at_max": e.t_at_max,
                    "tolerance": e.tolerance,
                    "verdict": e.verdict,
                }
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        rows = [("formula", "kind", "max deviation", "at t", "tolerance", "verdict")]
        for e in self.entries:
            rows.append(
                (e.formula, e.kind, f"{e.max_deviation:.3e}", f"{e.t_at_max:.6g}", f"{e.tolerance:.0e}", e.verdict)
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def _entry(formula, description, deviations, times, tolerance, kind) -> AuditEntry:
    dev = np.asarray(deviations, dtype=float)
    dev = np.where(np.isnan(dev), np.inf, dev)
    k = int(np.argmax(dev))
    return AuditEntry(formula, description, float(dev[k]), float(times[k]), tolerance, kind)


def _matrix_dev(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-time max-norm distance between stacks of matrices."""
    return np.abs(a - b).reshape(len(a), -1).max(axis=1)


def run_audit(
    p: ModelParams,
    temp: Temperature | float | str,
    grid: TimeGrid,
    tolerances: AuditTolerances = AuditTolerances(),
) -> AuditReport:
    """Audit the printed expressions for ``p.coupling`` against the exact evolution."""
    if not isinstance(temp, Temperature):
        temp = Temperature.parse(temp)
    pops = thermal_populations(p.e2, temp)
    times = grid.times
    states = evolve_exact(hamiltonian(p), initial_state(pops), grid)
    rho = states.as_array()
    rq = np.stack([partial_trace(s, Subsystem.Q).matrix for s in states])
    rt = np.stack([partial_trace(s, Subsystem.T).matrix for s in states])
    s1 = np.array([von_neumann_entropy(m) for m in rq])
    s2 = np.array([von_neumann_entropy(m) for m in rt])
    sp = 2.0 * rq[:, 1, 0]
    tol_x, tol_r, tol_c = tolerances.exact, tolerances.regime, tolerances.consistency
    entries = []

    if p.coupling is CouplingKind.ISING:
        full = np.stack([cf.ising_density(p, pops, t).matrix for t in times])
        red_q = np.stack([cf.ising_reduced(p, pops, t, Subsystem.Q).matrix for t in times])
        red_t = np.stack([cf.ising_reduced(p, pops, t, Subsystem.T).matrix for t in times])
        entries += [
            _entry("eq4", "Ising joint density matrix", _matrix_dev(full, rho), times, tol_x, "exact"),
            _entry(
                "eq5",
                "Ising reduced qubit state and constant thermal state",
                np.maximum(_matrix_dev(red_q, rq), _matrix_dev(red_t, rt)),
                times,
                tol_x,
                "exact",
            ),
            _entry(
                "eq6_7", "Ising qubit entropy", np.abs(cf.ising_entropy(pops, p.j, times, cf.S1) - s1), times, tol_x, "exact"
            ),
            _entry("eq8", "thermal-spin entropy", np.abs(cf.thermal_entropy(pops) - s2), times, tol_x, "exact"),
            _entry("eq9", "Ising <sigma_plus>", np.abs(cf.ising_sigma_plus(p, pops, times) - sp), times, tol_x, "exact"),
        ]
        return AuditReport(p, temp, grid, tuple(entries))

    full = np.stack([cf.heis_density(p, pops, t).matrix for t in times])
    b = np.stack([cf.heis_reduced(p, pops, t, Subsystem.T).matrix for t in times])
    a = np.stack([cf.heis_reduced(p, pops, t, Subsystem.Q).matrix for t in times])
    a_from_full = np.stack([partial_trace(m, Subsystem.Q).matrix for m in full])
    s2_lit = np.asarray(cf.heis_entropy(p, pops, times, cf.S2, "literal"), dtype=float)
    s2_rep = np.asarray(cf.heis_entropy(p, pops, times, cf.S2, "repaired"), dtype=float)
    s1_cf = np.asarray(cf.heis_entropy(p, pops, times, cf.S1), dtype=float)
    sp_lit = np.asarray(cf.heis_sigma_plus(p, pops, times), dtype=complex)
    sp_a01 = np.asarray(cf.heis_sigma_plus_from_reduced(p, pops, times), dtype=complex)
    ising = p.with_coupling(CouplingKind.ISING)
    s1_ising = np.asarray(cf.ising_entropy(pops, p.j, times, cf.S1), dtype=float)
    abs_sp_ising = np.abs(cf.ising_sigma_plus(ising, pops, times))
    s2_ising = cf.thermal_entropy(pops)
    x2 = np.asarray(cf.entropy_aux(p, pops, times).x2, dtype=float)

    entries += [
        _entry("eq10_11_literal", "Heisenberg thermal entropy as printed", np.abs(s2_lit - s2), times, tol_x, "exact"),
        _entry(
            "eq10_11_repaired", "Heisenberg thermal entropy with 1/2 restored", np.abs(s2_rep - s2), times, tol_x, "exact"
        ),
        _entry("eq12_13", "Heisenberg qubit entropy", np.abs(s1_cf - s1), times, tol_x, "exact"),
        _entry("eq14_literal", "Heisenberg <sigma_plus> as printed", np.abs(sp_lit - sp), times, tol_x, "exact"),
        _entry("eq14_via_a01", "Heisenberg <sigma_plus> as 2 conj(a_01)", np.abs(sp_a01 - sp), times, tol_x, "exact"),
        _entry("eq15", "Heisenberg joint density matrix", _matrix_dev(full, rho), times, tol_x, "exact"),
        _entry("eq16", "Heisenberg reduced thermal state b_ij", _matrix_dev(b, rt), times, tol_x, "exact"),
        _entry("eq17", "Heisenberg reduced qubit state a_ij", _matrix_dev(a, rq), times, tol_x, "exact"),
        _entry(
            "eq17_vs_trace_eq15",
            "a_ij against the partial trace of the printed joint state",
            _matrix_dev(a, a_from_full),
            times,
            tol_c,
            "consistency",
        ),
        _entry(
            "eq10_literal_limit_eq8", "printed thermal entropy vs Ising value", np.abs(s2_lit - s2_ising), times, tol_r, "regime"
        ),
        _entry(
            "eq10_repaired_limit_eq8",
            "repaired thermal entropy vs Ising value",
            np.abs(s2_rep - s2_ising),
            times,
            tol_r,
            "regime",
        ),
        _entry("eq11_limit_population_gap", "X2 vs f00 - f11", np.abs(x2 - (pops.f00 - pops.f11)), times, tol_r, "regime"),
        _entry("eq12_limit_eq6", "Heisenberg vs Ising qubit entropy", np.abs(s1_cf - s1_ising), times, tol_r, "regime"),
        _entry(
            "eq14_literal_limit_eq9",
            "printed |<sigma_plus>| vs Ising amplitude",
            np.abs(np.abs(sp_lit) - abs_sp_ising),
            times,
            tol_r,
            "regime",
        ),
        _entry(
            "eq14_via_a01_limit_eq9",
            "|2 conj(a_01)| vs Ising amplitude",
            np.abs(np.abs(sp_a01) - abs_sp_ising),
            times,
            tol_r,
            "regime",
        ),
    ]
    return AuditReport(p, temp, grid, tuple(entries))
