"""Qubits coupled to thermal two-level systems: dynamics, entropies, audits."""

from .linalg import (
    DensityMatrix,
    Subsystem,
    Tolerances,
    kron,
    partial_trace,
    propagator,
    von_neumann_entropy,
)
from .model import (
    PAPER_PARAMS,
    CouplingKind,
    ModelParams,
    Temperature,
    ThermalPopulations,
    hamiltonian,
    initial_state,
    thermal_populations,
)
from .dynamics import STANDARD_GRID, StateSeries, TimeGrid, evolve_exact, evolve_rk4

__version__ = "0.1.0"

__all__ = [
    "CouplingKind",
    "DensityMatrix",
    "ModelParams",
    "PAPER_PARAMS",
    "STANDARD_GRID",
    "StateSeries",
    "Subsystem",
    "Temperature",
    "ThermalPopulations",
    "TimeGrid",
    "Tolerances",
    "evolve_exact",
    "evolve_rk4",
    "hamiltonian",
    "initial_state",
    "kron",
    "partial_trace",
    "propagator",
    "thermal_populations",
    "von_neumann_entropy",
]
