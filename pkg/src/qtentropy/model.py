"""Model parameters, Hamiltonians, thermal populations and initial states."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .linalg import IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z, DensityMatrix, kron


class ParameterError(ValueError):
    pass


class CouplingKind(enum.Enum):
    ISING = "ising"
    HEISENBERG = "heisenberg"


@dataclass(frozen=True)
class ModelParams:
    """Zeeman energies ``e1`` (Q-spin), ``e2`` (T-spin) and coupling ``j``.

    Natural units with hbar = k_B = 1.
    """

    e1: float
    e2: float
    j: float
    coupling: CouplingKind = CouplingKind.ISING

    def __post_init__(self):
        object.__setattr__(self, "coupling", CouplingKind(self.coupling))
        for name in ("e1", "e2", "j"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))

    @property
    def in_paper_regime(self) -> bool:
        """True when ``0 <= e1 << j << e2``, read as factor-of-ten separations."""
        return 0 <= self.e1 <= self.j / 10 and self.j <= self.e2 / 10

    def with_coupling(self, coupling: CouplingKind | str) -> "ModelParams":
        return ModelParams(self.e1, self.e2, self.j, CouplingKind(coupling))


PAPER_PARAMS = ModelParams(e1=1e-4, e2=1.0, j=1e-2)


@dataclass(frozen=True)
class Temperature:
    """Temperature in energy units. ``0`` and ``inf`` are the exact limits."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v < 0:
            raise ParameterError(f"temperature must be >= 0 or inf, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def parse(cls, text: str | float) -> "Temperature":
        if isinstance(text, str):
            text = text.strip().lower()
            if text in ("inf", "infinity", "+inf"):
                return cls(math.inf)
            try:
                return cls(float(text))
            except ValueError:
                raise ParameterError(f"cannot parse temperature {text!r}") from None
        return cls(text)

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def label(self) -> str:
        return "inf" if self.is_infinite else format(self.value, "g")


@dataclass(frozen=True)
class ThermalPopulations:
    f00: float
    f11: float
    z: float

    def __post_init__(self):
        if abs(self.f00 + self.f11 - 1.0) > 1e-14 or not (self.f00 >= self.f11 >= 0):
            raise ParameterError(f"invalid populations f00={self.f00!r}, f11={self.f11!r}")

    def swapped(self) -> "ThermalPopulations":
        """Populations with the two levels exchanged (skips the ordering check)."""
        obj = object.__new__(ThermalPopulations)
        object.__setattr__(obj, "f00", self.f11)
        object.__setattr__(obj, "f11", self.f00)
        object.__setattr__(obj, "z", self.z)
        return obj

    def diag(self) -> np.ndarray:
        return np.diag([self.f00, self.f11]).astype(complex)


def thermal_populations(e2: float, temp: Temperature | float | str) -> ThermalPopulations:
    """Boltzmann weights of the T-spin, whose ground state 0 has energy ``-e2``."""
    if not (math.isfinite(e2) and e2 > 0):
        raise ParameterError(f"e2 must be positive, got {e2!r}")
    if not isinstance(temp, Temperature):
        temp = Temperature.parse(temp)
    if temp.is_zero:
        return ThermalPopulations(1.0, 0.0, math.inf)
    if temp.is_infinite:
        return ThermalPopulations(0.5, 0.5, 2.0)
    beta_e = e2 / temp.value
    # logistic form keeps f00, f11 finite when exp(beta_e) overflows
    ratio = math.exp(-2.0 * beta_e)
    f00 = 1.0 / (1.0 + ratio)
    f11 = ratio / (1.0 + ratio)
    try:
        z = 2.0 * math.cosh(beta_e)
    except OverflowError:
        z = math.inf
    return ThermalPopulations(f00, f11, z)


def hamiltonian(p: ModelParams) -> np.ndarray:
    """Two-spin Hamiltonian ``-e1 sz1 - e2 sz2 - j (coupling term)``."""
    h = -p.e1 * kron(PAULI_Z, IDENTITY2) - p.e2 * kron(IDENTITY2, PAULI_Z) - p.j * kron(PAULI_Z, PAULI_Z)
    if p.coupling is CouplingKind.HEISENBERG:
        h = h - p.j * (kron(PAULI_X, PAULI_X) + kron(PAULI_Y, PAULI_Y))
    return h


# Q-spin along +x
QUBIT_PLUS_X = np.full((2, 2), 0.5, dtype=complex)


def initial_state(pops: ThermalPopulations) -> DensityMatrix:
    return DensityMatrix(kron(QUBIT_PLUS_X, pops.diag()))
