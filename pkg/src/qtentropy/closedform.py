"""Closed-form expressions for the two-spin dynamics, evaluated as printed.

Nothing here calls the propagator. Agreement with the numerical evolution
is established only by :mod:`qtentropy.audit`, so a wrong expression shows
up as an audit finding instead of being silently corrected.

Entropy and precession functions accept scalar or array ``t``; the matrix
functions take a scalar ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, Subsystem
from .model import CouplingKind, ModelParams, ThermalPopulations

# below this, 4 f00 f11 sin^2(2jt) (or the analogous determinant term) is
# treated as a pure state and the entropy returns its limit value 0
DEGENERATE_EPS = 1e-14

S1 = "S1"
S2 = "S2"


class CouplingMismatch(ValueError):
    pass


def _require(p: ModelParams, kind: CouplingKind) -> None:
    if p.coupling is not kind:
        raise CouplingMismatch(f"expression requires {kind.value} coupling, got {p.coupling.value}")


def _hermitian_completion(upper: np.ndarray) -> np.ndarray:
    full = np.triu(upper, 1)
    full = full + full.conj().T
    full[np.diag_indices_from(full)] = np.diag(upper).real
    return full


def _plog(x):
    """``x ln x`` with ``0 ln 0 = 0``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def _scalarize(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def thermal_entropy(pops: ThermalPopulations) -> float:
    """``-(f00 ln f00 + f11 ln f11)``, the constant Ising T-spin entropy."""
    return float(-(_plog(pops.f00) + _plog(pops.f11)))


# --- Ising -----------------------------------------------------------------


def ising_density(p: ModelParams, pops: ThermalPopulations, t: float) -> DensityMatrix:
    _require(p, CouplingKind.ISING)
    f00, f11 = pops.f00, pops.f11
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = r[2, 2] = 0.5 * f00
    r[1, 1] = r[3, 3] = 0.5 * f11
    r[0, 2] = 0.5 * f00 * np.exp(2j * (p.e1 + p.j) * t)
    r[1, 3] = 0.5 * f11 * np.exp(2j * (p.e1 - p.j) * t)
    return DensityMatrix(_hermitian_completion(r))


def ising_coherence(p: ModelParams, pops: ThermalPopulations, t):
    """Off-diagonal element ``a`` of the reduced qubit state ``(1/2)[[1, a], [a*, 1]]``."""
    t = np.asarray(t, dtype=float)
    a = pops.f00 * np.exp(2j * (p.e1 + p.j) * t) + pops.f11 * np.exp(2j * (p.e1 - p.j) * t)
    return _scalarize(a)


def ising_reduced(p: ModelParams, pops: ThermalPopulations, t: float, keep: Subsystem | str) -> DensityMatrix:
    _require(p, CouplingKind.ISING)
    if Subsystem(keep) is Subsystem.T:
        return DensityMatrix(pops.diag())
    a = ising_coherence(p, pops, t)
    return DensityMatrix(0.5 * np.array([[1.0, a], [np.conj(a), 1.0]]))


def ising_x(pops: ThermalPopulations, j: float, t):
    """Length of the reduced qubit Bloch vector, ``sqrt(1 - 4 f00 f11 sin^2(2jt))``."""
    t = np.asarray(t, dtype=float)
    return _scalarize(np.sqrt(1.0 - 4.0 * pops.f00 * pops.f11 * np.sin(2.0 * j * t) ** 2))


def ising_entropy(pops: ThermalPopulations, j: float, t, which: str = S1):
    if which == S2:
        s2 = thermal_entropy(pops)
        return _scalarize(np.full(np.shape(t), s2)) if np.ndim(t) else s2
    if which != S1:
        raise ValueError(f"which must be 'S1' or 'S2', got {which!r}")
    t = np.asarray(t, dtype=float)
    q = pops.f00 * pops.f11 * np.sin(2.0 * j * t) ** 2
    x = np.sqrt(1.0 - 4.0 * q)
    degenerate = 4.0 * q < DEGENERATE_EPS
    with np.errstate(divide="ignore", invalid="ignore"):
        q_safe = np.where(degenerate, 0.25, q)
        x_safe = np.where(degenerate, 0.0, x)
        # 1 - X = 4q / (1 + X) avoids cancellation near the pure-state points
        s = 0.5 * x_safe * np.log(4.0 * q_safe / (1.0 + x_safe) ** 2) - 0.5 * np.log(q_safe)
    return _scalarize(np.where(degenerate, 0.0, s))


def ising_sigma_plus(p: ModelParams, pops: ThermalPopulations, t):
    t = np.asarray(t, dtype=float)
    sp = pops.f00 * np.exp(-2j * (p.e1 + p.j) * t) + pops.f11 * np.exp(-2j * (p.e1 - p.j) * t)
    return _scalarize(sp)


# --- Heisenberg ------------------------------------------------------------


@dataclass(frozen=True)
class HeisenbergAux:
    e12: float
    w: float


def heisenberg_aux(p: ModelParams) -> HeisenbergAux:
    e12 = p.e1 - p.e2
    w = float(np.sqrt(e12**2 + 4.0 * p.j**2))
    if w == 0.0:
        raise ValueError("Heisenberg expressions divide by W, which vanishes for e1 == e2 and j == 0")
    return HeisenbergAux(e12, w)


@dataclass(frozen=True)
class EntropyAux:
    x: np.ndarray | float
    x1: np.ndarray | float
    y1: np.ndarray | float
    x2: np.ndarray | float


def entropy_aux(p: ModelParams, pops: ThermalPopulations, t) -> EntropyAux:
    """The auxiliary quantities ``X``, ``X1``, ``Y1`` and ``X2`` entering the entropies."""
    t = np.asarray(t, dtype=float)
    f00, f11, j = pops.f00, pops.f11, p.j
    aux = heisenberg_aux(p)
    w, w2, w4 = aux.w, aux.w**2, aux.w**4
    s_w = np.sin(t * w)
    s_2j = np.sin(2.0 * j * t)
    dpop2 = (f00 - f11) ** 2
    quartic = _heis_quartic(p, pops, t)
    y1 = f00 * f11 * s_2j**2 - 4.0 * quartic + j**2 * s_w**2 * (1.0 - 4.0 * f00 * f11 * s_2j**2) / w2
    with np.errstate(invalid="ignore"):
        x1 = np.sqrt(1.0 - 4.0 * y1 + 4.0 * quartic)
        x2 = np.sqrt(
            dpop2 * (w2 - 4.0 * j**2 * s_w**2) ** 2 / w4
            + 4.0 * j**2 * (1.0 - 4.0 * f00 * f11 * np.cos(2.0 * j * t) ** 2) * np.sin(2.0 * t * w) ** 2 / w2
        )
    x = np.sqrt(1.0 - 4.0 * f00 * f11 * s_2j**2)
    return EntropyAux(*(_scalarize(v) for v in (x, x1, y1, x2)))


def heis_density(p: ModelParams, pops: ThermalPopulations, t: float) -> DensityMatrix:
    _require(p, CouplingKind.HEISENBERG)
    f00, f11, j, e1, e2 = pops.f00, pops.f11, p.j, p.e1, p.e2
    aux = heisenberg_aux(p)
    e12, w = aux.e12, aux.w
    s, c = np.sin(t * w), np.cos(t * w)
    c2, s2 = np.cos(2 * t * w), np.sin(2 * t * w)
    plus = np.exp(1j * t * (e1 + e2 + 2 * j))
    minus = np.exp(1j * t * (e1 + e2 - 2 * j))
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = 0.5 * f00
    r[3, 3] = 0.5 * f11
    r[1, 1] = (f11 * (2 * j**2 * c2 + e12**2 + 2 * j**2) + 4 * f00 * j**2 * s**2) / (2 * w**2)
    r[2, 2] = (f00 * (2 * j**2 * c2 + e12**2 + 2 * j**2) + 4 * f11 * j**2 * s**2) / (2 * w**2)
    r[0, 1] = -1j * j * f00 * plus * s / w
    r[0, 2] = f00 * plus * (w * c + 1j * e12 * s) / (2 * w)
    r[0, 3] = 0.0
    r[1, 2] = 0.5 * j * (f00 - f11) * (1j * w * s2 + e12 * c2 - e12) / w**2
    r[1, 3] = f11 * minus * (w * c + 1j * e12 * s) / (2 * w)
    r[2, 3] = 1j * f11 * j * minus * s / w
    return DensityMatrix(_hermitian_completion(r))


def _heis_reduced_matrix(p: ModelParams, pops: ThermalPopulations, t: float, keep: Subsystem) -> np.ndarray:
    f00, f11, j, e1, e2 = pops.f00, pops.f11, p.j, p.e1, p.e2
    aux = heisenberg_aux(p)
    e12, w = aux.e12, aux.w
    c2 = np.cos(2 * t * w)
    m = np.zeros((2, 2), dtype=complex)
    if keep is Subsystem.T:
        m[0, 0] = 0.5 * f00 + (e12**2 * f00 + 2 * j**2 + 2 * (f00 - f11) * j**2 * c2) / (2 * w**2)
        m[1, 1] = 0.5 * f11 + (e12**2 * f11 + 2 * j**2 + 2 * (f11 - f00) * j**2 * c2) / (2 * w**2)
        m[0, 1] = (
            1j * j * np.exp(-1j * (e1 + e2 + 2 * j) * t) * (f00 - np.exp(4j * j * t) * f11) * np.sin(t * w) / (2 * w)
        )
    else:
        m[0, 0] = 0.5 * f00 + (e12**2 * f11 + 2 * j**2 + 2 * (f11 - f00) * j**2 * c2) / (2 * w**2)
        m[1, 1] = 0.5 * f11 + (e12**2 * f00 + 2 * j**2 + 2 * (f00 - f11) * j**2 * c2) / (2 * w**2)
        m[0, 1] = (
            np.exp(1j * t * (e1 + e2 + 2 * j))
            * (f00 + f11 * np.exp(-4j * j * t))
            * (w * np.cos(t * w) + 1j * e12 * np.sin(t * w))
            / (2 * w)
        )
    return _hermitian_completion(m)


def heis_reduced(p: ModelParams, pops: ThermalPopulations, t: float, keep: Subsystem | str) -> DensityMatrix:
    """Printed reduced states: ``keep="T"`` gives the b_ij matrix, ``keep="Q"`` the a_ij matrix."""
    _require(p, CouplingKind.HEISENBERG)
    return DensityMatrix(_heis_reduced_matrix(p, pops, t, Subsystem(keep)))


def _heis_quartic(p: ModelParams, pops: ThermalPopulations, t):
    """The ``J^4 (f00 - f11)^2 sin^4(tW) / W^4`` term shared by ``X1`` and ``Y1``."""
    w = heisenberg_aux(p).w
    return p.j**4 * (pops.f00 - pops.f11) ** 2 * np.sin(np.asarray(t, dtype=float) * w) ** 4 / w**4


def _two_level_entropy(x, half: bool):
    k = 0.5 if half else 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        gap = 1.0 - x**2
        return 0.5 * np.log(4.0) - 0.5 * np.log(gap) + k * x * np.log(gap / (1.0 + x) ** 2)


def heis_entropy(p: ModelParams, pops: ThermalPopulations, t, which: str = S1, form: str = "literal"):
    """Heisenberg qubit (``S1``) or thermal (``S2``) entropy from the printed formulas.

    ``form="repaired"`` only affects ``S2``: it restores the factor 1/2 on
    the ``X2 ln((1 - X2)/(1 + X2))`` term that a two-level entropy with
    eigenvalues ``(1 +- X2)/2`` requires.
    """
    _require(p, CouplingKind.HEISENBERG)
    if form not in ("literal", "repaired"):
        raise ValueError(f"form must be 'literal' or 'repaired', got {form!r}")
    aux = entropy_aux(p, pops, t)
    if which == S1:
        y1 = np.asarray(aux.y1)
        x1 = np.asarray(aux.x1)
        # 1 - X1 = (1 - X1^2) / (1 + X1), with 1 - X1^2 read off the X1 definition
        one_minus_x1_sq = 4.0 * y1 - 4.0 * _heis_quartic(p, pops, t)
        degenerate = 4.0 * y1 < DEGENERATE_EPS
        with np.errstate(divide="ignore", invalid="ignore"):
            y_safe = np.where(degenerate, 0.25, y1)
            x_safe = np.where(degenerate, 0.0, x1)
            gap = np.where(degenerate, 1.0, one_minus_x1_sq)
            s = 0.5 * x_safe * np.log(gap / (1.0 + x_safe) ** 2) - 0.5 * np.log(y_safe)
        return _scalarize(np.where(degenerate, 0.0, s))
    if which == S2:
        x2 = np.asarray(aux.x2)
        if form == "literal":
            return _scalarize(_two_level_entropy(x2, half=False))
        degenerate = 1.0 - x2**2 < DEGENERATE_EPS
        s = _two_level_entropy(np.where(degenerate, 0.0, x2), half=True)
        return _scalarize(np.where(degenerate, 0.0, s))
    raise ValueError(f"which must be 'S1' or 'S2', got {which!r}")


def heis_sigma_plus(p: ModelParams, pops: ThermalPopulations, t):
    """Transverse qubit component ``<sigma_x + i sigma_y>`` exactly as printed."""
    _require(p, CouplingKind.HEISENBERG)
    t = np.asarray(t, dtype=float)
    f00, f11, j = pops.f00, pops.f11, p.j
    aux = heisenberg_aux(p)
    e12, w = aux.e12, aux.w
    first = (f00 * np.exp(-1j * t * (2 * j + w)) + f11 * np.exp(-1j * t * (-2 * j + w))) / (2 * w)
    second = (f00 * np.exp(-1j * t * (2 * j - w)) + f11 * np.exp(-1j * t * (-2 * j - w))) / (2 * w)
    return _scalarize((e12 + w) * np.exp(-1j * t * (p.e1 + p.e2)) * (first - second))


def heis_sigma_plus_from_reduced(p: ModelParams, pops: ThermalPopulations, t):
    """``<sigma_plus> = 2 conj(a_01)`` from the printed reduced qubit state."""
    _require(p, CouplingKind.HEISENBERG)
    t = np.asarray(t, dtype=float)
    e1, e2, j, f00, f11 = p.e1, p.e2, p.j, pops.f00, pops.f11
    aux = heisenberg_aux(p)
    e12, w = aux.e12, aux.w
    a01 = (
        np.exp(1j * t * (e1 + e2 + 2 * j))
        * (f00 + f11 * np.exp(-4j * j * t))
        * (w * np.cos(t * w) + 1j * e12 * np.sin(t * w))
        / (2 * w)
    )
    return _scalarize(2.0 * np.conj(a01))
