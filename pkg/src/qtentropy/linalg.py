"""Dense complex matrix kernel for the two-spin problem.

Basis ordering is fixed across the package: a joint index is ``2*q + s``
where ``q`` is the Q-spin state and ``s`` the T-spin state, and state 0 is
the ``sigma_z = +1`` eigenstate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

BASIS_CONVENTION = "2q+s"

IDENTITY2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# sigma_x + i sigma_y; <sigma_plus> = Tr(SIGMA_PLUS @ rho) = 2 * rho[1, 0]
SIGMA_PLUS = PAULI_X + 1j * PAULI_Y

for _m in (IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z, SIGMA_PLUS):
    _m.setflags(write=False)


class LinalgError(ValueError):
    """Raised when a matrix violates an operation's precondition."""


class NotHermitianError(LinalgError):
    pass


class PositivityError(LinalgError):
    pass


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used by validation and entropy routines."""

    hermitian: float = 1e-12
    trace: float = 1e-12
    psd: float = 1e-10
    # accepted asymmetry for inputs to the eigensolver and propagator
    eig_hermitian: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()


class Subsystem(enum.Enum):
    Q = "Q"
    T = "T"


def _as_square(m, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise LinalgError(f"{name} must be square, got shape {arr.shape}")
    return arr


def hermiticity_error(m) -> float:
    arr = _as_square(m)
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated, immutable density matrix.

    Construction checks Hermiticity, unit trace and positivity against
    ``tol``; a violation raises :class:`LinalgError` (or
    :class:`PositivityError` for a negative eigenvalue).
    """

    matrix: np.ndarray
    basis: str = BASIS_CONVENTION
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self):
        arr = _as_square(self.matrix, "density matrix").copy()
        herm = hermiticity_error(arr)
        if herm > self.tol.hermitian:
            raise NotHermitianError(f"density matrix not Hermitian (max |M - M^H| = {herm:.3e})")
        tr = np.trace(arr)
        if abs(tr - 1.0) > self.tol.trace:
            raise LinalgError(f"density matrix trace {tr:.15g} differs from 1")
        lo = float(np.linalg.eigvalsh(arr)[0])
        if lo < -self.tol.psd:
            raise PositivityError(f"density matrix has eigenvalue {lo:.3e} < 0")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return herm_eigvals(self.matrix, self.tol)

    def allclose(self, other: "DensityMatrix | np.ndarray", atol: float = 1e-10) -> bool:
        return max_abs_diff(self, other) <= atol

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def _raw(m) -> np.ndarray:
    return m.matrix if isinstance(m, DensityMatrix) else np.asarray(m, dtype=complex)


def max_abs_diff(a, b) -> float:
    """Componentwise max-norm distance; the package's notion of matrix equality."""
    return float(np.max(np.abs(_raw(a) - _raw(b))))


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``out[i*n + k, j*n + l] = a[i, j] * b[k, l]``."""
    return np.kron(_as_square(_raw(a), "a"), _as_square(_raw(b), "b"))


def partial_trace(rho, keep: Subsystem | str, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Reduce a 4x4 two-spin state to the subsystem named by ``keep``."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho, tol=tol)
    if rho.dim != 4:
        raise LinalgError(f"partial_trace expects a 4x4 state, got {rho.dim}x{rho.dim}")
    keep = Subsystem(keep)
    t = rho.matrix.reshape(2, 2, 2, 2)  # [q, s, q', s']
    if keep is Subsystem.Q:
        out = np.einsum("ikjk->ij", t)
    else:
        out = np.einsum("kikj->ij", t)
    return DensityMatrix(out, basis=rho.basis, tol=tol)


def _check_hermitian(m: np.ndarray, tol: Tolerances) -> None:
    herm = hermiticity_error(m)
    if herm > tol.eig_hermitian:
        raise NotHermitianError(f"matrix not Hermitian (max |M - M^H| = {herm:.3e})")


def herm_eigh(m, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix."""
    arr = _as_square(_raw(m))
    _check_hermitian(arr, tol)
    # symmetrize so round-off asymmetry cannot leak into the spectrum
    return np.linalg.eigh(0.5 * (arr + arr.conj().T))


def herm_eigvals(m, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    arr = _as_square(_raw(m))
    _check_hermitian(arr, tol)
    return np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))


def propagators(h, times, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Stack of ``exp(-i h t)`` for every ``t`` in ``times``, shape ``(n, d, d)``.

    One eigendecomposition is shared by all time points.
    """
    evals, vecs = herm_eigh(h, tol)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    phases = np.exp(-1j * np.outer(times, evals))
    return np.einsum("ik,tk,jk->tij", vecs, phases, vecs.conj())


def propagator(h, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    return propagators(h, [t], tol)[0]


def von_neumann_entropy(rho, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Entropy ``-Tr rho ln rho`` in nats, from the eigenvalues.

    Eigenvalues in ``[-tol.psd, 0)`` are clamped to zero and ``0 ln 0 = 0``.
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho, tol=tol)
    lam = rho.eigenvalues()
    if lam[0] < -tol.psd:
        raise PositivityError(f"eigenvalue {lam[0]:.3e} < 0")
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log(lam))))
