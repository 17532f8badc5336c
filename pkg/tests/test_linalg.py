import numpy as np
import pytest

from conftest import LN2, S2_T1
from oracles import entropy_pade, expm_pade, kron_loops, partial_trace_loops, random_density, random_hermitian
from qtentropy.linalg import (
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    SIGMA_PLUS,
    DensityMatrix,
    LinalgError,
    NotHermitianError,
    PositivityError,
    Subsystem,
    herm_eigh,
    herm_eigvals,
    kron,
    partial_trace,
    propagator,
    von_neumann_entropy,
)

F00, F11 = 0.880797, 0.119203
RHO1_0 = np.full((2, 2), 0.5)


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(kron(IDENTITY2, IDENTITY2), np.eye(4))

    def test_pauli_zz(self):
        np.testing.assert_array_equal(kron(PAULI_Z, PAULI_Z), np.diag([1, -1, -1, 1]))

    def test_initial_state_layout(self):
        rho = kron(RHO1_0, np.diag([F00, F11]))
        expected = np.zeros((4, 4))
        for i, j in [(0, 0), (2, 2), (0, 2), (2, 0)]:
            expected[i, j] = F00 / 2
        for i, j in [(1, 1), (3, 3), (1, 3), (3, 1)]:
            expected[i, j] = F11 / 2
        np.testing.assert_allclose(rho, expected, atol=1e-15)

    def test_matches_loops(self, rng):
        a, b = random_hermitian(rng, 2), random_hermitian(rng, 3)
        np.testing.assert_allclose(kron(a, b), kron_loops(a, b), atol=1e-14)

    def test_rejects_non_square(self):
        with pytest.raises(LinalgError):
            kron(np.ones((2, 3)), IDENTITY2)


class TestPartialTrace:
    def test_product_state_factors(self):
        rho2 = np.diag([F00, F11])
        rho = kron(RHO1_0, rho2)
        assert partial_trace(rho, "Q").allclose(RHO1_0, 1e-15)
        assert partial_trace(rho, Subsystem.T).allclose(rho2, 1e-15)

    def test_bell_state(self):
        phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        red = partial_trace(np.outer(phi, phi.conj()), "Q")
        np.testing.assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-15)

    def test_matches_loops(self, rng):
        rho = random_density(rng, 4)
        for keep in ("Q", "T"):
            np.testing.assert_allclose(partial_trace(rho, keep).matrix, partial_trace_loops(rho, keep), atol=1e-15)

    def test_rejects_invalid_state(self):
        with pytest.raises(LinalgError):
            partial_trace(2 * np.eye(4) / 4, "Q")
        with pytest.raises(NotHermitianError):
            partial_trace(np.eye(4) / 4 + 1e-6 * np.triu(np.ones((4, 4)), 1), "Q")


class TestEigvals:
    def test_diag(self):
        np.testing.assert_allclose(herm_eigvals(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])

    def test_projector(self):
        np.testing.assert_allclose(herm_eigvals(RHO1_0), [0, 1], atol=1e-15)

    def test_two_by_two_closed_form(self):
        a = 0.3 * np.exp(0.7j)
        lam = herm_eigvals(0.5 * np.array([[1, a], [np.conj(a), 1]]))
        np.testing.assert_allclose(lam, [(1 - 0.3) / 2, (1 + 0.3) / 2], atol=1e-15)

    def test_reconstruction(self, rng):
        m = random_hermitian(rng, 4)
        w, v = herm_eigh(m)
        assert np.max(np.abs(m - v @ np.diag(w) @ v.conj().T)) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            herm_eigvals(np.array([[0, 1], [0, 0]]))


class TestPropagator:
    def test_zero_time(self, rng):
        np.testing.assert_allclose(propagator(random_hermitian(rng, 4), 0.0), np.eye(4), atol=1e-14)

    def test_diagonal(self):
        d = np.array([-1.0101, 1.0099, -0.9899, 0.9901])
        np.testing.assert_allclose(propagator(np.diag(d), 3.7), np.diag(np.exp(-1j * d * 3.7)), atol=1e-14)

    def test_group_property(self, rng):
        h = random_hermitian(rng, 4)
        assert np.max(np.abs(propagator(h, 0.4) @ propagator(h, 1.3) - propagator(h, 1.7))) <= 1e-10

    def test_against_pade(self, rng):
        h = random_hermitian(rng, 4)
        np.testing.assert_allclose(propagator(h, 2.5), expm_pade(h, 2.5), atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            propagator(SIGMA_PLUS, 1.0)


class TestEntropy:
    def test_pure(self):
        assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0

    def test_maximally_mixed(self):
        assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(LN2, abs=1e-15)

    def test_thermal_value(self):
        # populations rounded to 6 digits, as quoted
        assert von_neumann_entropy(np.diag([F00, F11])) == pytest.approx(0.365334, abs=5e-7)
        assert von_neumann_entropy(np.diag([0.88079707797788244, 0.11920292202211756])) == pytest.approx(
            S2_T1, abs=1e-15
        )

    def test_against_matrix_log(self, rng):
        rho = random_density(rng, 4)
        assert von_neumann_entropy(rho) == pytest.approx(entropy_pade(rho), abs=1e-10)

    def test_clamps_tiny_negative_eigenvalue(self):
        assert von_neumann_entropy(np.diag([1 + 1e-11, -1e-11])) == pytest.approx(0.0, abs=1e-9)

    def test_positivity_error(self):
        with pytest.raises(PositivityError):
            von_neumann_entropy(np.diag([1.001, -0.001]))


def test_sigma_plus_convention():
    np.testing.assert_array_equal(SIGMA_PLUS, [[0, 2], [0, 0]])
    assert np.trace(SIGMA_PLUS @ RHO1_0) == pytest.approx(1.0)
    np.testing.assert_array_equal(PAULI_X + 1j * PAULI_Y, SIGMA_PLUS)


def test_density_matrix_is_immutable():
    rho = DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0
