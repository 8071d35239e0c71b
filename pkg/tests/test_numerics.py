import numpy as np
import pytest

from conftest import random_unitary
from qwcomplexity import (
    BranchAmbiguityWarning,
    DegenerateSeedError,
    default_basis,
    gram_schmidt_complete,
    hermitian_eigen_2x2,
    matrix_exp,
    path_ordered_product,
    principal_log_unitary,
)


class TestHermitianEigen:
    def test_scalar_matrix(self):
        spec = hermitian_eigen_2x2(0.5 * np.eye(2))
        assert np.allclose(spec.values, [0.5, 0.5])

    def test_rank_one_projector(self):
        rho = 0.5 * np.array([[1.0, -1.0j], [1.0j, 1.0]])
        spec = hermitian_eigen_2x2(rho)
        assert np.allclose(spec.values, [1.0, 0.0], atol=1e-12)
        # top eigenvector is (1, i)/sqrt(2) after phase fixing
        assert np.allclose(spec.vectors[:, 0], np.array([1.0, 1.0j]) / np.sqrt(2), atol=1e-12)

    def test_closed_form_eigenvalues_for_trace_one(self, rng):
        for _ in range(50):
            a = rng.uniform(0, 1)
            z = rng.normal() + 1j * rng.normal()
            rho = np.array([[a, z], [np.conj(z), 1 - a]])
            # rescale off-diagonal so the matrix stays PSD-ish; formula holds regardless
            spec = hermitian_eigen_2x2(rho)
            det = np.linalg.det(rho).real
            lp = (1 + np.sqrt(max(0.0, 1 - 4 * det))) / 2
            assert spec.values[0] == pytest.approx(lp, abs=1e-12)

    def test_eigen_residual(self, rng):
        rho = np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]])
        spec = hermitian_eigen_2x2(rho)
        for lam, v in zip(spec.values, spec.vectors.T):
            assert np.linalg.norm(rho @ v - lam * v) <= 1e-11

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eigen_2x2(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestPrincipalLog:
    def test_identity(self):
        H = principal_log_unitary(np.eye(4, dtype=complex))
        assert np.abs(H).max() <= 1e-12

    def test_diagonal_case(self):
        U = np.diag(np.exp(1j * np.array([np.pi / 3, -np.pi / 3, 0.0, 0.0])))
        H = principal_log_unitary(U)
        expected = np.diag([-np.pi / 3, np.pi / 3, 0.0, 0.0])
        assert np.abs(H - expected).max() <= 1e-12

    def test_round_trip_random(self, rng):
        for _ in range(30):
            U = random_unitary(rng)
            H = principal_log_unitary(U)
            assert np.abs(H - H.conj().T).max() <= 1e-12
            assert np.abs(matrix_exp(-1j * H) - U).max() <= 1e-9

    def test_branch_cut_warning(self):
        U = np.diag([-1.0, 1.0, 1.0, 1.0]).astype(complex)
        with pytest.warns(BranchAmbiguityWarning):
            principal_log_unitary(U)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            principal_log_unitary(np.ones((4, 4), dtype=complex))

    def test_log_exp_identity_inside_branch(self, rng):
        for _ in range(20):
            U = random_unitary(rng)
            H = principal_log_unitary(U)
            H2 = principal_log_unitary(matrix_exp(-1j * H))
            assert np.abs(H2 - H).max() <= 1e-9


class TestMatrixExp:
    def test_zero(self):
        assert np.allclose(matrix_exp(np.zeros((4, 4))), np.eye(4))

    def test_rotation_closed_form(self):
        theta = 0.3
        A = np.array([[0.0, theta], [-theta, 0.0]])
        R = np.array([[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]])
        assert np.abs(matrix_exp(A) - R).max() <= 1e-12

    def test_inverse_property(self, rng):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        prod = matrix_exp(A) @ matrix_exp(-A)
        assert np.abs(prod - np.eye(4)).max() <= 1e-10

    def test_spectral_cross_check_hermitian(self, rng):
        Z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        H = 0.5 * (Z + Z.conj().T)
        vals, vecs = np.linalg.eigh(H)
        spectral = (vecs * np.exp(vals)) @ vecs.conj().T
        assert np.abs(matrix_exp(H) - spectral).max() <= 1e-10

    def test_rejects_nan(self):
        A = np.zeros((2, 2))
        A[0, 0] = np.nan
        with pytest.raises(ValueError):
            matrix_exp(A)


class TestGramSchmidt:
    def test_identity_completion(self):
        e = np.eye(4, dtype=complex)
        U = gram_schmidt_complete(e[:, 0], np.array([e[:, 1], e[:, 2], e[:, 3]]))
        assert np.abs(U - np.eye(4)).max() <= 1e-12

    def test_permutation_completion(self):
        e = np.eye(4, dtype=complex)
        U = gram_schmidt_complete(e[:, 1], np.array([e[:, 0], e[:, 2], e[:, 3]]))
        perm = np.eye(4)[:, [1, 0, 2, 3]]
        assert np.abs(U - perm).max() <= 1e-12

    def test_unitarity_random(self, rng):
        for _ in range(30):
            first = rng.normal(size=4) + 1j * rng.normal(size=4)
            first /= np.linalg.norm(first)
            seeds = rng.random((3, 4)) + 1j * rng.random((3, 4))
            U = gram_schmidt_complete(first, seeds)
            assert np.abs(U @ U.conj().T - np.eye(4)).max() <= 1e-12
            assert np.array_equal(U[:, 0], first)

    def test_degenerate_seed_raises(self):
        e = np.eye(4, dtype=complex)
        seeds = np.array([e[:, 0], e[:, 1], e[:, 2]])
        with pytest.raises(DegenerateSeedError):
            gram_schmidt_complete(e[:, 0], seeds)

    def test_rejects_unnormalised_first(self):
        with pytest.raises(ValueError):
            gram_schmidt_complete(np.array([2.0, 0, 0, 0]), np.eye(4)[:3].astype(complex))


class TestPathOrderedProduct:
    def test_zero_response_gives_identity(self, basis):
        U = path_ordered_product(lambda s: np.zeros(15), basis, n_slices=16)
        assert np.abs(U - np.eye(4)).max() <= 1e-12

    def test_constant_response_matches_exponential(self, basis, rng):
        v = rng.normal(size=15) * 0.3
        U = path_ordered_product(lambda s: v, basis, n_slices=256)
        gen = np.tensordot(v, basis.T, axes=(0, 0))
        assert np.abs(U - matrix_exp(-1j * gen)).max() <= 1e-8

    def test_second_order_richardson(self, basis, rng):
        # varying path; consecutive refinements must shrink like 1/n^2
        v0 = rng.normal(size=15)
        v1 = rng.normal(size=15)

        def V(s):
            return v0 + s * v1

        U128 = path_ordered_product(V, basis, n_slices=128)
        U256 = path_ordered_product(V, basis, n_slices=256)
        U512 = path_ordered_product(V, basis, n_slices=512)
        d1 = np.abs(U128 - U256).max()
        d2 = np.abs(U256 - U512).max()
        assert 3.0 < d1 / d2 < 5.0
