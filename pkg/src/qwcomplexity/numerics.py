"""Dense complex-matrix kernel: small eigenproblems, unitary logs, Gram-Schmidt.

Conventions used throughout the package:

* a Hermitian generator H and a unitary U are related by U = exp(-iH);
* ``principal_log_unitary`` inverts that with eigenphases of H in [-pi, pi);
* eigenvectors are phase-fixed so their first nonzero component is real
  and positive, which makes everything downstream deterministic.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import BranchAmbiguityWarning, DegenerateSeedError


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def _require_finite(A: np.ndarray, name: str = "matrix") -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return A


def _fix_column_phases(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its first component above 1e-12 is real positive."""
    V = V.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            ref = col[nz[0]]
            V[:, j] = col * (np.conj(ref) / abs(ref))
    return V


def hermitian_eigen_2x2(rho: np.ndarray) -> Spectrum:
    """Eigen-decompose a 2x2 Hermitian matrix, eigenvalues sorted descending."""
    rho = _require_finite(rho, "rho")
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("input is not Hermitian within 1e-10")
    vals, vecs = np.linalg.eigh(rho)
    vals = vals[::-1]
    vecs = _fix_column_phases(vecs[:, ::-1])
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return Spectrum(values=vals, vectors=vecs)


def _check_unitary(U: np.ndarray, tol: float, name: str = "U") -> None:
    err = np.abs(U @ U.conj().T - np.eye(U.shape[0])).max()
    if err > tol:
        raise ValueError(f"{name} is not unitary: max |UU+ - I| = {err:.3e} > {tol:g}")


def eig_unitary(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvectors of a unitary via complex Schur.

    For a normal matrix the Schur form is diagonal, so the Schur vectors are an
    orthonormal eigenbasis; this avoids the non-orthogonal output np.linalg.eig
    can produce for (near-)degenerate spectra.
    """
    R, Q = scipy.linalg.schur(U, output="complex")
    return np.diag(R).copy(), Q


def principal_log_unitary(U: np.ndarray) -> np.ndarray:
    """Hermitian H with U = exp(-iH), eigenphases of H taken in [-pi, pi).

    An eigenvalue of U within 1e-12 of the branch point -1 triggers a
    BranchAmbiguityWarning; the principal value is still returned.
    """
    U = _require_finite(U)
    _check_unitary(U, 1e-9)
    w, V = eig_unitary(U)
    phases = np.angle(w)  # in (-pi, pi]
    if np.any(np.pi - np.abs(phases) <= 1e-12):
        warnings.warn(
            "eigenphase on the log branch cut; principal value used",
            BranchAmbiguityWarning,
            stacklevel=2,
        )
    H = (V * (-phases)) @ V.conj().T
    return 0.5 * (H + H.conj().T)


def matrix_exp(A: np.ndarray) -> np.ndarray:
    """Matrix exponential (scipy scaling-and-squaring) with a finiteness guard."""
    return scipy.linalg.expm(_require_finite(A, "A"))


def gram_schmidt_complete(first: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    """Complete a unit 4-vector to a unitary matrix whose first column it is.

    The remaining columns come from sequential Gram-Schmidt on the three seed
    vectors. Raises DegenerateSeedError if a residual norm drops below 1e-10
    (caller resamples).
    """
    first = _require_finite(first, "first").reshape(4)
    if abs(np.linalg.norm(first) - 1.0) > 1e-12:
        raise ValueError("first column must have unit norm")
    seeds = _require_finite(seeds, "seeds").reshape(3, 4)
    cols = [first]
    for v in seeds:
        u = v.copy()
        for c in cols:
            u -= np.vdot(c, u) * c
        nrm = np.linalg.norm(u)
        if nrm < 1e-10:
            raise DegenerateSeedError("seed vector is linearly dependent on previous columns")
        cols.append(u / nrm)
    return np.column_stack(cols)


def path_ordered_product(V, basis, n_slices: int = 256) -> np.ndarray:
    """Path-ordered exponential of -i V(s).T over s in [0, 1], midpoint rule.

    ``V`` maps s to a 15-vector of response coefficients. Later slices
    multiply from the left. Second-order accurate in 1/n_slices; used for
    verification only.
    """
    if n_slices < 1:
        raise ValueError("n_slices must be >= 1")
    T = basis.T
    ds = 1.0 / n_slices
    U = np.eye(4, dtype=complex)
    for m in range(n_slices):
        s_mid = (m + 0.5) * ds
        gen = np.tensordot(np.asarray(V(s_mid), dtype=float), T, axes=(0, 0))
        U = scipy.linalg.expm(-1j * gen * ds) @ U
    return U
