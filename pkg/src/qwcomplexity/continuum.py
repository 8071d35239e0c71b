"""Continuum-limit Dirac picture: two-particle responses and the cutoff integral.

In the continuum limit the walk becomes a free Dirac particle with mass
m = sin(theta). Diagonalising the two-particle Kronecker-sum Hamiltonian and
expanding the resulting diagonal generator (times t) in the commuting triple
(T5, T10, T15) leaves v5 = 0 and closed forms for v10 and v15:

    v10 = -(t/2) (a + b),   v15 = (t/2) (a - b)

    a, b = sqrt(m^2 + p1^2 + p2^2 -/+ sqrt((m^2 + 2 p1^2)(m^2 + 2 p2^2)))

Note a^2 + b^2 = 2 (m^2 + p1^2 + p2^2), so the complexity integrand
sqrt(v10^2 + v15^2) equals t * sqrt(m^2 + p1^2 + p2^2) identically; the
cutoff integral therefore grows as Lambda^3 for large cutoffs, with the mass
only contributing at relative order (m/Lambda)^2.
"""

import numpy as np
from scipy.integrate import simpson

_SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def dirac_hamiltonian(p: float, theta: float) -> np.ndarray:
    """Single-particle Dirac Hamiltonian p(cos s3 + sin s1) + sin(theta) s2.

    Eigenvalues are +-sqrt(p^2 + sin(theta)^2); at p = 0 the mass term
    sin(theta) s2 remains.
    """
    c, s = np.cos(theta), np.sin(theta)
    H = p * (c * _SIGMA3 + s * _SIGMA1) + s * _SIGMA2
    if np.abs(H - H.conj().T).max() > 1e-12:
        raise AssertionError("Dirac Hamiltonian transcription is not Hermitian")
    return H


def two_particle_hamiltonian(p1: float, p2: float, theta: float) -> np.ndarray:
    """Kronecker sum H(p1) x I + I x H(p2); spectrum = pairwise eigenvalue sums."""
    return np.kron(dirac_hamiltonian(p1, theta), _I2) + np.kron(_I2, dirac_hamiltonian(p2, theta))


def _ab(p1, p2, m):
    inner = np.sqrt((m * m + 2.0 * p1 * p1) * (m * m + 2.0 * p2 * p2))
    base = m * m + p1 * p1 + p2 * p2
    a = np.sqrt(np.maximum(base - inner, 0.0))
    b = np.sqrt(base + inner)
    return a, b


def continuum_response(p1, p2, theta: float, t: float):
    """Closed-form (v5, v10, v15) of the two-particle generator at time t.

    Accepts scalars or broadcastable arrays for p1, p2. Linear in t and
    exactly zero in the v5 slot.
    """
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be >= 0")
    m = np.sin(theta)
    a, b = _ab(np.asarray(p1, dtype=float), np.asarray(p2, dtype=float), m)
    v10 = -0.5 * t * (a + b)
    v15 = 0.5 * t * (a - b)
    return np.zeros_like(v10), v10, v15


def continuum_complexity(cutoff: float, theta: float, t: float, grid: int = 128) -> float:
    """Composite-Simpson integral of sqrt(v10^2 + v15^2) over [0, cutoff]^2.

    ``grid`` counts subintervals per axis (forced even, minimum 64). The
    result is exactly linear in t because the integrand is.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be > 0")
    if grid < 64:
        raise ValueError("grid must be >= 64")
    grid += grid % 2
    p = np.linspace(0.0, cutoff, grid + 1)
    P1, P2 = np.meshgrid(p, p, indexing="ij")
    _, v10, v15 = continuum_response(P1, P2, theta, t)
    integrand = np.sqrt(v10 * v10 + v15 * v15)
    return float(simpson(simpson(integrand, x=p, axis=1), x=p))
