"""SU(4) generator basis built from Majorana operators, with k-local penalty metrics.

The 15 Hermitian generators are ordered products of four Majorana matrices.
Index i runs 1..15; its binary pattern (b1, b2, b3, b4) selects which Majorana
factors enter, and the generators are listed by increasing factor count
(weight), bit patterns in increasing value within each weight:

    weight 1:  g1, g2, g3, g4
    weight 2:  i*g1g2, i*g1g3, i*g2g3, i*g1g4, i*g2g4, i*g3g4
    weight 3:  -i*g1g2g3, -i*g1g2g4, -i*g1g3g4, -i*g2g3g4
    weight 4:  -g1g2g3g4

With this normalisation tr(Ti Tj) = 4 delta_ij and the Killing form computed
from the structure constants comes out exactly the identity.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NumericalAssertionError

_SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

# bit patterns of 1..15 sorted by (popcount, value); position p holds pattern
# _PATTERNS[p], whose set bits name the Majorana factors of generator p+1.
_PATTERNS = (1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15)


@dataclass(frozen=True)
class MajoranaSet:
    """The four 4x4 Majorana matrices: Hermitian, unitary, pairwise anticommuting."""

    gamma: tuple


@dataclass(frozen=True)
class GeneratorBasis:
    """15 Hermitian traceless 4x4 generators with tr(Ti Tj) = 4 delta_ij.

    ``T`` is a (15, 4, 4) complex array; ``weight[i]`` counts the Majorana
    factors of ``T[i]`` (1, 2, 3 or 4).
    """

    T: np.ndarray
    weight: np.ndarray


@dataclass(frozen=True)
class StructureConstants:
    """Real antisymmetric structure constants f[i, j, k] with [Ti, Tj] = i f_ij^k Tk."""

    f: np.ndarray


@dataclass(frozen=True)
class PenaltyMetric:
    """Diagonal metric penalising generators built from more than k Majoranas.

    c[i] = 1 for weight <= k, else 1 + mu; G = diag(c).
    """

    k: int
    mu: float
    c: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)


def build_majoranas() -> MajoranaSet:
    """Construct g1 = s1 x I, g2 = s2 x I, g3 = s3 x s1, g4 = s3 x s2."""
    gamma = (
        np.kron(_SIGMA1, _I2),
        np.kron(_SIGMA2, _I2),
        np.kron(_SIGMA3, _SIGMA1),
        np.kron(_SIGMA3, _SIGMA2),
    )
    for g in gamma:
        g.setflags(write=False)
    return MajoranaSet(gamma=gamma)


def build_generators(m: MajoranaSet) -> GeneratorBasis:
    """Build the 15-element generator basis from a MajoranaSet.

    The phase of each product is i**binom(q, 2) for q Majorana factors, which
    makes every generator Hermitian.
    """
    mats = []
    weights = []
    for pattern in _PATTERNS:
        factors = [m.gamma[a] for a in range(4) if pattern >> a & 1]
        q = len(factors)
        prod = factors[0].copy()
        for g in factors[1:]:
            prod = prod @ g
        phase = 1j ** (q * (q - 1) // 2)
        mats.append(phase * prod)
        weights.append(q)
    T = np.array(mats)
    T.setflags(write=False)
    weight = np.array(weights)
    weight.setflags(write=False)
    return GeneratorBasis(T=T, weight=weight)


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """Compute f_ij^k = -(i/4) tr(Tk [Ti, Tj]) as a dense real (15,15,15) array.

    Raises NumericalAssertionError if any defining trace has an imaginary part
    above 1e-9, which would signal a broken generator construction.
    """
    T = basis.T
    comm = np.einsum("aij,bjk->abik", T, T) - np.einsum("bij,ajk->abik", T, T)
    f_complex = -0.25j * np.einsum("kij,abji->abk", T, comm)
    imag_max = np.abs(f_complex.imag).max()
    if imag_max > 1e-9:
        raise NumericalAssertionError(
            f"structure-constant traces have imaginary residue {imag_max:.3e}"
        )
    f = np.ascontiguousarray(f_complex.real)
    f.setflags(write=False)
    return StructureConstants(f=f)


def killing_form(sc: StructureConstants) -> np.ndarray:
    """Contract the structure constants into K_ij = -(1/32) f_il^m f_jm^l.

    The basis normalisation makes K the identity; this is asserted to 1e-10
    and the computed matrix returned.
    """
    K = -(1.0 / 32.0) * np.einsum("ilm,jml->ij", sc.f, sc.f)
    if np.abs(K - np.eye(15)).max() > 1e-10:
        raise NumericalAssertionError("Killing form is not the identity; generator normalisation is inconsistent")
    return K


def penalty_metric(k: int, mu: float, basis: GeneratorBasis | None = None) -> PenaltyMetric:
    """Cost vector and diagonal metric for k-local penalties.

    Generators with weight <= k cost 1, the rest 1 + mu. For k = 4 every
    cost is 1 regardless of mu.
    """
    if k not in (1, 2, 3, 4):
        raise ValueError(f"locality k must be in {{1, 2, 3, 4}}, got {k!r}")
    if mu < 0:
        raise ValueError(f"penalty mu must be >= 0, got {mu!r}")
    if basis is None:
        basis = default_basis()
    c = np.where(basis.weight <= k, 1.0, 1.0 + mu)
    c.setflags(write=False)
    G = np.diag(c)
    G.setflags(write=False)
    return PenaltyMetric(k=k, mu=float(mu), c=c, G=G)


_CACHE: dict = {}


def default_basis() -> GeneratorBasis:
    """The standard generator basis (memoised; all arrays are read-only)."""
    if "basis" not in _CACHE:
        _CACHE["basis"] = build_generators(build_majoranas())
    return _CACHE["basis"]


def default_structure_constants() -> StructureConstants:
    """Structure constants of the standard basis (memoised)."""
    if "f" not in _CACHE:
        _CACHE["f"] = structure_constants(default_basis())
    return _CACHE["f"]
