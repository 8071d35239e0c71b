"""Coin-space density matrix, its canonical purification, and entanglement.

Tracing the walk state over position leaves a 2x2 mixed state rho(t) in coin
space. Its canonical purification is the 2-qubit state

    |Phi> = sqrt(l+) |psi+> x |psi+>  +  sqrt(l-) |psi-> x |psi->

built from the phase-fixed eigenpairs of rho; the first tensor slot is the
coin system, the second the ancilla copy. The entanglement of purification is
the von Neumann entropy of the ancilla-traced state, which for the canonical
purification equals S(rho) identically.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import hermitian_eigen_2x2
from .walk import WalkState


@dataclass(frozen=True)
class CoinDensity:
    """2x2 Hermitian, trace-one, PSD coin density matrix."""

    rho: np.ndarray


@dataclass(frozen=True)
class PurifiedState:
    """Unit 4-vector in the basis {uu, ud, du, dd} plus the rho eigenvalues."""

    phi: np.ndarray
    lambda_plus: float
    lambda_minus: float


def reduce(s: WalkState) -> CoinDensity:
    """Partial trace of the walker over position."""
    ruu = float(np.sum(np.abs(s.A) ** 2))
    rud = complex(np.sum(s.A * np.conj(s.B)))
    rho = np.array([[ruu, rud], [np.conj(rud), 1.0 - ruu]])
    rho.setflags(write=False)
    return CoinDensity(rho=rho)


def purify(cd: CoinDensity) -> PurifiedState:
    """Canonical two-qubit purification of a coin density matrix."""
    spec = hermitian_eigen_2x2(cd.rho)
    lp, lm = (max(float(v), 0.0) for v in spec.values)
    vp = spec.vectors[:, 0]
    vm = spec.vectors[:, 1]
    phi = np.sqrt(lp) * np.kron(vp, vp) + np.sqrt(lm) * np.kron(vm, vm)
    phi = phi / np.linalg.norm(phi)
    phi.setflags(write=False)
    return PurifiedState(phi=phi, lambda_plus=lp, lambda_minus=lm)


def partial_trace_2(ps: PurifiedState) -> CoinDensity:
    """Trace out the second (ancilla) qubit of |Phi><Phi|."""
    M = ps.phi.reshape(2, 2)
    rho = M @ M.conj().T
    rho.setflags(write=False)
    return CoinDensity(rho=rho)


def eop(ps: PurifiedState, base: float | None = None) -> float:
    """Entanglement of purification: entropy of the ancilla-traced state.

    Natural log by default; pass base=2 for bits. 0 log 0 is taken as 0.
    """
    rho = partial_trace_2(ps).rho
    vals = np.linalg.eigvalsh(rho)
    vals = vals[vals > 1e-15]
    s = max(float(-np.sum(vals * np.log(vals))), 0.0)
    if base is not None:
        s /= np.log(base)
    return s
