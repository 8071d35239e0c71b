"""Sampled target unitaries carrying a purified state as their first column.

Each sample completes the purified 4-vector to a unitary with three random
complex vectors (entries a + ib, a and b uniform on (0,1)) via Gram-Schmidt.
Sampling is a pure function of (master_seed, step, sample): every sample owns
an independent RNG stream, so results do not depend on how many samples are
drawn, in which order, or on how work is distributed over threads.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSeedError
from .numerics import gram_schmidt_complete
from .purification import PurifiedState

_MAX_RESAMPLES = 8


@dataclass(frozen=True)
class TargetUnitary:
    """A sampled unitary whose first column is the purified state."""

    U: np.ndarray
    step: int
    sample_index: int


@dataclass(frozen=True)
class UnitarySequence:
    """Per-step chosen unitaries U_t and their stepwise factors U'_t = U_t U_{t-1}^dag."""

    master_seed: int
    chosen: tuple          # U_t, t = 1..steps
    stepwise: tuple        # U'_t, same indexing
    sample_indices: tuple  # argmin sample index per step


def _sample_rng(master_seed: int, step: int, sample: int) -> np.random.Generator:
    if master_seed < 0:
        raise ValueError("master_seed must be a non-negative integer")
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(step), int(sample)]))


def sample_target(phi: PurifiedState, step: int, sample: int, master_seed: int) -> TargetUnitary:
    """Draw the (step, sample) target unitary for the given purified state."""
    rng = _sample_rng(master_seed, step, sample)
    last_err = None
    for _ in range(_MAX_RESAMPLES):
        seeds = rng.random((3, 4)) + 1j * rng.random((3, 4))
        try:
            U = gram_schmidt_complete(phi.phi, seeds)
        except DegenerateSeedError as err:
            last_err = err
            continue
        U.setflags(write=False)
        return TargetUnitary(U=U, step=step, sample_index=sample)
    raise DegenerateSeedError(
        f"no independent seed triple after {_MAX_RESAMPLES} draws"
    ) from last_err


def fix_phase(U: np.ndarray) -> np.ndarray:
    """Rescale a unitary by exp(-i arg(det U)/4) so its determinant is one."""
    phase = np.angle(np.linalg.det(U)) / 4.0
    return U * np.exp(-1j * phase)


def stepwise_factor(U_n: np.ndarray, U_prev: np.ndarray) -> np.ndarray:
    """The unitary connecting consecutive targets: U'_n = U_n U_prev^dag."""
    return U_n @ U_prev.conj().T
