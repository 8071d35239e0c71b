"""1D discrete-time quantum walk via the two-component amplitude recursion.

The walker state is stored as the spin-up / spin-down amplitude arrays
A_x(t), B_x(t) over x in {-t, ..., t}; no shift/coin operator matrices are
ever materialised. One step of the walk with coin angle theta is

    A_x(t) =  cos(theta) A_{x-1}(t-1) + sin(theta) B_{x-1}(t-1)
    B_x(t) = -sin(theta) A_{x+1}(t-1) + cos(theta) B_{x+1}(t-1)

starting from the equal coin superposition (A_0, B_0) = (1, i)/sqrt(2) at the
origin.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class WalkState:
    """Walker amplitudes at step t; A[i], B[i] live on site x = i - t."""

    theta: float
    t: int
    A: np.ndarray
    B: np.ndarray

    def positions(self) -> np.ndarray:
        return np.arange(-self.t, self.t + 1)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.A) ** 2 + np.abs(self.B) ** 2))


@dataclass(frozen=True)
class Distribution:
    """Position probabilities p_x = |A_x|^2 + |B_x|^2 over x in {-t, ..., t}."""

    x: np.ndarray
    p: np.ndarray


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def initial_state(theta: float) -> WalkState:
    """Walker at the origin in the coin state (|up> + i |down>)/sqrt(2)."""
    theta = float(theta) % TWO_PI
    A = _freeze(np.array([1.0 / np.sqrt(2.0)], dtype=complex))
    B = _freeze(np.array([1.0j / np.sqrt(2.0)], dtype=complex))
    return WalkState(theta=theta, t=0, A=A, B=B)


def step(s: WalkState) -> WalkState:
    """Apply one coin-and-shift step; support grows by one site on each side."""
    c = np.cos(s.theta)
    sn = np.sin(s.theta)
    n = s.A.shape[0]
    A = np.zeros(n + 2, dtype=complex)
    B = np.zeros(n + 2, dtype=complex)
    A[2:] = c * s.A + sn * s.B
    B[:-2] = -sn * s.A + c * s.B
    return WalkState(theta=s.theta, t=s.t + 1, A=_freeze(A), B=_freeze(B))


def evolve(theta: float, steps: int) -> list[WalkState]:
    """States for t = 0..steps (inclusive)."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    states = [initial_state(theta)]
    for _ in range(steps):
        states.append(step(states[-1]))
    return states


def probability_distribution(s: WalkState) -> Distribution:
    """Per-site probabilities; sums to one by unitarity."""
    p = np.abs(s.A) ** 2 + np.abs(s.B) ** 2
    return Distribution(x=s.positions(), p=_freeze(p))
