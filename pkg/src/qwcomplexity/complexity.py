"""k-local Nielsen complexity of sampled target unitaries and its geodesics.

The response vector of a special unitary U is the coefficient vector of
i log U in the generator basis (identity component removed and recorded).
With the diagonal penalty metric G = diag(c) the geodesic cost is simply

    C(U) = sqrt(sum_i c_i v_i^2)

because along the closed-form geodesics each penalty sector keeps a constant
norm. The geodesic paths themselves split into a constant sector and rotating
sectors driven by antisymmetric mixing matrices built from the structure
constants contracted with the constants of motion:

    M_ij(s) = -(1/2) sum_{k in easy} f_ikj V_k(s)   (hard-sector mixing)
    N_ik(s) = -(1/2) sum_{p in hard} f_ikp V_p(s)   (easy-sector mixing)

    dV_hard/ds + (2 mu / (1 + mu)) M(s) V_hard = 0
    dV_easy/ds + (2 mu) N(s) V_easy = 0

For k = 2 and k = 3 the relevant mixing matrix is constant and the path is a
plain matrix exponential; for k = 4 the whole vector is constant; for k = 1
the easy sector is a matrix exponential while the hard sector sees an
s-dependent M(s) and is integrated with classical RK4.
"""

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import GeneratorBasis, PenaltyMetric, StructureConstants, default_basis, default_structure_constants
from .numerics import eig_unitary, principal_log_unitary
from .purification import purify, reduce
from .synthesis import UnitarySequence, fix_phase, sample_target, stepwise_factor
from .walk import evolve

_RK4_STEP = 2.5e-4


@dataclass(frozen=True)
class ResponseVector:
    """15 real response coefficients plus the removed identity component."""

    v: np.ndarray
    identity_trace: float


@dataclass(frozen=True)
class ComplexityReport:
    """Per-step complexity series with its least-squares line.

    ``per_step`` holds C(t) in direct mode and the increments C'_t in stepwise
    mode; ``cumulative`` is the running stepwise sum (None for direct). The
    slope fit applies to the direct series or the cumulative series
    respectively.
    """

    mode: str
    theta: float
    k: int
    mu: float
    samples: int
    steps: int
    master_seed: int
    per_step: np.ndarray
    cumulative: np.ndarray | None
    chosen_samples: tuple
    alpha: float
    beta: float
    r2: float


# ---------------------------------------------------------------------------
# response extraction
# ---------------------------------------------------------------------------

def extract_response(U: np.ndarray, basis: GeneratorBasis | None = None) -> ResponseVector:
    """Expand i log U in the generator basis; requires det U = 1 within 1e-10.

    The identity component of the log (eigenphases need not sum to zero even
    at unit determinant) is recorded separately and excluded from the
    traceless expansion.
    """
    if basis is None:
        basis = default_basis()
    det = np.linalg.det(U)
    if abs(det - 1.0) > 1e-10:
        raise ValueError(f"det U = {det:.12f}; apply fix_phase first")
    H = principal_log_unitary(U)  # i log U
    identity_trace = float(np.trace(H).real) / 4.0
    Htl = H - identity_trace * np.eye(4)
    proj = np.einsum("aij,ji->a", basis.T, Htl) / 4.0
    if np.abs(proj.imag).max() > 1e-9:
        raise ValueError("response projection has imaginary residue > 1e-9")
    v = np.ascontiguousarray(proj.real)
    v.setflags(write=False)
    return ResponseVector(v=v, identity_trace=identity_trace)


def _responses_batch(Us: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """Response vectors for a stack of unitaries, determinant phase fixed inside.

    Uses batched np.linalg.eig and falls back to the Schur path on any matrix
    whose eigenvectors come back insufficiently orthonormal.
    """
    phases = np.angle(np.linalg.det(Us)) / 4.0
    Us = Us * np.exp(-1j * phases)[:, None, None]
    w, V = np.linalg.eig(Us)
    ortho_err = np.abs(
        np.einsum("sik,sjk->sij", V, V.conj()) - np.eye(4)
    ).reshape(Us.shape[0], -1).max(axis=1)
    bad = np.flatnonzero(ortho_err > 1e-10)
    for idx in bad:
        w[idx], V[idx] = eig_unitary(Us[idx])
    theta_h = -np.angle(w)
    H = np.einsum("sik,sk,sjk->sij", V, theta_h, V.conj())
    H = 0.5 * (H + np.conj(np.transpose(H, (0, 2, 1))))
    tr = np.einsum("sii->s", H).real / 4.0
    Htl = H - tr[:, None, None] * np.eye(4)
    return np.einsum("aij,sji->sa", basis.T, Htl).real / 4.0


# ---------------------------------------------------------------------------
# cost
# ---------------------------------------------------------------------------

def _grouped_cost(v: np.ndarray, p: PenaltyMetric, weight: np.ndarray) -> float:
    """The sector-grouped form of the cost, per locality; used as a self-check."""
    pen = 1.0 + p.mu
    sq = v * v
    if p.k == 1:
        a1 = sq[weight == 1].sum()
        b = sq[weight == 2].sum()
        a2 = sq[weight >= 3].sum()
        return math.sqrt(a1 + pen * (b + a2))
    if p.k == 2:
        return math.sqrt(sq[weight <= 2].sum() + pen * sq[weight >= 3].sum())
    if p.k == 3:
        return math.sqrt(sq[weight <= 3].sum() + pen * sq[weight == 4].sum())
    return math.sqrt(sq.sum())


def cost(rv: ResponseVector, p: PenaltyMetric, basis: GeneratorBasis | None = None) -> float:
    """Geodesic cost sqrt(sum c_i v_i^2); asserts the grouped form agrees to 1e-12."""
    if basis is None:
        basis = default_basis()
    v = rv.v if isinstance(rv, ResponseVector) else np.asarray(rv, dtype=float)
    value = math.sqrt(float(np.dot(p.c, v * v)))
    grouped = _grouped_cost(v, p, basis.weight)
    if abs(value - grouped) > 1e-12 * max(1.0, value):
        raise AssertionError("grouped cost formula disagrees with the metric form")
    return value


def _cost_batch(vs: np.ndarray, p: PenaltyMetric) -> np.ndarray:
    return np.sqrt(np.einsum("sa,a->s", vs * vs, p.c))


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicPath:
    """Closed-form (or RK4-integrated, k=1 hard sector) geodesic response path.

    ``easy_rate`` and ``hard_rate`` are the decay-rate prefactors 2 mu and
    2 mu / (1 + mu) multiplying the easy- and hard-sector mixing matrices;
    they are stored as plain fields so tests can build sign-flipped variants.
    """

    penalty: PenaltyMetric
    v: np.ndarray
    easy_idx: np.ndarray
    hard_idx: np.ndarray
    easy_rate: float
    hard_rate: float
    M_easy: np.ndarray | None   # constant easy-sector mixing (k=1, k=3)
    M_hard: np.ndarray | None   # constant hard-sector mixing (k=2)
    f_hard: np.ndarray | None   # f[hard, easy, hard] slice for k=1 M(s)

    def response(self, s: float) -> np.ndarray:
        return self.response_grid(np.array([s]))[0]

    def response_grid(self, s_values: np.ndarray) -> np.ndarray:
        """Responses at the requested s values (one integration pass for k=1)."""
        s_values = np.asarray(s_values, dtype=float)
        if np.any((s_values < 0.0) | (s_values > 1.0)):
            raise ValueError("affine parameter must lie in [0, 1]")
        out = np.tile(self.v, (s_values.size, 1))
        k = self.penalty.k
        if k == 4:
            return out
        if k in (2, 3):
            idx = self.hard_idx if k == 2 else self.easy_idx
            M = self.M_hard if k == 2 else self.M_easy
            rate = self.hard_rate if k == 2 else self.easy_rate
            end = self.v[idx]
            for row, s in enumerate(s_values):
                out[row, idx] = scipy.linalg.expm(rate * M * (1.0 - s)) @ end
            return out
        # k == 1: easy sector closed form, hard sector integrated from s = 1
        for row, s in enumerate(s_values):
            out[row, self.easy_idx] = self._easy_at(s)
        order = np.argsort(-s_values, kind="stable")
        vh = self.v[self.hard_idx].copy()
        s_cur = 1.0
        for row in order:
            vh = self._integrate_hard(vh, s_cur, float(s_values[row]))
            s_cur = float(s_values[row])
            out[row, self.hard_idx] = vh
        return out

    def _easy_at(self, s: float) -> np.ndarray:
        return scipy.linalg.expm(self.easy_rate * self.M_easy * (1.0 - s)) @ self.v[self.easy_idx]

    def _hard_mixing(self, s: float) -> np.ndarray:
        return -0.5 * np.einsum("ikj,k->ij", self.f_hard, self._easy_at(s))

    def _integrate_hard(self, vh: np.ndarray, s_from: float, s_to: float) -> np.ndarray:
        """RK4 for dV/ds = -hard_rate * M(s) V, integrating backwards in s."""
        if s_to == s_from:
            return vh
        n = max(1, math.ceil(abs(s_from - s_to) / _RK4_STEP))
        h = (s_to - s_from) / n
        rate = self.hard_rate
        s = s_from
        for _ in range(n):
            f1 = -rate * (self._hard_mixing(s) @ vh)
            mid = self._hard_mixing(s + 0.5 * h)
            f2 = -rate * (mid @ (vh + 0.5 * h * f1))
            f3 = -rate * (mid @ (vh + 0.5 * h * f2))
            f4 = -rate * (self._hard_mixing(s + h) @ (vh + h * f3))
            vh = vh + (h / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
            s += h
        return vh

    def sector_indices(self) -> list[np.ndarray]:
        """Index sets whose norms are conserved along the path."""
        w = default_basis().weight
        k = self.penalty.k
        if k == 1:
            return [np.flatnonzero(w == 1), np.flatnonzero(w == 2), np.flatnonzero(w >= 3)]
        if k == 2:
            return [np.flatnonzero(w <= 2), np.flatnonzero(w >= 3)]
        if k == 3:
            return [np.flatnonzero(w <= 3), np.flatnonzero(w == 4)]
        return [np.arange(15)]


def geodesic_path(
    rv: ResponseVector,
    p: PenaltyMetric,
    sc: StructureConstants | None = None,
    basis: GeneratorBasis | None = None,
) -> GeodesicPath:
    """Closed-form geodesic with endpoint response V(1) = v.

    The mixing matrices are generated from the structure constants contracted
    with the constants of motion, not transcribed; the easy sector (weights
    <= k) mixes through the hard constants and vice versa.
    """
    if p.k not in (1, 2, 3, 4):
        raise ValueError("locality k must be in {1, 2, 3, 4}")
    if sc is None:
        sc = default_structure_constants()
    if basis is None:
        basis = default_basis()
    v = rv.v if isinstance(rv, ResponseVector) else np.asarray(rv, dtype=float)
    w = basis.weight
    easy = np.flatnonzero(w <= p.k)
    hard = np.flatnonzero(w > p.k)
    easy_rate = 2.0 * p.mu
    hard_rate = 2.0 * p.mu / (1.0 + p.mu)
    M_easy = M_hard = f_hard = None
    if p.k == 2:
        M_hard = -0.5 * np.einsum(
            "ikj,k->ij", sc.f[np.ix_(hard, easy, hard)], v[easy]
        )
    elif p.k == 3:
        M_easy = -0.5 * np.einsum(
            "ikp,p->ik", sc.f[np.ix_(easy, easy, hard)], v[hard]
        )
    elif p.k == 1:
        M_easy = -0.5 * np.einsum(
            "ikp,p->ik", sc.f[np.ix_(easy, easy, hard)], v[hard]
        )
        f_hard = sc.f[np.ix_(hard, easy, hard)].copy()
    return GeodesicPath(
        penalty=p, v=np.array(v), easy_idx=easy, hard_idx=hard,
        easy_rate=easy_rate, hard_rate=hard_rate,
        M_easy=M_easy, M_hard=M_hard, f_hard=f_hard,
    )


def flip_rates(path: GeodesicPath) -> GeodesicPath:
    """Sign-flipped copy of a path's decay rates (negative-control fixture)."""
    return dataclasses.replace(
        path, easy_rate=-path.easy_rate, hard_rate=-path.hard_rate
    )


def euler_arnold_residual(
    path: GeodesicPath,
    sc: StructureConstants | None = None,
    p: PenaltyMetric | None = None,
    s_grid: np.ndarray | None = None,
    h: float = 1e-4,
) -> float:
    """Max norm of G dV/ds - f_ik^p G_pl V^k V^l over the grid.

    dV/ds uses the five-point central-difference stencil with spacing h so the
    finite-difference error stays far below the closed forms' own accuracy.
    """
    if sc is None:
        sc = default_structure_constants()
    if p is None:
        p = path.penalty
    if s_grid is None:
        s_grid = np.linspace(0.01, 0.99, 25)
    s_grid = np.clip(np.asarray(s_grid, dtype=float), 2 * h, 1.0 - 2 * h)
    stencil = np.concatenate([s_grid + d for d in (-2 * h, -h, 0.0, h, 2 * h)])
    values = path.response_grid(stencil)
    n = s_grid.size
    m2, m1, v0, p1, p2 = (values[i * n:(i + 1) * n] for i in range(5))
    dv = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h)
    lhs = p.c[None, :] * dv
    cv = p.c[None, :] * v0
    rhs = np.einsum("ikp,sk,sp->si", sc.f, v0, cv)
    return float(np.abs(lhs - rhs).max())


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------

def _sample_unitaries(phi, step: int, samples: int, master_seed: int, threads: int = 1) -> np.ndarray:
    def build(idx):
        return sample_target(phi, step, idx, master_seed).U

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            mats = list(pool.map(build, range(samples)))
    else:
        mats = [build(i) for i in range(samples)]
    return np.array(mats)


def fit_slope(series: np.ndarray) -> tuple[float, float, float]:
    """OLS line through (t, series[t-1]) for t = 1..n; returns (alpha, beta, r2)."""
    y = np.asarray(series, dtype=float)
    if y.size < 3:
        raise ValueError("need at least 3 points for a slope fit")
    t = np.arange(1, y.size + 1, dtype=float)
    A = np.vstack([t, np.ones_like(t)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot < 1e-30 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(coef[0]), float(coef[1]), r2


def _purified_states(theta: float, steps: int):
    return [purify(reduce(s)) for s in evolve(theta, steps)[1:]]


def direct_complexity(
    theta: float,
    steps: int,
    p: PenaltyMetric,
    samples: int,
    master_seed: int,
    threads: int = 1,
    basis: GeneratorBasis | None = None,
) -> ComplexityReport:
    """Min-over-samples cost of the step-t target unitary, reference state fixed.

    Ties in the minimum break toward the lowest sample index.
    """
    if steps < 1 or samples < 1:
        raise ValueError("steps and samples must be >= 1")
    if basis is None:
        basis = default_basis()
    values = []
    chosen = []
    for t, phi in enumerate(_purified_states(theta, steps), start=1):
        Us = _sample_unitaries(phi, t, samples, master_seed, threads)
        costs = _cost_batch(_responses_batch(Us, basis), p)
        idx = int(np.argmin(costs))
        values.append(float(costs[idx]))
        chosen.append(idx)
    series = np.array(values)
    alpha, beta, r2 = fit_slope(series) if steps >= 3 else (0.0, float(series[0]), 1.0)
    return ComplexityReport(
        mode="direct", theta=float(theta), k=p.k, mu=p.mu, samples=samples,
        steps=steps, master_seed=master_seed, per_step=series, cumulative=None,
        chosen_samples=tuple(chosen), alpha=alpha, beta=beta, r2=r2,
    )


def stepwise_complexity(
    theta: float,
    steps: int,
    p: PenaltyMetric,
    samples: int,
    master_seed: int,
    threads: int = 1,
    select: str = "stepwise",
    basis: GeneratorBasis | None = None,
) -> tuple[ComplexityReport, UnitarySequence]:
    """Cumulative cost of the step-to-step factors U'_t = U_t U_{t-1}^dag.

    With select="stepwise" (default) each step keeps the sample minimising the
    increment cost(U'_t) actually added to the total; select="direct" instead
    keeps the sample minimising cost(U_t) and pays whatever increment results.
    U_0 is the identity, so the first increment is a direct cost.
    """
    if steps < 1 or samples < 1:
        raise ValueError("steps and samples must be >= 1")
    if select not in ("stepwise", "direct"):
        raise ValueError("select must be 'stepwise' or 'direct'")
    if basis is None:
        basis = default_basis()
    U_prev = np.eye(4, dtype=complex)
    chosen_U = []
    stepwise_U = []
    chosen_idx = []
    increments = []
    for t, phi in enumerate(_purified_states(theta, steps), start=1):
        Us = _sample_unitaries(phi, t, samples, master_seed, threads)
        primes = Us @ U_prev.conj().T
        if select == "stepwise":
            costs = _cost_batch(_responses_batch(primes, basis), p)
            idx = int(np.argmin(costs))
            inc = float(costs[idx])
        else:
            direct_costs = _cost_batch(_responses_batch(Us, basis), p)
            idx = int(np.argmin(direct_costs))
            inc = float(_cost_batch(_responses_batch(primes[idx:idx + 1], basis), p)[0])
        increments.append(inc)
        chosen_idx.append(idx)
        chosen_U.append(Us[idx])
        stepwise_U.append(primes[idx])
        U_prev = Us[idx]
    increments = np.array(increments)
    cumulative = np.cumsum(increments)
    alpha, beta, r2 = fit_slope(cumulative) if steps >= 3 else (0.0, float(cumulative[0]), 1.0)
    report = ComplexityReport(
        mode="stepwise", theta=float(theta), k=p.k, mu=p.mu, samples=samples,
        steps=steps, master_seed=master_seed, per_step=increments,
        cumulative=cumulative, chosen_samples=tuple(chosen_idx),
        alpha=alpha, beta=beta, r2=r2,
    )
    seq = UnitarySequence(
        master_seed=master_seed, chosen=tuple(chosen_U),
        stepwise=tuple(stepwise_U), sample_indices=tuple(chosen_idx),
    )
    return report, seq


def slope_sweep(
    theta_grid,
    steps: int,
    p: PenaltyMetric,
    samples: int,
    master_seed: int,
    threads: int = 1,
    select: str = "stepwise",
) -> list[tuple[float, float, float, float]]:
    """(theta, alpha, beta, r2) rows, one stepwise run per grid angle."""
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    if theta_grid.size == 0:
        raise ValueError("theta grid must be non-empty")
    rows = []
    for theta in theta_grid:
        report, _ = stepwise_complexity(
            theta, steps, p, samples, master_seed, threads=threads, select=select
        )
        rows.append((float(theta), report.alpha, report.beta, report.r2))
    return rows


def _trial_seed(master_seed: int, size: int, trial: int) -> int:
    ss = np.random.SeedSequence([int(master_seed), 1000 * int(size) + int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def convergence_study(
    theta: float,
    step_of_interest: int,
    sample_sizes,
    trials: int,
    p: PenaltyMetric,
    master_seed: int,
    threads: int = 1,
    basis: GeneratorBasis | None = None,
) -> list[tuple[int, float]]:
    """(size, stddev of min-cost) rows at a fixed walk step.

    Each trial draws an independent sample stream; the reported number is the
    population standard deviation of the per-trial minima.
    """
    sizes = [int(s) for s in sample_sizes]
    if sizes != sorted(sizes):
        raise ValueError("sample sizes must be ascending")
    if trials < 2:
        raise ValueError("need at least 2 trials")
    if basis is None:
        basis = default_basis()
    phi = _purified_states(theta, step_of_interest)[-1]
    rows = []
    for size in sizes:
        minima = []
        for trial in range(trials):
            seed = _trial_seed(master_seed, size, trial)
            Us = _sample_unitaries(phi, step_of_interest, size, seed, threads)
            costs = _cost_batch(_responses_batch(Us, basis), p)
            minima.append(float(costs.min()))
        rows.append((size, float(np.std(minima))))
    return rows


def stepwise_hamiltonian(
    U_step: np.ndarray, basis: GeneratorBasis | None = None
) -> tuple[np.ndarray, ResponseVector]:
    """Effective Hamiltonian i log U' of a stepwise factor and its coefficients.

    Timestep length is one, so H generates the step via U' = exp(-iH). The
    traceless part is expanded in the generator basis, the identity part
    recorded in the ResponseVector.
    """
    if basis is None:
        basis = default_basis()
    H = principal_log_unitary(U_step)
    identity_trace = float(np.trace(H).real) / 4.0
    Htl = H - identity_trace * np.eye(4)
    proj = np.einsum("aij,ji->a", basis.T, Htl) / 4.0
    v = np.ascontiguousarray(proj.real)
    v.setflags(write=False)
    return H, ResponseVector(v=v, identity_trace=identity_trace)
