"""Batch command-line front end; every output is a pure function of its config.

Commands: walk, eop, complexity, slope, convergence, continuum, circuit,
dump-algebra. Output is CSV (RFC-4180-style rows under '#'-prefixed header
comments carrying the full config, seed, version and a config hash) or a JSON
mirror of the same data. Reruns with the same config are byte-identical and
independent of --threads. Exit codes: 0 ok, 2 bad configuration, 3 numerical
assertion failure. The environment variable QWC_SEED, when set, overrides
--seed.
"""

import argparse
import hashlib
import json
import os
import re
import sys

import numpy as np

from . import __version__
from .algebra import default_basis, default_structure_constants, killing_form, penalty_metric
from .circuit import depth_series
from .complexity import convergence_study, direct_complexity, slope_sweep, stepwise_complexity
from .continuum import continuum_complexity, continuum_response
from .exceptions import NumericalAssertionError
from .purification import eop, purify, reduce
from .walk import evolve, probability_distribution

_ANGLE_RE = re.compile(r"^(-?\d*\.?\d*)\*?pi(?:/(\d+\.?\d*))?$")


def parse_angle(text: str) -> float:
    """Parse radians, accepting exact symbolic forms like pi/4 or 2pi/3."""
    text = text.strip().lower().replace(" ", "")
    m = _ANGLE_RE.match(text)
    if m:
        coef = m.group(1)
        num = float(coef) if coef not in ("", "-") else (-1.0 if coef == "-" else 1.0)
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * np.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def parse_grid(text: str) -> list:
    """Angle grid: 'start:stop:count' (inclusive linspace) or comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be start:stop:count")
        start, stop = parse_angle(parts[0]), parse_angle(parts[1])
        count = int(parts[2])
        if count < 1:
            raise argparse.ArgumentTypeError("grid count must be >= 1")
        return list(np.linspace(start, stop, count))
    return [parse_angle(tok) for tok in text.split(",") if tok]


def parse_sizes(text: str) -> list:
    sizes = [int(tok) for tok in text.split(",") if tok]
    if not sizes:
        raise argparse.ArgumentTypeError("need at least one sample size")
    return sizes


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _config_hash(meta: dict) -> str:
    blob = json.dumps(meta, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _render(meta: dict, columns: list, rows: list, fmt: str) -> str:
    meta = dict(meta, version=__version__)
    meta["config_hash"] = _config_hash(meta)
    if fmt == "json":
        payload = {
            "meta": meta,
            "columns": columns,
            "rows": [[(int(v) if isinstance(v, (int, np.integer)) else float(v)) for v in row] for row in rows],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    lines = [f"# {key}={meta[key]}" for key in sorted(meta)]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None, force: bool) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    if os.path.exists(out) and not force:
        raise ValueError(f"refusing to overwrite {out!r} without --force")
    with open(out, "w") as fh:
        fh.write(text)


def _seed(args) -> int:
    env = os.environ.get("QWC_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _penalty(args):
    return penalty_metric(args.k, args.mu)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_walk(args) -> None:
    dist = probability_distribution(evolve(args.theta, args.steps)[-1])
    meta = {"command": "walk", "theta": args.theta, "steps": args.steps}
    rows = [(int(x), p) for x, p in zip(dist.x, dist.p)]
    _emit(_render(meta, ["x", "p"], rows, args.format), args.out, args.force)


def cmd_eop(args) -> None:
    states = evolve(args.theta, args.steps)
    rows = [(t, eop(purify(reduce(s)))) for t, s in enumerate(states)]
    meta = {"command": "eop", "theta": args.theta, "steps": args.steps}
    _emit(_render(meta, ["t", "eop"], rows, args.format), args.out, args.force)


def cmd_complexity(args) -> None:
    seed = _seed(args)
    p = _penalty(args)
    meta = {
        "command": "complexity", "mode": args.mode, "theta": args.theta,
        "k": args.k, "mu": args.mu, "samples": args.samples, "steps": args.steps,
        "master_seed": seed, "select": args.select,
    }
    if args.mode == "direct":
        rep = direct_complexity(args.theta, args.steps, p, args.samples, seed, threads=args.threads)
        rows = [(t + 1, c) for t, c in enumerate(rep.per_step)]
        columns = ["t", "C"]
    else:
        rep, _ = stepwise_complexity(
            args.theta, args.steps, p, args.samples, seed,
            threads=args.threads, select=args.select,
        )
        rows = [(t + 1, inc, cum) for t, (inc, cum) in enumerate(zip(rep.per_step, rep.cumulative))]
        columns = ["t", "C_increment", "C_cumulative"]
    meta.update(alpha=rep.alpha, beta=rep.beta, r2=rep.r2)
    _emit(_render(meta, columns, rows, args.format), args.out, args.force)


def cmd_slope(args) -> None:
    seed = _seed(args)
    rows = slope_sweep(
        args.theta_grid, args.steps, _penalty(args), args.samples, seed,
        threads=args.threads, select=args.select,
    )
    meta = {
        "command": "slope", "k": args.k, "mu": args.mu, "samples": args.samples,
        "steps": args.steps, "master_seed": seed, "select": args.select,
        "grid_points": len(rows),
    }
    _emit(_render(meta, ["theta", "alpha", "beta", "r2"], rows, args.format), args.out, args.force)


def cmd_convergence(args) -> None:
    seed = _seed(args)
    rows = convergence_study(
        args.theta, args.step, args.sizes, args.trials, _penalty(args), seed,
        threads=args.threads,
    )
    meta = {
        "command": "convergence", "theta": args.theta, "step": args.step,
        "trials": args.trials, "k": args.k, "mu": args.mu, "master_seed": seed,
    }
    _emit(_render(meta, ["samples", "stddev"], rows, args.format), args.out, args.force)


def cmd_continuum(args) -> None:
    value = continuum_complexity(args.cutoff, args.theta, args.time, grid=args.grid)
    meta = {
        "command": "continuum", "cutoff": args.cutoff, "theta": args.theta,
        "t": args.time, "grid": args.grid, "integral": value,
    }
    if args.format == "json":
        meta = dict(meta, version=__version__)
        meta["config_hash"] = _config_hash(meta)
        _emit(json.dumps(meta, sort_keys=True, indent=2) + "\n", args.out, args.force)
        return
    p = np.linspace(0.0, args.cutoff, args.grid + 1)
    rows = []
    for p1 in p:
        _, v10, v15 = continuum_response(np.full_like(p, p1), p, args.theta, args.time)
        rows.extend((p1, p2, a, b) for p2, a, b in zip(p, v10, v15))
    _emit(_render(meta, ["p1", "p2", "v10", "v15"], rows, args.format), args.out, args.force)


def cmd_circuit(args) -> None:
    seed = _seed(args)
    _, seq = stepwise_complexity(
        args.theta, args.steps, _penalty(args), args.samples, seed,
        threads=args.threads, select=args.select,
    )
    rows = depth_series(seq)
    meta = {
        "command": "circuit", "theta": args.theta, "steps": args.steps,
        "k": args.k, "mu": args.mu, "samples": args.samples,
        "master_seed": seed, "select": args.select,
    }
    _emit(_render(meta, ["t", "depth", "cumulative"], rows, args.format), args.out, args.force)


def cmd_dump_algebra(args) -> None:
    basis = default_basis()
    sc = default_structure_constants()
    K = killing_form(sc)
    nz = np.argwhere(np.abs(sc.f) > 1e-14)
    payload = {
        "version": __version__,
        "weights": [int(wi) for wi in basis.weight],
        "generators": [
            {"index": i + 1, "re": basis.T[i].real.tolist(), "im": basis.T[i].imag.tolist()}
            for i in range(15)
        ],
        "structure_constants": [
            {"i": int(i) + 1, "j": int(j) + 1, "k": int(k) + 1, "f": float(sc.f[i, j, k])}
            for i, j, k in nz
        ],
        "killing_form": K.tolist(),
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out, args.force)


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_common(sub, theta=True, sampling=True):
    sub.add_argument("--out", default=None, help="output path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--force", action="store_true", help="allow overwriting --out")
    if theta:
        sub.add_argument("--theta", type=parse_angle, default=parse_angle("pi/4"),
                         help="coin angle in radians; accepts pi/4, 2pi/3, ...")
    if sampling:
        sub.add_argument("--k", type=int, choices=(1, 2, 3, 4), default=2)
        sub.add_argument("--mu", type=float, default=100.0)
        sub.add_argument("--samples", type=int, default=500)
        sub.add_argument("--seed", type=int, default=7, help="master seed (QWC_SEED overrides)")
        sub.add_argument("--threads", type=int, default=1)
        sub.add_argument("--select", choices=("stepwise", "direct"), default="stepwise",
                         help="stepwise sample-selection rule")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("walk", help="position distribution at the final step")
    _add_common(s, sampling=False)
    s.add_argument("--steps", type=int, default=30)
    s.set_defaults(func=cmd_walk)

    s = subs.add_parser("eop", help="entanglement of purification series")
    _add_common(s, sampling=False)
    s.add_argument("--steps", type=int, default=30)
    s.set_defaults(func=cmd_eop)

    s = subs.add_parser("complexity", help="direct or stepwise complexity series")
    _add_common(s)
    s.add_argument("--mode", choices=("direct", "stepwise"), default="stepwise")
    s.add_argument("--steps", type=int, default=30)
    s.set_defaults(func=cmd_complexity)

    s = subs.add_parser("slope", help="stepwise slope over a coin-angle grid")
    _add_common(s, theta=False)
    s.add_argument("--theta-grid", type=parse_grid, default=parse_grid("0:pi:13"))
    s.add_argument("--steps", type=int, default=30)
    s.set_defaults(func=cmd_slope)

    s = subs.add_parser("convergence", help="min-cost stddev vs sample size")
    _add_common(s)
    s.add_argument("--step", type=int, default=10)
    s.add_argument("--sizes", type=parse_sizes, default=[10, 50, 200, 500])
    s.add_argument("--trials", type=int, default=8)
    s.set_defaults(func=cmd_convergence)

    s = subs.add_parser("continuum", help="cutoff integral of the continuum responses")
    _add_common(s, sampling=False)
    s.add_argument("--cutoff", type=float, default=40.0)
    s.add_argument("--time", type=float, default=1.0, metavar="T")
    s.add_argument("--grid", type=int, default=128)
    s.set_defaults(func=cmd_continuum)

    s = subs.add_parser("circuit", help="per-step and cumulative circuit depth")
    _add_common(s)
    s.add_argument("--steps", type=int, default=30)
    s.set_defaults(func=cmd_circuit)

    s = subs.add_parser("dump-algebra", help="generators, structure constants, Killing form")
    s.add_argument("--out", default=None)
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_dump_algebra)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        args.func(args)
    except NumericalAssertionError as err:
        print(f"numerical assertion failed: {err}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


def _validate(args) -> None:
    for name, low in (("steps", 0), ("samples", 1), ("trials", 2), ("threads", 1),
                      ("grid", 64), ("step", 1)):
        if hasattr(args, name) and getattr(args, name) is not None and getattr(args, name) < low:
            raise ValueError(f"--{name} must be >= {low}")
    if getattr(args, "mu", 0.0) < 0.0:
        raise ValueError("--mu must be >= 0")
    if getattr(args, "cutoff", 1.0) <= 0.0:
        raise ValueError("--cutoff must be > 0")
    if getattr(args, "seed", 0) < 0:
        raise ValueError("--seed must be >= 0")


if __name__ == "__main__":
    sys.exit(main())
