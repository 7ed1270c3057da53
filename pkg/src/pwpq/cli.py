"""Command-line front end.

Exit codes: 0 success, 1 failed verification (``verify-w``), 2 usage or input
error, 3 infeasible answer from ``nu --strict``, 4 solver error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .implementability import (
    SolverError,
    build_sdp,
    feasibility_threshold,
    physical_implementability,
    sampling_cost,
)
from .phase_space import DimSpec
from .states import STATE_NAMES, StateFormatError, named_state, read_state
from .transform import plan_transform
from .wigner import NotAStateError, wigner_of_operator

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_SOLVER = 0, 1, 2, 3, 4

W_COL_TOL = 1e-9
W_NEG_TOL = 1e-12
W_MAP_TOL = 1e-9


class UsageError(Exception):
    pass


def load_state(ref: str, copies: int = 1, dim: int = 3) -> tuple[np.ndarray, DimSpec]:
    """Resolve a named state or a state file into ``(rho, dims)``."""
    if copies < 1:
        raise UsageError("--copies must be >= 1")
    try:
        if ref in STATE_NAMES:
            return named_state(ref, copies, dim), DimSpec((dim,) * copies)
        path = Path(ref)
        if not path.exists():
            raise UsageError(f"{ref!r} is neither a known state ({', '.join(STATE_NAMES)}) nor a file")
        rho, spec = read_state(path)
    except (StateFormatError, ValueError) as exc:
        raise UsageError(f"cannot load state {ref!r}: {exc}") from exc
    if copies > 1:
        rho = reduce(np.kron, [rho] * copies)
        spec = DimSpec(spec.dims * copies)
    return rho, spec


def _fmt_nu(nu: float) -> str:
    s = f"{nu:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _fmt_csv(x: float) -> str:
    return f"{x:.9g}"


# ---------------------------------------------------------------- commands


def cmd_mana(args) -> int:
    from .wigner import mana

    rho, spec = load_state(args.state, args.copies, args.dim)
    print(f"{mana(rho, spec):.9f}")
    return EXIT_OK


def cmd_wigner(args) -> int:
    rho, spec = load_state(args.state, args.copies, args.dim)
    w = wigner_of_operator(rho, spec)
    n = len(spec)
    # rows indexed by the u1 coordinates of all subsystems, columns by the u2's
    grid = w.reshape([d for d in spec.dims for _ in (0, 1)])
    grid = grid.transpose(list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))).reshape(spec.total, spec.total)
    for row in grid:
        print(" ".join(f"{v:+.6f}" for v in row))
    return EXIT_OK


def write_w_csv(path, w: np.ndarray) -> None:
    buf = io.StringIO()
    buf.write(f"# W {w.shape[0]} x {w.shape[1]}\n")
    for row in w:
        buf.write(",".join(repr(float(v)) for v in row) + "\n")
    Path(path).write_text(buf.getvalue())


def read_w_csv(path) -> np.ndarray:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# W"):
        raise UsageError(f"{path}: missing '# W rows x cols' header")
    try:
        rows, cols = (int(t) for t in lines[0][3:].split("x"))
        w = np.array([[float(t) for t in ln.split(",")] for ln in lines[1:] if ln.strip()])
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if w.shape != (rows, cols):
        raise UsageError(f"{path}: header says {rows} x {cols}, data is {w.shape}")
    return w


def cmd_feasible(args) -> int:
    rho, ds = load_state(args.src, args.copies, args.dim)
    sigma, dt = load_state(args.dst, args.copies, args.dim)
    plan = plan_transform(rho, sigma, ds, dt)
    print(f"{'YES' if plan.feasible else 'NO'} mana_from={plan.mana_source:.9f} mana_to={plan.mana_target:.9f}")
    if plan.feasible and args.emit:
        try:
            write_w_csv(args.emit, plan.stochastic_map)
        except OSError as exc:
            raise UsageError(f"cannot write {args.emit}: {exc}") from exc
    return EXIT_OK


def verify_w(w: np.ndarray, p: np.ndarray, q: np.ndarray) -> dict[str, bool]:
    if w.shape != (q.size, p.size):
        return {"shape": False}
    return {
        "shape": True,
        "nonnegative": bool(w.min() >= -W_NEG_TOL),
        "column_sums": bool(np.abs(w.sum(axis=0) - 1).max() <= W_COL_TOL),
        "maps_source_to_target": bool(np.abs(w @ p - q).max() <= W_MAP_TOL),
    }


def cmd_verify_w(args) -> int:
    w = read_w_csv(args.w)
    rho, ds = load_state(args.src, args.copies, args.dim)
    sigma, dt = load_state(args.dst, args.copies, args.dim)
    checks = verify_w(w, wigner_of_operator(rho, ds), wigner_of_operator(sigma, dt))
    for name, ok in checks.items():
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_nu(args) -> int:
    if args.eps < 0:
        raise UsageError("--eps must be non-negative")
    rho, ds = load_state(args.src, args.copies, args.dim)
    sigma, dt = load_state(args.dst, args.copies, args.dim)
    out = physical_implementability(rho, sigma, args.eps, ds, dt)
    if out.status == "optimal":
        print(_fmt_nu(out.nu))
        return EXIT_OK
    if out.status == "infeasible":
        print("INFEASIBLE")
        return EXIT_INFEASIBLE if args.strict else EXIT_OK
    print(f"solver error: {out.message}", file=sys.stderr)
    return EXIT_SOLVER


def cmd_sample_cost(args) -> int:
    try:
        print(sampling_cost(args.nu, args.eps, args.delta))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK


# ------------------------------------------------------------------ sweeps


@dataclass
class SweepRow:
    eps: float
    nu: float
    status: str
    solve_time_ms: float

    def cells(self, timing: bool = True) -> list[str]:
        nu = _fmt_csv(self.nu) if self.status == "optimal" else "INFEASIBLE" if self.status == "infeasible" else "nan"
        ms = _fmt_csv(round(self.solve_time_ms, 3)) if timing else ""
        return [_fmt_csv(self.eps), nu, self.status, ms]


def _solve_chunk(job) -> list[SweepRow]:
    rho, sigma, ds, dt, eps_values = job
    model = None
    rows = []
    for eps in eps_values:
        if eps > 0 and model is None:
            model = build_sdp(rho, sigma, eps, ds, dt)
        t0 = time.perf_counter()
        out = physical_implementability(rho, sigma, eps, ds, dt, model=model if eps > 0 else None)
        rows.append(SweepRow(eps, out.nu, out.status, 1e3 * (time.perf_counter() - t0)))
    return rows


def run_sweep(rho, sigma, ds, dt, eps_grid, jobs: int = 1) -> list[SweepRow]:
    """Solve every grid point; rows come back sorted by eps whatever the completion order."""
    eps_grid = [float(e) for e in eps_grid]
    jobs = max(1, min(jobs, len(eps_grid)))
    chunks = [eps_grid[i::jobs] for i in range(jobs)]
    work = [(rho, sigma, ds, dt, chunk) for chunk in chunks]
    if jobs == 1:
        rows = _solve_chunk(work[0])
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = [r for part in pool.map(_solve_chunk, work) for r in part]
    return sorted(rows, key=lambda r: r.eps)


def sweep_threshold(rho, sigma, ds, dt, rows: list[SweepRow]) -> float | None:
    feasible = [r.eps for r in rows if r.status == "optimal"]
    if not feasible:
        return None
    hi = min(feasible)
    below = [r.eps for r in rows if r.status == "infeasible" and r.eps < hi]
    if not below:
        return None
    return feasibility_threshold(rho, sigma, max(below), hi, 1e-4, ds, dt)


def cmd_sweep(args) -> int:
    if not 0 <= args.eps_start < args.eps_end:
        raise UsageError("need 0 <= --eps-start < --eps-end")
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    rho, ds = load_state(args.src, args.copies, args.dim)
    sigma, dt = load_state(args.dst, args.copies, args.dim)
    out_path = Path(args.out)
    try:
        out_path.touch()
    except OSError as exc:
        raise UsageError(f"cannot write {out_path}: {exc}") from exc

    grid = np.linspace(args.eps_start, args.eps_end, args.steps)
    rows = run_sweep(rho, sigma, ds, dt, grid, args.jobs)
    buf = io.StringIO()
    if any(r.status == "infeasible" for r in rows):
        try:
            thr = sweep_threshold(rho, sigma, ds, dt, rows)
        except SolverError as exc:
            buf.write(f"# feasibility_threshold_eps=unknown ({exc})\n")
        else:
            if thr is None:
                buf.write(f"# feasibility_threshold_eps=none in [{_fmt_csv(args.eps_start)}, {_fmt_csv(args.eps_end)}]\n")
            else:
                buf.write(f"# feasibility_threshold_eps={_fmt_csv(thr)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["eps", "nu", "status", "solve_time_ms"])
    for r in rows:
        writer.writerow(r.cells(timing=not args.no_timing))
    out_path.write_text(buf.getvalue())
    n_err = sum(r.status == "solver_error" for r in rows)
    print(f"wrote {len(rows)} rows to {out_path}" + (f" ({n_err} solver errors)" if n_err else ""))
    return EXIT_OK


# -------------------------------------------------------------------- main


def _add_state_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--copies", type=int, default=1, help="tensor power of each state")
    p.add_argument("--dim", type=int, default=3, help="local dimension for basis_k / maximally_mixed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwpq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mana", help="print the mana (base 2) of a state")
    p.add_argument("--state", required=True)
    _add_state_opts(p)
    p.set_defaults(func=cmd_mana)

    p = sub.add_parser("wigner", help="print the Wigner function as a grid")
    p.add_argument("--state", required=True)
    _add_state_opts(p)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("feasible", help="decide exact convertibility and optionally emit W")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--emit", help="write the stochastic Wigner matrix as CSV")
    _add_state_opts(p)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("nu", help="physical implementability at error eps")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--strict", action="store_true", help="exit 3 when infeasible")
    _add_state_opts(p)
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("sweep", help="nu over a uniform eps grid, written as CSV")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--eps-start", type=float, default=0.0)
    p.add_argument("--eps-end", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="leave solve_time_ms empty for byte-stable output")
    _add_state_opts(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sample-cost", help="Hoeffding sample count for a given nu")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=cmd_sample_cost)

    p = sub.add_parser("verify-w", help="check an emitted W against source and target states")
    p.add_argument("--w", required=True)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    _add_state_opts(p)
    p.set_defaults(func=cmd_verify_w)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, NotAStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
