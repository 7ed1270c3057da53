"""Sweep nu(rho -> sigma, eps) for every ordered pair of the four qutrit magic states.

Writes one CSV per pair (same layout as ``pwpq sweep``) plus a summary of the
value at eps = 0 and the located feasibility threshold.

    python3 scripts/implementability_sweeps.py --out results/sweeps --steps 51
"""

from __future__ import annotations

import argparse
import csv
import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pwpq.cli import run_sweep, sweep_threshold
from pwpq.states import named_state

STATES = ("strange", "norrell", "tmagic", "hmagic")


@dataclass(frozen=True)
class SweepConfig:
    out: Path
    eps_start: float = 0.0
    eps_end: float = 0.5
    steps: int = 51
    jobs: int = 1
    timing: bool = False


def sweep_pair(cfg: SweepConfig, src: str, dst: str) -> dict:
    rho, sigma = named_state(src), named_state(dst)
    grid = np.linspace(cfg.eps_start, cfg.eps_end, cfg.steps)
    rows = run_sweep(rho, sigma, 3, 3, grid, cfg.jobs)
    thr = sweep_threshold(rho, sigma, 3, 3, rows) if any(r.status == "infeasible" for r in rows) else None
    path = cfg.out / f"{src}_to_{dst}.csv"
    with path.open("w", newline="") as fh:
        if thr is not None:
            fh.write(f"# feasibility_threshold_eps={thr:.9g}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["eps", "nu", "status", "solve_time_ms"])
        writer.writerows(r.cells(cfg.timing) for r in rows)
    first = rows[0]
    return {
        "from": src,
        "to": dst,
        "nu_at_start": f"{first.nu:.6f}" if first.status == "optimal" else first.status,
        "threshold": "" if thr is None else f"{thr:.4f}",
        "nu_at_end": f"{rows[-1].nu:.6f}" if rows[-1].status == "optimal" else rows[-1].status,
        "solver_errors": sum(r.status == "solver_error" for r in rows),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/sweeps"))
    ap.add_argument("--eps-start", type=float, default=0.0)
    ap.add_argument("--eps-end", type=float, default=0.5)
    ap.add_argument("--steps", type=int, default=51)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--timing", action="store_true", help="record solve times (breaks byte-stability)")
    args = ap.parse_args()
    cfg = SweepConfig(args.out, args.eps_start, args.eps_end, args.steps, args.jobs, args.timing)
    cfg.out.mkdir(parents=True, exist_ok=True)

    summary = []
    for src, dst in itertools.product(STATES, repeat=2):
        summary.append(sweep_pair(cfg, src, dst))
        s = summary[-1]
        print(f"{src:>8} -> {dst:<8} nu(start)={s['nu_at_start']:>10} threshold={s['threshold'] or '-':>7} nu(end)={s['nu_at_end']}")
    with (cfg.out / "summary.csv").open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(summary[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(summary)


if __name__ == "__main__":
    main()
