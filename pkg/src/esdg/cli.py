"""Command-line entry point: ``esdg --config run.cfg [--scheme es1fs] [--out DIR]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .diagnostics import write_history
from .output import write_field
from .stepper import CFLViolation, SolverError, run

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_CFL = 3
EXIT_ABORT = 4


def range_line(lo: float, hi: float) -> str:
    return f"u_h in [{lo:.3f}, {hi:.3f}]"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="esdg", description="Entropy-stable, bound-preserving DG-P1 solver")
    p.add_argument("--config", required=True, help="run configuration file (key = value lines)")
    p.add_argument("--scheme", help="override the configured scheme, e.g. es1fs")
    p.add_argument("--out", help="override the output directory")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = load_config(args.config)
        if args.scheme:
            config = config.with_scheme(args.scheme)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(args.out or config.output_dir)
    ext = config.output_format

    def snapshot(state):
        write_field(state.solution, state.solver.mesh, out_dir / f"field_{state.step:06d}.{ext}", ext,
                    title=f"{config.problem} {config.scheme.name} t={state.t:.17g}")

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        state = run(config, on_output=snapshot if config.output_every else None)
        snapshot(state)
        write_field(state.solution, state.solver.mesh, out_dir / f"final.{ext}", ext,
                    title=f"{config.problem} {config.scheme.name} t={state.t:.17g}")
        write_history(state.history, out_dir / "diagnostics.csv")
    except CFLViolation as exc:
        print(f"CFL violation: {exc}", file=sys.stderr)
        return EXIT_CFL
    except SolverError as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    last = state.history[-1]
    print(range_line(last.min, last.max))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
