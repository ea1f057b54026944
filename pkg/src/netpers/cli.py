"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .diagmetric import bottleneck_distance
from .filtration import NETWORK_FILTRATIONS, Relation
from .homology import PersistenceDiagram, format_number, compute_persistence
from .io import atomic_write
from .network import BudgetExceeded, NetworkParseError, load_network

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _pos_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _check_out_dir(path) -> None:
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        raise InputError(f"output directory {parent} does not exist")


# ------------------------------------------------------------------- commands

def cmd_diagram(args) -> int:
    _check_out_dir(args.out)
    if args.dump_filtration:
        _check_out_dir(args.dump_filtration)
    X = load_network(args.input)
    F = NETWORK_FILTRATIONS[args.method](X, args.max_dim + 1)
    dgm = compute_persistence(F, args.max_dim)
    if args.dump_filtration:
        atomic_write(args.dump_filtration, F.to_text())
    atomic_write(args.out, dgm.to_csv(range(args.max_dim + 1)))
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        A = PersistenceDiagram.from_csv(_read(args.a))
        B = PersistenceDiagram.from_csv(_read(args.b))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(format_number(bottleneck_distance(A[args.dim], B[args.dim])))
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validate import run_suite

    rep = run_suite(args.suite, args.seed, args.n_cases)
    print(rep.summary())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_experiment(args) -> int:
    from .hippocampus import ExperimentConfig, run_experiment

    try:
        cfg = ExperimentConfig.from_json(_read(args.config))
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad config: {exc}") from None
    cfg = replace(cfg, master_seed=args.seed, jobs=args.jobs or cfg.jobs)
    res = run_experiment(cfg, args.out)
    print(f"{len(res.trials)} trials in {res.seconds:.1f}s; artifacts in {args.out}")
    for label in res.flagged:
        print(f"low coverage: {label}")
    counts = set(cfg.hole_counts)
    if {0, 4} <= counts:
        within, between = res.class_separation(0, 4)
        print(f"0-hole vs 4-hole: mean within {within:.6g}, mean between {between:.6g}")
    return EXIT_OK


def cmd_verify_fdt(args) -> int:
    from .relationlab import verify_fdt_pair

    try:
        R = Relation.from_text(_read(args.r))
        R2 = Relation.from_text(_read(args.r2))
        rep = verify_fdt_pair(R, R2, args.max_dim)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(f"betti E={rep.betti_E} F={rep.betti_F}; E'={rep.betti_E2} F'={rep.betti_F2}")
    print(f"induced ranks E={rep.rank_E} F={rep.rank_F}; two-step diagrams equal: {rep.diagrams_equal}")
    print("PASS" if rep.ok else "FAIL")
    return EXIT_OK if rep.ok else EXIT_FAIL


# --------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netpers", description="Persistent homology of directed networks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diagram", help="persistence diagram of a network file")
    d.add_argument("--input", required=True, help="network .json or .csv")
    d.add_argument("--method", required=True, choices=sorted(NETWORK_FILTRATIONS))
    d.add_argument("--max-dim", type=_nonneg_int, default=1, help="highest homology dimension")
    d.add_argument("--out", required=True, help="diagram CSV to write")
    d.add_argument("--dump-filtration", metavar="PATH")
    d.set_defaults(func=cmd_diagram)

    c = sub.add_parser("compare", help="bottleneck distance between two diagram CSVs")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--dim", type=_nonneg_int, required=True)
    c.set_defaults(func=cmd_compare)

    v = sub.add_parser("validate", help="run a seeded validation suite")
    v.add_argument("--suite", required=True,
                   choices=["cycle", "duality", "stability", "fdt", "cech", "invariance"])
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--n-cases", type=_pos_int)
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("experiment", help="run the place-cell classification experiment")
    e.add_argument("--config", required=True, help="experiment config JSON")
    e.add_argument("--out", required=True, help="artifact directory")
    e.add_argument("--seed", type=int, required=True, help="master seed")
    e.add_argument("--jobs", type=_pos_int)
    e.set_defaults(func=cmd_experiment)

    f = sub.add_parser("verify-fdt", help="homology check of the Dowker equivalence for R inside R'")
    f.add_argument("--r", required=True, help="relation text file")
    f.add_argument("--r2", required=True, help="relation text file containing R")
    f.add_argument("--max-dim", type=_nonneg_int, default=2)
    f.set_defaults(func=cmd_verify_fdt)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:      # argparse reports usage errors with status 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, NetworkParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
