"""
Command-line entry point for the psybracket toolkit.

    python src/main.py verify data/psybrackets/X1.psy
    python src/main.py enumerate 3
    python src/main.py color data/corpus/3_1.3.pkd data/psybrackets/X2.psy
    python src/main.py wereset data/corpus/hopf_shadow.pkd
    python src/main.py moves-test data/corpus/3_1.pkd data/psybrackets/X1.psy --seeds 1..5
    python src/main.py table data/corpus data/psybrackets

Exit status: 0 on success, 1 when a check fails, 2 on bad input.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from algebra import PsyBracket, PsyError, check_axioms
from config import AppConfig, load_config, parse_seed_range
from diagram import Diagram, precrossing_variants, pseudo_writhe, reverse, validate
from diagram_format import load_diagram, load_diagram_dir
from enumeration import brute_force_psybrackets, enumerate_psybrackets
from invariant import count_colorings, enumerate_colorings, wereset
from moves import EquivalenceMode, random_move_sequence
from psy_format import load_psybracket, load_psybracket_dir, serialize_psybracket
from worker_pool import run_batch

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

DEFAULT_CONFIG = "config.yml"

logger = logging.getLogger("Psybracket")


@dataclass(frozen=True, order=True)
class TableRow:
    diagram: str
    psybracket: str
    phi: int

    def to_csv(self) -> str:
        return f"{self.diagram},{self.psybracket},{self.phi}"


def phi_table(
    diagrams: Sequence[Diagram], psybrackets: Sequence[PsyBracket], jobs: int = 1
) -> List[TableRow]:
    """Counting invariant of every (diagram, psybracket) pair, sorted."""
    cells = [(d, x) for d in diagrams for x in psybrackets]
    values = run_batch(lambda cell: count_colorings(*cell), cells, jobs=jobs, name="Table")
    return sorted(TableRow(d.name, x.name, phi) for (d, x), phi in zip(cells, values))


def _load_settings(args: argparse.Namespace) -> AppConfig:
    if args.config:
        return load_config(args.config)
    if os.path.exists(DEFAULT_CONFIG):
        return load_config(DEFAULT_CONFIG)
    return AppConfig()


def _diagram(path: str, args: argparse.Namespace) -> Diagram:
    d = load_diagram(path)
    report = validate(d)
    if not report.valid:
        raise PsyError(f"{path}: " + "; ".join(report.problems))
    return reverse(d) if args.reverse else d


def cmd_verify(args: argparse.Namespace, settings: AppConfig) -> int:
    x = load_psybracket(args.path)
    report = check_axioms(x.tc, x.tp)
    print(report.format())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_enumerate(args: argparse.Namespace, settings: AppConfig) -> int:
    bound = args.max_carrier or settings.enumeration.max_carrier
    if args.brute_force:
        result = brute_force_psybrackets(args.n)
    else:
        result = enumerate_psybrackets(args.n, max_carrier=bound, jobs=args.jobs or settings.jobs)
    if args.all:
        for x in result.structures:
            sys.stdout.write(serialize_psybracket(x))
            sys.stdout.write("---\n")
    else:
        for rep, size in zip(result.representatives, result.class_sizes):
            sys.stdout.write(f"; class size {size}\n")
            sys.stdout.write(serialize_psybracket(rep))
            sys.stdout.write("---\n")
    print(result.summary())
    return EXIT_OK


def cmd_color(args: argparse.Namespace, settings: AppConfig) -> int:
    d = _diagram(args.diagram, args)
    x = load_psybracket(args.psybracket)
    if args.list:
        colorings = enumerate_colorings(d, x)
        for coloring in colorings:
            print(" ".join(f"{region}={color}" for region, color in enumerate(coloring)))
        print(f"phi={len(colorings)}")
    else:
        print(f"phi={count_colorings(d, x)}")
    return EXIT_OK


def _battery_paths(args: argparse.Namespace, settings: AppConfig) -> List[Path]:
    if not args.battery:
        return [Path(p) for p in settings.wereset.battery]
    paths: List[Path] = []
    for entry in args.battery:
        path = Path(entry)
        paths.extend(sorted(path.glob("*.psy")) if path.is_dir() else [path])
    return paths


def cmd_wereset(args: argparse.Namespace, settings: AppConfig) -> int:
    d = _diagram(args.diagram, args)
    battery = [load_psybracket(p).tc for p in _battery_paths(args, settings)]
    result = wereset(
        d,
        battery,
        max_precrossings=settings.wereset.max_precrossings,
        jobs=args.jobs or settings.jobs,
    )
    print(result.format())
    return EXIT_OK


def _check_seed(job: Tuple[Diagram, PsyBracket, EquivalenceMode, int, int, int]) -> Tuple[int, int, bool]:
    d, x, mode, length, seed, before = job
    moved = random_move_sequence(d, mode=mode, length=length, seed=seed)
    after = count_colorings(moved, x)
    ok = after == before
    if mode is EquivalenceMode.SINGULAR:
        ok = ok and pseudo_writhe(moved) == pseudo_writhe(d)
    return seed, after, ok


def cmd_moves_test(args: argparse.Namespace, settings: AppConfig) -> int:
    d = _diagram(args.diagram, args)
    x = load_psybracket(args.psybracket)
    mode = EquivalenceMode(args.mode or settings.moves.mode)
    length = settings.moves.length if args.len is None else args.len
    seeds = parse_seed_range(args.seeds or settings.moves.seeds)
    before = count_colorings(d, x)
    jobs = [(d, x, mode, length, seed, before) for seed in seeds]
    results = run_batch(_check_seed, jobs, jobs=args.jobs or settings.jobs, name="MovesTest")
    failures = 0
    for seed, after, ok in results:
        print(f"seed={seed} phi_before={before} phi_after={after} ok={str(ok).lower()}")
        failures += not ok
    if failures:
        logger.error(f"{failures} of {len(results)} seeds changed the invariant")
    return EXIT_FAILED if failures else EXIT_OK


def cmd_table(args: argparse.Namespace, settings: AppConfig) -> int:
    diagrams = load_diagram_dir(args.corpus)
    for d in diagrams:
        report = validate(d)
        if not report.valid:
            raise PsyError(f"{d.name}: " + "; ".join(report.problems))
    if args.reverse:
        diagrams = [reverse(d) for d in diagrams]
    if args.masks:
        diagrams = [v for d in diagrams for v in precrossing_variants(d)]
    psybrackets = load_psybracket_dir(args.psybrackets)
    for x in psybrackets:
        report = check_axioms(x.tc, x.tp)
        if not report.passed:
            path = Path(args.psybrackets) / f"{x.name}.psy"
            failed = ", ".join(dict.fromkeys(report.failed_tags()))
            raise PsyError(f"{path}: not a psybracket, fails {failed}")
    rows = phi_table(diagrams, psybrackets, jobs=args.jobs or settings.jobs)
    print("diagram,psybracket,phi")
    for row in rows:
        print(row.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML configuration file")
    common.add_argument("--log-level", help="override the configured log level")
    common.add_argument("--jobs", type=int, help="worker threads for batch work")
    common.add_argument("--mode", choices=["pseudo", "singular"],
                        help="equivalence relation for move tests")
    common.add_argument("--reverse", action="store_true",
                        help="reverse the orientation of every diagram")

    parser = argparse.ArgumentParser(
        description="Psybracket algebra, enumeration and counting invariants"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the psybracket axioms")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", parents=[common], help="all psybrackets on {1..n}")
    p.add_argument("n", type=int)
    p.add_argument("--max-carrier", type=int, help="override the carrier bound")
    p.add_argument("--brute-force", action="store_true",
                   help="filter every tensor pair instead of searching (n <= 2)")
    p.add_argument("--all", action="store_true",
                   help="print every structure found instead of one per class")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("color", parents=[common], help="count colorings of a diagram")
    p.add_argument("diagram")
    p.add_argument("psybracket")
    p.add_argument("--list", action="store_true", help="print every coloring")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("wereset", parents=[common], help="weighted resolution set")
    p.add_argument("diagram")
    p.add_argument("--battery", nargs="+", help=".psy files or directories")
    p.set_defaults(func=cmd_wereset)

    p = sub.add_parser("moves-test", parents=[common],
                       help="check invariance along random move sequences")
    p.add_argument("diagram")
    p.add_argument("psybracket")
    p.add_argument("--len", type=int)
    p.add_argument("--seeds", help="inclusive range a..b")
    p.set_defaults(func=cmd_moves_test)

    p = sub.add_parser("table", parents=[common], help="CSV of counting invariants")
    p.add_argument("corpus")
    p.add_argument("psybrackets")
    p.add_argument("--masks", action="store_true",
                   help="expand each diagram into its precrossing variants")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point for the psybracket toolkit.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _load_settings(args)
    except (FileNotFoundError, ValueError) as e:
        print(f"Error loading configuration: {e}", file=sys.stderr)
        return EXIT_INPUT

    logging.basicConfig(
        level=getattr(logging, (args.log_level or settings.log_level).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return args.func(args, settings)
    except (PsyError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
