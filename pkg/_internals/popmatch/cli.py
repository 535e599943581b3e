"""
Command-line surface: solve, verify, margin, oracle, reduce, gen.

Exit codes: 0 found / popular, 1 not found / not popular, 2 error,
130 interrupted.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

import config

from popmatch import __version__
from popmatch import gen, oracle, reduction, report, solver, verifier
from popmatch.core import load_instance, load_matching, serialize_instance
from popmatch.errors import NO_POPULAR_MATCHING, PopMatchError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_ERROR = 2
EXIT_INTERRUPTED = 130


def print_banner(stream=None):
    stream = stream or sys.stdout
    stream.write("=" * 70 + "\n")
    stream.write(f"  popmatch v{__version__} - popular matchings with one-sided ties\n")
    stream.write("=" * 70 + "\n")


def print_menu(stream=None):
    stream = stream or sys.stdout
    print_banner(stream)
    stream.write("\n")
    commands = config.get_enabled_commands()
    width = max((len(k) for k in commands), default=0)
    for key, info in commands.items():
        stream.write(f"  {key.ljust(width)}  {info['name']}: {info['description']}\n")
    stream.write("\nRun with <command> --help for options.\n")


def configure_logging(level: Optional[str] = None, trace: bool = False) -> None:
    level = (level or config.LOGGING_SETTINGS["level"]).upper()
    numeric = getattr(logging, level, logging.WARNING)
    if trace:
        numeric = min(numeric, getattr(logging, config.LOGGING_SETTINGS["trace_level"]))
    logging.basicConfig(
        level=numeric,
        format=config.LOGGING_SETTINGS["format"].format(version=__version__),
        stream=sys.stderr,
        force=True,
    )


# ============================================================================
# COMMANDS
# ============================================================================

def _emit(args, frames: Dict[str, pd.DataFrame], stream=None) -> None:
    stream = stream or sys.stdout
    for frame in frames.values():
        report.write_report(frame, stream, args.format)
    if args.xlsx is not None:
        path = Path(args.xlsx) if args.xlsx else Path(config.OUTPUT_SETTINGS["report_folder"]) / f"{args.command}.xlsx"
        report.write_excel_report(frames, path)


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    result = solver.solve_report(inst, trace=args.trace)
    _emit(args, {"solve": report.solve_frame(result, trace=args.trace)})
    return EXIT_OK if result.found else EXIT_NOT_FOUND


def cmd_margin(args) -> int:
    inst = load_instance(args.instance)
    m = load_matching(inst, args.matching)
    result = verifier.margin(inst, m)
    _emit(args, {"margin": report.margin_frame(inst, result)})
    return EXIT_OK if result.margin == 0 else EXIT_NOT_FOUND


def cmd_verify(args) -> int:
    return cmd_margin(args)


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    popular = oracle.popular_set(inst, guard_override=args.guard_override)
    _emit(args, {"oracle": report.oracle_frame(inst, popular)})
    return EXIT_OK if popular else EXIT_NOT_FOUND


def cmd_reduce(args) -> int:
    cnf_path = Path(args.cnf)
    cnf = reduction.parse_dimacs(cnf_path.read_bytes())
    inst, index = reduction.build_instance(cnf)

    if args.out:
        prefix = Path(args.out)
    else:
        config.ensure_dirs()
        prefix = Path(config.DATA_PATHS["output"]) / cnf_path.stem
    prefix.parent.mkdir(parents=True, exist_ok=True)
    inst_path = prefix.with_name(prefix.name + ".inst")
    index_path = prefix.with_name(prefix.name + ".index")
    inst_path.write_text(serialize_instance(inst), encoding="utf-8")
    index_path.write_text(reduction.write_index(index), encoding="utf-8")
    log.info("wrote %s and %s", inst_path, index_path)

    decision = assignment = None
    if args.decide:
        decision = reduction.decide_reduced(inst, index, guard_override=args.guard_override)
        if decision is not NO_POPULAR_MATCHING:
            assignment = reduction.assignment_from_matching(cnf, index, decision)
    frame = report.reduce_frame(cnf, inst, index, decision, assignment)
    frame = pd.concat([frame, pd.DataFrame(
        [("output", "instance", str(inst_path)), ("output", "index", str(index_path))],
        columns=report.COLUMNS)], ignore_index=True)
    _emit(args, {"reduce": frame})
    if args.decide and decision is NO_POPULAR_MATCHING:
        return EXIT_NOT_FOUND
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.fixture:
        inst, source = gen.fixture(args.fixture), args.fixture
    elif args.family == "tight":
        if args.n is None:
            raise ValueError("--family tight needs --n")
        inst, source = gen.tight_family(args.n), f"tight n={args.n}"
    else:
        seed = config.GEN_SETTINGS["default_seed"] if args.seed is None else args.seed
        inst = gen.random_instance(seed, args.applicants, args.posts, args.density, args.tie_fraction)
        source = f"random seed={seed}"

    text = serialize_instance(inst)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        _emit(args, {"gen": report.gen_frame(inst, source, out)})
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMAND_HANDLERS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "margin": cmd_margin,
    "oracle": cmd_oracle,
    "reduce": cmd_reduce,
    "gen": cmd_gen,
}


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "tsv"], default=config.OUTPUT_SETTINGS["format"],
                        help="report format (default: %(default)s)")
    common.add_argument("--trace", action="store_true", default=config.SOLVER_SETTINGS["trace"],
                        help="print one line per solver iteration")
    common.add_argument("--seed", type=int, default=None, help="seed for generated instances")
    common.add_argument("--guard-override", action="store_true",
                        help="run exhaustive searches above their configured size")
    common.add_argument("--xlsx", nargs="?", const="", default=None, metavar="PATH",
                        help="also write the report to an Excel workbook")
    common.add_argument("--log-level", default=None,
                        help="DEBUG, INFO, WARNING or ERROR (default from config)")

    parser = argparse.ArgumentParser(prog="popmatch", description=f"popmatch v{__version__}")
    parser.add_argument("--version", action="version", version=f"popmatch {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    enabled = config.get_enabled_commands()

    def add(name: str) -> Optional[argparse.ArgumentParser]:
        if name not in enabled:
            return None
        return sub.add_parser(name, parents=[common], help=enabled[name]["description"])

    p = add("solve")
    if p:
        p.add_argument("instance")
    for name in ("verify", "margin"):
        p = add(name)
        if p:
            p.add_argument("instance")
            p.add_argument("matching")
    p = add("oracle")
    if p:
        p.add_argument("instance")
    p = add("reduce")
    if p:
        p.add_argument("cnf", help="DIMACS file of a (2,2)-E3 formula")
        p.add_argument("--out", help="path prefix for the .inst and .index files")
        p.add_argument("--decide", action="store_true", help="also decide the reduced instance")
    p = add("gen")
    if p:
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("--fixture", choices=gen.fixture_names())
        source.add_argument("--family", choices=["tight"])
        source.add_argument("--random", action="store_true")
        p.add_argument("--n", type=int)
        p.add_argument("--applicants", type=int, default=None)
        p.add_argument("--posts", type=int, default=None)
        p.add_argument("--density", type=float, default=None)
        p.add_argument("--tie-fraction", type=float, default=None)
        p.add_argument("--out", help="instance file to write (default: stdout)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        print_menu()
        return EXIT_OK
    configure_logging(args.log_level, args.trace)
    config.print_config_info()
    try:
        return COMMAND_HANDLERS[args.command](args)
    except KeyboardInterrupt:
        sys.stderr.write("\n[popmatch] interrupted\n")
        return EXIT_INTERRUPTED
    except (PopMatchError, OSError, ValueError) as e:
        sys.stderr.write(f"[ERROR] {e}\n")
        log.debug("command %s failed", args.command, exc_info=True)
        return EXIT_ERROR
