"""
pmedit Command Line

Every subcommand is a run_* function taking document texts and options and
returning a CommandResult: the exit code (0 pass, 1 a check failed, 2 input
error) and the deterministic report lines printed on standard output. The
HTTP API calls the same functions.

Usage:
    python cli.py validate module.pmod
    python cli.py bottleneck a.pmod b.pmod
    python cli.py path-from-pair pair.ipres > path.epath
    python cli.py edit-verify path.epath
"""

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Type

from dotenv import load_dotenv

from barcodes import barcode_1d, bottleneck
from constructions import interleaving_to_path, lesnick_pair_check
from document_format_base import BaseDocumentFormat
from edit_category import NotFound, component, path_cost, validate_edit, validate_path
from format_epath import EditPathFormat
from format_ipres import PairFormat
from format_iwit import WitnessFormat
from format_pmod import PresentationFormat
from interleaving import interleave_from_edit, search_interleaving, swap_witness, verify_interleaving
from order_core import EMPTY_SUPPORT, to_rational
from pm_utils import default_seed, format_point, format_rational, load_config, log_event, set_verbose
from presentations import evaluate, support_grid

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2

# Format class mapping (keyed by the config's class_name)
FORMAT_CLASSES: Dict[str, Type[BaseDocumentFormat]] = {
    "PresentationFormat": PresentationFormat,
    "PairFormat": PairFormat,
    "WitnessFormat": WitnessFormat,
    "EditPathFormat": EditPathFormat,
}


@dataclass
class CommandResult:
    exit_code: int
    report: List[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.report)


def create_format(magic: str) -> BaseDocumentFormat:
    """
    Instantiate the format registered for a document magic.

    Args:
        magic: "pmod", "ipres", "iwit" or "epath"

    Returns:
        A fresh format instance
    """
    formats = load_config()["formats"]
    if magic not in formats:
        raise ValueError(f"Unknown document format: {magic}")
    class_name = formats[magic]["class_name"]
    if class_name not in FORMAT_CLASSES:
        raise ValueError(f"Unknown format class: {class_name}")
    return FORMAT_CLASSES[class_name]()


def parse_document(magic: str, text: str):
    return create_format(magic).parse(text)


def emit_document(magic: str, value) -> str:
    return create_format(magic).emit(value)


def parse_point(tokens: Sequence[str]) -> tuple:
    """Coordinates from command-line tokens; commas and whitespace both separate."""
    coords = []
    for token in tokens:
        for part in token.replace(",", " ").split():
            try:
                coords.append(Fraction(part))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"Invalid coordinate '{part}'") from None
    if not coords:
        raise ValueError("A point needs at least one coordinate")
    return tuple(coords)


def _document_result(magic: str, value) -> CommandResult:
    return CommandResult(EXIT_PASS, emit_document(magic, value).splitlines())


def _report_result(report, extra: Optional[List[str]] = None) -> CommandResult:
    return CommandResult(EXIT_PASS if report.passed else EXIT_FAIL, (extra or []) + report.lines())


# --------------------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------------------

def run_validate(pmod: str) -> CommandResult:
    m = parse_document("pmod", pmod)
    return CommandResult(EXIT_PASS, [
        f"field {m.p}",
        f"dim {m.dimension}",
        f"generators {len(m.generators)}",
        f"relations {len(m.relations)}",
        "presentation: PASS"
    ])


def run_eval(pmod: str, at: Sequence[str]) -> CommandResult:
    m = parse_document("pmod", pmod)
    point = parse_point(at)
    if len(point) != m.dimension:
        raise ValueError(f"--at needs {m.dimension} coordinates, got {len(point)}")
    fiber = evaluate(m, point)
    return CommandResult(EXIT_PASS, [
        f"point {format_point(point)}",
        f"dim {fiber.dimension}",
        "basis" + "".join(f" {gid}" for gid in fiber.basis)
    ])


def run_dims(pmod: str) -> CommandResult:
    m = parse_document("pmod", pmod)
    grid = support_grid(m)
    if grid is EMPTY_SUPPORT:
        return CommandResult(EXIT_PASS, ["support empty"])
    lines = ["grid " + " x ".join("{" + " ".join(format_rational(v) for v in axis) + "}" for axis in grid.axes)]
    for point in grid.points:
        lines.append(f"{format_point(point)} : {evaluate(m, point).dimension}")
    return CommandResult(EXIT_PASS, lines)


def run_barcode(pmod: str) -> CommandResult:
    barcode = barcode_1d(parse_document("pmod", pmod))
    return CommandResult(EXIT_PASS, [f"bar {format_rational(b)} {format_rational(d)}" for b, d in barcode.bars])


def run_bottleneck(first: str, second: str) -> CommandResult:
    b1 = barcode_1d(parse_document("pmod", first))
    b2 = barcode_1d(parse_document("pmod", second))
    return CommandResult(EXIT_PASS, [format_rational(bottleneck(b1, b2))])


def run_component(pmod: str) -> CommandResult:
    return CommandResult(EXIT_PASS, [str(component(parse_document("pmod", pmod)))])


def run_edit_verify(epath: str) -> CommandResult:
    path = parse_document("epath", epath)
    report = validate_path(path)
    extra = []
    if report.passed:
        extra.append(f"cost {format_rational(path_cost(path))}")
    return _report_result(report, extra)


def run_edit_cost(epath: str) -> CommandResult:
    return CommandResult(EXIT_PASS, [format_rational(path_cost(parse_document("epath", epath)))])


def run_edit_to_interleaving(epath: str, step: int) -> CommandResult:
    """Witness for (node step-1, node step) built from the step's edit."""
    path = parse_document("epath", epath)
    if not 1 <= step <= len(path.steps):
        raise ValueError(f"--step must lie in 1..{len(path.steps)}, got {step}")
    record, direction = path.steps[step - 1]
    report = validate_edit(record)
    if not report.passed:
        return CommandResult(EXIT_FAIL, report.lines())
    witness = interleave_from_edit(record, check=False)
    if direction == "rev":
        witness = swap_witness(witness)
    return _document_result("iwit", witness)


def run_interleaving_verify(first: str, second: str, iwit: str) -> CommandResult:
    m = parse_document("pmod", first)
    n = parse_document("pmod", second)
    witness = parse_document("iwit", iwit)
    return _report_result(verify_interleaving(m, n, witness), [f"eps {format_rational(witness.eps)}"])


def run_path_from_pair(ipres: str) -> CommandResult:
    return _document_result("epath", interleaving_to_path(parse_document("ipres", ipres)))


def run_pair_check(ipres: str, first: str, second: str) -> CommandResult:
    pair = parse_document("ipres", ipres)
    m = parse_document("pmod", first)
    n = parse_document("pmod", second)
    return _report_result(lesnick_pair_check(pair, m, n), [f"eps {format_rational(pair.eps)}"])


def run_search_interleaving(
    first: str,
    second: str,
    eps: str,
    budget: Optional[int] = None,
    seed: Optional[int] = None
) -> CommandResult:
    m = parse_document("pmod", first)
    n = parse_document("pmod", second)
    seed = default_seed() if seed is None else seed
    result = search_interleaving(m, n, to_rational(eps), budget=budget, seed=seed)
    if isinstance(result, NotFound):
        return CommandResult(EXIT_FAIL, [
            f"not found: {result.reason}",
            f"provably none: {'yes' if result.provably_none else 'no'}",
            f"seed {seed}"
        ])
    return _document_result("iwit", result)


# --------------------------------------------------------------------------------------
# Dispatch
# --------------------------------------------------------------------------------------

def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


COMMANDS: Dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    "validate": lambda a: run_validate(_read(a.pmod)),
    "eval": lambda a: run_eval(_read(a.pmod), a.at),
    "dims": lambda a: run_dims(_read(a.pmod)),
    "barcode": lambda a: run_barcode(_read(a.pmod)),
    "bottleneck": lambda a: run_bottleneck(_read(a.first), _read(a.second)),
    "component": lambda a: run_component(_read(a.pmod)),
    "edit-verify": lambda a: run_edit_verify(_read(a.epath)),
    "edit-cost": lambda a: run_edit_cost(_read(a.epath)),
    "edit-to-interleaving": lambda a: run_edit_to_interleaving(_read(a.epath), a.step),
    "interleaving-verify": lambda a: run_interleaving_verify(_read(a.first), _read(a.second), _read(a.iwit)),
    "path-from-pair": lambda a: run_path_from_pair(_read(a.ipres)),
    "pair-check": lambda a: run_pair_check(_read(a.ipres), _read(a.first), _read(a.second)),
    "search-interleaving": lambda a: run_search_interleaving(
        _read(a.first), _read(a.second), a.eps, budget=a.budget, seed=a.seed
    ),
}


def build_parser() -> argparse.ArgumentParser:
    commands = load_config()["commands"]
    parser = argparse.ArgumentParser(prog="pmedit", description="Edits and interleavings of persistence modules")
    parser.add_argument("--verbose", action="store_true", help="Diagnostics on standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str):
        return sub.add_parser(name, help=commands[name]["description"], description=commands[name]["description"])

    for name in ("validate", "dims", "barcode", "component"):
        add(name).add_argument("pmod")
    p = add("eval")
    p.add_argument("pmod")
    p.add_argument("--at", nargs="+", required=True, help="Point coordinates, e.g. --at 1 3/2")
    p = add("bottleneck")
    p.add_argument("first")
    p.add_argument("second")
    for name in ("edit-verify", "edit-cost"):
        add(name).add_argument("epath")
    p = add("edit-to-interleaving")
    p.add_argument("epath")
    p.add_argument("--step", type=int, required=True, help="1-based edit index")
    p = add("interleaving-verify")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("iwit")
    add("path-from-pair").add_argument("ipres")
    p = add("pair-check")
    p.add_argument("ipres")
    p.add_argument("first")
    p.add_argument("second")
    p = add("search-interleaving")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--eps", required=True, help="Rational interleaving parameter")
    p.add_argument("--budget", type=int, default=None, help="Cap on total pointwise dimension")
    p.add_argument("--seed", type=int, default=None, help="Overrides PMEDIT_SEED")
    return parser


def cli_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand and print its report.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Exit code
    """
    load_dotenv()
    args = build_parser().parse_args(argv)
    set_verbose(args.verbose)
    log_event("CLI", f"command {args.command}")
    try:
        result = COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"[CLI] error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    sys.stdout.write(result.text)
    return result.exit_code


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
