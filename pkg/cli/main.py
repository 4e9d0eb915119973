"""
tessella command line
=====================
Subcommands: group, count, enumerate, analyse, render, csl, table1.

Exit codes:
    0  success / table matches
    1  usage error (bad flags, invalid values)
    2  computation error
    3  table1 mismatch
"""

import argparse
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from loguru import logger

from core.coset_table import todd_coxeter
from core.colourings import (
    centre_cycle_structure,
    colour_patch,
    compose_report,
    emphasis_orbits,
    enantiomorph_orbits,
    is_chiral,
    quotient_shading,
    quotient_summary,
    reflection_conjugate,
)
from core.low_index import enumerate_colourings
from core.oracle import oracle_count
from core.presentations import (
    TilingSchlafli,
    classify_geometry,
    presentation_for,
    tile_stabilizer_words,
)
from geometry.coincidence import coincidence_figure
from geometry.hyperbolic import characteristic_triangle
from geometry.tiling import build_patch
from regression.table1_runner import Table1Runner, best_convention, diff_frame, table_frame
from render.svg_renderer import RenderOptions, render
from tessella_logging.logger import RecordReader, ReportWriter, dumps, records_document
from tessella_logging.schemas import (
    SCHEMA,
    AnalysisReport,
    CentreKind,
    Convention,
    Mode,
    RecordAnalysis,
)
from utils.config_loader import Config
from utils.errors import InvalidSchlafli, TessellaError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTATION = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    """Flag problem detected before any computation."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _pair(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"Expected comma-separated integers, got '{text}'")
    if len(values) != 2:
        raise UsageError(f"Expected two colours, got '{text}'")
    return values


def _add_tiling(parser: argparse.ArgumentParser, with_k: bool = True) -> None:
    parser.add_argument("-p", type=int, required=True, help="polygon sides")
    parser.add_argument("-q", type=int, required=True, help="polygons per vertex")
    if with_k:
        parser.add_argument("-k", type=int, default=None, help="number of colours (default 10)")
    parser.add_argument("--mode", choices=[m.value for m in Mode], default=None)


def _add_convention(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--convention", choices=[c.value for c in Convention], default=None)


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = _Parser(prog="tessella", description="Perfect colourings of regular tilings (p^q).")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    group = sub.add_parser("group", help="presentation and geometry of (p^q)")
    _add_tiling(group, with_k=False)
    group.add_argument("--order", action="store_true", help="Todd-Coxeter group order (finite groups only)")
    group.add_argument("--max-cosets", type=int, default=None)
    group.add_argument("--out", type=Path)

    count = sub.add_parser("count", help="number of perfect colourings")
    _add_tiling(count)
    _add_convention(count)
    count.add_argument("--oracle", action="store_true", help="cross-check with the brute-force count")
    count.add_argument("--out", type=Path)

    enum = sub.add_parser("enumerate", help="write colouring records")
    _add_tiling(enum)
    _add_convention(enum)
    enum.add_argument("--out", type=Path)

    analyse = sub.add_parser("analyse", help="quotients, enantiomorphs and cycle types of records")
    analyse.add_argument("records", type=Path)
    analyse.add_argument("--quotients", action="store_true")
    analyse.add_argument("--enantiomorphs", action="store_true")
    analyse.add_argument("--cycles", choices=[c.value for c in CentreKind])
    analyse.add_argument("--emphasis", type=str, help="two colours, e.g. 1,2")
    analyse.add_argument("--orbit", choices=[c.value for c in CentreKind])
    analyse.add_argument("--compose", action="store_true")
    analyse.add_argument("--out", type=Path)

    rend = sub.add_parser("render", help="SVG figure of a (coloured) patch")
    _add_tiling(rend)
    _add_convention(rend)
    rend.add_argument("--record", type=int, default=None, help="record id to colour with")
    rend.add_argument("--records", type=Path, help="read records instead of enumerating")
    rend.add_argument("--depth", type=int, default=None)
    rend.add_argument("--emphasis", type=str)
    rend.add_argument("--dual", action="store_true")
    rend.add_argument("--quotient", type=int, help="shade colours by their N-colour quotient")
    rend.add_argument("--patch-json", type=Path, help="also write the patch as JSON")
    rend.add_argument("-o", "--out", type=Path)

    csl = sub.add_parser("csl", help="coincidence-site analysis of a rotation")
    _add_tiling(csl, with_k=False)
    csl.add_argument("--centre", choices=[c.value for c in CentreKind], default="face")
    csl.add_argument("--angle", type=float, required=True, help="degrees")
    csl.add_argument("--depth", type=int, default=None)
    csl.add_argument("--tol", type=float, default=None)
    csl.add_argument("--points", choices=["vertices", "centres"], default=None)
    csl.add_argument("--svg", type=Path, help="also render the highlighted figure")
    csl.add_argument("--out", type=Path)

    table1 = sub.add_parser("table1", help="reproduce the ten-colour table")
    table1.add_argument("--convention", choices=[c.value for c in Convention] + ["best"], default=None)
    table1.add_argument("-k", type=int, default=None)
    table1.add_argument("--json", action="store_true", help="print JSON instead of the table")
    table1.add_argument("--out", type=Path)

    return parser.parse_args(argv)


def _configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def _validate(args: argparse.Namespace) -> None:
    """Fill defaults from config and reject bad values before computing."""
    if hasattr(args, "p"):
        try:
            TilingSchlafli(args.p, args.q)
        except InvalidSchlafli as e:
            raise UsageError(str(e))
    if getattr(args, "mode", None) is None and hasattr(args, "mode"):
        args.mode = Config.get("enumeration", "default_mode", default="full")
    if hasattr(args, "k"):
        if args.k is None:
            args.k = int(Config.get("enumeration", "default_k", default=10))
        if args.k < 1:
            raise UsageError(f"-k must be >= 1, got {args.k}")
    if getattr(args, "convention", None) is None and hasattr(args, "convention"):
        args.convention = Config.get("enumeration", "default_convention", default="mirror")
    if hasattr(args, "depth"):
        max_depth = int(Config.get("geometry", "max_depth", default=6))
        if args.depth is None:
            args.depth = int(Config.get("geometry", "default_depth", default=4))
        if not 0 <= args.depth <= max_depth:
            raise UsageError(f"--depth must be within 0..{max_depth}, got {args.depth}")
    if getattr(args, "tol", None) is not None and args.tol <= 0:
        raise UsageError(f"--tol must be > 0, got {args.tol}")
    if getattr(args, "emphasis", None):
        args.emphasis = _pair(args.emphasis)
        if args.emphasis[0] == args.emphasis[1]:
            raise UsageError("--emphasis needs two different colours")
    if getattr(args, "orbit", None) and not getattr(args, "emphasis", None):
        raise UsageError("--orbit needs --emphasis")
    if getattr(args, "quotient", None) is not None and getattr(args, "emphasis", None):
        raise UsageError("--quotient and --emphasis are exclusive")


def _emit(document: Dict[str, Any], out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(dumps(document))
    else:
        ReportWriter(".").write_json(out, document)


def cmd_group(args) -> int:
    s = TilingSchlafli(args.p, args.q)
    mode = Mode(args.mode)
    pres = presentation_for(s, mode)
    geometry = classify_geometry(s)
    doc: Dict[str, Any] = {
        "schema": SCHEMA,
        "tiling": s.label,
        "geometry": geometry.kind.value,
        "d": str(geometry.d),
        "presentation": pres.to_dict(),
        "tile_stabilizer": [pres.format_word(w) for w in tile_stabilizer_words(pres, mode)],
    }
    if args.order:
        max_cosets = args.max_cosets or int(Config.get("enumeration", "max_cosets", default=1_000_000))
        doc["order"] = todd_coxeter(pres, max_cosets=max_cosets).index
    _emit(doc, args.out)
    return EXIT_OK


def cmd_count(args) -> int:
    mode, convention = Mode(args.mode), Convention(args.convention)
    records = enumerate_colourings(args.p, args.q, args.k, mode, convention)
    doc: Dict[str, Any] = {
        "schema": SCHEMA,
        "p": args.p,
        "q": args.q,
        "k": args.k,
        "mode": mode.value,
        "convention": convention.value,
        "count": len(records),
    }
    status = EXIT_OK
    if args.oracle:
        # the oracle counts subgroups, i.e. FIXED records
        if convention == Convention.FIXED:
            subgroups = len(records)
        else:
            subgroups = len(enumerate_colourings(args.p, args.q, args.k, mode, Convention.FIXED))
        pres = presentation_for(TilingSchlafli(args.p, args.q), mode)
        oracle = oracle_count(pres, args.k, tile_stabilizer_words(pres, mode))
        doc["subgroups"] = subgroups
        doc["oracle"] = oracle
        doc["oracle_agrees"] = oracle == subgroups
        if oracle != subgroups:
            logger.error(f"low-index subgroup count {subgroups} != oracle count {oracle}")
            status = EXIT_COMPUTATION
    _emit(doc, args.out)
    return status


def cmd_enumerate(args) -> int:
    mode, convention = Mode(args.mode), Convention(args.convention)
    records = enumerate_colourings(args.p, args.q, args.k, mode, convention)
    doc = records_document(records, p=args.p, q=args.q, k=args.k, mode=mode.value, convention=convention.value)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_analyse(args) -> int:
    records = RecordReader().read_records(args.records)
    report = AnalysisReport(source=str(args.records))
    direct = [r for r in records if r.mode == Mode.DIRECT]
    for rec in records:
        entry = RecordAnalysis(record_id=rec.id, p=rec.p, q=rec.q, mode=rec.mode, k=rec.k)
        if args.quotients:
            entry.quotients = quotient_summary(rec)
        if args.enantiomorphs and rec.mode == Mode.DIRECT:
            partner = reflection_conjugate(rec, direct)
            entry.enantiomorph_id = partner.id
            entry.enantiomorph_fixed = partner.id == rec.id
            entry.chiral = is_chiral(rec)
        if args.cycles:
            entry.centre = CentreKind(args.cycles)
            entry.cycle_type = list(centre_cycle_structure(rec, entry.centre))
        if args.emphasis and args.orbit:
            entry.emphasis_orbits = emphasis_orbits(rec, args.emphasis, CentreKind(args.orbit))
        if args.compose:
            entry.composition = compose_report(rec)
        report.records.append(entry)
    if args.enantiomorphs and direct:
        report.enantiomorph_orbits = enantiomorph_orbits(direct)
    _emit(report.to_dict(), args.out)
    return EXIT_OK


def _pick_record(args):
    mode = Mode(args.mode)
    if args.records:
        records = RecordReader().read_records(args.records)
    else:
        records = enumerate_colourings(args.p, args.q, args.k, mode, Convention(args.convention))
    matching = [r for r in records if r.id == args.record and r.mode == mode and (r.p, r.q) == (args.p, args.q)]
    if not matching:
        raise UsageError(f"No {mode.value} record {args.record} for ({args.p}^{args.q})")
    return matching[0]


def cmd_render(args) -> int:
    mode = Mode(args.mode)
    patch = build_patch(args.p, args.q, args.depth, mode)
    colouring = None
    overrides: Dict[str, Any] = {"show_dual": args.dual}
    if args.record is not None:
        colouring = colour_patch(_pick_record(args), patch)
        if args.emphasis:
            overrides["emphasis"] = tuple(args.emphasis)
        if args.quotient is not None:
            overrides["quotient_shading"] = quotient_shading(colouring.source, args.quotient)
    elif args.emphasis or args.quotient is not None:
        raise UsageError("--emphasis and --quotient need --record")
    opts = RenderOptions.from_config(Config.get("render", default={}), **overrides)
    svg = render(patch, colouring, opts=opts)
    out = args.out or Path(Config.get("output", "figure", default="figure.svg"))
    writer = ReportWriter(".")
    writer.write_svg(out, svg)
    if args.patch_json:
        writer.write_json(args.patch_json, patch.to_dict())
    return EXIT_OK


def cmd_csl(args) -> int:
    mode = Mode(args.mode)
    tol = args.tol if args.tol is not None else float(Config.get("coincidence", "tol", default=1e-6))
    points = args.points or Config.get("coincidence", "points", default="vertices")
    patch = build_patch(args.p, args.q, args.depth, mode)
    tri = characteristic_triangle(args.p, args.q)
    centre = tri.O if args.centre == CentreKind.FACE.value else tri.V
    figure = coincidence_figure(patch, centre, math.radians(args.angle), tol=tol, points=points)
    doc = figure.report.to_dict()
    doc.update({"p": args.p, "q": args.q, "depth": args.depth, "centre_kind": args.centre, "highlight": figure.highlight})
    _emit(doc, args.out)
    if args.svg:
        opts = RenderOptions.from_config(Config.get("render", default={}))
        ReportWriter(".").write_svg(args.svg, render(patch, report=figure, opts=opts))
    return EXIT_OK


def cmd_table1(args) -> int:
    human = not args.json and args.out is None
    if args.convention == "best":
        winner, reports = best_convention(k=args.k)
        doc = {
            "schema": SCHEMA,
            "best": winner.value if winner else None,
            "reports": {c.value: r.to_dict() for c, r in reports.items()},
        }
        if human:
            for convention, report in reports.items():
                status = "✅" if report.matched else "❌"
                print(f"{status} {convention.value:<9} mismatches: {len(report.mismatches)}  waived: {len(report.waived)}")
                print(table_frame(report).to_string())
                print()
            print(f"Best convention: {winner.value if winner else 'none'}")
        else:
            _emit(doc, args.out)
        return EXIT_OK if winner else EXIT_MISMATCH

    convention = Convention(args.convention or Config.get("enumeration", "default_convention", default="mirror"))
    report = Table1Runner(convention, k=args.k, verbose=human).run()
    if not human:
        doc = report.to_dict()
        doc["diff"] = diff_frame(report).to_dict(orient="records")
        _emit(doc, args.out)
    return EXIT_OK if report.matched else EXIT_MISMATCH


COMMANDS = {
    "group": cmd_group,
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "analyse": cmd_analyse,
    "render": cmd_render,
    "csl": cmd_csl,
    "table1": cmd_table1,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    Config.initialize()
    try:
        args = _parse_args(argv)
        _configure_logging(args.verbose)
        _validate(args)
    except UsageError as e:
        print(f"tessella: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"tessella: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TessellaError, ValueError, FileNotFoundError, ArithmeticError) as e:
        print(f"tessella: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
