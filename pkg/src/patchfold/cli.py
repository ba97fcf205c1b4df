"""
Patchfold Command Line
Subcommands over JSON documents read from a file or stdin:

    fixture NAME        emit a built-in instance
    unfold METHOD       petal | band | nonobtuse | tree -> layout JSON (JSON lines with --all/--enumerate)
    verify              layout JSON (or JSON lines) -> overlap reports
    partition           prismatoid -> altitude rays and regions as SVG
    sweep               height-grid property reports of a prismatoid
    search              seeded scans of random prismatoids

Exit codes: 0 ok, 1 overlap (or scan failures and dispatch misses), 2 malformed input,
3 internal invariant violation (details dumped to stderr).
"""
import io
import os
import sys
import argparse
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from patchfold.calculations.layout import Layout, base_layout
from patchfold.calculations.overlap_verifier import layout_overlaps
from patchfold.calculations.patch_model import (EDGE_NEIGHBORHOOD, VERTEX_NEIGHBORHOOD, ConvexPatch,
                                                ConvexPolyhedron, neighborhood, prismatoid_polyhedron)
from patchfold.calculations.prismatoid_model import Prismatoid, build_prismatoid, rotate_polygon, surface_faces
from patchfold.calculations.regions import altitude_partition
from patchfold.calculations.search_harness import (CONSTRUCTIVE, MODES, RUNS_DIR, GeneratorConfig,
                                                   conjecture_scan)
from patchfold.calculations.sweeps import (apex_track_check, chain_angle_facts_check, hull_combinatorics_check,
                                           lateral_angle_checks, ray_check)
from patchfold.calculations.unfolder import (PetalChoice, band_unfolding, band_unfoldings, enumerate_petal_unfoldings,
                                             petal_layout, petal_unfold_nonobtuse, petal_unfold_patch,
                                             petal_unfold_topless, petal_structure, spanning_tree_unfoldings)
from patchfold.config.generator import DEFAULT_VERTEX_RANGE, PETAL_ENUMERATION_CAP, SHAPE_BIASES, Z_GRID
from patchfold.data import io as jsonio
from patchfold.data.fixtures import FIXTURES, load_fixture
from patchfold.errors import InvalidInput, InvariantViolation, PatchfoldError, QuadLateralFace
from patchfold.views.svg_render import render_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_OVERLAP = 1
EXIT_INVALID = 2
EXIT_INVARIANT = 3


# =============================================================================
# INPUT / OUTPUT
# =============================================================================

def _read_text(path: Optional[str], stdin) -> str:
    if path is None or path == '-':
        return stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"Cannot read {path}: {exc}")


def _documents(text: str) -> List:
    """One JSON document, or a JSON-lines stream of them."""
    if not text.strip():
        raise InvalidInput("Empty input")
    try:
        return [jsonio.loads(text)]
    except InvalidInput:
        return list(jsonio.read_jsonl(io.StringIO(text)))


def _load_prismatoid(data, nudge: Optional[float]) -> Prismatoid:
    try:
        P = jsonio.load_any(data)
    except QuadLateralFace:
        if not nudge:
            raise
        logger.warning(f"Lateral quadrilateral found; rotating A by {nudge} rad")
        P = build_prismatoid(rotate_polygon(data['A'], nudge), data['B'], data['z'])
    if not isinstance(P, Prismatoid):
        raise InvalidInput(f"Expected a prismatoid document (A, B, z), got a {type(P).__name__}")
    return P


def _load_target(data, args):
    """Prismatoid, or a patch (a polyhedron becomes the neighbourhood of --base-face)."""
    if isinstance(data, dict) and {'A', 'B', 'z'} <= data.keys():
        return _load_prismatoid(data, args.nudge)
    obj = jsonio.load_any(data)
    if isinstance(obj, ConvexPolyhedron):
        obj = neighborhood(obj, args.base_face or 0, args.patch)
    if not isinstance(obj, ConvexPatch):
        raise InvalidInput(f"Cannot unfold a {type(obj).__name__}")
    return obj


def _write_layouts(layouts: Sequence[Tuple[str, Layout]], args, stdout) -> None:
    out = stdout if args.output is None else open(args.output, 'w')
    try:
        if len(layouts) == 1 and not (args.all or args.enumerate):
            jsonio.dump(layouts[0][1], out)
        else:
            jsonio.write_jsonl((L for _, L in layouts), out)
    finally:
        if out is not stdout:
            out.close()
    if args.svg:
        root, ext = os.path.splitext(args.svg)
        for label, L in layouts:
            path = args.svg if len(layouts) == 1 else f"{root}_{label}{ext or '.svg'}"
            with open(path, 'w') as fh:
                fh.write(render_svg(L, report=layout_overlaps(L)))
        logger.info(f"Wrote {len(layouts)} SVG file(s) next to {args.svg}")


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_fixture(args, stdin, stdout) -> int:
    obj = load_fixture(args.name)
    if isinstance(obj, tuple):
        poly, base = obj
        obj = neighborhood(poly, base, VERTEX_NEIGHBORHOOD).to_dict(kind='vertex-neighborhood')
    jsonio.dump(obj, stdout)
    return EXIT_OK


def _unfold_petal(target, args) -> List[Tuple[str, Layout]]:
    if args.enumerate:
        include_top = isinstance(target, Prismatoid) and not args.topless
        return [(c.label, L) for c, L in enumerate_petal_unfoldings(target, include_top=include_top, cap=args.cap)]
    if isinstance(target, ConvexPatch):
        splits = args.splits
        if splits is None:
            fans = petal_structure(target)
            return [('0', petal_unfold_patch(target, [0] * len(fans), fans))]
        return [('-'.join(map(str, splits)), petal_unfold_patch(target, splits))]
    if args.splits is not None:
        top = None if args.topless else args.top
        L = petal_layout(target, args.splits, top)
        return [(PetalChoice(tuple(args.splits), top).label, L)]
    return [('topless', petal_unfold_topless(target))]


def _unfold_tree(target, args) -> List[Tuple[str, Layout]]:
    if isinstance(target, Prismatoid):
        poly, base = prismatoid_polyhedron(target)
        face = base + 1 if args.base_face is None else args.base_face
        target = neighborhood(poly, face, args.patch)
    layouts = []
    for k, L in enumerate(spanning_tree_unfoldings(target, cap=args.cap)):
        layouts.append((str(k), L))
        if not (args.all or args.enumerate):
            break
    return layouts


def cmd_unfold(args, stdin, stdout) -> int:
    target = _load_target(jsonio.loads(_read_text(args.input, stdin)), args)
    if args.method == 'tree':
        layouts = _unfold_tree(target, args)
    elif args.method == 'petal':
        layouts = _unfold_petal(target, args)
    elif not isinstance(target, Prismatoid):
        raise InvalidInput(f"'unfold {args.method}' needs a prismatoid")
    elif args.method == 'band':
        if args.all:
            layouts = [(str(c), L) for c, L in band_unfoldings(target, include_top=not args.topless)]
        else:
            layouts = [(str(args.cut), band_unfolding(target, args.cut, include_top=not args.topless,
                                                      base_face=args.base_face, top_face=args.top))]
    else:
        choice = None
        if args.splits is not None:
            choice = PetalChoice(tuple(args.splits), None if args.topless else args.top)
        layouts = [('nonobtuse', petal_unfold_nonobtuse(target, include_top=not args.topless, choice=choice))]
    logger.info(f"Unfolded {len(layouts)} layout(s) with method {args.method}")
    _write_layouts(layouts, args, stdout)
    return EXIT_OK


def cmd_verify(args, stdin, stdout) -> int:
    overlapping = 0
    reports = []
    for doc in _documents(_read_text(args.input, stdin)):
        L = jsonio.load_any(doc)
        if not isinstance(L, Layout):
            raise InvalidInput(f"verify expects layouts, got a {type(L).__name__}")
        report = layout_overlaps(L)
        overlapping += report.overlapping
        reports.append(report)
    if len(reports) == 1:
        jsonio.dump(reports[0], stdout)
    else:
        jsonio.write_jsonl(reports, stdout)
    logger.info(f"{overlapping} of {len(reports)} layout(s) overlap")
    return EXIT_OVERLAP if overlapping else EXIT_OK


def cmd_partition(args, stdin, stdout) -> int:
    P = _load_prismatoid(jsonio.loads(_read_text(args.input, stdin)), args.nudge)
    partition = altitude_partition(P)
    L = base_layout(P, surface_faces(P))
    svg = render_svg(L, partition=partition)
    if args.svg:
        with open(args.svg, 'w') as fh:
            fh.write(svg)
        jsonio.dump(partition, stdout)
    else:
        stdout.write(svg + '\n')
    return EXIT_OK


def cmd_sweep(args, stdin, stdout) -> int:
    P = _load_prismatoid(jsonio.loads(_read_text(args.input, stdin)), args.nudge)
    grid = args.z_grid or list(Z_GRID)
    report = {
        'hull': hull_combinatorics_check(P, grid),
        'rays': ray_check(P, grid),
        'apex_tracks': {i: apex_track_check(P, i, grid) for i in range(P.m)},
        'chains': {b: chain_angle_facts_check(P, b, grid) for b in range(P.m)},
        'angles': lateral_angle_checks(P, grid),
    }
    jsonio.dump(report, stdout)
    ok = (report['hull']['same_structure'] and report['hull']['hull_agrees'] and report['rays']['ok']
          and all(r['monotone'] for r in report['apex_tracks'].values())
          and all(r['ok'] for r in report['chains'].values()) and report['angles']['ok'])
    if not ok:
        logger.warning("Sweep found a property violation")
    return EXIT_OK if ok else EXIT_OVERLAP


def search_config(args) -> GeneratorConfig:
    return GeneratorConfig(seed=args.seed, n_A=tuple(args.n_a), n_B=tuple(args.n_b), bias=args.bias,
                           z_rel=tuple(args.z_rel) if args.z_rel else None)


def cmd_search(args, stdin, stdout) -> int:
    cfg = search_config(args)
    run_dir = None if args.no_artifacts else args.run_dir
    result = conjecture_scan(cfg, args.count, mode=args.mode, start=args.start, workers=args.workers,
                             cap=args.cap, run_dir=run_dir)
    jsonio.dump(result, stdout)
    return EXIT_OVERLAP if result.failures or result.dispatch_misses else EXIT_OK


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='patchfold', description='Prismatoid and convex patch unfoldings')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('fixture', help='Emit a built-in instance as JSON')
    p.add_argument('name', choices=sorted(FIXTURES))

    p = sub.add_parser('unfold', help='Unfold a prismatoid or patch')
    p.add_argument('method', choices=['petal', 'band', 'nonobtuse', 'tree'])
    p.add_argument('input', nargs='?', help='JSON file (default: stdin)')
    p.add_argument('--topless', action='store_true', help='Leave the top face out')
    p.add_argument('--enumerate', action='store_true', help='Every petal choice (or every cut tree)')
    p.add_argument('--all', action='store_true', help='Every band cut (or every cut tree)')
    p.add_argument('--cut', type=int, default=0, help='Band cut edge (default: 0)')
    p.add_argument('--top', type=int, default=None, help='A-triangle carrying the top')
    p.add_argument('--base-face', type=int, default=None, help='B-triangle carrying the base (band) or patch base face')
    p.add_argument('--patch', choices=[VERTEX_NEIGHBORHOOD, EDGE_NEIGHBORHOOD], default=VERTEX_NEIGHBORHOOD,
                   help='Neighbourhood kind when the input is a polyhedron')
    p.add_argument('--splits', type=int, nargs='+', default=None, help='Split index per base vertex')
    p.add_argument('--cap', type=int, default=PETAL_ENUMERATION_CAP, help='Enumeration cap')
    p.add_argument('--nudge', type=float, default=None, help='Rotate A by this many radians if a lateral face is a quad')
    p.add_argument('--svg', default=None, help='SVG path (numbered per layout when several)')
    p.add_argument('-o', '--output', default=None, help='Output file (default: stdout)')

    p = sub.add_parser('verify', help='Overlap report of layouts')
    p.add_argument('input', nargs='?')

    for name, text in (('partition', 'Altitude rays and regions as SVG'), ('sweep', 'Height-grid property reports')):
        p = sub.add_parser(name, help=text)
        p.add_argument('input', nargs='?')
        p.add_argument('--nudge', type=float, default=None)
        if name == 'partition':
            p.add_argument('--svg', default=None, help='Write the SVG here and the partition JSON to stdout')
        else:
            p.add_argument('--z-grid', type=float, nargs='+', default=None, help='Heights relative to the diameter')

    p = sub.add_parser('search', help='Seeded scan of random prismatoids')
    p.add_argument('--seed', type=int, default=1)
    p.add_argument('--bias', choices=sorted(SHAPE_BIASES), default='generic')
    p.add_argument('--count', type=int, default=100)
    p.add_argument('--start', type=int, default=0)
    p.add_argument('--mode', choices=list(MODES), default=CONSTRUCTIVE)
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--cap', type=int, default=PETAL_ENUMERATION_CAP)
    p.add_argument('--n-a', type=int, nargs=2, default=list(DEFAULT_VERTEX_RANGE), metavar=('LO', 'HI'))
    p.add_argument('--n-b', type=int, nargs=2, default=list(DEFAULT_VERTEX_RANGE), metavar=('LO', 'HI'))
    p.add_argument('--z-rel', type=float, nargs=2, default=None, metavar=('LO', 'HI'))
    p.add_argument('--run-dir', default=RUNS_DIR)
    p.add_argument('--no-artifacts', action='store_true', help='Do not write the run directory')
    return parser


COMMANDS = {
    'fixture': cmd_fixture,
    'unfold': cmd_unfold,
    'verify': cmd_verify,
    'partition': cmd_partition,
    'sweep': cmd_sweep,
    'search': cmd_search,
}


def main(argv: Optional[Iterable[str]] = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(None if argv is None else list(argv))
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=stderr,
    )
    try:
        return COMMANDS[args.command](args, stdin, stdout)
    except InvalidInput as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_INVALID
    except InvariantViolation as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        stderr.write(jsonio.dumps({'error': type(exc).__name__, 'message': str(exc), 'details': exc.details}) + '\n')
        return EXIT_INVARIANT
    except PatchfoldError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_INVALID
