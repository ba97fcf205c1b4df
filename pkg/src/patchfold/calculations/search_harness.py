"""
Search Harness
Seeded random prismatoids and the scans run over them.

Instance k of a configuration is drawn from numpy's
default_rng([seed, stream, k]), where stream belongs to the shape bias, so
any instance can be rebuilt from (seed, bias, k) alone and scans can be split
across processes without changing their results.
"""
import os
import math
import logging
import itertools
from collections import Counter
from dataclasses import asdict, dataclass, field
from datetime import datetime
from multiprocessing import Pool
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.spatial import ConvexHull, QhullError

from patchfold.calculations.overlap_verifier import layout_overlaps
from patchfold.calculations.patch_model import ConvexPatch
from patchfold.calculations.prismatoid_model import Prismatoid, build_prismatoid, obtuse_faces
from patchfold.calculations.regions import altitude_partition, diamond, region_inside
from patchfold.calculations.unfolder import (PetalChoice, enumerate_petal_unfoldings, petal_layout,
                                             petal_unfold_nonobtuse, petal_unfold_topless)
from patchfold.config.generator import (DEFAULT_VERTEX_RANGE, PETAL_ENUMERATION_CAP, RETRY_CAP,
                                        SHAPE_BIASES)
from patchfold.errors import (CombinatorialExplosion, GenerationExhausted, InvalidInput,
                              InvariantViolation)

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
RUNS_DIR = os.path.join(PROJECT_ROOT, 'runs')

CONSTRUCTIVE = 'constructive'
EXHAUSTIVE = 'exhaustive'
NONOBTUSE = 'nonobtuse'
MODES = (CONSTRUCTIVE, EXHAUSTIVE, NONOBTUSE)


# =============================================================================
# GENERATION
# =============================================================================

@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 1
    n_A: Tuple[int, int] = DEFAULT_VERTEX_RANGE
    n_B: Tuple[int, int] = DEFAULT_VERTEX_RANGE
    bias: str = 'generic'
    z_rel: Optional[Tuple[float, float]] = None   # overrides the bias height range
    retry_cap: int = RETRY_CAP

    def __post_init__(self):
        if self.bias not in SHAPE_BIASES:
            raise InvalidInput(f"Unknown shape bias '{self.bias}' (choose from {', '.join(SHAPE_BIASES)})")
        for name in ('n_A', 'n_B'):
            lo, hi = getattr(self, name)
            if not 3 <= lo <= hi:
                raise InvalidInput(f"{name} range must satisfy 3 <= lo <= hi, got {(lo, hi)}")
        if self.z_rel is not None and not 0 < self.z_rel[0] <= self.z_rel[1]:
            raise InvalidInput(f"z_rel must be a positive increasing range, got {self.z_rel}")

    @property
    def height_range(self) -> Tuple[float, float]:
        return tuple(self.z_rel) if self.z_rel is not None else SHAPE_BIASES[self.bias]['z_rel']

    def to_dict(self) -> Dict:
        return asdict(self)


def random_polygon(rng: np.random.Generator, sides: int, radius: float, jitter: float,
                   centre=(0.0, 0.0), regular: bool = False, offset: float = 0.0) -> np.ndarray:
    """
    Convex polygon from an angular sweep with radial jitter

    The hull of the sample is returned ccw; it may have fewer than `sides`
    vertices when jitter pushes some inside.
    """
    if regular:
        angles = offset + 2 * math.pi * np.arange(sides) / sides
    else:
        angles = np.sort(rng.uniform(0.0, 2 * math.pi, sides))
    radii = radius * (1.0 + jitter * rng.uniform(-1.0, 1.0, sides))
    pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)]) + np.asarray(centre, dtype=float)
    hull = ConvexHull(pts)
    return pts[hull.vertices]


def _draw(cfg: GeneratorConfig, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, float]:
    bias = SHAPE_BIASES[cfg.bias]
    rA = rng.uniform(*bias['radius_A'])
    rB = rng.uniform(*bias['radius_B'])
    if bias['regular']:
        sides = bias.get('sides') or int(rng.integers(max(cfg.n_A[0], cfg.n_B[0]), min(cfg.n_A[1], cfg.n_B[1]) + 1))
        twist = rng.uniform(*bias['twist']) if 'twist' in bias else rng.uniform(-math.pi / sides, math.pi / sides)
        B = random_polygon(rng, sides, rB, bias['jitter'], regular=True, offset=math.pi / 2)
        centre = bias['offset'] * rng.uniform(-1.0, 1.0, 2)
        A = random_polygon(rng, sides, rA, bias['jitter'], centre, regular=True, offset=math.pi / 2 + twist)
    else:
        nA = int(rng.integers(cfg.n_A[0], cfg.n_A[1] + 1))
        nB = int(rng.integers(cfg.n_B[0], cfg.n_B[1] + 1))
        centre = bias['offset'] * rng.uniform(-1.0, 1.0, 2)
        A = random_polygon(rng, nA, rA, bias['jitter'], centre)
        B = random_polygon(rng, nB, rB, bias['jitter'])
    footprint = np.vstack([A, B])
    span = float(np.ptp(footprint, axis=0).max())
    lo, hi = cfg.height_range
    z = math.exp(rng.uniform(math.log(lo), math.log(hi))) * span
    return A, B, z


def random_prismatoid(cfg: GeneratorConfig, index: int = 0) -> Prismatoid:
    """
    Instance `index` of the configuration's stream

    Draws are rejected until build_prismatoid accepts one (parallel edges,
    vertical faces and degenerate hulls are redrawn). The nonobtuse bias
    also redraws until no lateral face and not the top is obtuse.

    Raises:
        GenerationExhausted: retry_cap draws were all rejected
    """
    bias = SHAPE_BIASES[cfg.bias]
    rng = np.random.default_rng([int(cfg.seed), bias['stream'], int(index)])
    for attempt in range(cfg.retry_cap):
        try:
            A, B, z = _draw(cfg, rng)
            if len(A) < 3 or len(B) < 3:
                continue
            P = build_prismatoid(A, B, z)
        except (InvalidInput, InvariantViolation, QhullError) as exc:
            logger.debug(f"seed {cfg.seed} index {index}: draw {attempt} rejected ({type(exc).__name__})")
            continue
        if bias.get('nonobtuse'):
            bad = obtuse_faces(P, include_top=True)
            if bad:
                logger.debug(f"seed {cfg.seed} index {index}: draw {attempt} rejected (obtuse {bad})")
                continue
        return P
    raise GenerationExhausted(f"No valid prismatoid after {cfg.retry_cap} draws",
                              details={'seed': cfg.seed, 'index': index})


def instance_stream(cfg: GeneratorConfig, count: int, start: int = 0) -> Iterator[Tuple[int, Prismatoid]]:
    for k in range(start, start + count):
        yield k, random_prismatoid(cfg, k)


# =============================================================================
# CERTIFICATION
# =============================================================================

def exhaustive_certify(target: Union[Prismatoid, ConvexPatch], include_top: bool = True,
                       cap: int = PETAL_ENUMERATION_CAP, stop_at_clean: bool = False) -> Dict:
    """
    Check every petal choice of an instance for overlap

    Args:
        target: prismatoid (with or without top) or convex patch
        include_top: enumerate top attachments too (prismatoids only)
        cap: enumeration cap
        stop_at_clean: return at the first nonoverlapping choice

    Returns:
        {'choices', 'clean', 'all_overlap', 'witnesses'}; all_overlap is a
        certificate only when every choice was examined
    """
    examined = 0
    clean: List[Dict] = []
    witnesses: List[Dict] = []
    for choice, L in enumerate_petal_unfoldings(target, include_top=include_top, cap=cap):
        examined += 1
        report = layout_overlaps(L)
        if report.overlapping:
            witnesses.append({'choice': choice.to_dict(), 'pairs': [list(p) for p in report.pairs]})
        else:
            clean.append(choice.to_dict())
            if stop_at_clean:
                break
    return {'choices': examined, 'clean': clean, 'all_overlap': not clean and examined > 0,
            'witnesses': witnesses}


# =============================================================================
# SCANS
# =============================================================================

@dataclass
class SearchResult:
    config: Dict
    mode: str
    instances: int = 0
    skipped: int = 0
    failures: List[Dict] = field(default_factory=list)
    cases: Counter = field(default_factory=Counter)
    dispatch_misses: List[Dict] = field(default_factory=list)
    records: List[Dict] = field(default_factory=list, repr=False)

    def summary_frame(self) -> pd.DataFrame:
        skip = ('failure', 'cases', 'fallbacks')
        return pd.DataFrame([{k: v for k, v in r.items() if k not in skip} for r in self.records])

    def to_dict(self) -> Dict:
        return {
            'config': self.config,
            'mode': self.mode,
            'instances': self.instances,
            'skipped': self.skipped,
            'failures': self.failures,
            'dispatch_misses': self.dispatch_misses,
            'cases': dict(sorted(self.cases.items())),
        }


def replay_command(cfg: GeneratorConfig, index: int, mode: str, cap: int = PETAL_ENUMERATION_CAP) -> str:
    """Command line that rebuilds and rescans one instance with the same configuration."""
    z_rel = '' if cfg.z_rel is None else f"--z-rel {cfg.z_rel[0]!r} {cfg.z_rel[1]!r} "
    return (f"python -m patchfold search --seed {cfg.seed} --bias {cfg.bias} "
            f"--n-a {cfg.n_A[0]} {cfg.n_A[1]} --n-b {cfg.n_B[0]} {cfg.n_B[1]} {z_rel}"
            f"--start {index} --count 1 --mode {mode} --cap {cap}")


def scan_instance(args: Tuple[GeneratorConfig, int, str, int]) -> Dict:
    """One instance of a scan; returns a plain record so it can cross process boundaries."""
    cfg, index, mode, cap = args
    P = random_prismatoid(cfg, index)
    record = {'index': index, 'm': P.m, 'n': P.n, 'z': P.z, 'diameter': P.diameter, 'status': 'ok', 'cases': []}
    if mode == CONSTRUCTIVE:
        try:
            L = petal_unfold_topless(P)
            record['cases'] = list(L.meta.get('cases', []))
            record['splits'] = L.meta.get('splits')
            record['fallbacks'] = list(L.meta.get('fallbacks', []))
        except InvariantViolation as exc:
            record['status'] = 'failure'
            record['failure'] = {'error': type(exc).__name__, 'message': str(exc), 'details': exc.details,
                                 'prismatoid': P.to_dict(), 'replay': replay_command(cfg, index, mode, cap)}
    elif mode == EXHAUSTIVE:
        try:
            cert = exhaustive_certify(P, include_top=True, cap=cap, stop_at_clean=True)
        except CombinatorialExplosion as exc:
            record['status'] = 'skipped'
            record['reason'] = str(exc)
            return record
        record['choices'] = cert['choices']
        if cert['all_overlap']:
            record['status'] = 'failure'
            record['failure'] = {'error': 'AllChoicesOverlap', 'certificate': cert, 'prismatoid': P.to_dict(),
                                 'replay': replay_command(cfg, index, mode, cap)}
    elif mode == NONOBTUSE:
        return _scan_nonobtuse(P, cfg, index, cap, record)
    else:
        raise InvalidInput(f"Unknown scan mode '{mode}'")
    return record


def _scan_nonobtuse(P: Prismatoid, cfg: GeneratorConfig, index: int, cap: int, record: Dict) -> Dict:
    """Every diamond inside its altitude region, then every split and top attachment without overlap."""
    def fail(error: str, message: str, details: Dict) -> Dict:
        record['status'] = 'failure'
        record['failure'] = {'error': error, 'message': message, 'details': details, 'prismatoid': P.to_dict(),
                             'replay': replay_command(cfg, index, NONOBTUSE, cap)}
        return record

    a_faces = [k for k, f in enumerate(P.faces) if f.kind == 'A']
    split_ranges = [range(len(P.structure.fans[b]) + 1) for b in range(P.m)]
    total = math.prod(len(r) for r in split_ranges) * len(a_faces)
    if total > cap:
        record['status'] = 'skipped'
        record['reason'] = f"{total} petal choices exceed the cap of {cap}"
        return record

    try:
        partition = altitude_partition(P)
    except InvariantViolation as exc:
        return fail(type(exc).__name__, str(exc), exc.details)
    eps, reach = P.tolerance.eps_len, 10.0 * P.diameter
    outside = [b for b in range(P.m) if not region_inside(diamond(P, b), partition.regions[b], eps, reach)]
    if outside:
        return fail('DiamondOutsideRegion', f"Diamonds at {outside} leave their altitude regions", {'b': outside})

    examined = 0
    for splits, top in itertools.product(itertools.product(*split_ranges), a_faces):
        choice = PetalChoice(tuple(splits), top)
        examined += 1
        try:
            petal_unfold_nonobtuse(P, include_top=True, choice=choice)
        except InvariantViolation as exc:
            record['choices'] = examined
            return fail(type(exc).__name__, str(exc), exc.details | choice.to_dict())
    record['choices'] = examined
    return record


def conjecture_scan(cfg: GeneratorConfig, count: int, mode: str = CONSTRUCTIVE, start: int = 0,
                    workers: int = 1, cap: int = PETAL_ENUMERATION_CAP,
                    run_dir: Optional[str] = None) -> SearchResult:
    """
    Run a scan over instances start..start+count-1

    constructive: the topless petal algorithm must succeed on every instance.
    Instances where a decided split had to be replaced by the fallback
    search are listed in dispatch_misses.
    exhaustive: with the top, an instance fails when every petal choice
    overlaps (that would be a counterexample; none is expected).
    nonobtuse: needs the nonobtuse bias; every diamond must lie in its
    altitude region and every split and top attachment must unfold cleanly.

    Args:
        cfg: generator configuration
        count: number of instances
        mode: CONSTRUCTIVE, EXHAUSTIVE or NONOBTUSE
        start: first instance index
        workers: processes (1 runs in-process)
        cap: per-instance enumeration cap for the exhaustive and nonobtuse modes
        run_dir: where to write failure artifacts and summary.json

    Returns:
        SearchResult (identical for any worker count)
    """
    if mode not in MODES:
        raise InvalidInput(f"Unknown scan mode '{mode}' (choose from {', '.join(MODES)})")
    if mode == NONOBTUSE and not SHAPE_BIASES[cfg.bias].get('nonobtuse'):
        raise InvalidInput(f"Mode '{NONOBTUSE}' needs the nonobtuse bias, got '{cfg.bias}'")
    jobs = [(cfg, k, mode, cap) for k in range(start, start + count)]
    if workers > 1:
        with Pool(workers) as pool:
            records = pool.map(scan_instance, jobs)
    else:
        records = [scan_instance(job) for job in jobs]

    result = SearchResult(config=cfg.to_dict(), mode=mode, records=records)
    for rec in records:
        result.instances += 1
        result.cases.update(rec['cases'])
        if rec['status'] == 'skipped':
            result.skipped += 1
            logger.warning(f"Instance {rec['index']} skipped: {rec['reason']}")
        elif rec['status'] == 'failure':
            result.failures.append(rec['failure'] | {'index': rec['index']})
            logger.error(f"Instance {rec['index']} failed: {rec['failure']['error']}")
        if rec.get('fallbacks'):
            result.dispatch_misses.append({'index': rec['index'], 'fallbacks': rec['fallbacks'],
                                           'replay': replay_command(cfg, rec['index'], mode, cap)})
            logger.warning(f"Instance {rec['index']}: split dispatch missed at b{rec['fallbacks']}")
    logger.info(f"Scanned {result.instances} instances ({mode}): {len(result.failures)} failures, "
                f"{result.skipped} skipped, {len(result.dispatch_misses)} dispatch misses")
    if run_dir is not None:
        write_run(result, cfg, run_dir)
    return result


def write_run(result: SearchResult, cfg: GeneratorConfig, run_dir: str) -> str:
    """
    Persist a scan under run_dir/<seed>/

    Each failure gets instance_<k>.json and an SVG of its first failing
    layout; summary.json holds the counts and a timestamp.
    """
    from patchfold.data.io import dumps
    from patchfold.views.svg_render import render_svg

    out = os.path.join(run_dir, str(cfg.seed))
    os.makedirs(out, exist_ok=True)
    for failure in result.failures:
        k = failure['index']
        with open(os.path.join(out, f"instance_{k}.json"), 'w') as fh:
            fh.write(dumps(failure) + '\n')
        P = build_prismatoid(**failure['prismatoid'])
        details = failure.get('details') or {}
        splits, top = details.get('splits'), details.get('top')
        cert = failure.get('certificate')
        if cert and cert['witnesses']:
            choice = cert['witnesses'][0]['choice']
            splits, top = choice['splits'], choice['top']
        if splits is not None:
            L = petal_layout(P, splits, top)
            label = '-'.join(str(s) for s in splits) + ('' if top is None else f"_t{top}")
            with open(os.path.join(out, f"layout_{k}_{label}.svg"), 'w') as fh:
                fh.write(render_svg(L, report=layout_overlaps(L)))
    summary = result.to_dict() | {'timestamp': datetime.now().isoformat(timespec='seconds')}
    with open(os.path.join(out, 'summary.json'), 'w') as fh:
        fh.write(dumps(summary) + '\n')
    if result.records:
        result.summary_frame().to_csv(os.path.join(out, 'instances.csv'), index=False)
    logger.info(f"Run artifacts in {out}")
    return out
