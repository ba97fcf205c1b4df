"""
Unfolder
Band, petal and spanning-tree unfoldings of prismatoids and convex patches.

Petal unfoldings keep every base edge uncut: each B-triangle swings down
about its base edge and every A-fan is split between its two B-neighbours.
A band unfolding cuts one lateral edge and lays the lateral faces out as a
strip with the base and top hanging off either side.
"""
import math
import logging
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from patchfold.calculations.fans import a_fan, decide_split, fan_contained
from patchfold.calculations.geom_core import Tolerance
from patchfold.calculations.layout import Layout, base_layout, place_fan, place_top, shared_edge
from patchfold.calculations.overlap_verifier import layout_overlaps
from patchfold.calculations.patch_model import ConvexPatch, edge_key, face_edges
from patchfold.calculations.prismatoid_model import Prismatoid, at_height, obtuse_faces, surface_faces
from patchfold.calculations.regions import altitude_partition, diamond, polygon_in_region, v_wedge
from patchfold.config.generator import PETAL_ENUMERATION_CAP, SPANNING_TREE_CAP
from patchfold.errors import (CombinatorialExplosion, ContainmentFailure, InvalidInput, ObtuseFace,
                              OverlapDetected)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PetalChoice:
    """Split per base vertex (see fans module for the convention) and the A-face carrying the top."""
    splits: Tuple[int, ...]
    top: Optional[int] = None

    def to_dict(self) -> Dict:
        return {'splits': list(self.splits), 'top': self.top}

    @property
    def label(self) -> str:
        core = '-'.join(str(s) for s in self.splits)
        return core if self.top is None else f"{core}_t{self.top}"


# =============================================================================
# PRISMATOID PETALS
# =============================================================================

def petal_layout(P: Prismatoid, splits: Sequence[int], top: Optional[int] = None) -> Layout:
    """
    Petal layout for an explicit choice

    Args:
        P: prismatoid
        splits: one split index per base vertex
        top: A-triangle the top is attached to, None for the topless patch

    Returns:
        Layout with meta {'method', 'splits', 'top'}
    """
    if len(splits) != P.m:
        raise InvalidInput(f"Expected {P.m} split indices, got {len(splits)}")
    L = base_layout(P, surface_faces(P))
    for b, split in enumerate(splits):
        place_fan(L, P, b, int(split))
    if top is not None:
        place_top(L, P, top)
    L.meta.update({'method': 'petal', 'splits': [int(s) for s in splits], 'top': top})
    return L


def petal_unfold_topless(P: Prismatoid) -> Layout:
    """
    Constructive petal unfolding of the topless prismatoid

    Every fan is grouped on the flat prismatoid P(0) by the fan case table,
    and the same grouping is laid out at the real height. Each fan must land
    inside its altitude region; if one does not, the other splits of that
    fan are tried before giving up. Those base vertices are listed in
    meta['fallbacks'] next to the per-fan cases.

    Raises:
        RayCrossing: altitude rays cross at the target height
        NoSafeFlip: neither tangent flip is safe on P(0)
        ContainmentFailure: no split keeps some fan inside its region
        OverlapDetected: the final layout overlaps
    """
    flat = at_height(P, 0.0)
    flat_partition = altitude_partition(flat, check=False)
    partition = altitude_partition(P)

    splits: List[int] = []
    cases: List[str] = []
    fallbacks: List[int] = []
    for b in range(P.m):
        split, case = decide_split(flat, a_fan(flat, b), flat_partition)
        splits.append(split)
        cases.append(case)

    L = petal_layout(P, splits)
    eps = P.tolerance.eps_len
    for b in range(P.m):
        region = partition.regions[b]
        if all(polygon_in_region(L[k].polygon, region, eps) for k in P.structure.fans[b]):
            continue
        logger.warning(f"Fan at b{b} left its altitude region with split {splits[b]}; searching other splits")
        size = len(P.structure.fans[b])
        found = next((s for s in range(size + 1) if fan_contained(P, b, s, partition)), None)
        if found is None:
            raise ContainmentFailure(f"No split keeps the fan at b{b} inside its altitude region",
                                     details={'b': b, 'splits': splits, 'prismatoid': P.to_dict()})
        splits[b] = found
        cases[b] = 'fallback_search'
        fallbacks.append(b)
        L = petal_layout(P, splits)

    report = layout_overlaps(L)
    if report.overlapping:
        raise OverlapDetected(f"Topless petal layout overlaps at {report.pairs}",
                              details={'splits': splits, 'report': report.to_dict(), 'prismatoid': P.to_dict()})
    L.meta.update({'method': 'petal-topless', 'cases': cases, 'fallbacks': fallbacks})
    return L


def petal_unfold_nonobtuse(P: Prismatoid, include_top: bool = False,
                           choice: Optional[PetalChoice] = None) -> Layout:
    """
    Petal unfolding of a prismatoid with nonobtuse lateral faces

    Any choice works here: every fan stays in its diamond, and a nonobtuse
    triangular top stays in the V-wedge of the base vertex whose fan carries it.

    Args:
        P: prismatoid
        include_top: attach the top (P must be triangular with a nonobtuse top)
        choice: splits and top attachment; defaults to all-ccw with the top on
            the first A-triangle

    Raises:
        ObtuseFace: a lateral face (or the top) is obtuse
    """
    bad = obtuse_faces(P, include_top=include_top)
    if bad:
        raise ObtuseFace(f"Faces {bad} are obtuse", details={'faces': bad})
    a_faces = [k for k, f in enumerate(P.faces) if f.kind == 'A']
    if choice is None:
        choice = PetalChoice(tuple([0] * P.m), a_faces[0] if include_top and a_faces else None)
    top = choice.top if include_top else None
    if include_top and top is None:
        raise InvalidInput("include_top needs an A-triangle to attach the top to")
    L = petal_layout(P, choice.splits, top)

    eps = P.tolerance.eps_len
    for b in range(P.m):
        D = diamond(P, b)
        for k in P.structure.fans[b]:
            if not polygon_in_region(L[k].polygon, D, eps):
                raise ContainmentFailure(f"A-triangle {k} leaves the diamond at b{b}",
                                         details={'b': b, 'face': k, 'prismatoid': P.to_dict()})
    if top is not None:
        owner = P.faces[top].opposite
        if not polygon_in_region(L[len(P.faces) + 1].polygon, v_wedge(P, owner), eps):
            raise ContainmentFailure(f"Top leaves the V-wedge at b{owner}",
                                     details={'b': owner, 'top': top, 'prismatoid': P.to_dict()})
    report = layout_overlaps(L)
    if report.overlapping:
        raise OverlapDetected(f"Nonobtuse petal layout overlaps at {report.pairs}",
                              details={'choice': choice.to_dict(), 'report': report.to_dict()})
    L.meta['method'] = 'petal-nonobtuse'
    return L


# =============================================================================
# BAND
# =============================================================================

def band_order(P: Prismatoid, cut: int) -> List[int]:
    """Lateral faces from face `cut` around to face `cut - 1`; the cut edge lies between those two."""
    K = len(P.faces)
    if not 0 <= cut < K:
        raise InvalidInput(f"Cut {cut} out of range 0..{K - 1}")
    return [(cut + t) % K for t in range(K)]


def band_unfolding(P: Prismatoid, cut: int, include_top: bool = True,
                   base_face: Optional[int] = None, top_face: Optional[int] = None) -> Layout:
    """
    Band unfolding cutting the lateral edge between faces cut-1 and cut

    The base hangs off the first B-triangle after the cut and the top off
    the last A-triangle before it, unless overridden.

    Args:
        P: prismatoid
        cut: lateral edge id (0..K-1)
        include_top: attach the top; False gives the topless band
        base_face: B-triangle carrying the base
        top_face: A-triangle carrying the top
    """
    order = band_order(P, cut)
    K = len(P.faces)
    L = Layout(P.vertices, surface_faces(P), P.tolerance)
    L.place_root(K, polygon=P.B.copy(), vertices=P.base_vertices, kind='base')

    if base_face is None:
        r = next(t for t, k in enumerate(order) if P.faces[k].kind == 'B')
    else:
        if P.faces[base_face].kind != 'B':
            raise InvalidInput(f"Base can only hang off a B-triangle, face {base_face} is not one")
        r = order.index(base_face)
    root = P.faces[order[r]]
    L.place_child(K, order[r], (root.vertices[0], root.vertices[1]), kind='B')
    for t in range(r + 1, K):
        L.place_child(order[t - 1], order[t], shared_edge(P, order[t - 1], order[t]), kind=P.faces[order[t]].kind)
    for t in range(r - 1, -1, -1):
        L.place_child(order[t + 1], order[t], shared_edge(P, order[t + 1], order[t]), kind=P.faces[order[t]].kind)

    if include_top:
        if top_face is None:
            top_face = next(k for k in reversed(order) if P.faces[k].kind == 'A')
        place_top(L, P, top_face)
    L.meta.update({'method': 'band', 'cut': cut, 'base_face': order[r], 'top_face': top_face if include_top else None})
    return L


def band_unfoldings(P: Prismatoid, include_top: bool = True) -> Iterator[Tuple[int, Layout]]:
    for cut in range(len(P.faces)):
        yield cut, band_unfolding(P, cut, include_top=include_top)


# =============================================================================
# PATCH PETALS
# =============================================================================

@dataclass(frozen=True)
class PatchFan:
    vertex: int
    left: int                        # face across base edge (prev, vertex)
    right: int                       # face across base edge (vertex, next)
    faces: Tuple[int, ...]           # faces strictly between left and right around vertex


def petal_structure(patch: ConvexPatch) -> List[PatchFan]:
    """
    Fans of a patch around its base face

    Raises:
        InvalidInput: some non-base face touches the base at no vertex, or a
            base edge or base vertex is on the patch boundary
    """
    poly = patch.parent
    base = poly.faces[patch.base]
    table = patch.edge_faces()

    def across(u, v, exclude):
        others = [k for k in table.get(edge_key(u, v), []) if k not in exclude]
        if not others:
            raise InvalidInput(f"Edge ({u}, {v}) of the petal walk is on the patch boundary")
        return others[0]

    fans = []
    n = len(base)
    for i, v in enumerate(base):
        prev, nxt = base[i - 1], base[(i + 1) % n]
        left = across(prev, v, {patch.base})
        right = across(v, nxt, {patch.base})
        walk: List[int] = []
        cur, came_from = left, prev
        while True:
            f = poly.faces[cur]
            j = f.index(v)
            a, b = f[(j + 1) % len(f)], f[j - 1]
            other = b if a == came_from else a
            step = across(v, other, {cur, patch.base})
            if step == right:
                break
            if step in walk or step == left or len(walk) > len(patch.faces):
                raise InvalidInput(f"Faces around base vertex {v} do not close up")
            walk.append(step)
            came_from, cur = other, step
        fans.append(PatchFan(vertex=v, left=left, right=right, faces=tuple(walk)))

    covered = {patch.base} | {f.left for f in fans} | {f.right for f in fans} | {k for f in fans for k in f.faces}
    stray = sorted(set(patch.faces) - covered)
    if stray:
        raise InvalidInput(f"Faces {stray} do not touch the base; petal structure does not apply")
    return fans


def _patch_tolerance(patch: ConvexPatch) -> Tolerance:
    return Tolerance.for_diameter(patch.parent.diameter)


def petal_unfold_patch(patch: ConvexPatch, splits: Sequence[int],
                       fans: Optional[List[PatchFan]] = None) -> Layout:
    """
    Petal layout of a convex patch around its base face

    Args:
        patch: patch whose non-base faces all touch the base
        splits: per base vertex, how many fan faces follow the left neighbour
        fans: precomputed petal_structure(patch)
    """
    fans = fans if fans is not None else petal_structure(patch)
    if len(splits) != len(fans):
        raise InvalidInput(f"Expected {len(fans)} split indices, got {len(splits)}")
    poly = patch.parent
    L = Layout(poly.vertices, poly.faces, _patch_tolerance(patch))
    L.place_root(patch.base, kind='base')
    base = poly.faces[patch.base]
    for i, u in enumerate(base):
        w = base[(i + 1) % len(base)]
        for k in patch.edge_faces().get(edge_key(u, w), []):
            if k != patch.base:
                L.place_child(patch.base, k, (u, w))

    def hinge(a: int, b: int, v: int) -> Tuple[int, int]:
        shared = [x for x in poly.faces[a] if x in poly.faces[b] and x != v]
        return v, shared[0]

    for fan, split in zip(fans, splits):
        if not 0 <= split <= len(fan.faces):
            raise InvalidInput(f"Split {split} out of range 0..{len(fan.faces)} at vertex {fan.vertex}")
        prev = fan.left
        for k in fan.faces[:split]:
            L.place_child(prev, k, hinge(prev, k, fan.vertex))
            prev = k
        prev = fan.right
        for k in reversed(fan.faces[split:]):
            L.place_child(prev, k, hinge(prev, k, fan.vertex))
            prev = k
    L.meta.update({'method': 'petal-patch', 'splits': [int(s) for s in splits], 'base': patch.base})
    return L


# =============================================================================
# ENUMERATION
# =============================================================================

def _check_cap(total: int, cap: int, what: str) -> None:
    if total > cap:
        raise CombinatorialExplosion(f"{total} {what} exceed the cap of {cap}", details={'total': total, 'cap': cap})


def petal_choice_count(target: Union[Prismatoid, ConvexPatch], include_top: bool = False) -> int:
    if isinstance(target, ConvexPatch):
        sizes = [len(f.faces) + 1 for f in petal_structure(target)]
        tops = 1
    else:
        sizes = [len(fan) + 1 for fan in target.structure.fans]
        tops = sum(1 for f in target.faces if f.kind == 'A') if include_top else 1
    return math.prod(sizes) * tops


def enumerate_petal_unfoldings(target: Union[Prismatoid, ConvexPatch], include_top: bool = False,
                               cap: int = PETAL_ENUMERATION_CAP) -> Iterator[Tuple[PetalChoice, Layout]]:
    """
    Every petal unfolding of a prismatoid or a convex patch

    Splits vary fastest at the last base vertex; with include_top the top
    attachment varies slowest. A patch has no top, so include_top is
    ignored for it.

    Raises:
        CombinatorialExplosion: more than `cap` choices
    """
    _check_cap(petal_choice_count(target, include_top), cap, 'petal choices')
    if isinstance(target, ConvexPatch):
        fans = petal_structure(target)
        for splits in itertools.product(*(range(len(f.faces) + 1) for f in fans)):
            yield PetalChoice(tuple(splits)), petal_unfold_patch(target, splits, fans)
        return
    tops: List[Optional[int]] = [None]
    if include_top:
        tops = [k for k, f in enumerate(target.faces) if f.kind == 'A']
    for top in tops:
        for splits in itertools.product(*(range(len(fan) + 1) for fan in target.structure.fans)):
            yield PetalChoice(tuple(splits), top), petal_layout(target, splits, top)


# =============================================================================
# SPANNING TREES
# =============================================================================

def spanning_tree_unfoldings(patch: ConvexPatch, cap: int = SPANNING_TREE_CAP) -> Iterator[Layout]:
    """
    Single-piece unfoldings from spanning cut trees

    A cut tree uses interior edges of the patch, spans every interior vertex
    and touches the boundary at exactly one vertex. The faces are then
    developed breadth-first from the base across the uncut interior edges.
    With no interior vertex the patch is unfolded with every interior edge
    as a hinge.

    Raises:
        CombinatorialExplosion: more than `cap` trees
    """
    interior = set(patch.interior_vertices)
    edges = patch.interior_edges()
    if not interior:
        yield _develop_with_cuts(patch, set())
        return
    count = 0
    for v in patch.boundary:
        allowed = interior | {v}
        G = nx.Graph()
        G.add_nodes_from(sorted(allowed))
        G.add_edges_from(e for e in edges if e[0] in allowed and e[1] in allowed)
        if not nx.is_connected(G):
            continue
        for tree in nx.SpanningTreeIterator(G):
            count += 1
            _check_cap(count, cap, 'spanning trees')
            cut = {edge_key(a, b) for a, b in tree.edges()}
            L = _develop_with_cuts(patch, cut)
            L.meta['boundary_vertex'] = v
            yield L


def _develop_with_cuts(patch: ConvexPatch, cut) -> Layout:
    poly = patch.parent
    L = Layout(poly.vertices, poly.faces, _patch_tolerance(patch))
    L.place_root(patch.base, kind='base')
    table = patch.edge_faces()
    queue = deque([patch.base])
    while queue:
        k = queue.popleft()
        for u, w in face_edges(poly.faces[k]):
            key = edge_key(u, w)
            if key in cut:
                continue
            for other in table[key]:
                if other != k and other not in L:
                    L.place_child(k, other, (u, w))
                    queue.append(other)
    if len(L) != len(patch.faces):
        raise InvalidInput(f"Cut set disconnects the patch ({len(L)} of {len(patch.faces)} faces reached)")
    L.meta.update({'method': 'spanning-tree', 'cut': sorted(tuple(sorted(e)) for e in cut)})
    return L
