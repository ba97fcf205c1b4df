"""
SVG Render
Layouts, altitude partitions and overlap witnesses as SVG documents.

World coordinates are y-up; the document flips y so figures read the usual
mathematical way round. Unbounded regions are clipped to the drawing frame.
"""
import logging
from typing import Dict, Iterable, List, Optional

import numpy as np
import svgwrite
from shapely.geometry import Polygon, box

from patchfold.calculations.layout import Layout
from patchfold.calculations.overlap_verifier import OverlapReport
from patchfold.calculations.regions import AltitudePartition, Region
from patchfold.config.style import DEFAULT_STYLE, FACE_FILLS, REGION_FILLS, STROKES

logger = logging.getLogger(__name__)


def _bounds(point_sets: List[np.ndarray]):
    if not point_sets:
        return 0.0, 0.0, 0.0, 0.0
    pts = np.vstack(point_sets)
    return float(pts[:, 0].min()), float(pts[:, 1].min()), float(pts[:, 0].max()), float(pts[:, 1].max())


def _region_polygon(R: Region, reach: float) -> Polygon:
    if R.bounded:
        return Polygon(R.chain)
    pts = [R.chain[0] + reach * R.head] + list(R.chain) + [R.chain[-1] + reach * R.tail]
    return Polygon(pts).buffer(0)


def _exteriors(geom) -> Iterable[np.ndarray]:
    if geom.is_empty:
        return []
    parts = getattr(geom, 'geoms', [geom])
    return [np.asarray(g.exterior.coords)[:-1] for g in parts if g.geom_type == 'Polygon']


def render_svg(L: Layout, partition: Optional[AltitudePartition] = None,
               report: Optional[OverlapReport] = None, style: Optional[Dict] = None,
               regions: Optional[List[Region]] = None) -> str:
    """
    Render a layout

    Args:
        L: layout to draw
        partition: altitude rays and regions drawn underneath
        report: overlap report whose witnesses become red markers
        style: overrides for DEFAULT_STYLE
        regions: extra regions (diamonds, V-wedges) drawn underneath

    Returns:
        SVG document text
    """
    st = dict(DEFAULT_STYLE)
    st.update(style or {})
    scale, margin, reach = st['scale'], st['margin'], st['ray_length']

    point_sets = [f.polygon for f in L.faces.values()]
    rays = []
    if partition is not None:
        rays = [(r.origin, r.at(reach)) for r in partition.rays]
        point_sets += [np.array(seg) for seg in rays]
    x0, y0, x1, y1 = _bounds(point_sets)
    frame = box(x0, y0, x1, y1)
    width = (x1 - x0) * scale + 2 * margin
    height = (y1 - y0) * scale + 2 * margin

    def px(p):
        return (round(float(p[0] - x0) * scale + margin, 4), round(float(y1 - p[1]) * scale + margin, 4))

    dwg = svgwrite.Drawing(size=(f"{width:.2f}px", f"{height:.2f}px"), profile='full')
    dwg.add(dwg.rect(insert=(0, 0), size=(width, height), fill='white', stroke='#bbbbbb', stroke_width=1))

    shown_regions = list(regions or [])
    if partition is not None:
        shown_regions = list(partition.regions) + shown_regions
    for R in shown_regions:
        clipped = _region_polygon(R, reach).intersection(frame)
        for ring in _exteriors(clipped):
            dwg.add(dwg.polygon([px(p) for p in ring], fill=REGION_FILLS.get(R.kind, '#eeeeee'),
                                fill_opacity=st['region_opacity'], stroke='none'))

    for origin, end in rays:
        dwg.add(dwg.line(px(origin), px(end), stroke=STROKES['ray'], stroke_width=st['ray_width'],
                         stroke_dasharray=st['ray_dash']))

    cuts = {frozenset(c) for c in L.cuts()}
    for k in sorted(L.faces):
        f = L[k]
        dwg.add(dwg.polygon([px(p) for p in f.polygon], fill=FACE_FILLS.get(f.kind, FACE_FILLS['face']),
                            fill_opacity=st['face_opacity'], stroke=STROKES['hinge'],
                            stroke_width=st['hinge_width']))
        n = len(f.vertices)
        for i in range(n):
            if frozenset((f.vertices[i], f.vertices[(i + 1) % n])) in cuts:
                dwg.add(dwg.line(px(f.polygon[i]), px(f.polygon[(i + 1) % n]), stroke=STROKES['cut'],
                                 stroke_width=st['cut_width']))
        if st['show_labels']:
            dwg.add(dwg.text(str(k), insert=px(f.centroid), font_size=st['label_size'],
                             text_anchor='middle', font_family='Arial'))

    if report is not None:
        for w in report.witnesses:
            dwg.add(dwg.circle(center=px(w.point), r=st['witness_radius'], fill=STROKES['witness'],
                               stroke='none'))
    return dwg.tostring()


def save_svg(path: str, L: Layout, **kwargs) -> str:
    text = render_svg(L, **kwargs)
    with open(path, 'w') as fh:
        fh.write(text)
    logger.info(f"Wrote {path}")
    return path
