from patchfold.calculations.layout import Layout, base_layout
from patchfold.calculations.overlap_verifier import layout_overlaps
from patchfold.calculations.prismatoid_model import surface_faces
from patchfold.calculations.regions import altitude_partition, diamond
from patchfold.calculations.unfolder import band_unfolding, petal_layout
from patchfold.config.style import STROKES
from patchfold.views.svg_render import render_svg, save_svg


def test_empty_layout_is_just_a_frame():
    text = render_svg(Layout(None, []))
    assert text.startswith('<svg')
    assert 'width="40.00px"' in text
    assert '<polygon' not in text


def test_witnesses_become_red_markers(drum_prismatoid):
    L = petal_layout(drum_prismatoid, [0] * drum_prismatoid.m, top=11)
    report = layout_overlaps(L)
    text = render_svg(L, report=report)
    assert text.count('<circle') == len(report.witnesses) > 0
    assert STROKES['witness'] in text
    assert render_svg(L, report=report) == text


def test_partition_draws_one_dashed_ray_per_base_edge(hexagon):
    L = base_layout(hexagon, surface_faces(hexagon))
    text = render_svg(L, partition=altitude_partition(hexagon))
    assert text.count('stroke-dasharray="6,4"') == hexagon.m
    assert text.count('<polygon') >= len(L)


def test_band_cuts_are_drawn(hexagon):
    L = band_unfolding(hexagon, 0)
    text = render_svg(L, style={'show_labels': True})
    assert f'stroke="{STROKES["cut"]}"' in text
    assert text.count('<text') == len(L)


def test_extra_regions_and_save(equilateral, tmp_path):
    L = petal_layout(equilateral, [0] * equilateral.m)
    path = save_svg(str(tmp_path / 'diamonds.svg'), L, regions=[diamond(equilateral, b) for b in range(equilateral.m)])
    with open(path) as fh:
        text = fh.read()
    assert text.count('<polygon') > len(L)
