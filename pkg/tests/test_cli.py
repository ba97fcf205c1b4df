import io
import json
import os
import shlex

import pytest

from patchfold import cli
from patchfold.calculations import search_harness
from patchfold.calculations.search_harness import (CONSTRUCTIVE, EXHAUSTIVE, NONOBTUSE, GeneratorConfig,
                                                   replay_command)
from patchfold.config.generator import PETAL_ENUMERATION_CAP
from patchfold.data.io import load_any
from patchfold.errors import ContainmentFailure


def run(argv, stdin_text=''):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, stdin=io.StringIO(stdin_text), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope='module')
def hexagon_json():
    code, text, _ = run(['fixture', 'banded-hexagon'])
    assert code == cli.EXIT_OK
    return text


def lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_fixture_emits_a_prismatoid(hexagon_json):
    data = json.loads(hexagon_json)
    assert len(data['A']) == 6 and len(data['B']) == 6


def test_band_unfoldings_of_the_hexagon_all_overlap(hexagon_json, tmp_path):
    svg = str(tmp_path / 'band.svg')
    code, layouts, _ = run(['unfold', 'band', '--all', '--svg', svg], hexagon_json)
    assert code == cli.EXIT_OK
    assert len(lines(layouts)) == 12
    assert sorted(os.listdir(tmp_path)) == sorted(f'band_{c}.svg' for c in range(12))
    code, reports, _ = run(['verify'], layouts)
    assert code == cli.EXIT_OVERLAP
    assert all(r['overlapping'] for r in lines(reports))


def test_topless_petal_verifies_clean(hexagon_json):
    code, layout, _ = run(['unfold', 'petal', '--topless'], hexagon_json)
    assert code == cli.EXIT_OK
    assert json.loads(layout)['meta']['method'] == 'petal-topless'
    code, report, _ = run(['verify'], layout)
    assert code == cli.EXIT_OK
    assert json.loads(report)['overlapping'] is False


def test_counterexample_enumeration_all_overlap():
    _, patch, _ = run(['fixture', 'counterexample-nv'])
    assert json.loads(patch)['kind'] == 'vertex-neighborhood'
    code, layouts, _ = run(['unfold', 'petal', '--enumerate'], patch)
    assert code == cli.EXIT_OK
    code, reports, _ = run(['verify'], layouts)
    assert code == cli.EXIT_OVERLAP
    assert len(lines(reports)) == 18


def test_explicit_splits_and_top():
    _, drum, _ = run(['fixture', 'drum'])
    code, layout, _ = run(['unfold', 'petal', '--splits', '0', '0', '0', '0', '0', '0', '0', '--top', '11'], drum)
    assert code == cli.EXIT_OK
    assert json.loads(layout)['meta']['top'] == 11
    assert run(['verify'], layout)[0] == cli.EXIT_OVERLAP
    code, layout, _ = run(['unfold', 'petal', '--splits', '1', '0', '0', '0', '0', '0', '0', '--top', '11'], drum)
    assert run(['verify'], layout)[0] == cli.EXIT_OK


def test_first_cut_tree_of_the_hexagon_overlaps(hexagon_json):
    code, layout, _ = run(['unfold', 'tree'], hexagon_json)
    assert code == cli.EXIT_OK
    assert json.loads(layout)['meta']['method'] == 'spanning-tree'
    assert run(['verify'], layout)[0] == cli.EXIT_OVERLAP


def test_partition_writes_svg_and_json(hexagon_json, tmp_path):
    svg = tmp_path / 'partition.svg'
    code, text, _ = run(['partition', '--svg', str(svg)], hexagon_json)
    assert code == cli.EXIT_OK
    assert len(json.loads(text)['rays']) == 6
    assert svg.read_text().startswith('<svg')


def test_sweep_at_the_instance_height(hexagon_json):
    P = load_any(hexagon_json)
    code, text, _ = run(['sweep', '--z-grid', repr(P.z / P.diameter)], hexagon_json)
    assert code == cli.EXIT_OK
    report = json.loads(text)
    assert report['rays']['ok'] and report['hull']['same_structure']
    assert report['angles']['ok']
    assert len(report['angles']['faces']) == 6


def test_sweep_reports_top_angles_over_the_default_grid(hexagon_json):
    _, text, _ = run(['sweep'], hexagon_json)
    angles = json.loads(text)['angles']
    assert angles['ok']
    assert all(len(face['a1']['angles']) == len(face['z']) for face in angles['faces'].values())


def test_search_without_artifacts():
    code, text, _ = run(['search', '--count', '2', '--n-a', '3', '5', '--n-b', '3', '5', '--no-artifacts'])
    report = json.loads(text)
    assert report['instances'] == 2 and report['failures'] == []
    assert code == (cli.EXIT_OVERLAP if report['dispatch_misses'] else cli.EXIT_OK)


def test_search_exits_1_on_dispatch_misses(monkeypatch):
    topless = search_harness.petal_unfold_topless

    def missed(P):
        L = topless(P)
        L.meta['fallbacks'] = [1]
        return L

    monkeypatch.setattr(search_harness, 'petal_unfold_topless', missed)
    code, text, _ = run(['search', '--seed', '11', '--count', '1', '--n-a', '3', '7', '--n-b', '3', '7',
                         '--no-artifacts'])
    assert code == cli.EXIT_OVERLAP
    assert json.loads(text)['dispatch_misses'][0]['fallbacks'] == [1]


@pytest.mark.parametrize('cfg,mode,cap', [
    (GeneratorConfig(seed=9, n_A=(3, 5), n_B=(4, 6), bias='thin'), CONSTRUCTIVE, PETAL_ENUMERATION_CAP),
    (GeneratorConfig(seed=4, bias='near-flat', z_rel=(0.03125, 0.3)), EXHAUSTIVE, 500),
    (GeneratorConfig(seed=5, bias='nonobtuse'), NONOBTUSE, 64),
])
def test_replay_command_parses_back_to_the_same_search(cfg, mode, cap):
    args = cli.build_parser().parse_args(shlex.split(replay_command(cfg, 17, mode, cap))[3:])
    assert args.command == 'search'
    assert cli.search_config(args) == cfg
    assert (args.start, args.count, args.mode, args.cap) == (17, 1, mode, cap)


@pytest.mark.parametrize('argv,stdin_text', [
    (['unfold', 'petal'], '{not json'),
    (['unfold', 'petal'], ''),
    (['verify'], '{"A": [[0, 0], [1, 0], [0, 1]], "B": [[-1, -1], [3, -1], [-1, 3]], "z": 1}'),
    (['unfold', 'band'], '{"A": [[0, 0], [1, 0], [0, 1]]}'),
])
def test_malformed_input_exits_2(argv, stdin_text):
    assert run(argv, stdin_text)[0] == cli.EXIT_INVALID


def test_invariant_violation_exits_3_with_details(hexagon_json, monkeypatch):
    def broken(P):
        raise ContainmentFailure("fan left its region", details={'b': 0})

    monkeypatch.setattr(cli, 'petal_unfold_topless', broken)
    code, _, err = run(['unfold', 'petal', '--topless'], hexagon_json)
    assert code == cli.EXIT_INVARIANT
    dumped = json.loads(err[err.index('{'):])
    assert dumped['error'] == 'ContainmentFailure'
    assert dumped['details'] == {'b': 0}
