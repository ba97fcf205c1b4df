import io
import json

import numpy as np
import pytest

from patchfold.calculations.layout import Layout
from patchfold.calculations.patch_model import VERTEX_NEIGHBORHOOD, ConvexPatch, ConvexPolyhedron, neighborhood
from patchfold.calculations.prismatoid_model import Prismatoid
from patchfold.calculations.unfolder import petal_layout
from patchfold.data.io import dump, dumps, load_any, loads, read_jsonl, write_jsonl
from patchfold.errors import InvalidInput, NonFiniteInput


def test_prismatoid_text_is_stable(hexagon):
    text = dumps(hexagon)
    again = load_any(text)
    assert isinstance(again, Prismatoid)
    assert dumps(again) == text


def test_layout_text_is_stable(drum_prismatoid):
    text = dumps(petal_layout(drum_prismatoid, [0] * drum_prismatoid.m, top=11))
    again = load_any(text)
    assert isinstance(again, Layout)
    assert dumps(again) == text


def test_numbers_keep_every_bit():
    assert dumps(0.1) == '0.10000000000000001'
    assert json.loads(dumps([1 / 3]))[0] == 1 / 3
    assert dumps({'b': np.int64(3), 'a': np.float64(0.5)}, indent=0) == '{"a": 0.5,"b": 3}'
    assert dumps({3, 1, 2}, indent=0) == '[1,2,3]'


def test_non_finite_numbers_are_refused():
    with pytest.raises(NonFiniteInput):
        dumps({'z': float('nan')})
    with pytest.raises(NonFiniteInput):
        dumps([float('inf')])


def test_load_any_dispatches_on_keys(octahedron):
    assert isinstance(load_any(octahedron.to_dict()), ConvexPolyhedron)
    patch = neighborhood(octahedron, 0, VERTEX_NEIGHBORHOOD)
    loaded = load_any(dumps(patch.to_dict(kind='vertex-neighborhood')))
    assert isinstance(loaded, ConvexPatch)
    assert loaded.faces == patch.faces and loaded.base == patch.base


@pytest.mark.parametrize('text', ['{', '[1, 2]', '{"foo": 1}', '{"A": [[0, 0]], "B": [[1, 1]]}'])
def test_unusable_documents(text):
    with pytest.raises(InvalidInput):
        load_any(text)


def test_jsonl_round_trip():
    records = [{'a': 1.5}, {'b': [1, 2], 'c': None}]
    buf = io.StringIO()
    assert write_jsonl(records, buf) == 2
    buf.seek(0)
    assert list(read_jsonl(buf)) == records


def test_jsonl_reports_the_bad_line():
    with pytest.raises(InvalidInput, match='line 2'):
        list(read_jsonl(io.StringIO('{"a": 1}\n{oops\n')))


def test_dump_ends_with_newline():
    buf = io.StringIO()
    dump({'x': 1}, buf)
    assert buf.getvalue().endswith('}\n')
    assert loads(buf.getvalue()) == {'x': 1}
