"""
JSON I/O
Emit and load prismatoids, polyhedra, patches, layouts and reports.

Numbers are written with 17 significant digits and keys in sorted order, so
emit -> parse -> emit is byte-identical and every double survives the trip.
"""
import io
import json
import math
import logging
from typing import IO, Any, Dict, Iterable, Iterator, Union

import numpy as np

from patchfold.calculations.layout import Layout
from patchfold.calculations.patch_model import ConvexPatch, ConvexPolyhedron, patch_from_faces, polyhedron_from_faces
from patchfold.calculations.prismatoid_model import Prismatoid, build_prismatoid
from patchfold.errors import InvalidInput, NonFiniteInput

logger = logging.getLogger(__name__)


# =============================================================================
# EMIT
# =============================================================================

def _number(x: float) -> str:
    if not math.isfinite(x):
        raise NonFiniteInput(f"Cannot serialize non-finite number {x}")
    return format(x, '.17g')


def _plain(obj: Any) -> Any:
    if hasattr(obj, 'to_dict'):
        return _plain(obj.to_dict())
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(v) for v in items]
    return obj


def _emit(obj: Any, out: io.StringIO, indent: int, level: int) -> None:
    pad = ' ' * (indent * (level + 1)) if indent else ''
    close = ' ' * (indent * level) if indent else ''
    nl = '\n' if indent else ''
    if obj is None or isinstance(obj, bool):
        out.write(json.dumps(obj))
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, float):
        out.write(_number(obj))
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.write('{}')
            return
        out.write('{' + nl)
        for i, key in enumerate(sorted(obj)):
            out.write(pad + json.dumps(key) + ': ')
            _emit(obj[key], out, indent, level + 1)
            out.write((',' if i < len(obj) - 1 else '') + nl)
        out.write(close + '}')
    elif isinstance(obj, list):
        if not obj:
            out.write('[]')
            return
        # numeric rows (points) stay on one line
        flat = all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
        if flat or not indent:
            out.write('[')
            for i, v in enumerate(obj):
                _emit(v, out, 0, 0)
                if i < len(obj) - 1:
                    out.write(', ' if indent else ',')
            out.write(']')
            return
        out.write('[' + nl)
        for i, v in enumerate(obj):
            out.write(pad)
            _emit(v, out, indent, level + 1)
            out.write((',' if i < len(obj) - 1 else '') + nl)
        out.write(close + ']')
    else:
        raise InvalidInput(f"Cannot serialize object of type {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """Deterministic JSON text (sorted keys, 17 significant digits)."""
    buf = io.StringIO()
    _emit(_plain(obj), buf, indent, 0)
    return buf.getvalue()


def dump(obj: Any, fp: IO[str], indent: int = 2) -> None:
    fp.write(dumps(obj, indent) + '\n')


def write_jsonl(records: Iterable[Any], fp: IO[str]) -> int:
    count = 0
    for rec in records:
        fp.write(dumps(rec, indent=0) + '\n')
        count += 1
    return count


# =============================================================================
# LOAD
# =============================================================================

def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"Malformed JSON: {exc}")


def read_jsonl(fp: IO[str]) -> Iterator[Any]:
    for lineno, line in enumerate(fp, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"Malformed JSON on line {lineno}: {exc}")


def prismatoid_from_dict(data: Dict) -> Prismatoid:
    try:
        return build_prismatoid(data['A'], data['B'], data['z'])
    except KeyError as exc:
        raise InvalidInput(f"Prismatoid JSON lacks key {exc}")


def polyhedron_from_dict(data: Dict) -> ConvexPolyhedron:
    try:
        return polyhedron_from_faces(data['vertices'], data['faces'], names=data.get('names'),
                                     support_tol=data.get('support_tol'))
    except KeyError as exc:
        raise InvalidInput(f"Polyhedron JSON lacks key {exc}")


def patch_from_dict(data: Dict) -> ConvexPatch:
    poly = polyhedron_from_dict(data['polyhedron'])
    faces = data.get('faces') or range(len(poly.faces))
    return patch_from_faces(poly, faces, int(data['base_face']))


def load_any(source: Union[str, Dict]) -> Union[Prismatoid, ConvexPolyhedron, ConvexPatch, Layout]:
    """
    Build the object a JSON document describes, by its keys

        A, B, z                     Prismatoid
        polyhedron, base_face       ConvexPatch
        vertices, faces             ConvexPolyhedron
        faces (with polygons)       Layout
    """
    data = loads(source) if isinstance(source, str) else source
    if not isinstance(data, dict):
        raise InvalidInput("Expected a JSON object")
    if {'A', 'B', 'z'} <= data.keys():
        return prismatoid_from_dict(data)
    if {'polyhedron', 'base_face'} <= data.keys():
        return patch_from_dict(data)
    if {'vertices', 'faces'} <= data.keys():
        return polyhedron_from_dict(data)
    if 'faces' in data and all(isinstance(f, dict) and 'polygon' in f for f in data['faces']):
        return Layout.from_dict(data)
    raise InvalidInput(f"Unrecognized document with keys {sorted(data)}")
