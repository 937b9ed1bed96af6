"""Reading and writing the JSON input documents.

Every document is one JSON object with a ``kind`` field:

``points``
    ``points``: list of coordinate vectors
``matrix``
    ``matrix``: square distance matrix, optional ``ids``
``curve``
    ``vertices``: ordered list of coordinate vectors
``measured``
    ``values``: list of reals, optional ``ids``
``plhomeo``
    ``breakpoints``: list of ``[x, y]`` pairs
``correspondence``
    ``nx``, ``ny``, ``pairs``: written by ``--emit``

``name`` is optional everywhere.  Numbers may be JSON numbers or strings
holding a decimal or an exact fraction ``"p/q"``; decimals are read
exactly, which matters for ``plhomeo`` breakpoints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import Correspondence, FiniteMetricSpace
from .errors import CorrdistError, ValidationError
from .frechet import PolygonalCurve
from .hausdorff import AmbientSubset
from .homeo import PLHomeo
from .natural_pd import MeasuredSpace

KINDS = ("points", "matrix", "curve", "measured", "plhomeo", "correspondence")


class DocumentError(ValidationError):
    def __init__(self, source: str, field: str, message: str):
        super().__init__(f"{source}: field '{field}': {message}")
        self.source = source
        self.field = field


@dataclass
class Document:
    kind: str
    name: str | None
    value: Any
    source: str = "<memory>"


def _number(raw, source: str, field: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, Fraction, str)):
        raise DocumentError(source, field, f"expected a number, got {raw!r}")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(source, field, f"cannot read {raw!r} as a number") from exc


def _vector(raw, source, field) -> list[Fraction]:
    if not isinstance(raw, list):
        raise DocumentError(source, field, "expected a list of numbers")
    return [_number(v, source, field) for v in raw]


def _matrix(raw, source, field) -> list[list[Fraction]]:
    if not isinstance(raw, list) or not raw:
        raise DocumentError(source, field, "expected a nonempty list of lists")
    rows = [_vector(row, source, field) for row in raw]
    if len({len(row) for row in rows}) != 1:
        raise DocumentError(source, field, "rows have different lengths")
    return rows


def _ids(data, n: int, source: str):
    ids = data.get("ids")
    if ids is None:
        return None
    if not isinstance(ids, list) or len(ids) != n:
        raise DocumentError(source, "ids", f"expected a list of {n} labels")
    if any(isinstance(i, (list, dict)) for i in ids):
        raise DocumentError(source, "ids", "labels must be strings or numbers")
    return ids


def _floats(rows):
    return [[float(v) for v in row] for row in rows]


def parse_document(data: Any, source: str = "<memory>") -> Document:
    if not isinstance(data, dict):
        raise DocumentError(source, "kind", "document must be a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise DocumentError(source, "kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise DocumentError(source, "name", "must be a string")

    def need(field):
        if field not in data:
            raise DocumentError(source, field, "missing")
        return data[field]

    current = kind
    try:
        if kind == "points":
            current = "points"
            value = AmbientSubset(_floats(_matrix(need("points"), source, "points")))
        elif kind == "matrix":
            current = "matrix"
            dist = _floats(_matrix(need("matrix"), source, "matrix"))
            value = FiniteMetricSpace(dist, _ids(data, len(dist), source))
        elif kind == "curve":
            current = "vertices"
            value = PolygonalCurve(_floats(_matrix(need("vertices"), source, "vertices")))
        elif kind == "measured":
            current = "values"
            values = [float(v) for v in _vector(need("values"), source, "values")]
            value = MeasuredSpace(values, _ids(data, len(values), source))
        elif kind == "plhomeo":
            current = "breakpoints"
            pts = _matrix(need("breakpoints"), source, "breakpoints")
            if len(pts[0]) != 2:
                raise DocumentError(source, "breakpoints", "each breakpoint is an [x, y] pair")
            value = PLHomeo(tuple((x, y) for x, y in pts))
        else:
            current = "pairs"
            pairs = need("pairs")
            if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
                raise DocumentError(source, "pairs", "expected a list of [i, j] pairs")
            value = Correspondence(tuple(tuple(p) for p in pairs), need("nx"), need("ny"))
    except DocumentError:
        raise
    except (CorrdistError, TypeError, ValueError) as exc:
        raise DocumentError(source, current, str(exc)) from exc
    return Document(kind, name, value, source)


def load_document(path) -> Document:
    source = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(source, "kind", f"cannot read file: {exc.strerror}") from exc
    try:
        data = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise DocumentError(source, "kind", f"invalid JSON: {exc}") from exc
    return parse_document(data, source)


def exact(value: Fraction) -> int | str:
    """Render an exact number as an int or a ``"p/q"`` string."""
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def dump_document(value, name: str | None = None) -> dict:
    """The JSON object for ``value``; inverse of :func:`parse_document`."""
    doc: dict[str, Any] = {}
    if isinstance(value, PLHomeo):
        doc["kind"] = "plhomeo"
        body = {"breakpoints": [[exact(x), exact(y)] for x, y in value.breakpoints]}
    elif isinstance(value, Correspondence):
        doc["kind"] = "correspondence"
        body = {"nx": value.nx, "ny": value.ny, "pairs": [list(p) for p in value.pairs]}
    elif isinstance(value, FiniteMetricSpace):
        doc["kind"] = "matrix"
        body = {"matrix": value.dist.tolist(), "ids": list(value.point_ids)}
    elif isinstance(value, MeasuredSpace):
        doc["kind"] = "measured"
        body = {"ids": list(value.point_ids), "values": value.values.tolist()}
    elif isinstance(value, PolygonalCurve):
        doc["kind"] = "curve"
        body = {"vertices": value.vertices.tolist()}
    elif isinstance(value, AmbientSubset) and value.points is not None:
        doc["kind"] = "points"
        body = {"points": value.points.tolist()}
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
    if name is not None:
        doc["name"] = name
    doc.update(body)
    return doc


def write_document(path, value, name: str | None = None) -> None:
    Path(path).write_text(json.dumps(dump_document(value, name), indent=2) + "\n", encoding="utf-8")
