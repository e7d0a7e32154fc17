"""JSON series files.

::

    {
      "semigroup": {"type": "ordinary", "N": 32}
                 | {"type": "generated", "generators": ["1/1", "3/2"], "horizon": "3/1"},
      "algebra": {"scalar": "complex|bicomplex|quaternion", "matrixDim": d},   # matrixDim optional
      "weight": {"kind": "polynomial", "alpha": 1.5},                          # optional
      "coefficients": [{"index": 6 | "5/2", "value": <encoding>}, ...]
    }

Scalar encodings: complex ``[re, im]``; bicomplex ``{"idem": [[re, im], [re, im]]}``
or ``{"cart": [[re, im], [re, im]]}``; quaternion ``[x0, x1, x2, x3]``.  A
matrix is a list of rows of scalar encodings.  Unknown fields and duplicate
indices are rejected.  Floats are written with ``repr`` (shortest round-trip),
so a written file re-parses bit-exactly.
"""

from __future__ import annotations

import json
from numbers import Real
from pathlib import Path

import numpy as np

from .algebra import Algebra, ScalarKind
from .errors import ParseError
from .semigroup import GeneratedSemigroup, IndexSet, OrdinaryIndexSet, format_rational, parse_rational
from .series import DirichletSeries
from .weights import Weight


def _fields(doc, required, optional=(), what="object"):
    if not isinstance(doc, dict):
        raise ParseError(f"{what} must be a JSON object")
    unknown = set(doc) - set(required) - set(optional)
    if unknown:
        raise ParseError(f"unknown {what} fields: {sorted(unknown)}")
    missing = set(required) - set(doc)
    if missing:
        raise ParseError(f"missing {what} fields: {sorted(missing)}")


def _number(x) -> float:
    if isinstance(x, bool) or not isinstance(x, Real):
        raise ParseError(f"expected a number, got {x!r}")
    return float(x)


def _complex(enc) -> complex:
    if not isinstance(enc, list) or len(enc) != 2:
        raise ParseError(f"complex values are [re, im], got {enc!r}")
    return complex(_number(enc[0]), _number(enc[1]))


def parse_semigroup(doc) -> IndexSet:
    if not isinstance(doc, dict) or "type" not in doc:
        raise ParseError("semigroup needs a 'type'")
    try:
        if doc["type"] == "ordinary":
            _fields(doc, ("type", "N"), what="semigroup")
            if isinstance(doc["N"], bool) or not isinstance(doc["N"], int):
                raise ParseError("N must be an integer")
            return OrdinaryIndexSet(doc["N"])
        if doc["type"] == "generated":
            _fields(doc, ("type", "generators", "horizon"), what="semigroup")
            if not isinstance(doc["generators"], list):
                raise ParseError("generators must be a list")
            return GeneratedSemigroup(tuple(doc["generators"]), doc["horizon"])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad semigroup: {exc}") from exc
    raise ParseError(f"unknown semigroup type {doc['type']!r}")


def parse_algebra(doc) -> Algebra:
    _fields(doc, ("scalar",), ("matrixDim",), what="algebra")
    try:
        dim = doc.get("matrixDim")
        if dim is not None and (isinstance(dim, bool) or not isinstance(dim, int)):
            raise ParseError("matrixDim must be an integer")
        return Algebra(ScalarKind(doc["scalar"]), dim)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad algebra: {exc}") from exc


def parse_weight(doc, index_set: IndexSet | None = None) -> Weight:
    default = "multiplicative" if index_set is not None and index_set.kind == "ordinary" else "additive"
    try:
        return Weight.from_json(doc, default)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad weight: {exc}") from exc


def _scalar_data(enc, kind: ScalarKind) -> np.ndarray:
    if kind is ScalarKind.COMPLEX:
        return np.array(_complex(enc))
    if kind is ScalarKind.BICOMPLEX:
        if not isinstance(enc, dict) or len(enc) != 1 or not set(enc) <= {"idem", "cart"}:
            raise ParseError(f"bicomplex values are {{'idem': ...}} or {{'cart': ...}}, got {enc!r}")
        (form, pair), = enc.items()
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("bicomplex value needs two complex components")
        a, b = _complex(pair[0]), _complex(pair[1])
        if form == "cart":
            a, b = a - 1j * b, a + 1j * b
        return np.array([a, b])
    if not isinstance(enc, list) or len(enc) != 4:
        raise ParseError(f"quaternion values are [x0, x1, x2, x3], got {enc!r}")
    x = [_number(v) for v in enc]
    return np.array([complex(x[0], x[1]), complex(x[2], x[3])])


def decode_value(enc, algebra: Algebra) -> np.ndarray:
    if not algebra.is_matrix:
        return _scalar_data(enc, algebra.scalar)
    d = algebra.dim
    if not isinstance(enc, list) or len(enc) != d or any(not isinstance(r, list) or len(r) != d for r in enc):
        raise ParseError(f"expected a {d}x{d} matrix of scalar encodings")
    grid = np.array([[_scalar_data(e, algebra.scalar) for e in row] for row in enc])
    return np.moveaxis(grid, -1, 0) if algebra.split else grid


def _encode_complex(z) -> list:
    return [float(z.real), float(z.imag)]


def _encode_scalar(data, kind: ScalarKind):
    if kind is ScalarKind.COMPLEX:
        return _encode_complex(data)
    if kind is ScalarKind.BICOMPLEX:
        return {"idem": [_encode_complex(data[0]), _encode_complex(data[1])]}
    return [float(data[0].real), float(data[0].imag), float(data[1].real), float(data[1].imag)]


def encode_value(data: np.ndarray, algebra: Algebra):
    if not algebra.is_matrix:
        return _encode_scalar(data, algebra.scalar)
    d = algebra.dim
    if algebra.split:
        return [[_encode_scalar(data[:, r, c], algebra.scalar) for c in range(d)] for r in range(d)]
    return [[_encode_scalar(data[r, c], algebra.scalar) for c in range(d)] for r in range(d)]


def _encode_index(idx):
    return idx if isinstance(idx, int) else format_rational(idx)


def series_from_json(doc) -> tuple[DirichletSeries, Weight | None]:
    _fields(doc, ("semigroup", "algebra", "coefficients"), ("weight",), what="series")
    index_set = parse_semigroup(doc["semigroup"])
    algebra = parse_algebra(doc["algebra"])
    weight = parse_weight(doc["weight"], index_set) if doc.get("weight") is not None else None
    if not isinstance(doc["coefficients"], list):
        raise ParseError("coefficients must be a list")
    arr = algebra.zeros((len(index_set),))
    seen = set()
    for entry in doc["coefficients"]:
        _fields(entry, ("index", "value"), what="coefficient")
        raw = entry["index"]
        try:
            if index_set.kind == "ordinary":
                if isinstance(raw, bool) or not isinstance(raw, int):
                    raise ParseError(f"ordinary indices are integers, got {raw!r}")
                pos = index_set.position(raw)
            else:
                if isinstance(raw, float):
                    raise ParseError(f"generated indices are exact rationals like '5/2', got {raw!r}")
                pos = index_set.position(parse_rational(raw))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad index {raw!r}: {exc}") from exc
        if pos in seen:
            raise ParseError(f"duplicate index {raw!r}")
        seen.add(pos)
        arr[pos] = decode_value(entry["value"], algebra)
    try:
        return DirichletSeries(index_set, algebra, arr), weight
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def series_to_json(series: DirichletSeries, weight: Weight | None = None) -> dict:
    alg = series.algebra
    doc = {
        "semigroup": series.index_set.to_json(),
        "algebra": {"scalar": alg.scalar.value} | ({"matrixDim": alg.dim} if alg.is_matrix else {}),
    }
    if weight is not None:
        doc["weight"] = weight.to_json()
    els = series.index_set.elements
    coeffs = []
    for k in range(len(els)):
        if np.any(series.coeffs[k] != 0):
            coeffs.append({"index": _encode_index(els[k]), "value": encode_value(series.coeffs[k], alg)})
    doc["coefficients"] = coeffs
    return doc


def load_series(path) -> tuple[DirichletSeries, Weight | None]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    return series_from_json(doc)


def dump_series(series: DirichletSeries, path, weight: Weight | None = None) -> None:
    Path(path).write_text(json.dumps(series_to_json(series, weight), indent=1) + "\n")
