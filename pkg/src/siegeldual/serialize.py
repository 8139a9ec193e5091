"""JSON documents for fields, matrices, Siegel objects, P tables, lattices and series.

Every field element is written as a canonical string, never as a JSON number.
``load`` inverts ``dump`` structurally.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import ParseError
from .exact.fields import Field, parse_field
from .exact.series import LaurentSeries
from .lattice import LatticeInstance, make_jordan_matrix
from .linalg import Mat
from .partitions import jordan_data
from .siegel import PTable, SiegelObject, in_p_domain, tetra_indices


def quad_key(u: int, v: int, y: int, z: int) -> str:
    return f"{u},{v},{y},{z}"


def parse_quad(key: str) -> tuple[int, int, int, int]:
    try:
        parts = tuple(int(x) for x in key.split(","))
    except ValueError:
        raise ParseError(f"bad index key {key!r}") from None
    if len(parts) != 4:
        raise ParseError(f"index key {key!r} needs four integers")
    return parts


def matrix_to_json(M: Mat) -> list[list[str]]:
    return M.tolist()


def matrix_from_json(field: Field, data, rows: int, cols: int) -> Mat:
    if not isinstance(data, list) or len(data) != rows:
        raise ParseError(f"expected {rows} rows, got {data!r:.60}")
    out = []
    for row in data:
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"expected rows of length {cols}, got {row!r:.60}")
        for x in row:
            if not isinstance(x, str):
                raise ParseError(f"entries must be strings, got {x!r}")
        out.append(tuple(field.coerce(x) for x in row))
    return Mat._raw(field, rows, cols, tuple(out))


# ---------------------------------------------------------------------------


def siegel_to_json(S: SiegelObject) -> dict:
    return {
        "type": "siegel",
        "field": S.field.to_json(),
        "m": S.m,
        "k": list(S.k),
        "entries": {quad_key(u, u - 1, y, z): matrix_to_json(M) for (u, y, z), M in S.items()},
    }


def siegel_from_json(doc: dict) -> SiegelObject:
    f = parse_field(doc["field"])
    k = tuple(int(x) for x in doc["k"])
    m = len(k) - 1
    if "m" in doc and int(doc["m"]) != m:
        raise ParseError(f"m = {doc['m']} does not match k of length {len(k)}")
    raw = doc["entries"]
    entries = {}
    for u, y, z in tetra_indices(m):
        key = quad_key(u, u - 1, y, z)
        if key not in raw:
            raise ParseError(f"missing Siegel entry {key}")
        entries[u, y, z] = matrix_from_json(f, raw[key], k[u - 1], k[y - 1])
    extra = set(raw) - {quad_key(u, u - 1, y, z) for u, y, z in tetra_indices(m)}
    if extra:
        raise ParseError(f"unexpected Siegel entries {sorted(extra)}")
    return SiegelObject(f, k, entries)


def ptable_to_json(P: PTable) -> dict:
    return {
        "type": "ptable",
        "field": P.field.to_json(),
        "m": P.m,
        "k": list(P.k),
        "entries": {quad_key(*idx): matrix_to_json(M) for idx, M in P.items()},
    }


def ptable_from_json(doc: dict) -> PTable:
    f = parse_field(doc["field"])
    k = tuple(int(x) for x in doc["k"])
    m = len(k) - 1
    entries = {}
    for key, data in doc["entries"].items():
        u, v, y, z = parse_quad(key)
        if not in_p_domain(u, v, y, z, m):
            raise ParseError(f"P{key} lies outside the non-trivial domain")
        entries[u, v, y, z] = matrix_from_json(f, data, k[u - 1], k[y - 1])
    return PTable(f, k, entries)


def lattice_to_json(L: LatticeInstance, with_operator: bool | None = None) -> dict:
    doc = {
        "type": "lattice",
        "field": L.field.to_json(),
        "m": L.m,
        "d": list(L.jordan.d),
        "basis": [list(L.field.format(x) for x in L.basis.column(j)) for j in range(L.r)],
    }
    if with_operator or (with_operator is None and L.operator != make_jordan_matrix(L.jordan, L.field)):
        doc["operator"] = matrix_to_json(L.operator)
    return doc


def lattice_from_json(doc: dict) -> LatticeInstance:
    f = parse_field(doc["field"])
    m = int(doc["m"])
    basis = doc["basis"]
    if not isinstance(basis, list):
        raise ParseError("basis must be a list of vectors")
    jd = jordan_data([int(x) for x in doc["d"]], m, len(basis))
    n = jd.n
    cols = matrix_from_json(f, basis, len(basis), n)
    op = matrix_from_json(f, doc["operator"], n, n) if "operator" in doc else None
    return LatticeInstance(f, jd, cols.T, op)


def series_to_json(s: LaurentSeries) -> dict:
    return {
        "type": "series",
        "field": s.field.to_json(),
        "var": s.var,
        "order": s.order,
        "valuation": s.valuation,
        "kappa": s.kappa,
        "coefficients": {str(j): str(c) for j, c in s.coefficients().items()},
    }


def series_from_json(doc: dict) -> LaurentSeries:
    f = parse_field(doc["field"])
    order = int(doc["order"])
    coeffs = {int(j): f.coerce(c) for j, c in doc["coefficients"].items()}
    if not coeffs:
        return LaurentSeries(f, order + 1, (), order, doc.get("var", "N"))
    lo = min(coeffs)
    return LaurentSeries(f, lo, tuple(coeffs.get(j, f.zero) for j in range(lo, max(coeffs) + 1)),
                         order, doc.get("var", "N"))


_DUMPERS = [
    (SiegelObject, siegel_to_json),
    (PTable, ptable_to_json),
    (LatticeInstance, lattice_to_json),
    (LaurentSeries, series_to_json),
]

_LOADERS = {
    "siegel": siegel_from_json,
    "ptable": ptable_from_json,
    "lattice": lattice_from_json,
    "series": series_from_json,
}


def to_json(obj) -> dict:
    for cls, fn in _DUMPERS:
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def from_json(doc: Any):
    """Rebuild an object from its document; the kind comes from ``type`` or is inferred."""
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object")
    kind = doc.get("type")
    if kind is None:
        kind = "lattice" if "basis" in doc else "siegel" if "entries" in doc else None
    if kind not in _LOADERS:
        raise ParseError(f"unknown document type {kind!r}")
    try:
        return _LOADERS[kind](doc)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed {kind} document: {exc}") from None


def dumps(obj, indent: int | None = 1) -> str:
    return json.dumps(obj if isinstance(obj, (dict, list)) else to_json(obj), indent=indent)


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_json(doc)
