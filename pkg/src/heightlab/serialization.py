"""JSON problem documents: schema, parsing and canonical emission."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import jsonschema

from .errors import ParseError
from .exact import Matrix, parse_rational
from .koszul import Cochain, MonodromyRep, degree_one
from .param import ParamScalar, format_param, parse_param

SCHEMA_VERSION = "1"

_RATIONAL = {"type": ["string", "integer"], "pattern": r"^\s*-?\d+\s*(/\s*-?\d+\s*)?$"}
_VECTOR = {"type": "array", "items": _RATIONAL}
_MATRIX = {"type": "array", "items": _VECTOR}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "rep"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "rep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["rank", "r", "N"],
            "properties": {
                "rank": {"type": "integer", "minimum": 0},
                "r": {"type": "integer", "minimum": 0},
                "N": {"type": "array", "items": _MATRIX},
                "T": {"type": "array", "items": _MATRIX},
                "weight": {"type": "integer"},
                "polarization": _MATRIX,
            },
        },
        "alpha": {"type": "array", "items": _VECTOR},
        "beta": {"type": "array", "items": _VECTOR},
        "extension": {
            "type": "object",
            "additionalProperties": False,
            "required": ["ring", "corner"],
            "properties": {
                "ring": {"enum": ["Q", "Z"]},
                "corner": _VECTOR,
            },
        },
        "query": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t": _VECTOR,
                "stratum": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "pairing": {"enum": ["h", "hQ"]},
                "l": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
}


@dataclass(frozen=True)
class ProblemDocument:
    rep: MonodromyRep
    alpha: Cochain | None = None
    beta: Cochain | None = None
    ring: str | None = None
    corner: tuple | None = None
    t: tuple | None = None
    stratum: tuple | None = None
    pairing: str = "h"
    l: tuple | None = None


def rational_str(x) -> str:
    return format_param(x)


def _matrix(rows, n, what):
    m = Matrix([[parse_rational(x) for x in row] for row in rows], n) if rows else Matrix.zeros(0, n)
    if m.shape != (n, n):
        raise ParseError(f"{what} must be {n}x{n}")
    return m


def _vectors(items, n, r, what):
    if len(items) != r or any(len(v) != n for v in items):
        raise ParseError(f"{what} must hold {r} vectors of length {n}")
    return [tuple(parse_rational(x) for x in v) for v in items]


def parse_document(obj) -> ProblemDocument:
    """Validate against the schema and build the typed document (ParseError on failure)."""
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path)
        raise ParseError(f"schema violation at '{where}': {exc.message}") from exc
    R = obj["rep"]
    n, r = R["rank"], R["r"]
    if len(R["N"]) != r:
        raise ParseError(f"expected {r} matrices in rep.N")
    N = tuple(_matrix(M, n, f"N{i + 1}") for i, M in enumerate(R["N"]))
    T = None
    if "T" in R:
        if len(R["T"]) != r:
            raise ParseError(f"expected {r} matrices in rep.T")
        T = tuple(_matrix(M, n, f"T{i + 1}") for i, M in enumerate(R["T"]))
    Q = _matrix(R["polarization"], n, "polarization") if "polarization" in R else None
    rep = MonodromyRep(N, n, T=T, weight=R.get("weight"), Q=Q)
    alpha = beta = None
    if "alpha" in obj:
        alpha = degree_one(_vectors(obj["alpha"], n, r, "alpha"), n)
    if "beta" in obj:
        beta = degree_one(_vectors(obj["beta"], n, r, "beta"), n)
    ring = corner = None
    if "extension" in obj:
        ring = obj["extension"]["ring"]
        corner = tuple(parse_rational(x) for x in obj["extension"]["corner"])
        if len(corner) != r:
            raise ParseError(f"extension.corner needs {r} entries")
    q = obj.get("query", {})
    t = tuple(parse_rational(x) for x in q["t"]) if "t" in q else None
    if t is not None and len(t) != r:
        raise ParseError(f"query.t needs {r} entries")
    stratum = tuple(q["stratum"]) if "stratum" in q else None
    l = tuple(parse_param(x, r) for x in q["l"]) if "l" in q else None
    return ProblemDocument(rep, alpha, beta, ring, corner, t, stratum, q.get("pairing", "h"), l)


def load_document(text: str) -> ProblemDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_document(obj)


def _matrix_json(M: Matrix):
    return [[rational_str(x) for x in row] for row in M.rows]


def _cochain_json(c: Cochain):
    return [[rational_str(x) for x in c.component_at(k)] for k in range(comb(c.r, c.p))]


def document_json(doc: ProblemDocument) -> dict:
    rep = doc.rep
    R = {"rank": rep.n, "r": rep.r, "N": [_matrix_json(M) for M in rep.N]}
    if rep.T is not None:
        R["T"] = [_matrix_json(M) for M in rep.T]
    if rep.weight is not None:
        R["weight"] = rep.weight
    if rep.Q is not None:
        R["polarization"] = _matrix_json(rep.Q)
    out = {"schema_version": SCHEMA_VERSION, "rep": R}
    if doc.alpha is not None:
        out["alpha"] = _cochain_json(doc.alpha)
    if doc.beta is not None:
        out["beta"] = _cochain_json(doc.beta)
    if doc.ring is not None:
        out["extension"] = {"ring": doc.ring, "corner": [rational_str(x) for x in doc.corner]}
    q = {}
    if doc.t is not None:
        q["t"] = [rational_str(x) for x in doc.t]
    if doc.stratum is not None:
        q["stratum"] = list(doc.stratum)
    if doc.pairing != "h":
        q["pairing"] = doc.pairing
    if doc.l is not None:
        q["l"] = [rational_str(x) for x in doc.l]
    if q:
        out["query"] = q
    return out


def cochain_json(c: Cochain):
    return _cochain_json(c)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def value_str(x) -> str:
    if isinstance(x, (Fraction, int, ParamScalar)):
        return format_param(x)
    return str(x)
