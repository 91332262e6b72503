"""Canonical JSON encodings.

Rationals are strings ``"p/q"`` with ``q > 0`` in lowest terms; scalars are
``{"re": "p/q", "im": "p/q"}``. Directions and Lie-map indices ``i`` are
1-based on the wire; basis positions are 0-based list indices.

Decoding errors raise :class:`FormatError` carrying the path of the
offending field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .atiyah import LieMap, MatrixPoly
from .correspondence import Representation
from .formal_core import Poly, Scalar, VectorField
from .linalg import Matrix
from .obstruction_p1 import LaurentPoly
from .truncated_lie import TruncatedLieAlgebra, build_algebra


class FormatError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"field {field!r}: {message}")
        self.field = field
        self.message = message


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=True)


# ---------------------------------------------------------------- encoding

def rational_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def scalar_to_json(s: Scalar) -> dict:
    s = Scalar.coerce(s)
    return {"re": rational_str(s.re), "im": rational_str(s.im)}


def poly_to_json(p: Poly) -> dict:
    return {
        "dim": p.dim,
        "terms": [dict(idx=list(idx), **scalar_to_json(c)) for idx, c in p.sorted_terms()],
    }


def vf_to_json(v: VectorField) -> dict:
    return {"dim": v.dim, "components": [poly_to_json(c) for c in v.components]}


def matrix_to_json(m: Matrix) -> list:
    return [[scalar_to_json(x) for x in row] for row in m.rows]


def matrixpoly_to_json(m: MatrixPoly) -> list:
    return [[poly_to_json(p) for p in row] for row in m.entries]


def laurent_to_json(p: LaurentPoly) -> dict:
    return {"terms": [dict(exp=e, **scalar_to_json(c)) for e, c in sorted(p.terms.items())]}


def liemap_to_json(L: LieMap) -> dict:
    out = {
        "d": L.d,
        "r": L.r,
        "coeffs": [
            {"i": i + 1, "idx": list(I), "matrix": matrixpoly_to_json(L.coeffs[(i, I)])}
            for (i, I) in L.sorted_keys()
        ],
    }
    if L.precision is not None:
        out["precision"] = L.precision
    return out


def rep_to_json(rho: Representation) -> dict:
    return {
        "d": rho.d,
        "N": rho.N,
        "r": rho.r,
        "images": [{"basis": k, "matrix": matrix_to_json(m)} for k, m in sorted(rho.images.items())],
    }


def algebra_to_json(alg: TruncatedLieAlgebra) -> dict:
    return {
        "d": alg.d,
        "N": alg.N,
        "basis": [{"idx": list(b.index), "dir": b.direction + 1} for b in alg.basis],
        "brackets": [
            {"a": a, "b": b, "terms": [{"c": c, "coef": scalar_to_json(Scalar(v))} for c, v in terms]}
            for (a, b), terms in sorted(alg.structure_constants().items())
        ],
    }


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, Scalar):
        return scalar_to_json(obj)
    if isinstance(obj, Poly):
        return poly_to_json(obj)
    if isinstance(obj, VectorField):
        return vf_to_json(obj)
    if isinstance(obj, Matrix):
        return matrix_to_json(obj)
    if isinstance(obj, MatrixPoly):
        return matrixpoly_to_json(obj)
    if isinstance(obj, LaurentPoly):
        return laurent_to_json(obj)
    if isinstance(obj, LieMap):
        return liemap_to_json(obj)
    if isinstance(obj, Representation):
        return rep_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


# ---------------------------------------------------------------- decoding

def _get(obj, key, path):
    if not isinstance(obj, dict):
        raise FormatError(path, "expected an object")
    if key not in obj:
        raise FormatError(f"{path}.{key}" if path else key, "missing")
    return obj[key]


def _int(x, path, minimum: Optional[int] = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(path, f"expected an integer, got {x!r}")
    if minimum is not None and x < minimum:
        raise FormatError(path, f"must be >= {minimum}")
    return x


def _list(x, path) -> list:
    if not isinstance(x, list):
        raise FormatError(path, "expected a list")
    return x


def parse_rational(x, path: str = "value") -> Fraction:
    """Accept ``"p/q"``, ``"p"`` or an integer; never floats."""
    if isinstance(x, bool):
        raise FormatError(path, "expected a rational")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str) or "." in x or "e" in x.lower():
        raise FormatError(path, f"expected a rational string 'p/q', got {x!r}")
    try:
        num, _, den = x.strip().partition("/")
        q = Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError):
        raise FormatError(path, f"expected a rational string 'p/q', got {x!r}") from None
    return q


def parse_scalar(x, path: str = "value") -> Scalar:
    if isinstance(x, dict):
        re = parse_rational(x.get("re", 0), f"{path}.re")
        im = parse_rational(x.get("im", 0), f"{path}.im")
        return Scalar(re, im)
    return Scalar(parse_rational(x, path))


def poly_from_json(obj, path: str = "poly", dim: Optional[int] = None) -> Poly:
    d = _int(_get(obj, "dim", path), f"{path}.dim", 1)
    if dim is not None and d != dim:
        raise FormatError(f"{path}.dim", f"expected dimension {dim}, got {d}")
    terms = {}
    for t, term in enumerate(_list(_get(obj, "terms", path), f"{path}.terms")):
        tp = f"{path}.terms[{t}]"
        idx = _list(_get(term, "idx", tp), f"{tp}.idx")
        if len(idx) != d:
            raise FormatError(f"{tp}.idx", f"expected {d} entries")
        idx = tuple(_int(e, f"{tp}.idx", 0) for e in idx)
        c = parse_scalar({"re": term.get("re", 0), "im": term.get("im", 0)}, tp)
        if idx in terms:
            raise FormatError(f"{tp}.idx", "repeated multi-index")
        terms[idx] = c
    return Poly(d, terms)


def vf_from_json(obj, path: str = "field") -> VectorField:
    d = _int(_get(obj, "dim", path), f"{path}.dim", 1)
    comps = _list(_get(obj, "components", path), f"{path}.components")
    if len(comps) != d:
        raise FormatError(f"{path}.components", f"expected {d} components")
    return VectorField(poly_from_json(c, f"{path}.components[{k}]", d) for k, c in enumerate(comps))


def matrix_from_json(obj, r: int, path: str) -> Matrix:
    rows = _list(obj, path)
    if len(rows) != r or any(not isinstance(row, list) or len(row) != r for row in rows):
        raise FormatError(path, f"expected a {r}x{r} matrix")
    return Matrix([[parse_scalar(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(rows)])


def matrixpoly_from_json(obj, d: int, r: int, path: str) -> MatrixPoly:
    rows = _list(obj, path)
    if len(rows) != r or any(not isinstance(row, list) or len(row) != r for row in rows):
        raise FormatError(path, f"expected a {r}x{r} matrix")
    return MatrixPoly([[poly_from_json(x, f"{path}[{i}][{j}]", d) for j, x in enumerate(row)]
                       for i, row in enumerate(rows)])


def liemap_from_json(obj, path: str = "") -> LieMap:
    d = _int(_get(obj, "d", path), _p(path, "d"), 1)
    r = _int(_get(obj, "r", path), _p(path, "r"), 1)
    coeffs = {}
    for k, entry in enumerate(_list(_get(obj, "coeffs", path), _p(path, "coeffs"))):
        ep = _p(path, f"coeffs[{k}]")
        i = _int(_get(entry, "i", ep), f"{ep}.i", 1)
        if i > d:
            raise FormatError(f"{ep}.i", f"direction {i} exceeds d={d}")
        idx = _list(_get(entry, "idx", ep), f"{ep}.idx")
        if len(idx) != d:
            raise FormatError(f"{ep}.idx", f"expected {d} entries")
        idx = tuple(_int(e, f"{ep}.idx", 0) for e in idx)
        m = matrixpoly_from_json(_get(entry, "matrix", ep), d, r, f"{ep}.matrix")
        key = (i - 1, idx)
        if key in coeffs:
            raise FormatError(ep, "repeated coefficient key")
        coeffs[key] = m
    precision = obj.get("precision")
    if precision is not None:
        precision = _int(precision, _p(path, "precision"), 0)
    return LieMap(d, r, coeffs, precision=precision)


def rep_from_json(obj, path: str = "") -> Representation:
    d = _int(_get(obj, "d", path), _p(path, "d"), 1)
    N = _int(_get(obj, "N", path), _p(path, "N"), 0)
    r = _int(_get(obj, "r", path), _p(path, "r"), 1)
    alg = build_algebra(d, N)
    images = {}
    for k, entry in enumerate(_list(_get(obj, "images", path), _p(path, "images"))):
        ep = _p(path, f"images[{k}]")
        b = _int(_get(entry, "basis", ep), f"{ep}.basis", 0)
        if b >= len(alg):
            raise FormatError(f"{ep}.basis", f"index {b} out of range (dimension {len(alg)})")
        if b in images:
            raise FormatError(f"{ep}.basis", "repeated basis index")
        images[b] = matrix_from_json(_get(entry, "matrix", ep), r, f"{ep}.matrix")
    return Representation(alg, r, images)


def frame_from_json(obj, path: str = "") -> MatrixPoly:
    """A gauge frame: ``{"d":..,"r":..,"matrix":[[Poly,..],..]}``."""
    d = _int(_get(obj, "d", path), _p(path, "d"), 1)
    r = _int(_get(obj, "r", path), _p(path, "r"), 1)
    return matrixpoly_from_json(_get(obj, "matrix", path), d, r, _p(path, "matrix"))


def frame_to_json(g: MatrixPoly) -> dict:
    return {"d": g.d, "r": g.r, "matrix": matrixpoly_to_json(g)}


def _p(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key
