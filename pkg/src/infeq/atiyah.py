"""Matrix differential operators, the Atiyah bracket and the cocycle checks.

A Lie map on the trivial rank-``r`` bundle over the polydisc is stored as its
matrix part: ``L~(eta) = sum_{i,I} A^i_I * d^I(eta_i)``, so the Lie derivative
on sections is ``L_eta(s) = eta(s) + L~(eta) s``. With that convention the
bracket of Atiyah elements is

    [(eta0, M0), (eta1, M1)] = ([eta0, eta1], eta0*M1 - eta1*M0 + [M0, M1])

and ``L`` is a Lie map exactly when the cocycle identity holds:

    L~([eta0, eta1]) = eta0*L~(eta1) - eta1*L~(eta0) + [L~(eta0), L~(eta1)].

Specialising to constant fields gives the flatness conditions in the *same*
sign convention:

    d_i A^j_0 - d_j A^i_0 + [A^i_0, A^j_0] = 0            (curvature)
    d_i A^j_J + [A^i_0, A^j_J] = 0      for wt(J) >= 1      (adjoint flatness)

Coefficients may be exact polynomials or truncations of power series. A
``LieMap`` with ``precision = D`` is only trusted through weight ``D``;
checks on such maps compare residuals through weight ``D - 1`` because one
derivative is lost, and their reports say so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .formal_core import (
    MultiIndex,
    Poly,
    Scalar,
    VectorField,
    _mul_truncated,
    index_factorial,
    indices_up_to,
    vf_bracket,
    weight,
)
from .linalg import Matrix
from .truncated_lie import monomial_bracket


class MatrixPoly:
    """``r x r`` matrix of polynomials in ``d`` variables."""

    __slots__ = ("d", "r", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]]):
        rows = tuple(tuple(row) for row in entries)
        r = len(rows)
        if r == 0 or any(len(row) != r for row in rows):
            raise ValueError("MatrixPoly must be square and non-empty")
        d = rows[0][0].dim
        if any(p.dim != d for row in rows for p in row):
            raise ValueError("entries of a MatrixPoly must share a dimension")
        self.d = d
        self.r = r
        self.entries = rows

    @classmethod
    def zero(cls, d: int, r: int) -> "MatrixPoly":
        z = Poly.zero(d)
        return cls([[z] * r for _ in range(r)])

    @classmethod
    def identity(cls, d: int, r: int) -> "MatrixPoly":
        return cls.constant(d, Matrix.identity(r))

    @classmethod
    def constant(cls, d: int, m: Matrix) -> "MatrixPoly":
        return cls([[Poly.const(d, x) for x in row] for row in m.rows])

    @classmethod
    def scalar_poly(cls, p: Poly, r: int = 1) -> "MatrixPoly":
        z = Poly.zero(p.dim)
        return cls([[p if i == j else z for j in range(r)] for i in range(r)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __bool__(self) -> bool:
        return any(p for row in self.entries for p in row)

    def is_zero(self) -> bool:
        return not self

    def is_constant(self) -> bool:
        return all(p.is_constant() for row in self.entries for p in row)

    def degree(self) -> int:
        return max(p.degree() for row in self.entries for p in row)

    def _check(self, other: "MatrixPoly") -> None:
        if (self.d, self.r) != (other.d, other.r):
            raise ValueError(f"shape mismatch: (d={self.d}, r={self.r}) vs (d={other.d}, r={other.r})")

    def map(self, fn) -> "MatrixPoly":
        return MatrixPoly([[fn(p) for p in row] for row in self.entries])

    def __add__(self, other: "MatrixPoly") -> "MatrixPoly":
        self._check(other)
        return MatrixPoly([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "MatrixPoly") -> "MatrixPoly":
        self._check(other)
        return MatrixPoly([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "MatrixPoly":
        return self.map(lambda p: -p)

    def scale(self, c) -> "MatrixPoly":
        if isinstance(c, Poly):
            return self.map(lambda p: p * c)
        return self.map(lambda p: p.scale(c))

    def matmul(self, other: "MatrixPoly", cutoff: Optional[int] = None) -> "MatrixPoly":
        self._check(other)
        r = self.r
        mul = (lambda a, b: a * b) if cutoff is None else (lambda a, b: _mul_truncated(a, b, cutoff))
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = Poly.zero(self.d)
                for k in range(r):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + mul(a, b)
                row.append(acc)
            out.append(row)
        return MatrixPoly(out)

    def __matmul__(self, other: "MatrixPoly") -> "MatrixPoly":
        return self.matmul(other)

    def __mul__(self, other):
        if isinstance(other, MatrixPoly):
            return self.matmul(other)
        return self.scale(other)

    def commutator(self, other: "MatrixPoly") -> "MatrixPoly":
        return self @ other - other @ self

    def derive(self, eta: VectorField) -> "MatrixPoly":
        """Entrywise derivative ``eta * M``."""
        return self.map(eta.apply)

    def partial(self, j: int) -> "MatrixPoly":
        return self.map(lambda p: p.partial(j))

    def eval_at_0(self) -> Matrix:
        return Matrix([[p.eval_at_0() for p in row] for row in self.entries])

    def truncate(self, max_weight: int) -> "MatrixPoly":
        return self.map(lambda p: p.truncate(max_weight))

    def __repr__(self) -> str:
        return "MatrixPoly([" + ", ".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.entries) + "])"


def matrix_series_inverse(g: MatrixPoly, cutoff: int) -> MatrixPoly:
    """Inverse of a frame modulo weight > ``cutoff``; needs ``g(0)`` invertible."""
    g0 = g.eval_at_0()
    try:
        g0_inv = g0.inverse()
    except ZeroDivisionError:
        raise ValueError("frame is not invertible: g(0) is singular") from None
    inv0 = MatrixPoly.constant(g.d, g0_inv)
    # g = g0 (1 + X), X = g0^{-1}(g - g0) has no constant term
    x = inv0.matmul(g - MatrixPoly.constant(g.d, g0), cutoff)
    acc = MatrixPoly.identity(g.d, g.r)
    power = MatrixPoly.identity(g.d, g.r)
    for _ in range(cutoff):
        power = (-power).matmul(x, cutoff)
        if not power:
            break
        acc = acc + power
    return acc.matmul(inv0, cutoff).truncate(cutoff)


def exact_inverse(g: MatrixPoly) -> Optional[MatrixPoly]:
    """Polynomial inverse when ``g - g(0)`` is nilpotent after scaling, else None."""
    g0 = g.eval_at_0()
    try:
        g0_inv = g0.inverse()
    except ZeroDivisionError:
        raise ValueError("frame is not invertible: g(0) is singular") from None
    inv0 = MatrixPoly.constant(g.d, g0_inv)
    x = inv0 @ (g - MatrixPoly.constant(g.d, g0))
    acc = MatrixPoly.identity(g.d, g.r)
    power = MatrixPoly.identity(g.d, g.r)
    for _ in range(g.r):
        power = -(power @ x)
        if not power:
            return acc @ inv0
        acc = acc + power
    return None


@dataclass(frozen=True)
class AtiyahElement:
    """First-order operator ``s -> field(s) + matrix * s`` on the trivial bundle."""

    field: VectorField
    matrix: MatrixPoly

    def __post_init__(self):
        if self.field.dim != self.matrix.d:
            raise ValueError("field and matrix live over different polydiscs")

    def act(self, sections: Sequence[Poly]) -> Tuple[Poly, ...]:
        m = self.matrix
        out = []
        for i in range(m.r):
            acc = self.field.apply(sections[i])
            for k in range(m.r):
                acc = acc + m.entries[i][k] * sections[k]
            out.append(acc)
        return tuple(out)


def atiyah_bracket(x: AtiyahElement, y: AtiyahElement) -> AtiyahElement:
    x.matrix._check(y.matrix)
    return AtiyahElement(
        vf_bracket(x.field, y.field),
        y.matrix.derive(x.field) - x.matrix.derive(y.field) + x.matrix.commutator(y.matrix),
    )


def symbol(x: AtiyahElement) -> VectorField:
    return x.field


class LieMap:
    """Matrix-valued differential operator ``sum A^i_I dz_i d^I`` (``i`` 0-based)."""

    def __init__(self, d: int, r: int, coeffs: Mapping[Tuple[int, MultiIndex], MatrixPoly],
                 precision: Optional[int] = None):
        self.d = d
        self.r = r
        clean: Dict[Tuple[int, MultiIndex], MatrixPoly] = {}
        for (i, I), m in coeffs.items():
            I = tuple(I)
            if not 0 <= i < d or len(I) != d:
                raise ValueError(f"bad coefficient key {(i, I)} for d={d}")
            if (m.d, m.r) != (d, r):
                raise ValueError(f"coefficient {(i, I)} has shape (d={m.d}, r={m.r}), expected (d={d}, r={r})")
            if precision is not None:
                m = m.truncate(precision)
            if m:
                clean[(i, I)] = m
        self.coeffs = clean
        self.precision = precision

    @classmethod
    def from_constants(cls, d: int, r: int, coeffs: Mapping[Tuple[int, MultiIndex], Matrix]) -> "LieMap":
        return cls(d, r, {k: MatrixPoly.constant(d, m) for k, m in coeffs.items()})

    def sorted_keys(self) -> List[Tuple[int, MultiIndex]]:
        return sorted(self.coeffs, key=lambda k: (weight(k[1]), k[1], k[0]))

    @property
    def order(self) -> int:
        """Highest ``wt(I)`` with a nonzero coefficient; 0 for the zero map."""
        return max((weight(I) for (_, I) in self.coeffs), default=0)

    def coeff(self, i: int, I: MultiIndex) -> MatrixPoly:
        return self.coeffs.get((i, tuple(I)), MatrixPoly.zero(self.d, self.r))

    def connection_part(self) -> List[MatrixPoly]:
        zero = (0,) * self.d
        return [self.coeff(i, zero) for i in range(self.d)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieMap):
            return NotImplemented
        return (self.d, self.r, self.coeffs, self.precision) == (other.d, other.r, other.coeffs, other.precision)

    def __repr__(self) -> str:
        return f"LieMap(d={self.d}, r={self.r}, order={self.order}, terms={len(self.coeffs)})"

    def apply(self, eta: VectorField) -> MatrixPoly:
        return apply_liemap(self, eta)

    def truncated(self, max_weight: int) -> "LieMap":
        return LieMap(self.d, self.r, {k: m.truncate(max_weight) for k, m in self.coeffs.items()},
                      precision=self.precision)


def apply_liemap(L: LieMap, eta: VectorField) -> MatrixPoly:
    """Matrix part ``L~(eta)``; the Lie derivative on sections is ``eta + L~(eta)``."""
    if eta.dim != L.d:
        raise ValueError(f"dimension mismatch: map over d={L.d}, field over d={eta.dim}")
    out = MatrixPoly.zero(L.d, L.r)
    for (i, I), m in L.coeffs.items():
        f = eta.components[i].partial_multi(I)
        if f:
            out = out + m.scale(f)
    if L.precision is not None:
        out = out.truncate(L.precision)
    return out


def monomial_fields(d: int, max_weight: int) -> List[VectorField]:
    """All ``z^I d_j`` with ``wt(I) <= max_weight``, ordered by ``(wt(I), I, j)``."""
    return [VectorField.monomial(I, j) for I in indices_up_to(d, max_weight) for j in range(d)]


def _key_label(key: Tuple[MultiIndex, int]) -> str:
    idx, j = key
    mono = "*".join(f"z{k}^{e}" if e > 1 else f"z{k}" for k, e in enumerate(idx) if e)
    return f"{mono}*d{j}" if mono else f"d{j}"


def cocycle_defect(L: LieMap, eta0: VectorField, eta1: VectorField) -> MatrixPoly:
    """``L~([eta0,eta1]) - (eta0*L~(eta1) - eta1*L~(eta0) + [L~(eta0), L~(eta1)])``."""
    m0 = apply_liemap(L, eta0)
    m1 = apply_liemap(L, eta1)
    lhs = apply_liemap(L, vf_bracket(eta0, eta1))
    rhs = m1.derive(eta0) - m0.derive(eta1) + m0.commutator(m1)
    return lhs - rhs


def _residual_cutoff(L: LieMap) -> Optional[int]:
    return None if L.precision is None else L.precision - 1


def check_cocycle(L: LieMap, degree_bound: Optional[int] = None) -> dict:
    """Check the cocycle identity on all pairs of monomial fields of weight <= degree_bound.

    Both sides are antisymmetric in the pair and vanish on the diagonal, so
    unordered pairs ``a < b`` cover every ordered pair. Both sides are
    bilinear, so the monomial pairs certify every polynomial pair of that
    degree. The default bound is ``order(L) + 2``.
    """
    if degree_bound is None:
        degree_bound = L.order + 2
    cut = _residual_cutoff(L)
    keys = [(I, j) for I in indices_up_to(L.d, degree_bound) for j in range(L.d)]
    images: Dict[Tuple[MultiIndex, int], MatrixPoly] = {}
    partials: Dict[Tuple[MultiIndex, int, int], MatrixPoly] = {}

    def image(key) -> MatrixPoly:
        m = images.get(key)
        if m is None:
            m = images[key] = apply_liemap(L, VectorField.monomial(*key))
        return m

    def partial(key, i) -> MatrixPoly:
        m = partials.get(key + (i,))
        if m is None:
            m = partials[key + (i,)] = image(key).partial(i)
        return m

    witnesses = []
    checked = 0
    for a, b in combinations(range(len(keys)), 2):
        checked += 1
        (I, i), (J, j) = keys[a], keys[b]
        m0, m1 = image(keys[a]), image(keys[b])
        diff = m0.commutator(m1) if (m0 and m1) else MatrixPoly.zero(L.d, L.r)
        p1 = partial(keys[b], i)
        if p1:
            diff = diff + p1.map(lambda q: q.shift(I))
        p0 = partial(keys[a], j)
        if p0:
            diff = diff - p0.map(lambda q: q.shift(J))
        for idx, dr, c in monomial_bracket(I, i, J, j):
            diff = diff - image((idx, dr)).scale(c)
        if cut is not None:
            diff = diff.truncate(cut)
        if diff:
            witnesses.append({
                "pair": [_key_label(keys[a]), _key_label(keys[b])],
                "defect": -diff,
            })
    report = {
        "holds": not witnesses,
        "witnesses": witnesses,
        "checked_pairs": checked,
        "degree_bound": degree_bound,
    }
    if cut is not None:
        report["up_to_weight"] = cut
    return report


def curvature(A0: Sequence[MatrixPoly]) -> Dict[Tuple[int, int], MatrixPoly]:
    """``F_ij = d_i A^j - d_j A^i + [A^i, A^j]`` for ``i < j``; flat iff all vanish."""
    d = len(A0)
    return {
        (i, j): A0[j].partial(i) - A0[i].partial(j) + A0[i].commutator(A0[j])
        for i, j in combinations(range(d), 2)
    }


def is_flat(A0: Sequence[MatrixPoly]) -> bool:
    return not any(curvature(A0).values())


def check_higher_flatness(L: LieMap) -> dict:
    """Check ``d_i A^j_J + [A^i_0, A^j_J] = 0`` for every stored ``A^j_J`` with ``wt(J) >= 1``.

    When the connection part vanishes this forces every higher coefficient
    to be constant; ``higher_constant`` reports that consequence directly.
    """
    A0 = L.connection_part()
    cut = _residual_cutoff(L)
    witnesses = []
    for (j, J) in L.sorted_keys():
        if weight(J) == 0:
            continue
        m = L.coeffs[(j, J)]
        for i in range(L.d):
            res = m.partial(i) + A0[i].commutator(m)
            if cut is not None:
                res = res.truncate(cut)
            if res:
                witnesses.append({"i": i, "j": j, "idx": list(J), "residual": res})
    connection_zero = not any(A0)
    report = {
        "holds": not witnesses,
        "witnesses": witnesses,
        "connection_zero": connection_zero,
        "higher_constant": all(m.is_constant() for (j, J), m in L.coeffs.items() if weight(J) >= 1),
    }
    if cut is not None:
        report["up_to_weight"] = cut
    return report


def gauge_transform(L: LieMap, g: MatrixPoly, cutoff: Optional[int] = None) -> LieMap:
    """Change of frame ``s' = g s``: matrix part becomes ``g L~(eta) g^-1 - eta(g) g^-1``.

    A constant or unipotent-polynomial frame is inverted exactly and ``cutoff``
    may be omitted. Otherwise ``g^-1`` is a truncated series and the result
    carries ``precision = cutoff``.
    """
    if (g.d, g.r) != (L.d, L.r):
        raise ValueError("frame shape does not match the Lie map")
    g_inv = exact_inverse(g)
    precision = L.precision
    if g_inv is None:
        if cutoff is None:
            raise ValueError("frame has no polynomial inverse; pass a cutoff")
        g_inv = matrix_series_inverse(g, cutoff)
        precision = cutoff if precision is None else min(precision, cutoff)
    elif cutoff is not None:
        precision = cutoff if precision is None else min(precision, cutoff)

    def mul(a: MatrixPoly, b: MatrixPoly) -> MatrixPoly:
        return a.matmul(b, precision)

    out: Dict[Tuple[int, MultiIndex], MatrixPoly] = {}
    for key, m in L.coeffs.items():
        out[key] = mul(mul(g, m), g_inv)
    zero = (0,) * L.d
    for i in range(L.d):
        corr = -mul(g.partial(i), g_inv)
        key = (i, zero)
        out[key] = out[key] + corr if key in out else corr
    return LieMap(L.d, L.r, out, precision=precision)
