"""Exact scalars, multi-indices, polynomials, truncated series and vector fields.

Everything here is immutable and exact. Scalars are Gaussian rationals
``re + i*im`` with ``fractions.Fraction`` parts. Polynomials in ``d``
variables are sparse maps from exponent tuples to scalars with no stored
zeros, so structural equality is mathematical equality.

Variables and directions are 0-based in the Python API: ``z_0 .. z_{d-1}``
and ``d_0 .. d_{d-1}``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations_with_replacement
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

MultiIndex = Tuple[int, ...]
Number = Union["Scalar", int, Fraction]

_ZERO = Fraction(0)


class Scalar:
    """Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Rational)):
            s = cls.__new__(cls)
            s.re = Fraction(x)
            s.im = _ZERO
            return s
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact; pass Fractions")
        if isinstance(x, float):
            raise TypeError("floats are not exact; pass Fractions or strings like '1/3'")
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")

    @staticmethod
    def _make(re: Fraction, im: Fraction) -> "Scalar":
        s = Scalar.__new__(Scalar)
        s.re = re
        s.im = im
        return s

    @property
    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self) -> "Scalar":
        return Scalar._make(-self.re, -self.im)

    def __pos__(self) -> "Scalar":
        return self

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.re + other, self.im)
            return NotImplemented
        return Scalar._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.re - other, self.im)
            return NotImplemented
        return Scalar._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)):
                return Scalar._make(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, e = self.re, self.im, other.re, other.im
        if not b:
            return Scalar._make(a * c, a * e)
        if not e:
            return Scalar._make(a * c, b * c)
        return Scalar._make(a * c - b * e, a * e + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        if not self.im:
            return Scalar._make(1 / self.re, _ZERO)
        n = self.re * self.re + self.im * self.im
        return Scalar._make(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "Scalar":
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Scalar(0)
ONE = Scalar(1)


# ---------------------------------------------------------------- multi-indices

def weight(idx: MultiIndex) -> int:
    return sum(idx)


def index_factorial(idx: MultiIndex) -> int:
    out = 1
    for i in idx:
        out *= math.factorial(i)
    return out


def unit_index(d: int, j: int) -> MultiIndex:
    return tuple(1 if k == j else 0 for k in range(d))


def add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def indices_of_weight(d: int, w: int) -> Iterator[MultiIndex]:
    """All multi-indices in ``d`` variables of weight ``w``, in ascending tuple order."""
    out = []
    for combo in combinations_with_replacement(range(d), w):
        idx = [0] * d
        for k in combo:
            idx[k] += 1
        out.append(tuple(idx))
    return iter(sorted(out))


def indices_up_to(d: int, max_weight: int, min_weight: int = 0) -> Iterator[MultiIndex]:
    for w in range(min_weight, max_weight + 1):
        yield from indices_of_weight(d, w)


# ---------------------------------------------------------------- polynomials

class Poly:
    """Sparse polynomial in ``dim`` variables over the Gaussian rationals."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Optional[Mapping[MultiIndex, Number]] = None):
        if dim < 1:
            raise ValueError("polynomial dimension must be positive")
        self.dim = dim
        clean: Dict[MultiIndex, Scalar] = {}
        if terms:
            for idx, c in terms.items():
                idx = tuple(int(i) for i in idx)
                if len(idx) != dim or any(i < 0 for i in idx):
                    raise ValueError(f"bad multi-index {idx} for dimension {dim}")
                c = Scalar.coerce(c)
                if c:
                    clean[idx] = clean[idx] + c if idx in clean else c
                    if not clean[idx]:
                        del clean[idx]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: Dict[MultiIndex, Scalar]) -> "Poly":
        # caller guarantees canonical form
        p = cls.__new__(cls)
        p.dim = dim
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, dim: int) -> "Poly":
        return cls._raw(dim, {})

    @classmethod
    def const(cls, dim: int, c: Number) -> "Poly":
        c = Scalar.coerce(c)
        return cls._raw(dim, {(0,) * dim: c} if c else {})

    @classmethod
    def monomial(cls, idx: MultiIndex, c: Number = 1) -> "Poly":
        idx = tuple(idx)
        c = Scalar.coerce(c)
        return cls._raw(len(idx), {idx: c} if c else {})

    @classmethod
    def var(cls, dim: int, j: int) -> "Poly":
        return cls.monomial(unit_index(dim, j))

    # -- inspection
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(idx) for idx in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((weight(i) for i in self.terms), default=-1)

    def coeff(self, idx: MultiIndex) -> Scalar:
        return self.terms.get(tuple(idx), ZERO)

    def eval_at_0(self) -> Scalar:
        return self.terms.get((0,) * self.dim, ZERO)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Rational, Scalar)):
            return self == Poly.const(self.dim, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other: "Poly") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.dim, other)

    # -- ring operations
    def __add__(self, other) -> "Poly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        out = dict(self.terms)
        for idx, c in other.terms.items():
            if idx in out:
                s = out[idx] + c
                if s:
                    out[idx] = s
                else:
                    del out[idx]
            else:
                out[idx] = c
        return Poly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.dim, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: Number) -> "Poly":
        c = Scalar.coerce(c)
        if not c:
            return Poly.zero(self.dim)
        return Poly._raw(self.dim, {i: v * c for i, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out: Dict[MultiIndex, Scalar] = {}
        for i1, c1 in self.terms.items():
            for i2, c2 in other.terms.items():
                idx = tuple(a + b for a, b in zip(i1, i2))
                v = c1 * c2
                if idx in out:
                    out[idx] = out[idx] + v
                else:
                    out[idx] = v
        return Poly._raw(self.dim, {i: c for i, c in out.items() if c})

    def __rmul__(self, other) -> "Poly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(self.dim, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def partial(self, j: int) -> "Poly":
        """Partial derivative with respect to ``z_j`` (0-based)."""
        if not 0 <= j < self.dim:
            raise ValueError(f"variable index {j} out of range for dimension {self.dim}")
        out = {}
        for idx, c in self.terms.items():
            e = idx[j]
            if e:
                new = idx[:j] + (e - 1,) + idx[j + 1:]
                out[new] = c * e
        return Poly._raw(self.dim, out)

    def partial_multi(self, idx: MultiIndex) -> "Poly":
        """Apply ``d^I``."""
        out = {}
        for mono, c in self.terms.items():
            if all(m >= k for m, k in zip(mono, idx)):
                f = 1
                for m, k in zip(mono, idx):
                    for t in range(k):
                        f *= m - t
                out[tuple(m - k for m, k in zip(mono, idx))] = c * f
        return Poly._raw(self.dim, out)

    def shift(self, idx: MultiIndex) -> "Poly":
        """Multiply by the monomial ``z^idx``."""
        return Poly._raw(self.dim, {tuple(a + b for a, b in zip(i, idx)): c for i, c in self.terms.items()})

    def truncate(self, max_weight: int) -> "Poly":
        """Drop every term of weight above ``max_weight``."""
        return Poly._raw(self.dim, {i: c for i, c in self.terms.items() if sum(i) <= max_weight})

    def homogeneous_part(self, w: int) -> "Poly":
        return Poly._raw(self.dim, {i: c for i, c in self.terms.items() if sum(i) == w})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def __repr__(self) -> str:
        return f"Poly({self.dim}, {str(self)!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, c in self.sorted_terms():
            mono = "*".join(
                (f"z{j}" if e == 1 else f"z{j}^{e}") for j, e in enumerate(idx) if e
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)


def poly_arith(p: Poly, q: Optional[Poly] = None, which: str = "add", j: Optional[int] = None):
    """Dispatch helper: ``add``, ``mul``, ``partial`` (needs ``j``) or ``eval_at_0``."""
    if which == "add":
        return p + q
    if which == "mul":
        return p * q
    if which == "partial":
        return p.partial(j)
    if which == "eval_at_0":
        return p.eval_at_0()
    raise ValueError(f"unknown polynomial operation {which!r}")


# ---------------------------------------------------------------- truncated series

class TruncatedSeries:
    """Power series known modulo terms of weight > ``cutoff``.

    Binary operations produce ``cutoff = min(left.cutoff, right.cutoff)``.
    """

    __slots__ = ("poly", "cutoff")

    def __init__(self, poly: Poly, cutoff: int):
        if cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        self.cutoff = cutoff
        self.poly = poly.truncate(cutoff)

    @property
    def dim(self) -> int:
        return self.poly.dim

    @property
    def terms(self):
        return self.poly.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.cutoff == other.cutoff and self.poly == other.poly

    def __hash__(self):
        return hash((self.poly, self.cutoff))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return TruncatedSeries(self.poly + other.poly, min(self.cutoff, other.cutoff))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return TruncatedSeries(self.poly - other.poly, min(self.cutoff, other.cutoff))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.poly, self.cutoff)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            c = min(self.cutoff, other.cutoff)
            return TruncatedSeries(_mul_truncated(self.poly, other.poly, c), c)
        return TruncatedSeries(self.poly.scale(other), self.cutoff)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        return series_inverse(self)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.poly}, cutoff={self.cutoff})"


def _mul_truncated(p: Poly, q: Poly, cutoff: int) -> Poly:
    out: Dict[MultiIndex, Scalar] = {}
    for i1, c1 in p.terms.items():
        w1 = sum(i1)
        if w1 > cutoff:
            continue
        for i2, c2 in q.terms.items():
            if w1 + sum(i2) > cutoff:
                continue
            idx = tuple(a + b for a, b in zip(i1, i2))
            v = c1 * c2
            out[idx] = out[idx] + v if idx in out else v
    return Poly._raw(p.dim, {i: c for i, c in out.items() if c})


def series_inverse(p: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse modulo weight > cutoff.

    Raises ``ZeroDivisionError`` when the constant term vanishes.
    """
    c0 = p.poly.eval_at_0()
    if not c0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = c0.inverse()
    # p = c0 (1 - q) with q of positive order; 1/p = inv0 * sum q^k
    q = Poly.const(p.dim, 1) - p.poly.scale(inv0)
    acc = Poly.const(p.dim, 1)
    power = Poly.const(p.dim, 1)
    for _ in range(p.cutoff):
        power = _mul_truncated(power, q, p.cutoff)
        if not power:
            break
        acc = acc + power
    return TruncatedSeries(acc.scale(inv0), p.cutoff)


# ---------------------------------------------------------------- vector fields

class VectorField:
    """Polynomial vector field ``sum_j components[j] * d_j``."""

    __slots__ = ("dim", "components")

    def __init__(self, components: Iterable[Poly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        d = len(comps)
        for c in comps:
            if c.dim != d:
                raise ValueError(f"component of dimension {c.dim} in a {d}-dimensional field")
        self.dim = d
        self.components = comps

    @classmethod
    def zero(cls, d: int) -> "VectorField":
        return cls(Poly.zero(d) for _ in range(d))

    @classmethod
    def monomial(cls, idx: MultiIndex, j: int, c: Number = 1) -> "VectorField":
        """``c * z^idx * d_j``."""
        d = len(idx)
        return cls(Poly.monomial(idx, c) if k == j else Poly.zero(d) for k in range(d))

    @classmethod
    def coordinate(cls, d: int, j: int) -> "VectorField":
        return cls.monomial((0,) * d, j)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __bool__(self) -> bool:
        return any(self.components)

    def _check(self, other: "VectorField") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(a - b for a, b in zip(self.components, other.components))

    def __neg__(self) -> "VectorField":
        return VectorField(-a for a in self.components)

    def scale(self, c: Number) -> "VectorField":
        return VectorField(a.scale(c) for a in self.components)

    def __mul__(self, c) -> "VectorField":
        if isinstance(c, Poly):
            return VectorField(a * c for a in self.components)
        return self.scale(c)

    __rmul__ = __mul__

    def apply(self, f: Poly) -> Poly:
        """Derivative of the function ``f`` along the field."""
        if f.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {f.dim}")
        out = Poly.zero(self.dim)
        for j, c in enumerate(self.components):
            if c:
                df = f.partial(j)
                if df:
                    out = out + c * df
        return out

    def truncate(self, max_weight: int) -> "VectorField":
        return VectorField(c.truncate(max_weight) for c in self.components)

    def monomials(self):
        """Sorted ``(idx, j, coeff)`` triples."""
        out = [(idx, j, c) for j, comp in enumerate(self.components) for idx, c in comp.terms.items()]
        out.sort(key=lambda t: (sum(t[0]), t[0], t[1]))
        return out

    def __repr__(self) -> str:
        parts = [f"({c})*d{j}" for j, c in enumerate(self.components) if c]
        return f"VectorField({' + '.join(parts) or '0'})"


def vf_bracket(x: VectorField, y: VectorField) -> VectorField:
    """Lie bracket ``[x, y]_k = x(y_k) - y(x_k)``."""
    x._check(y)
    return VectorField(x.apply(yk) - y.apply(xk) for xk, yk in zip(x.components, y.components))


def euler_field(d: int) -> VectorField:
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return VectorField(Poly.var(d, j) for j in range(d))


def circle_weight(idx: MultiIndex) -> int:
    """Weight of ``z^idx d_j`` under the Euler grading: ``wt(idx) - 1``."""
    return sum(idx) - 1


def weight_components(x: VectorField) -> Dict[int, VectorField]:
    """Split a field into Euler-grading components ``{w: part}``; zero parts are omitted."""
    d = x.dim
    buckets: Dict[int, list] = {}
    for j, comp in enumerate(x.components):
        for idx, c in comp.terms.items():
            buckets.setdefault(circle_weight(idx), [{} for _ in range(d)])[j][idx] = c
    return {
        w: VectorField(Poly._raw(d, t) for t in parts)
        for w, parts in sorted(buckets.items())
    }
