"""Gluing rank-1 order-1 Lie maps on the two-chart projective line.

Charts: ``U0`` with coordinate ``z`` and ``U1`` with ``w = 1/z``, so
``d_w = -z^2 d_z``. The line bundle of degree ``n`` has sections ``(s0, s1)``
with ``s0 = z^n s1`` on the overlap. On chart ``c`` the local structure is

    L_eta(s) = f s' + rho f' s + a_c f s        (eta = f d, local coordinate)

Derivation of the gluing law. Take ``eta = g(w) d_w = f(z) d_z`` with
``f(z) = -z^2 g(1/z)``. Then ``dg/dw = f'(z) - 2 f(z)/z`` and
``g(w) = -z^-2 f(z)``. Writing ``s1 = z^-n s0`` and expanding the chart-1
operator in ``z``:

    z^n L1_eta(s1) = f s0' + rho1 f' s0 + f * (-(n + 2 rho1)/z - z^-2 a1(1/z)) s0

Matching with ``L0_eta(s0)`` for every ``f`` forces ``rho0 = rho1`` and

    a0(z) + z^-2 a1(1/z) + (n + 2 rho)/z = 0.

The left side is the mismatch. Its ``a`` terms never reach ``z^-1``
(``a0`` has exponents >= 0, ``z^-2 a1(1/z)`` exponents <= -2), so the residue
``n + 2 rho`` is the whole obstruction. The sign convention is pinned by the
two natural examples: the canonical bundle (``n = -2``) with
``L(g dz) = (f g' + f' g) dz`` has ``rho = 1``, and the tangent bundle
(``n = 2``) with the bracket action ``(f g' - f' g) d`` has ``rho = -1``.
Both give zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

from .atiyah import LieMap, MatrixPoly, gauge_transform
from .formal_core import ZERO, Poly, Scalar
from .linalg import solve


class LaurentPoly:
    """One-variable Laurent polynomial with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[int, object]] = None):
        clean: Dict[int, Scalar] = {}
        for e, c in (terms or {}).items():
            c = Scalar.coerce(c)
            if c:
                clean[int(e)] = clean.get(int(e), ZERO) + c
                if not clean[int(e)]:
                    del clean[int(e)]
        self.terms = clean

    @classmethod
    def monomial(cls, e: int, c=1) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def from_poly(cls, p: Poly) -> "LaurentPoly":
        if p.dim != 1:
            raise ValueError("only one-variable polynomials embed in LaurentPoly")
        return cls({idx[0]: c for idx, c in p.terms.items()})

    def to_poly(self) -> Poly:
        if any(e < 0 for e in self.terms):
            raise ValueError("Laurent polynomial has negative exponents")
        return Poly(1, {(e,): c for e, c in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coeff(self, e: int) -> Scalar:
        return self.terms.get(e, ZERO)

    def residue(self) -> Scalar:
        return self.coeff(-1)

    def exponents(self):
        return sorted(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            c = Scalar.coerce(other)
            return LaurentPoly({e: v * c for e, v in self.terms.items()})
        out: Dict[int, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, ZERO) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: c * e for e, c in self.terms.items() if e})

    def invert_variable(self) -> "LaurentPoly":
        """``p(1/z)``."""
        return LaurentPoly({-e: c for e, c in self.terms.items()})

    def shift(self, k: int) -> "LaurentPoly":
        """``z^k p(z)``."""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "LaurentPoly(0)"
        return "LaurentPoly(" + " + ".join(f"({c})*z^{e}" for e, c in sorted(self.terms.items())) + ")"


def dlog_monomial(n: int) -> LaurentPoly:
    """Coefficient of ``dz`` in ``dlog(z^n)``."""
    return LaurentPoly({-1: n})


@dataclass(frozen=True)
class LocalLineData:
    """Order-1 structure ``L~(f d) = rho f' + a f`` on one chart."""

    chart: int
    rho: Scalar
    a: Poly

    def __post_init__(self):
        if self.chart not in (0, 1):
            raise ValueError("chart must be 0 or 1")
        object.__setattr__(self, "rho", Scalar.coerce(self.rho))
        if self.a.dim != 1:
            raise ValueError("local coefficient must be a one-variable polynomial")

    def liemap(self) -> LieMap:
        return LieMap(1, 1, {
            (0, (0,)): MatrixPoly([[self.a]]),
            (0, (1,)): MatrixPoly([[Poly.const(1, self.rho)]]),
        })


@dataclass(frozen=True)
class CechP1Model:
    degree: int
    chart0: LocalLineData
    chart1: LocalLineData

    def __post_init__(self):
        if self.chart0.chart != 0 or self.chart1.chart != 1:
            raise ValueError("chart0 must carry chart=0 and chart1 chart=1")

    @classmethod
    def standard(cls, degree: int, rho, a0: Optional[Poly] = None, a1: Optional[Poly] = None) -> "CechP1Model":
        zero = Poly.zero(1)
        return cls(degree, LocalLineData(0, rho, a0 or zero), LocalLineData(1, rho, a1 or zero))


def transport_field(f: LaurentPoly) -> LaurentPoly:
    """``f(z) d_z`` rewritten as ``g(w) d_w``: ``g(w) = -w^2 f(1/w)``."""
    return -(f.invert_variable().shift(2))


def transport(data: LocalLineData, degree: int) -> Tuple[Scalar, LaurentPoly]:
    """Chart-1 data expressed on chart 0: ``(rho, -(n + 2 rho)/z - z^-2 a1(1/z))``.

    The returned Laurent polynomial is the order-0 coefficient the chart-1
    structure has in the ``z`` coordinate and the chart-0 frame.
    """
    if data.chart != 1:
        raise ValueError("transport runs from chart 1 to chart 0")
    a1 = LaurentPoly.from_poly(data.a).invert_variable().shift(-2)
    jac = LaurentPoly({-1: data.rho * 2})
    return data.rho, -(a1 + dlog_monomial(degree) + jac)


def mismatch(model: CechP1Model) -> LaurentPoly:
    """``a0 - transported a1``; zero iff the local structures glue."""
    rho1, a1_z = transport(model.chart1, model.degree)
    if rho1 != model.chart0.rho:
        raise ValueError(f"local order-1 coefficients disagree: {model.chart0.rho} vs {rho1}")
    return LaurentPoly.from_poly(model.chart0.a) - a1_z


def obstruction(model: CechP1Model) -> Scalar:
    """Residue of the gluing mismatch; equals ``degree + 2 * rho``."""
    return mismatch(model).residue()


def obstruction_closed_form(degree: int, rho) -> Scalar:
    return Scalar.coerce(degree) + Scalar.coerce(rho) * 2


def split_cocycle(model: CechP1Model, degree_bound: Optional[int] = None) -> Optional[Tuple[Poly, Poly]]:
    """Polynomial corrections ``(c0(z), c1(w))`` with ``a0 + c0``, ``a1 + c1`` gluing exactly.

    Solved as an exact linear system over the coefficients of degree
    ``<= degree_bound`` (default ``max(|n| + 4, deg a0, deg a1)``). Returns
    None when no splitting exists; the residue from :func:`obstruction` is
    the certificate. A returned splitting has been re-checked by transport.
    """
    if degree_bound is None:
        degree_bound = max(abs(model.degree) + 4, model.chart0.a.degree(), model.chart1.a.degree())
    D = degree_bound
    m = mismatch(model)
    # unknown k <= D: coefficient of z^k in c0; unknown D+1+k: coefficient of w^k in c1.
    # correction adds c0(z) + z^-2 c1(1/z) to the mismatch.
    rows: Dict[int, Dict[int, Scalar]] = {}
    for k in range(D + 1):
        rows.setdefault(k, {})[k] = Scalar(1)
        rows.setdefault(-2 - k, {})[D + 1 + k] = Scalar(1)
    exps = set(rows) | set(m.terms)
    eqs = [(rows.get(e, {}), -m.coeff(e)) for e in sorted(exps)]
    sol = solve(eqs, 2 * (D + 1))
    if sol is None:
        return None
    c0 = Poly(1, {(k,): sol[k] for k in range(D + 1)})
    c1 = Poly(1, {(k,): sol[D + 1 + k] for k in range(D + 1)})
    if mismatch(apply_split(model, (c0, c1))):
        raise AssertionError("splitting failed re-verification")
    return c0, c1


def apply_split(model: CechP1Model, split: Tuple[Poly, Poly]) -> CechP1Model:
    c0, c1 = split
    return CechP1Model(
        model.degree,
        LocalLineData(0, model.chart0.rho, model.chart0.a + c0),
        LocalLineData(1, model.chart1.rho, model.chart1.a + c1),
    )


def gauge_chart(data: LocalLineData, u: Poly, cutoff: int) -> LocalLineData:
    """Change the local frame by ``u`` (unit constant term); ``a`` becomes ``a - u'/u`` mod weight > cutoff."""
    if u.eval_at_0() != 1:
        raise ValueError("gauge frame must have constant term 1")
    L = gauge_transform(data.liemap(), MatrixPoly([[u]]), cutoff)
    rho = L.coeff(0, (1,)).entries[0][0].eval_at_0()
    a = L.coeff(0, (0,)).entries[0][0]
    return LocalLineData(data.chart, rho, a)
