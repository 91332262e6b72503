"""Representations of truncated algebras and their constant-coefficient Lie maps.

A representation of ``g_d^N`` on ``C^r`` corresponds to the Lie map with
``A^j_J = rho(z^J d_j) / J!`` and no connection part; evaluating a Lie map
at the origin goes back via ``rho(z^J d_j) = J! * A^j_J(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Mapping, Optional

from .atiyah import LieMap, MatrixPoly, check_cocycle, check_higher_flatness, exact_inverse
from .formal_core import Poly, Scalar, index_factorial, unit_index, weight
from .linalg import Matrix
from .truncated_lie import BasisSymbol, TruncatedLieAlgebra, build_algebra


class InvalidRepresentation(ValueError):
    pass


class CocycleFailure(ValueError):
    pass


class Representation:
    """Images of the basis of ``algebra`` as ``r x r`` constant matrices; missing means zero."""

    def __init__(self, algebra: TruncatedLieAlgebra, r: int, images: Mapping[int, Matrix]):
        if r < 1:
            raise ValueError("rank must be positive")
        self.algebra = algebra
        self.r = r
        clean = {}
        for k, m in images.items():
            if not 0 <= k < len(algebra):
                raise ValueError(f"basis index {k} out of range for {algebra!r}")
            if (m.nrows, m.ncols) != (r, r):
                raise ValueError(f"image of basis {k} is not {r}x{r}")
            if m:
                clean[k] = m
        self.images: Dict[int, Matrix] = clean

    @classmethod
    def from_symbols(cls, algebra: TruncatedLieAlgebra, r: int, images: Mapping[BasisSymbol, Matrix]):
        return cls(algebra, r, {algebra.position[s]: m for s, m in images.items()})

    @property
    def d(self) -> int:
        return self.algebra.d

    @property
    def N(self) -> int:
        return self.algebra.N

    def image(self, k: int) -> Matrix:
        return self.images.get(k) or Matrix.zero(self.r)

    def image_of(self, x: Mapping[int, Scalar]) -> Matrix:
        out = Matrix.zero(self.r)
        for k, c in x.items():
            if k in self.images:
                out = out + self.images[k].scale(c)
        return out

    def conjugate(self, P: Matrix) -> "Representation":
        Pinv = P.inverse()
        return Representation(self.algebra, self.r, {k: P @ m @ Pinv for k, m in self.images.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.algebra, self.r, self.images) == (other.algebra, other.r, other.images)

    def __repr__(self) -> str:
        return f"Representation(d={self.d}, N={self.N}, r={self.r}, nonzero={sorted(self.images)})"


def validate_rep(rho: Representation) -> dict:
    """Check ``rho([a, b]) = [rho(a), rho(b)]`` on every basis pair."""
    alg = rho.algebra
    witnesses = []
    n = len(alg)
    for a, b in combinations(range(n), 2):
        bracket = alg.bracket_basis(a, b)
        if a not in rho.images and b not in rho.images and not any(c in rho.images for c in bracket):
            continue
        lhs = rho.image_of(bracket)
        rhs = rho.image(a).commutator(rho.image(b))
        if lhs != rhs:
            witnesses.append({"pair": [str(alg.basis[a]), str(alg.basis[b])], "a": a, "b": b,
                              "difference": lhs - rhs})
    return {"holds": not witnesses, "witnesses": witnesses, "checked_pairs": n * (n - 1) // 2}


def rep_to_liemap(rho: Representation, verify: bool = True, degree_bound: Optional[int] = None) -> LieMap:
    """Constant-coefficient Lie map with ``A^j_J = rho(z^J d_j) / J!`` and ``A^j_0 = 0``.

    With ``verify`` the input is validated first and the output is run through
    ``check_cocycle`` at ``degree_bound`` (default ``N + 3``).
    """
    if verify:
        rep = validate_rep(rho)
        if not rep["holds"]:
            w = rep["witnesses"][0]["pair"]
            raise InvalidRepresentation(f"not a representation: bracket fails on {w[0]}, {w[1]}")
    coeffs = {}
    for k, m in rho.images.items():
        sym = rho.algebra.basis[k]
        coeffs[(sym.direction, sym.index)] = m.scale(Fraction(1, index_factorial(sym.index)))
    L = LieMap.from_constants(rho.d, rho.r, coeffs)
    if verify:
        rep = check_cocycle(L, rho.N + 3 if degree_bound is None else degree_bound)
        if not rep["holds"]:
            raise AssertionError(f"rep_to_liemap produced a non-cocycle: {rep['witnesses'][0]['pair']}")
    return L


def extract_rep(L: LieMap, N: Optional[int] = None, verify: bool = True) -> Representation:
    """Evaluate at the origin: ``rho(z^J d_j) = J! * A^j_J(0)`` on ``g_d^N`` (default ``N = order``)."""
    if N is None:
        N = L.order
    if L.order > N + 1:
        raise ValueError(f"truncation N={N} drops coefficients of weight {L.order}; need N >= {L.order - 1}")
    if verify:
        rep = check_cocycle(L)
        if not rep["holds"]:
            w = rep["witnesses"][0]["pair"]
            raise CocycleFailure(f"cocycle identity fails on ({w[0]}, {w[1]})")
    alg = build_algebra(L.d, N)
    images = {}
    for k, sym in enumerate(alg.basis):
        m = L.coeff(sym.direction, sym.index)
        if m:
            images[k] = m.eval_at_0().scale(index_factorial(sym.index))
    return Representation(alg, L.r, images)


def check_order_bound(L: LieMap) -> dict:
    """Order of ``L`` against ``rank + 1`` (and ``1`` for line bundles)."""
    bound = 1 if L.r == 1 else L.r + 1
    offending = [
        {"i": i, "idx": list(I), "weight": weight(I)}
        for (i, I) in L.sorted_keys() if weight(I) > bound
    ]
    return {
        "order": L.order,
        "rank": L.r,
        "bound": bound,
        "bound_ok": not offending,
        "tight": L.order == bound,
        "offending": offending,
    }


def check_lemma21(rho: Representation) -> dict:
    """Vanishing of high-weight images and the ``ad(rho(euler))`` eigenvalue identity.

    Every image of circle weight ``w >= r + 1`` is expected to vanish. The
    check is only conclusive when the truncation reaches that weight, i.e.
    ``N >= r + 1``. The eigenvalue identity ``[rho(nu), rho(eta)] = w rho(eta)``
    is checked for every basis vector.
    """
    alg = rho.algebra
    r = rho.r
    rho_nu = rho.image_of(alg.euler())
    by_weight: Dict[int, bool] = {}
    eigen_failures = []
    for k, sym in enumerate(alg.basis):
        w = sym.circle_weight
        img = rho.image(k)
        by_weight[w] = by_weight.get(w, True) and not img
        if rho_nu.commutator(img) != img.scale(w):
            eigen_failures.append(str(sym))
    expected_zero = [w for w in by_weight if w >= r + 1]
    violations = [w for w in expected_zero if not by_weight[w]]
    return {
        "rank": r,
        "truncation": alg.N,
        "conclusive": alg.N >= r + 1,
        "vanishing_by_weight": {str(w): v for w, v in sorted(by_weight.items())},
        "vanishes_above_rank": not violations,
        "violations": violations,
        "eigen_identity": not eigen_failures,
        "eigen_failures": eigen_failures,
        "holds": not violations and not eigen_failures,
    }


# ---------------------------------------------------------------- named examples

@dataclass
class NamedExample:
    name: str
    params: dict
    rep: Representation
    liemap: LieMap


def _rep_from_liemap(L: LieMap, N: int) -> Representation:
    return extract_rep(L, N, verify=False)


def densities(lam=0, d: int = 1) -> NamedExample:
    """Rank-1 structure ``L~(eta) = lam * div(eta)``; for ``d = 1`` this is ``lam * f'``."""
    lam = Scalar.coerce(lam)
    coeffs = {(j, unit_index(d, j)): Matrix([[lam]]) for j in range(d)}
    L = LieMap.from_constants(d, 1, coeffs)
    return NamedExample("densities", {"lambda": lam, "d": d}, _rep_from_liemap(L, 2), L)


def omega1(d: int = 1) -> NamedExample:
    """One-forms with the Lie derivative: in the frame ``dz_0..dz_{d-1}``, ``M(eta)_{jk} = d_j eta_k``."""
    coeffs = {(k, unit_index(d, j)): Matrix.unit(d, j, k) for j in range(d) for k in range(d)}
    L = LieMap.from_constants(d, d, coeffs)
    return NamedExample("omega1", {"d": d}, _rep_from_liemap(L, d + 1), L)


def jets(n: int) -> NamedExample:
    """Operators of order <= n on the line, acted on by commutator with ``f d``.

    In the frame ``1, d, ..., d^n`` one has
    ``[f d, g d^k] = f g' d^k - sum_{m=1..k} C(k, m) f^(m) g d^(k+1-m)``,
    so the coefficient of ``f^(m)`` maps the ``d^k`` slot to ``d^(k+1-m)``
    with factor ``-C(k, m)``.
    """
    if n < 0:
        raise ValueError("jet order must be non-negative")
    r = n + 1
    coeffs: Dict = {}
    for m in range(1, n + 1):
        rows = [[0] * r for _ in range(r)]
        for k in range(m, n + 1):
            rows[k + 1 - m][k] = -comb(k, m)
        coeffs[(0, (m,))] = Matrix(rows)
    L = LieMap.from_constants(1, r, coeffs)
    return NamedExample("jets", {"n": n}, _rep_from_liemap(L, r + 1), L)


def sl2_order3() -> NamedExample:
    """Rank 2, ``L = h d + e d^3`` with ``h = diag(1, -1)``, ``e = E_01``."""
    h = Matrix.diag([1, -1])
    e = Matrix.unit(2, 0, 1)
    L = LieMap.from_constants(1, 2, {(0, (1,)): h, (0, (3,)): e})
    return NamedExample("sl2_order3", {}, _rep_from_liemap(L, 3), L)


def flat(r: int = 2, d: int = 2) -> NamedExample:
    """Pure-gauge flat connection of rank ``r``: zero representation; ``A_0`` is nonconstant for ``r >= 3``.

    ``A^i_0 = -(d_i g) g^-1 + (i+1) * Id`` with the unipotent frame
    ``g = Id + sum_a z_{a mod d} E_{a,a+1} + z_0 z_{d-1} E_{a,a+2}``.
    The scalar shift commutes with everything, so the connection stays flat.
    """
    if r < 1 or d < 1:
        raise ValueError("rank and dimension must be positive")
    zero = Poly.zero(d)
    ents = [[Poly.const(d, 1) if a == b else zero for b in range(r)] for a in range(r)]
    for a in range(r - 1):
        ents[a][a + 1] = Poly.var(d, a % d)
        if a + 2 < r:
            ents[a][a + 2] = Poly.var(d, 0) * Poly.var(d, d - 1)
    g = MatrixPoly(ents)
    g_inv = exact_inverse(g)
    coeffs = {}
    for i in range(d):
        coeffs[(i, (0,) * d)] = -(g.partial(i) @ g_inv) + MatrixPoly.scalar_poly(Poly.const(d, i + 1), r)
    L = LieMap(d, r, coeffs)
    return NamedExample("flat", {"r": r, "d": d}, _rep_from_liemap(L, r + 1), L)


EXAMPLES = {
    "densities": densities,
    "omega1": omega1,
    "jets": jets,
    "sl2_order3": sl2_order3,
    "flat": flat,
}


def example_library(name: str, **params) -> NamedExample:
    if name not in EXAMPLES:
        raise ValueError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
    if "d" in params and not 1 <= params["d"] <= 3:
        raise ValueError("dimension d must be between 1 and 3")
    if "n" in params and not 0 <= params["n"] <= 6:
        raise ValueError("jet order n must be between 0 and 6")
    if "r" in params and not 1 <= params["r"] <= 6:
        raise ValueError("rank r must be between 1 and 6")
    return EXAMPLES[name](**params)


def verify_example(ex: NamedExample) -> dict:
    """Run every check a library example is expected to pass."""
    L, rho = ex.liemap, ex.rep
    reports = {
        "validate_rep": validate_rep(rho)["holds"],
        "cocycle": check_cocycle(L)["holds"],
        "higher_flatness": check_higher_flatness(L)["holds"],
        "round_trip": extract_rep(rep_to_liemap(rho, verify=False), rho.N, verify=False) == rho,
        "rep_liemap_cocycle": check_cocycle(rep_to_liemap(rho, verify=False))["holds"],
        "order_bound": check_order_bound(L)["bound_ok"],
        "lemma21": check_lemma21(rho)["holds"],
    }
    reports["all"] = all(reports.values())
    return reports
