"""Truncated Lie algebras of formal vector fields vanishing at the origin.

``build_algebra(d, N)`` models the quotient of the fields vanishing at 0 by
those vanishing to order ``N + 2``: the basis is every ``z^I d_j`` with
``1 <= wt(I) <= N + 1``, ordered by ``(wt(I), I, j)``. Subspaces are
:class:`Span` objects backed by a canonical reduced echelon form.
"""

from __future__ import annotations

import os
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .formal_core import (
    MultiIndex,
    Poly,
    Scalar,
    VectorField,
    indices_up_to,
    vf_bracket,
    weight,
)
from .linalg import Echelon, SparseVec

DEFAULT_MAX_DIM = 5000


class ResourceLimitError(RuntimeError):
    """The requested algebra is larger than the configured bound."""


def max_dim_bound() -> int:
    raw = os.environ.get("INFEQ_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"INFEQ_MAX_DIM must be an integer, got {raw!r}") from None


class BasisSymbol(NamedTuple):
    """The monomial field ``z^index d_direction`` (direction is 0-based)."""

    index: MultiIndex
    direction: int

    @property
    def circle_weight(self) -> int:
        return weight(self.index) - 1

    def field(self) -> VectorField:
        return VectorField.monomial(self.index, self.direction)

    def __str__(self) -> str:
        mono = "*".join(f"z{k}^{e}" if e > 1 else f"z{k}" for k, e in enumerate(self.index) if e)
        return f"{mono}*d{self.direction}"


def algebra_dimension(d: int, N: int) -> int:
    return d * (comb(N + 1 + d, d) - 1)


def monomial_bracket(I: MultiIndex, i: int, J: MultiIndex, j: int) -> List[Tuple[MultiIndex, int, int]]:
    """``[z^I d_i, z^J d_j] = J_i z^{I+J-e_i} d_j - I_j z^{I+J-e_j} d_i`` as (idx, dir, coef) terms."""
    out: Dict[Tuple[MultiIndex, int], int] = {}
    if J[i]:
        idx = tuple(a + b - (k == i) for k, (a, b) in enumerate(zip(I, J)))
        out[(idx, j)] = out.get((idx, j), 0) + J[i]
    if I[j]:
        idx = tuple(a + b - (k == j) for k, (a, b) in enumerate(zip(I, J)))
        out[(idx, i)] = out.get((idx, i), 0) - I[j]
    return [(idx, dr, c) for (idx, dr), c in out.items() if c]


class TruncatedLieAlgebra:
    """Finite-dimensional truncation of the Lie algebra of fields vanishing at 0."""

    def __init__(self, d: int, N: int, max_dim: Optional[int] = None):
        if d < 1:
            raise ValueError("dimension d must be at least 1")
        if N < 0:
            raise ValueError("truncation N must be non-negative")
        bound = max_dim_bound() if max_dim is None else max_dim
        size = algebra_dimension(d, N)
        if size > bound:
            raise ResourceLimitError(
                f"algebra g_{d}^{N} has dimension {size}, above the bound {bound} (set INFEQ_MAX_DIM)"
            )
        self.d = d
        self.N = N
        self.basis: Tuple[BasisSymbol, ...] = tuple(
            BasisSymbol(I, j) for I in indices_up_to(d, N + 1, min_weight=1) for j in range(d)
        )
        self.position: Dict[BasisSymbol, int] = {b: k for k, b in enumerate(self.basis)}
        self._structure: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]] = {}
        self._compute_structure()

    def _compute_structure(self) -> None:
        top = self.N + 1
        for a, b in combinations(range(len(self.basis)), 2):
            I, i = self.basis[a]
            J, j = self.basis[b]
            if weight(I) + weight(J) - 1 > top:
                continue
            terms = tuple(
                sorted((self.position[BasisSymbol(idx, dr)], c) for idx, dr, c in monomial_bracket(I, i, J, j))
            )
            if terms:
                self._structure[(a, b)] = terms

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedLieAlgebra) and (self.d, self.N) == (other.d, other.N)

    def __hash__(self):
        return hash((self.d, self.N))

    def __repr__(self) -> str:
        return f"TruncatedLieAlgebra(d={self.d}, N={self.N}, dim={len(self)})"

    def bracket_basis(self, a: int, b: int) -> SparseVec:
        """``[basis_a, basis_b]`` as a sparse coefficient vector."""
        if a == b:
            return {}
        if a < b:
            return {c: Scalar(v) for c, v in self._structure.get((a, b), ())}
        return {c: Scalar(-v) for c, v in self._structure.get((b, a), ())}

    def structure_constants(self) -> Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]]:
        """Nonzero brackets ``(a, b) -> ((c, coef), ...)`` for ``a < b``; integer coefficients."""
        return dict(self._structure)

    def bracket(self, x: SparseVec, y: SparseVec) -> SparseVec:
        out: SparseVec = {}
        for a, ca in x.items():
            if not ca:
                continue
            for b, cb in y.items():
                if not cb or a == b:
                    continue
                f = ca * cb
                for c, v in self.bracket_basis(a, b).items():
                    nv = out.get(c, Scalar(0)) + f * v
                    if nv:
                        out[c] = nv
                    else:
                        out.pop(c, None)
        return out

    def weight_of(self, k: int) -> int:
        return self.basis[k].circle_weight

    def to_field(self, x: SparseVec) -> VectorField:
        out = VectorField.zero(self.d)
        for k, c in x.items():
            out = out + self.basis[k].field().scale(c)
        return out

    def from_field(self, eta: VectorField) -> SparseVec:
        """Coordinates of a field in the quotient; terms of weight > N + 1 are dropped.

        Raises ``ValueError`` if the field does not vanish at the origin.
        """
        if eta.dim != self.d:
            raise ValueError("dimension mismatch")
        out: SparseVec = {}
        for j, comp in enumerate(eta.components):
            for idx, c in comp.terms.items():
                w = weight(idx)
                if w == 0:
                    raise ValueError("field does not vanish at the origin")
                if w <= self.N + 1:
                    out[self.position[BasisSymbol(idx, j)]] = c
        return out

    def euler(self) -> SparseVec:
        return {self.position[BasisSymbol(tuple(int(k == j) for k in range(self.d)), j)]: Scalar(1)
                for j in range(self.d)}

    def full_span(self) -> "Span":
        return Span(self, ({k: Scalar(1)} for k in range(len(self))))

    def zero_span(self) -> "Span":
        return Span(self)

    def weight_span(self, weights: Iterable[int]) -> "Span":
        ws = set(weights)
        return Span(self, ({k: Scalar(1)} for k, b in enumerate(self.basis) if b.circle_weight in ws))


def build_algebra(d: int, N: int, max_dim: Optional[int] = None) -> TruncatedLieAlgebra:
    return TruncatedLieAlgebra(d, N, max_dim=max_dim)


class Span:
    """Subspace of a truncated algebra in canonical reduced echelon form."""

    def __init__(self, ambient: TruncatedLieAlgebra, vectors: Iterable[SparseVec] = ()):
        self.ambient = ambient
        self._ech = Echelon(vectors)

    @classmethod
    def _from_echelon(cls, ambient, ech: Echelon) -> "Span":
        s = cls(ambient)
        s._ech = ech
        return s

    @property
    def dimension(self) -> int:
        return len(self._ech)

    def __len__(self) -> int:
        return len(self._ech)

    def vectors(self) -> List[SparseVec]:
        return [dict(r) for r in self._ech.basis()]

    def _check(self, other: "Span") -> None:
        if self.ambient != other.ambient:
            raise ValueError("spans live in different algebras")

    def contains(self, v: SparseVec) -> bool:
        return self._ech.contains(v)

    def contains_span(self, other: "Span") -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.vectors())

    def __add__(self, other: "Span") -> "Span":
        self._check(other)
        ech = self._ech.copy()
        for v in other.vectors():
            ech.add(v)
        return Span._from_echelon(self.ambient, ech)

    def bracket_span(self, other: "Span") -> "Span":
        """Span of all brackets ``[a, b]`` with ``a`` in self and ``b`` in other."""
        self._check(other)
        alg = self.ambient
        ech = Echelon()
        full = len(alg)
        left, right = self.vectors(), other.vectors()
        for x in left:
            for y in right:
                ech.add(alg.bracket(x, y))
                if len(ech) == full:
                    return Span._from_echelon(alg, ech)
        return Span._from_echelon(alg, ech)

    def is_zero(self) -> bool:
        return not len(self._ech)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Span):
            return NotImplemented
        return self.ambient == other.ambient and self._ech.basis() == other._ech.basis()

    def __hash__(self):
        return hash((self.ambient, tuple(self._ech.basis())))

    def weights(self) -> List[int]:
        """Circle weights of the pivot basis vectors (meaningful for graded spans)."""
        return sorted({self.ambient.weight_of(p) for p in self._ech.pivots()})

    def is_graded(self) -> bool:
        """True when every echelon row is homogeneous for the circle grading."""
        alg = self.ambient
        return all(len({alg.weight_of(k) for k in row}) == 1 for row in self.vectors())

    def __repr__(self) -> str:
        return f"Span(dim={self.dimension} in {self.ambient!r})"


def span_ops(a: Span, b, which: str):
    """``membership`` (b a vector), ``sum``, ``bracket_span`` or ``equals``."""
    if which == "membership":
        if isinstance(b, VectorField):
            b = a.ambient.from_field(b)
        return a.contains(b)
    if which == "sum":
        return a + b
    if which == "bracket_span":
        return a.bracket_span(b)
    if which == "equals":
        return a == b
    raise ValueError(f"unknown span operation {which!r}")


def _basis_bracket_span(alg: TruncatedLieAlgebra) -> Span:
    # [g, g] is spanned by brackets of basis pairs; each is at most two terms
    ech = Echelon()
    for (a, b), terms in alg.structure_constants().items():
        ech.add({c: Scalar(v) for c, v in terms})
    return Span._from_echelon(alg, ech)


def derived_series(alg: TruncatedLieAlgebra, k: int) -> Span:
    """``D^k``: ``D^0 = alg`` and ``D^{m+1} = [D^m, D^m]``."""
    if k < 0:
        raise ValueError("depth must be non-negative")
    if k == 0:
        return alg.full_span()
    current = _basis_bracket_span(alg)
    for _ in range(k - 1):
        if current.is_zero():
            break
        current = _self_bracket(current)
    return current


def _self_bracket(s: Span) -> Span:
    alg = s.ambient
    vecs = s.vectors()
    ech = Echelon()
    for x, y in combinations(vecs, 2):
        ech.add(alg.bracket(x, y))
    return Span._from_echelon(alg, ech)


def derived_series_all(alg: TruncatedLieAlgebra, depth: int) -> List[Span]:
    out = [alg.full_span()]
    if depth >= 1:
        out.append(_basis_bracket_span(alg))
    while len(out) <= depth:
        out.append(out[-1] if out[-1].is_zero() else _self_bracket(out[-1]))
    return out


class Abelianization(NamedTuple):
    commutator: Span
    quotient_dimension: int
    weight_zero_complement: bool


def abelianization(alg: TruncatedLieAlgebra) -> Abelianization:
    """``[g, g]``, ``dim g/[g, g]`` and whether weight-0 vectors span a complement."""
    comm = derived_series(alg, 1)
    return Abelianization(
        commutator=comm,
        quotient_dimension=len(alg) - comm.dimension,
        weight_zero_complement=(comm + alg.weight_span([0])) == alg.full_span(),
    )


def is_solvable(alg: TruncatedLieAlgebra) -> bool:
    """Computed, never assumed: the derived series reaches zero."""
    current = alg.full_span()
    while not current.is_zero():
        nxt = current.bracket_span(current)
        if nxt == current:
            return False
        current = nxt
    return True


def quotient_map(big: TruncatedLieAlgebra, small: TruncatedLieAlgebra, x: SparseVec) -> SparseVec:
    """Projection ``g_d^N -> g_d^M`` for ``M <= N``: drop weights above ``M``."""
    if big.d != small.d or small.N > big.N:
        raise ValueError("projection only goes to a smaller truncation of the same dimension")
    out = {}
    for k, c in x.items():
        sym = big.basis[k]
        if sym.circle_weight <= small.N:
            out[small.position[sym]] = c
    return out


def bracket_fields_truncated(alg: TruncatedLieAlgebra, x: VectorField, y: VectorField) -> VectorField:
    """Field bracket followed by deletion of monomials of weight above ``N + 1``."""
    return vf_bracket(x, y).truncate(alg.N + 1)
