"""Exact linear algebra over the Gaussian rationals.

Constant matrices and a sparse reduced row-echelon accumulator. The echelon
form is the canonical representative of a subspace, so two spans are equal
exactly when their pivot rows are equal.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .formal_core import ONE, ZERO, Scalar

SparseVec = Dict[int, Scalar]


class Matrix:
    """Square or rectangular constant matrix with exact entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(Scalar.coerce(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def _raw(cls, rows) -> "Matrix":
        # rows: tuple of tuples of Scalar, rectangular
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0]) if rows else 0
        return m

    @classmethod
    def zero(cls, n: int, m: Optional[int] = None) -> "Matrix":
        return cls([[ZERO] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "Matrix":
        """Matrix unit ``E_ij`` (0-based)."""
        return cls([[ONE if (a, b) == (i, j) else ZERO for b in range(n)] for a in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __bool__(self) -> bool:
        return any(x for row in self.rows for x in row)

    def is_zero(self) -> bool:
        return not self

    def _same_shape(self, other: "Matrix") -> None:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("matrix shape mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> "Matrix":
        c = Scalar.coerce(c)
        return Matrix._raw(tuple(tuple(a * c for a in r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("matrix shape mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for col in cols:
                acc = ZERO
                for a, b in zip(r, col):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Matrix._raw(tuple(out))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    __rmul__ = scale

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def trace(self) -> Scalar:
        acc = ZERO
        for i in range(min(self.nrows, self.ncols)):
            acc = acc + self.rows[i][i]
        return acc

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse; ``ZeroDivisionError`` if singular."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("only square matrices are invertible")
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if aug[i][col]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [x * inv for x in aug[col]]
            for i in range(n):
                f = aug[i][col]
                if i != col and f:
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
        return Matrix(row[n:] for row in aug)

    def __repr__(self) -> str:
        return "Matrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


# ---------------------------------------------------------------- echelon form

class Echelon:
    """Incrementally built reduced row-echelon basis of sparse vectors.

    Rows are keyed by pivot column; every row has pivot entry 1 and is zero
    in every other pivot column.
    """

    __slots__ = ("rows",)

    def __init__(self, vectors: Iterable[SparseVec] = ()):
        self.rows: Dict[int, SparseVec] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        return e

    def reduce(self, v: SparseVec) -> SparseVec:
        v = {k: c for k, c in v.items() if c}
        for p in [k for k in v if k in self.rows]:
            f = v.get(p)
            if not f:
                continue
            for k, c in self.rows[p].items():
                nv = v.get(k, ZERO) - f * c
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def contains(self, v: SparseVec) -> bool:
        return not self.reduce(v)

    def add(self, v: SparseVec) -> bool:
        """Insert ``v``; return True iff the span grew."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        r = {k: c * inv for k, c in r.items()}
        for q, row in self.rows.items():
            f = row.get(p)
            if f:
                for k, c in r.items():
                    nv = row.get(k, ZERO) - f * c
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[p] = r
        return True

    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def basis(self) -> List[Tuple[Tuple[int, Scalar], ...]]:
        """Canonical, hashable form of the rows."""
        return [tuple(sorted(self.rows[p].items())) for p in self.pivots()]


def solve(equations: Sequence[Tuple[SparseVec, Scalar]], n_unknowns: int) -> Optional[List[Scalar]]:
    """Solve a sparse linear system exactly.

    Returns one solution (free variables set to zero) or None if the system is
    inconsistent.
    """
    ech = Echelon()
    rhs_col = n_unknowns
    for coeffs, rhs in equations:
        row = dict(coeffs)
        if rhs:
            row[rhs_col] = Scalar.coerce(rhs)
        ech.add(row)
    if rhs_col in ech.rows:
        return None
    x = [ZERO] * n_unknowns
    for p, row in ech.rows.items():
        x[p] = row.get(rhs_col, ZERO)
    return x
