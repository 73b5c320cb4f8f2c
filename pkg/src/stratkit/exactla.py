"""Exact linear algebra over the rationals and prime fields.

Vectors are tuples of field elements, matrices are immutable row-major
tables.  Elements of F_p are Python ints in ``range(p)``; rationals are
:class:`fractions.Fraction`.  Subspaces are stored as the reduced row echelon
form of a spanning set, which makes equality of subspaces a plain comparison.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence


class InconsistentSystem(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the image."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Either Q (``p == 0``) or F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise ValueError(f"field characteristic {p} is not prime")
        self.p = p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def kind(self) -> str:
        return "prime" if self.p else "rational"

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or string into the field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def parse(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            q = Fraction(int(num), int(den))
        else:
            q = Fraction(int(s))
        return self(q)

    def fmt(self, x) -> str:
        if self.p:
            return str(x)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return 1 / Fraction(x)

    def norm(self, x):
        return x % self.p if self.p else x

    def elements(self):
        if not self.p:
            raise ValueError("Q is infinite")
        return range(self.p)

    def random(self, rng: random.Random, height: int = 3):
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-height, height))

    def to_json(self) -> dict:
        return {"kind": "prime", "p": self.p} if self.p else {"kind": "rational"}

    @classmethod
    def from_json(cls, doc: dict) -> "Field":
        kind = doc.get("kind")
        if kind in ("prime", "PrimeField", "GF", "Fp"):
            return cls(int(doc["p"]))
        if kind in ("rational", "Rationals", "QQ", "Q"):
            return cls(0)
        raise ValueError(f"unknown field kind {kind!r}")


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: Sequence[Sequence]):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(r) for r in data)
        if len(self.data) != rows or any(len(r) != cols for r in self.data):
            raise ValueError(f"entries do not form a {rows}x{cols} matrix")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [tuple(field(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, rows)

    @classmethod
    def _raw(cls, field, rows, cols, data):
        m = object.__new__(cls)
        m.field = field
        m.rows = rows
        m.cols = cols
        m.data = data
        return m

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls._raw(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: Field, rows: int, columns: Sequence[Sequence]) -> "Matrix":
        cols = len(columns)
        return cls._raw(field, rows, cols, tuple(tuple(columns[j][i] for j in range(cols)) for i in range(rows)))

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self.data for x in r)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self.data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.data) for j in range(self.cols)]

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.field.p
        cols = other.columns()
        if p:
            data = tuple(
                tuple(sum(a * b for a, b in zip(r, c) if a) % p for c in cols) for r in self.data
            )
        else:
            z = Fraction(0)
            data = tuple(
                tuple(sum((a * b for a, b in zip(r, c) if a), z) for c in cols) for r in self.data
            )
        return Matrix._raw(self.field, self.rows, other.cols, data)

    def apply(self, v: Sequence) -> tuple:
        p = self.field.p
        if p:
            return tuple(sum(a * b for a, b in zip(r, v) if a) % p for r in self.data)
        z = Fraction(0)
        return tuple(sum((a * b for a, b in zip(r, v) if a), z) for r in self.data)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        n = self.field.norm
        return Matrix._raw(
            self.field, self.rows, self.cols,
            tuple(tuple(n(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
        )

    def __neg__(self) -> "Matrix":
        n = self.field.norm
        return Matrix._raw(self.field, self.rows, self.cols, tuple(tuple(n(-a) for a in r) for r in self.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        n = self.field.norm
        return Matrix._raw(self.field, self.rows, self.cols, tuple(tuple(n(c * a) for a in r) for r in self.data))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Matrix._raw(self.field, self.rows, self.cols + other.cols,
                           tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return Matrix._raw(self.field, self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, len(rows), len(cols),
                           tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def rank(self) -> int:
        return rref(self).rank

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        sol = solve(self, Matrix.identity(self.field, self.rows))
        if sol.nullspace.dim:
            raise ZeroDivisionError("singular matrix")
        return sol.particular

    def to_json(self) -> list:
        return [[self.field.fmt(x) for x in r] for r in self.data]


def block_diagonal(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    z = field.zero
    data = []
    c0 = 0
    for b in blocks:
        for r in b.data:
            data.append((z,) * c0 + r + (z,) * (cols - c0 - b.cols))
        c0 += b.cols
    return Matrix._raw(field, rows, cols, tuple(data))


def _rref_lists(rows: list[list], ncols: int, field: Field) -> tuple[list[list], list[int]]:
    """In-place Gauss-Jordan on a list of mutable rows; returns nonzero rows and pivots."""
    p = field.p
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        row = rows[r]
        lead = row[c]
        if p:
            if lead != 1:
                inv = pow(lead, -1, p)
                row = [x * inv % p for x in row]
        elif lead != 1:
            row = [x / lead for x in row]
        rows[r] = row
        nz = [j for j in range(c, ncols) if row[j]]
        for i in range(nrows):
            if i == r:
                continue
            other = rows[i]
            f = other[c]
            if not f:
                continue
            if p:
                for j in nz:
                    other[j] = (other[j] - f * row[j]) % p
            else:
                for j in nz:
                    other[j] = other[j] - f * row[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


class RREF(NamedTuple):
    rank: int
    reduced: Matrix
    pivot_cols: tuple


def rref(m: Matrix) -> RREF:
    """Reduced row echelon form; ``reduced`` keeps only the nonzero rows."""
    rows, pivots = _rref_lists([list(r) for r in m.data], m.cols, m.field)
    reduced = Matrix._raw(m.field, len(rows), m.cols, tuple(tuple(r) for r in rows))
    return RREF(len(rows), reduced, tuple(pivots))


class Subspace:
    """A subspace of ``field^ambient`` kept in canonical RREF."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: Field, ambient: int, vectors: Iterable[Sequence] = (), _canonical=False):
        self.field = field
        self.ambient = ambient
        if _canonical:
            basis, pivots = vectors
        else:
            rows = [list(v) for v in vectors]
            for r in rows:
                if len(r) != ambient:
                    raise ValueError(f"vector of length {len(r)} in ambient dimension {ambient}")
            rows, pivots = _rref_lists(rows, ambient, field)
            basis = tuple(tuple(r) for r in rows)
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, ((), ()), _canonical=True)

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        ident = Matrix.identity(field, ambient)
        return cls(field, ambient, (ident.data, tuple(range(ambient))), _canonical=True)

    @classmethod
    def column_space(cls, m: Matrix) -> "Subspace":
        return cls(m.field, m.rows, m.columns())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient - len(self.basis)

    def basis_matrix(self) -> Matrix:
        return Matrix._raw(self.field, self.dim, self.ambient, self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise ValueError(f"ambient mismatch: {self.ambient} vs {other.ambient}")

    def reduce(self, v: Sequence) -> list:
        """Subtract the span component at pivot positions; result vanishes on pivots."""
        p = self.field.p
        w = list(v)
        for b, c in zip(self.basis, self.pivots):
            f = w[c]
            if f:
                if p:
                    w = [(x - f * y) % p for x, y in zip(w, b)]
                else:
                    w = [x - f * y for x, y in zip(w, b)]
        return w

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of ``v`` in the canonical basis; raises if ``v`` is outside."""
        if any(self.reduce(v)):
            raise InconsistentSystem("vector not in subspace")
        return tuple(v[c] for c in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.field, self.ambient, self.basis + other.basis)

    def extend(self, vectors: Iterable[Sequence]) -> "Subspace":
        return Subspace(self.field, self.ambient, self.basis + tuple(tuple(v) for v in vectors))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.dim or not other.dim:
            return Subspace.zero(self.field, self.ambient)
        # left kernel of [U; -V] gives the coefficient pairs (a, b) with aU = bV
        n = self.field.norm
        stacked = Matrix._raw(
            self.field, self.dim + other.dim, self.ambient,
            self.basis + tuple(tuple(n(-x) for x in r) for r in other.basis),
        )
        ker = nullspace(stacked.T)
        u = self.basis_matrix()
        vecs = []
        for coeffs in ker.basis:
            a = Matrix._raw(self.field, 1, self.dim, (coeffs[: self.dim],))
            vecs.append((a @ u).data[0])
        return Subspace(self.field, self.ambient, vecs)

    def complement_indices(self) -> tuple:
        piv = set(self.pivots)
        return tuple(c for c in range(self.ambient) if c not in piv)

    def quotient_lift(self) -> Matrix:
        """Standard basis vectors at the non-pivot columns: a canonical lift of a basis of ambient/self."""
        idx = self.complement_indices()
        z, o = self.field.zero, self.field.one
        return Matrix._raw(self.field, len(idx), self.ambient,
                           tuple(tuple(o if j == c else z for j in range(self.ambient)) for c in idx))

    def quotient_coordinates(self, v: Sequence) -> tuple:
        """Coordinates of ``v + self`` against :meth:`quotient_lift`."""
        w = self.reduce(v)
        return tuple(w[c] for c in self.complement_indices())


class SubspaceOps(NamedTuple):
    sum: Subspace
    intersection: Subspace
    quotient_lift: Matrix


def subspace_ops(u: Subspace, v: Subspace) -> SubspaceOps:
    """Sum, intersection and a canonical lift of a basis of ``ambient / u``."""
    u._check(v)
    return SubspaceOps(u + v, u.intersection(v), u.quotient_lift())


def nullspace(a: Matrix) -> Subspace:
    """Kernel of ``a`` acting on column vectors."""
    red = rref(a)
    field = a.field
    n = field.norm
    pivots = red.pivot_cols
    piv_set = set(pivots)
    vecs = []
    for f in range(a.cols):
        if f in piv_set:
            continue
        v = [field.zero] * a.cols
        v[f] = field.one
        for r, c in enumerate(pivots):
            v[c] = n(-red.reduced.data[r][f])
        vecs.append(v)
    return Subspace(field, a.cols, vecs)


class Solution(NamedTuple):
    particular: Matrix
    nullspace: Subspace


def solve(a: Matrix, b: Matrix) -> Solution:
    """Solve ``a @ x = b``; the particular solution has zero free coordinates.

    Raises :class:`InconsistentSystem` when some column of ``b`` is outside
    the column space of ``a``.
    """
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: {a.rows} vs {b.rows}")
    field = a.field
    aug = [list(ra) + list(rb) for ra, rb in zip(a.data, b.data)]
    rows, pivots = _rref_lists(aug, a.cols + b.cols, field)
    if pivots and pivots[-1] >= a.cols:
        raise InconsistentSystem("right-hand side not in the column space")
    z = field.zero
    x = [[z] * b.cols for _ in range(a.cols)]
    for r, c in enumerate(pivots):
        x[c] = rows[r][a.cols:]
    particular = Matrix._raw(field, a.cols, b.cols, tuple(tuple(r) for r in x))
    return Solution(particular, nullspace(a))


def solve_vector(a: Matrix, v: Sequence) -> tuple:
    """Canonical solution of ``a @ x = v`` for a single vector."""
    b = Matrix._raw(a.field, len(v), 1, tuple((x,) for x in v))
    return solve(a, b).particular.column(0)
