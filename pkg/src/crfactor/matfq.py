"""Dense matrices, canonical subspaces, and linear solving over F_q.

Matrices are immutable row-major tuples of integer-encoded field
elements, acting on row vectors from the right: w = v * M.  Subspaces
are always stored by their reduced row-echelon basis, so equality of
subspaces is equality of tuples.  Dimensions stay small (d <= ~12), so
everything here is straightforward cubic-time code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FieldMismatch, InputError
from .gf import Field

Vector = tuple[int, ...]


class Matrix:
    """An immutable rows x cols matrix over a Field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, rows: int, cols: int, entries: Sequence[int]):
        if len(entries) != rows * cols:
            raise InputError("entry count does not match matrix shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise InputError("ragged rows")
            flat.extend(row)
        return cls(field, r, c, flat)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        flat = [0] * (n * n)
        for i in range(n):
            flat[i * n + i] = 1
        return cls(field, n, n, flat)

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, [0] * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_list(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(
            " ".join(str(v) for v in self.row(i)) for i in range(self.rows)
        )
        return f"Matrix({self.rows}x{self.cols} [{body}])"

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatch("matrix product across different fields")
        if self.cols != other.rows:
            raise InputError("incompatible shapes")
        F = self.field
        mul, add = F.mul, F.add
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for j in range(m):
                s = 0
                for t in range(k):
                    at = arow[t]
                    if at:
                        s = add(s, mul(at, b[t * m + j]))
                out[i * m + j] = s
        return Matrix(F, n, m, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatch("matrix sum across different fields")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("incompatible shapes")
        add = self.field.add
        out = [add(x, y) for x, y in zip(self.entries, other.entries)]
        return Matrix(self.field, self.rows, self.cols, out)

    def __sub__(self, other: "Matrix") -> "Matrix":
        neg = self.field.neg
        return self + Matrix(
            other.field, other.rows, other.cols, [neg(x) for x in other.entries]
        )

    def scale(self, c: int) -> "Matrix":
        mul = self.field.mul
        return Matrix(
            self.field, self.rows, self.cols, [mul(c, x) for x in self.entries]
        )

    def transpose(self) -> "Matrix":
        out = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j * self.rows + i] = self.entries[i * self.cols + j]
        return Matrix(self.field, self.cols, self.rows, out)

    def apply(self, v: Sequence[int]) -> Vector:
        """Row vector action v -> v * M."""
        F = self.field
        mul, add = F.mul, F.add
        m = self.cols
        out = [0] * m
        for i, vi in enumerate(v):
            if vi:
                row = self.entries[i * m : (i + 1) * m]
                for j in range(m):
                    rj = row[j]
                    if rj:
                        out[j] = add(out[j], mul(vi, rj))
        return tuple(out)

    def is_invertible(self) -> bool:
        if self.rows != self.cols:
            return False
        return rref(self)[1] == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise InputError("only square matrices invert")
        n = self.rows
        F = self.field
        aug = [
            list(self.row(i)) + [1 if j == i else 0 for j in range(n)]
            for i in range(n)
        ]
        reduced, rank, _ = _rref_rows(aug, F)
        if rank < n:
            raise InputError("matrix is singular")
        return Matrix.from_rows(F, [row[n:] for row in reduced])

    def pow(self, e: int) -> "Matrix":
        if e < 0:
            return self.inverse().pow(-e)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def _rref_rows(rows: list[list[int]], F: Field) -> tuple[list[list[int]], int, list[int]]:
    """In-place reduced row echelon over F; returns (rows, rank, pivots)."""
    mul, add, inv, neg = F.mul, F.add, F.inv, F.neg
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = inv(rows[r][c])
        if scale != 1:
            rows[r] = [mul(scale, x) for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                factor = neg(rows[i][c])
                target = rows[i]
                rows[i] = [
                    add(target[j], mul(factor, prow[j])) for j in range(ncols)
                ]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, r, pivots


def rref(m: Matrix) -> tuple[Matrix, int, tuple[int, ...]]:
    """Canonical reduced row-echelon form with rank and pivot columns."""
    rows, rank, pivots = _rref_rows(m.row_list(), m.field)
    return Matrix.from_rows(m.field, rows) if m.rows else m, rank, tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^d held by its canonical RREF basis.

    Two Subspace objects are equal iff they describe the same subspace,
    because the RREF basis with zero rows dropped is unique.
    """

    field: Field
    ambient_dim: int
    basis: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_vectors(
        cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence[int]]
    ) -> "Subspace":
        rows = [list(v) for v in vectors if any(v)]
        if not rows:
            return cls(field, ambient_dim, (), ())
        reduced, rank, pivots = _rref_rows(rows, field)
        basis = tuple(tuple(r) for r in reduced[:rank])
        return cls(field, ambient_dim, basis, tuple(pivots))

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        ident = Matrix.identity(field, ambient_dim)
        return cls(
            field,
            ambient_dim,
            tuple(ident.row(i) for i in range(ambient_dim)),
            tuple(range(ambient_dim)),
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def key(self) -> tuple[int, ...]:
        """Flattened basis; total order used for deterministic tie-breaks."""
        return tuple(x for row in self.basis for x in row)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Residue of v after subtracting its projection onto the basis."""
        F = self.field
        mul, add, neg = F.mul, F.add, F.neg
        w = list(v)
        for row, c in zip(self.basis, self.pivots):
            if w[c]:
                factor = neg(w[c])
                for j in range(self.ambient_dim):
                    if row[j]:
                        w[j] = add(w[j], mul(factor, row[j]))
        return tuple(w)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coefficients of v in the RREF basis; raises if v is outside."""
        w = self.reduce(v)
        if any(w):
            raise InputError("vector outside subspace")
        return tuple(v[c] for c in self.pivots)

    def intersection(self, other: "Subspace") -> "Subspace":
        # Zassenhaus-free version: intersect by solving membership on sums
        if self.ambient_dim != other.ambient_dim:
            raise InputError("ambient dimension mismatch")
        F = self.field
        d = self.ambient_dim
        # rows of [A | A] and [B | 0]; echelonize left block, read kernel part
        rows = [list(b) + list(b) for b in self.basis]
        rows += [list(b) + [0] * d for b in other.basis]
        reduced, rank, pivots = _rref_rows(rows, F)
        inter = []
        for row in reduced[:rank]:
            if not any(row[:d]) and any(row[d:]):
                inter.append(row[d:])
        return Subspace.from_vectors(F, d, inter)


def spin(gens: Sequence[Matrix], seed: Subspace) -> Subspace:
    """Smallest subspace containing seed and invariant under all gens.

    Breadth-first closure: keep an RREF accumulator, push generator
    images of every newly added basis vector until nothing new appears.
    """
    F = seed.field
    d = seed.ambient_dim
    acc = Subspace.from_vectors(F, d, seed.basis)
    frontier = list(acc.basis)
    while frontier and acc.dim < d:
        v = frontier.pop()
        for g in gens:
            img = g.apply(v)
            res = acc.reduce(img)
            if any(res):
                acc = Subspace.from_vectors(F, d, list(acc.basis) + [res])
                frontier.append(res)
                if acc.dim == d:
                    return Subspace.full(F, d)
    return acc


def spin_vector(gens: Sequence[Matrix], field: Field, v: Sequence[int]) -> Subspace:
    return spin(gens, Subspace.from_vectors(field, len(v), [v]))


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; on pure tensors (u o v)(a o b) = (ua) o (vb)."""
    if a.field != b.field:
        raise FieldMismatch("kronecker across different fields")
    F = a.field
    mul = F.mul
    ra, ca, rb, cb = a.rows, a.cols, b.rows, b.cols
    out = [0] * (ra * rb * ca * cb)
    cols = ca * cb
    for i1 in range(ra):
        for j1 in range(ca):
            x = a[i1, j1]
            if not x:
                continue
            for i2 in range(rb):
                base = (i1 * rb + i2) * cols + j1 * cb
                brow = b.entries[i2 * cb : (i2 + 1) * cb]
                for j2 in range(cb):
                    if brow[j2]:
                        out[base + j2] = mul(x, brow[j2])
    return Matrix(F, ra * rb, ca * cb, out)


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    """Block diagonal sum diag(a, b)."""
    if a.field != b.field:
        raise FieldMismatch("direct sum across different fields")
    F = a.field
    rows = a.rows + b.rows
    cols = a.cols + b.cols
    out = [0] * (rows * cols)
    for i in range(a.rows):
        out[i * cols : i * cols + a.cols] = a.entries[i * a.cols : (i + 1) * a.cols]
    for i in range(b.rows):
        start = (a.rows + i) * cols + a.cols
        out[start : start + b.cols] = b.entries[i * b.cols : (i + 1) * b.cols]
    return Matrix(F, rows, cols, out)


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set: particular + any element of the kernel."""

    particular: Vector
    kernel: Subspace


def nullspace(a: Matrix) -> Subspace:
    """Kernel of the row action, {v : v * a = 0}, as a canonical subspace.

    v * a is a combination of the rows of a, so the kernel is the space
    of linear relations among them: echelonize [a | I] and collect the
    tag halves of rows whose main half vanished.
    """
    F = a.field
    n = a.rows
    rows = [
        list(a.row(i)) + [1 if j == i else 0 for j in range(n)] for i in range(n)
    ]
    reduced, _, _ = _rref_rows(rows, F)
    d = a.cols
    rels = [row[d:] for row in reduced if not any(row[:d]) and any(row[d:])]
    return Subspace.from_vectors(F, n, rels)


def solve_linear(a: Matrix, b: Sequence[int]) -> LinearSolution | None:
    """Solve v * a = b; None when the system is inconsistent.

    The solution set is the returned particular vector plus the kernel
    subspace {v : v * a = 0}.
    """
    if len(b) != a.cols:
        raise InputError("right-hand side has wrong length")
    F = a.field
    n = a.rows
    rows = [
        list(a.row(i)) + [1 if j == i else 0 for j in range(n)] for i in range(n)
    ]
    reduced, rank, pivots = _rref_rows(rows, F)
    d = a.cols
    # express b in terms of the echelonized rows
    mul, add, neg = F.mul, F.add, F.neg
    w = list(b) + [0] * n
    for row, c in zip(reduced, pivots):
        if c < d and w[c]:
            factor = neg(w[c])
            for j in range(d + n):
                if row[j]:
                    w[j] = add(w[j], mul(factor, row[j]))
    if any(w[:d]):
        return None
    particular = tuple(neg(x) for x in w[d:])
    return LinearSolution(particular=particular, kernel=nullspace(a))
