"""Exact dense linear algebra over prime fields F_p for small p.

Matrices act on column vectors: column j of a matrix is the image of the
j-th standard basis vector.  Subspaces are stored in reduced row-echelon
form, so two equal subspaces compare and hash identically.

Row reduction over F_2 runs on bit-packed integer rows; other primes use
a plain dense sweep.  Everything here is a value: operations never mutate
their inputs and results are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

_SMALL_PRIMES = frozenset({
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97,
})


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p, restricted to 2 <= p <= 97."""

    p: int

    def __post_init__(self) -> None:
        if self.p not in _SMALL_PRIMES:
            raise ValueError(f"p must be a prime with 2 <= p <= 97, got {self.p!r}")

    def reduce(self, a: int) -> int:
        return a % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)


GF2 = PrimeField(2)


def _rref_gf2(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of bit-packed rows (bit j = column j)."""
    work = list(rows)
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        mask = 1 << col
        pivot_row = None
        for i in range(rank, len(work)):
            if work[i] & mask:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        piv = work[rank]
        for i in range(len(work)):
            if i != rank and (work[i] & mask):
                work[i] ^= piv
        pivots.append(col)
        rank += 1
    return work[:rank], pivots


def _rref_modp(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    work = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, len(work)):
            if work[i][col] % p:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        inv = pow(work[rank][col], p - 2, p)
        work[rank] = [(e * inv) % p for e in work[rank]]
        piv = work[rank]
        for i in range(len(work)):
            if i != rank and work[i][col] % p:
                c = work[i][col] % p
                work[i] = [(a - c * b) % p for a, b in zip(work[i], piv)]
        pivots.append(col)
        rank += 1
    return work[:rank], pivots


def _pack(row: Sequence[int]) -> int:
    acc = 0
    for j, e in enumerate(row):
        if e:
            acc |= 1 << j
    return acc


def _unpack(bits: int, ncols: int) -> tuple[int, ...]:
    return tuple((bits >> j) & 1 for j in range(ncols))


def rref(field: PrimeField, rows: Iterable[Sequence[int]], ncols: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Canonical RREF of the given row vectors; returns (rows, pivot columns)."""
    if field.p == 2:
        packed, pivots = _rref_gf2([_pack(r) for r in rows], ncols)
        return tuple(_unpack(b, ncols) for b in packed), tuple(pivots)
    reduced, pivots = _rref_modp([[e % field.p for e in r] for r in rows], ncols, field.p)
    return tuple(tuple(r) for r in reduced), tuple(pivots)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over F_p with the column-action convention."""

    field: PrimeField
    nrows: int
    ncols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.nrows:
            raise ValueError("row count does not match entries")
        p = self.field.p
        for row in self.entries:
            if len(row) != self.ncols:
                raise ValueError("column count does not match entries")
            for e in row:
                if not 0 <= e < p:
                    raise ValueError("entries must be reduced mod p")

    @classmethod
    def build(cls, field: PrimeField, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "Matrix":
        tup = tuple(tuple(field.reduce(int(e)) for e in row) for row in rows)
        if ncols is None:
            ncols = len(tup[0]) if tup else 0
        return cls(field, len(tup), ncols, tup)

    @classmethod
    def zeros(cls, field: PrimeField, nrows: int, ncols: int) -> "Matrix":
        return cls(field, nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        return cls(field, n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: PrimeField, nrows: int, columns: Sequence[Sequence[int]]) -> "Matrix":
        cols = [tuple(field.reduce(int(e)) for e in c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length does not match nrows")
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls(field, nrows, len(cols), rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i in range(self.nrows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows,
                      tuple(self.column(j) for j in range(self.ncols)))

    def neg(self) -> "Matrix":
        p = self.field.p
        return Matrix(self.field, self.nrows, self.ncols,
                      tuple(tuple((-e) % p for e in row) for row in self.entries))

    def add(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        p = self.field.p
        return Matrix(self.field, self.nrows, self.ncols,
                      tuple(tuple((a + b) % p for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.entries, other.entries)))

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError("field mismatch")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        p = self.field.p
        if p == 2:
            rhs = [_pack(r) for r in other.entries]
            out = []
            for row in self.entries:
                acc = 0
                for k, e in enumerate(row):
                    if e:
                        acc ^= rhs[k]
                out.append(_unpack(acc, other.ncols))
            return Matrix(self.field, self.nrows, other.ncols, tuple(out))
        out = []
        for row in self.entries:
            new_row = []
            for j in range(other.ncols):
                acc = 0
                for k, e in enumerate(row):
                    if e:
                        acc += e * other.entries[k][j]
                new_row.append(acc % p)
            out.append(tuple(new_row))
        return Matrix(self.field, self.nrows, other.ncols, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Image of a column vector under this matrix."""
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match ncols")
        p = self.field.p
        out = [0] * self.nrows
        for j, v in enumerate(vec):
            if v % p:
                for i in range(self.nrows):
                    e = self.entries[i][j]
                    if e:
                        out[i] += e * v
        return tuple(e % p for e in out)

    def power(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return all(e == 0 for row in self.entries for e in row)

    def rank(self) -> int:
        _, pivots = rref(self.field, self.entries, self.ncols)
        return len(pivots)

    def kernel(self) -> "Subspace":
        """Null space {v : M v = 0} as a subspace of F_p^ncols."""
        reduced, pivots = rref(self.field, self.entries, self.ncols)
        p = self.field.p
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [0] * self.ncols
            v[free] = 1
            for i, pc in enumerate(pivots):
                v[pc] = (-reduced[i][free]) % p
            basis.append(v)
        return Subspace.span(self.field, self.ncols, basis)

    def image(self) -> "Subspace":
        """Column space as a subspace of F_p^nrows."""
        return Subspace.span(self.field, self.nrows, self.columns())

    def map_subspace(self, s: "Subspace") -> "Subspace":
        """Image of a subspace under this matrix."""
        if s.ambient_dim != self.ncols:
            raise ValueError("ambient dimension does not match ncols")
        return Subspace.span(self.field, self.nrows, [self.apply(b) for b in s.basis])

    def preimage(self, s: "Subspace") -> "Subspace":
        """Full preimage {v : M v in S}; always contains the kernel."""
        if s.ambient_dim != self.nrows:
            raise ValueError("ambient dimension does not match nrows")
        ann = s.annihilator()
        constraints = Matrix.build(self.field, ann.basis, self.nrows) @ self
        return constraints.kernel()

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        augmented = [list(self.entries[i]) + [1 if j == i else 0 for j in range(n)]
                     for i in range(n)]
        reduced, pivots = rref(self.field, augmented, 2 * n)
        if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) != n:
            raise ValueError("matrix is singular")
        return Matrix(self.field, n, n, tuple(tuple(row[n:]) for row in reduced))


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    """Block-diagonal sum of two matrices over the same field."""
    if a.field != b.field:
        raise ValueError("field mismatch")
    rows = [row + (0,) * b.ncols for row in a.entries]
    rows += [(0,) * a.ncols + row for row in b.entries]
    return Matrix(a.field, a.nrows + b.nrows, a.ncols + b.ncols, tuple(rows))


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n held as a canonical reduced row-echelon basis."""

    field: PrimeField
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.ambient_dim < 0:
            raise ValueError("negative ambient dimension")
        canonical, _ = rref(self.field, self.basis, self.ambient_dim)
        if canonical != self.basis:
            raise ValueError("basis is not in canonical reduced row-echelon form")

    @classmethod
    def span(cls, field: PrimeField, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        vecs = [tuple(field.reduce(int(e)) for e in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        canonical, _ = rref(field, vecs, ambient_dim)
        return cls(field, ambient_dim, canonical)

    @classmethod
    def zero(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, ())

    @classmethod
    def full(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim,
                   tuple(tuple(1 if i == j else 0 for j in range(ambient_dim))
                         for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> tuple[int, ...]:
        out = []
        for row in self.basis:
            for j, e in enumerate(row):
                if e:
                    out.append(j)
                    break
        return tuple(out)

    def contains_vector(self, vec: Sequence[int]) -> bool:
        if len(vec) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        p = self.field.p
        v = [e % p for e in vec]
        for row, pc in zip(self.basis, self.pivots()):
            c = v[pc]
            if c:
                for j in range(self.ambient_dim):
                    v[j] = (v[j] - c * row[j]) % p
        return all(e == 0 for e in v)

    def contains(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains_vector(b) for b in other.basis)

    def _check_compatible(self, other: "Subspace") -> None:
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")

    def sum_with(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.span(self.field, self.ambient_dim, list(self.basis) + list(other.basis))

    def annihilator(self) -> "Subspace":
        """All v with b . v = 0 for every basis vector b (dot-product dual)."""
        return Matrix.build(self.field, self.basis, self.ambient_dim).kernel()

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return self.annihilator().sum_with(other.annihilator()).annihilator()

    def coordinates(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of a member vector in the echelon basis; raises if absent."""
        p = self.field.p
        coords = tuple(vec[pc] % p for pc in self.pivots())
        recon = [0] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c:
                for j in range(self.ambient_dim):
                    recon[j] = (recon[j] + c * row[j]) % p
        if tuple(recon) != tuple(e % p for e in vec):
            raise ValueError("vector is not in the subspace")
        return coords


def solve_linear_system(field: PrimeField, n_unknowns: int, constraint_rows: Iterable[Sequence[int]]) -> Subspace:
    """Solution space of a homogeneous linear system over F_p."""
    rows = list(constraint_rows)
    return Matrix.build(field, rows, n_unknowns).kernel()
