"""Exact integer and rational linear algebra.

Everything here works on plain nested lists/tuples of ``int`` or
``fractions.Fraction``.  A matrix is a sequence of rows.  A collection of
lattice generators or subspace spanning vectors is a sequence of vectors
(one vector per generator), which is the transpose of the "generators as
columns" picture.

No floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

INFINITE = math.inf

Vector = tuple  # tuple of Fraction
Matrix = list  # list of rows


class LinalgError(ValueError):
    pass


class DimensionError(LinalgError):
    pass


def as_fraction_vector(v) -> tuple:
    return tuple(Fraction(x) for x in v)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list]:
    if not A:
        return []
    inner = len(B)
    if any(len(row) != inner for row in A):
        raise DimensionError("inner dimensions disagree")
    ncols = len(B[0]) if B else 0
    return [
        [sum((A[i][k] * B[k][j] for k in range(inner)), 0) for j in range(ncols)]
        for i in range(len(A))
    ]


def transpose(A, ncols: Optional[int] = None) -> list[list]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def common_denominator(rows) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = math.lcm(d, Fraction(x).denominator)
    return d


def det(M) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    if any(len(row) != n for row in A):
        raise DimensionError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        result *= piv
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] / piv
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return sign * result


def rref(rows, ncols: Optional[int] = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns the nonzero rows and pivot columns."""
    A = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


# ---------------------------------------------------------------------------
# Integer normal forms


def hnf(M) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``H == U @ M``, ``U`` unimodular, nonzero rows of
    ``H`` first in echelon form with positive pivots and the entries above each
    pivot reduced into ``[0, pivot)``.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity(m)
    row = 0
    for col in range(n):
        if row == m:
            break
        while True:
            nz = [r for r in range(row, m) if A[r][col] != 0]
            if not nz:
                break
            p = min(nz, key=lambda r: (abs(A[r][col]), r))
            if p != row:
                A[row], A[p] = A[p], A[row]
                U[row], U[p] = U[p], U[row]
            if len(nz) == 1:
                break
            piv = A[row][col]
            for r in range(row + 1, m):
                if A[r][col] != 0:
                    q = A[r][col] // piv
                    A[r] = [a - q * b for a, b in zip(A[r], A[row])]
                    U[r] = [a - q * b for a, b in zip(U[r], U[row])]
        if A[row][col] == 0:
            continue
        if A[row][col] < 0:
            A[row] = [-a for a in A[row]]
            U[row] = [-a for a in U[row]]
        piv = A[row][col]
        for r in range(row):
            q = A[r][col] // piv
            if q:
                A[r] = [a - q * b for a, b in zip(A[r], A[row])]
                U[r] = [a - q * b for a, b in zip(U[r], U[row])]
        row += 1
    return A, U


@dataclass(frozen=True)
class SmithDecomposition:
    S: list
    U: list
    V: list

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(M) -> SmithDecomposition:
    """Smith normal form ``U @ M @ V == S``.

    Pivot choice: smallest nonzero absolute value in the remaining block,
    ties broken by row-major position.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return SmithDecomposition(A, U, V)
            i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // piv)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // piv)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return SmithDecomposition(A, U, V)


# ---------------------------------------------------------------------------
# Lattices in Q^n


def _scaled_integer_rows(vectors, extra=()) -> tuple[int, list[list[int]]]:
    D = common_denominator(list(vectors) + list(extra))
    return D, [[int(Fraction(x) * D) for x in v] for v in vectors]


@dataclass(frozen=True)
class LatticeBasis:
    """Echelon Z-basis of a finitely generated subgroup of Q^n."""

    dim: int
    rows: tuple  # tuple of Fraction vectors, echelon, positive pivots
    pivots: tuple

    @classmethod
    def from_generators(cls, gens, dim: int) -> "LatticeBasis":
        gens = [as_fraction_vector(v) for v in gens]
        if any(len(v) != dim for v in gens):
            raise DimensionError("generator length does not match ambient dimension")
        if not gens:
            return cls(dim, (), ())
        D, M = _scaled_integer_rows(gens)
        H, _ = hnf(M)
        rows, pivots = [], []
        for row in H:
            c = next((j for j, a in enumerate(row) if a), None)
            if c is None:
                break
            rows.append(tuple(Fraction(a, D) for a in row))
            pivots.append(c)
        return cls(dim, tuple(rows), tuple(pivots))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def coordinates(self, v) -> Optional[tuple]:
        """Rational coordinates of ``v`` in this basis, or None if outside the span."""
        v = list(as_fraction_vector(v))
        coords = []
        for row, c in zip(self.rows, self.pivots):
            a = v[c] / row[c]
            coords.append(a)
            if a:
                v = [x - a * y for x, y in zip(v, row)]
        if any(v):
            return None
        return tuple(coords)

    def reduce(self, v) -> tuple:
        """Canonical representative of ``v`` modulo the lattice."""
        v = list(as_fraction_vector(v))
        for row, c in zip(self.rows, self.pivots):
            q = math.floor(v[c] / row[c])
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v)


def lattice_contains(gens, v, dim: Optional[int] = None):
    """Decide whether ``v`` is an integer combination of ``gens``.

    Returns ``(True, z)`` with ``sum(z[i] * gens[i]) == v`` or ``(False, None)``.
    """
    v = as_fraction_vector(v)
    n = len(v) if dim is None else dim
    gens = [as_fraction_vector(g) for g in gens]
    if len(v) != n or any(len(g) != n for g in gens):
        raise DimensionError("dimension mismatch in lattice membership")
    if not gens:
        return (not any(v)), (() if not any(v) else None)
    D, M = _scaled_integer_rows(gens, [v])
    target = [Fraction(x) * D for x in v]
    H, U = hnf(M)
    coeffs = []
    for row in H:
        c = next((j for j, a in enumerate(row) if a), None)
        if c is None:
            break
        a = target[c] / row[c]
        if a.denominator != 1:
            return False, None
        coeffs.append(int(a))
        target = [x - a * y for x, y in zip(target, row)]
    if any(target):
        return False, None
    z = tuple(
        sum(coeffs[i] * U[i][j] for i in range(len(coeffs))) for j in range(len(gens))
    )
    return True, z


@dataclass(frozen=True)
class QuotientStructure:
    """The group Q^n / (V + Λ) for a rational subspace V and a f.g. subgroup Λ.

    Reduction first kills V by clearing its RREF pivot coordinates, then
    reduces into the Hermite fundamental domain of the projected lattice.
    """

    ambient_dim: int
    subspace_basis: tuple = ()
    lattice_gens: tuple = ()
    name: str = ""

    def __post_init__(self):
        for v in list(self.subspace_basis) + list(self.lattice_gens):
            if len(v) != self.ambient_dim:
                raise DimensionError("vector length does not match ambient dimension")

    @cached_property
    def _subspace_rref(self):
        return rref(self.subspace_basis, self.ambient_dim)

    @property
    def subspace_dim(self) -> int:
        return len(self._subspace_rref[1])

    def project(self, x) -> tuple:
        """Representative of ``x`` modulo V with zeros in the V-pivot coordinates."""
        x = list(as_fraction_vector(x))
        if len(x) != self.ambient_dim:
            raise DimensionError(f"expected length {self.ambient_dim}, got {len(x)}")
        rows, pivots = self._subspace_rref
        for row, c in zip(rows, pivots):
            a = x[c]
            if a:
                x = [s - a * t for s, t in zip(x, row)]
        return tuple(x)

    @cached_property
    def lattice(self) -> LatticeBasis:
        projected = [self.project(v) for v in self.lattice_gens]
        return LatticeBasis.from_generators(projected, self.ambient_dim)

    @property
    def lattice_rank(self) -> int:
        return self.lattice.rank

    def reduce(self, x) -> tuple:
        return self.lattice.reduce(self.project(x))

    def equal(self, x, y) -> bool:
        return self.reduce(x) == self.reduce(y)

    def is_zero(self, x) -> bool:
        return not any(self.reduce(x))

    def torsion_order(self, x):
        coords = self.lattice.coordinates(self.project(x))
        if coords is None:
            return INFINITE
        n = 1
        for a in coords:
            n = math.lcm(n, a.denominator)
        return n


def quotient_reduce(q: QuotientStructure, x) -> tuple:
    return q.reduce(x)


def torsion_order(q: QuotientStructure, x):
    return q.torsion_order(x)


# ---------------------------------------------------------------------------
# Finite(ly generated) abelian groups as cokernels


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Cokernel presentation.

    ``projection`` has one row per invariant factor followed by one row per
    free coordinate; applied to an element of the ambient lattice it gives
    Smith coordinates, read modulo the corresponding invariant factor.
    """

    invariant_factors: tuple
    free_rank: int
    projection: tuple = field(repr=False)

    @property
    def order(self):
        if self.free_rank:
            return INFINITE
        return math.prod(self.invariant_factors)

    @property
    def exponent(self):
        if self.free_rank:
            return INFINITE
        return math.lcm(1, *self.invariant_factors)

    def coordinates(self, x) -> tuple:
        x = as_fraction_vector(x)
        out = []
        for i, row in enumerate(self.projection):
            a = sum((r * s for r, s in zip(row, x)), Fraction(0))
            if a.denominator != 1:
                raise LinalgError("element does not lie in the ambient lattice")
            a = int(a)
            if i < len(self.invariant_factors):
                a %= self.invariant_factors[i]
            out.append(a)
        return tuple(out)

    def is_zero(self, x) -> bool:
        return not any(self.coordinates(x))

    def element_order(self, x):
        c = self.coordinates(x)
        k = len(self.invariant_factors)
        if any(c[k:]):
            return INFINITE
        n = 1
        for a, d in zip(c, self.invariant_factors):
            n = math.lcm(n, d // math.gcd(a, d))
        return n


def cokernel(rel, ambient_lattice, dim: Optional[int] = None) -> FiniteAbelianGroup:
    """Presentation of <ambient_lattice> / <rel> via Smith normal form."""
    if dim is None:
        sample = list(ambient_lattice) or list(rel)
        dim = len(sample[0]) if sample else 0
    basis = LatticeBasis.from_generators(ambient_lattice, dim)
    m = basis.rank
    R = []
    for v in rel:
        c = basis.coordinates(v)
        if c is None or any(a.denominator != 1 for a in c):
            raise LinalgError("relation does not lie in the ambient lattice")
        R.append([int(a) for a in c])
    # ambient x -> basis coordinates, as an m x dim matrix
    E = _coordinate_matrix(basis)
    if R:
        dec = snf(R)
        diag = dec.diagonal
        V = dec.V
    else:
        diag = []
        V = identity(m)
    r = sum(1 for d in diag if d)
    # rows of V^T E: Smith coordinate functionals
    VtE = matmul(transpose(V), E) if m else []
    factors, proj = [], []
    for i in range(r):
        if diag[i] > 1:
            factors.append(diag[i])
            proj.append(tuple(VtE[i]))
    for i in range(r, m):
        proj.append(tuple(VtE[i]))
    return FiniteAbelianGroup(tuple(factors), m - r, tuple(proj))


def _coordinate_matrix(basis: LatticeBasis) -> list[list[Fraction]]:
    """Matrix of the linear map x -> coordinates of x in ``basis`` (on its span)."""
    cols = []
    for j in range(basis.dim):
        v = [Fraction(0)] * basis.dim
        v[j] = Fraction(1)
        coords = []
        for row, c in zip(basis.rows, basis.pivots):
            a = v[c] / row[c]
            coords.append(a)
            if a:
                v = [x - a * y for x, y in zip(v, row)]
        cols.append(coords)
    return transpose(cols, basis.rank) if cols else [[] for _ in range(basis.rank)]
