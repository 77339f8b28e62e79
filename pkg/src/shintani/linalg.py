"""Exact rational and integer linear algebra on small dense matrices.

Vectors are tuples of Fractions (or ints for lattice vectors), matrices are
tuples of row tuples. Everything is immutable and pure; no floating point
anywhere. Dimensions are desk scale (n <= 6), so plain Gaussian elimination
and textbook Smith reduction are the right tools.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DependentInput, SingularMatrix, ZeroDirection

Vec = tuple[Fraction, ...]
Mat = tuple[tuple[Fraction, ...], ...]
IntVec = tuple[int, ...]
IntMat = tuple[tuple[int, ...], ...]


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def int_vec(entries: Iterable) -> IntVec:
    out = []
    for e in entries:
        f = Fraction(e)
        if f.denominator != 1:
            raise ValueError(f"not an integer: {e}")
        out.append(int(f))
    return tuple(out)


def int_mat(rows: Iterable[Iterable]) -> IntMat:
    return tuple(int_vec(r) for r in rows)


def identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def det(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-preserving Gaussian elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    a = [[Fraction(x) for x in row] for row in m]
    d = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            d = -d
        d *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                factor = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= factor * a[k][j]
    return d


def solve(m: Sequence[Sequence], b: Sequence) -> Vec:
    """Solve the square system m*x = b exactly.

    Raises SingularMatrix when det(m) = 0.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(m)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            raise SingularMatrix("system matrix is singular")
        a[k], a[pivot] = a[pivot], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                factor = a[i][k]
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
    return tuple(a[i][n] for i in range(n))


def mat_inv(m: Sequence[Sequence]) -> Mat:
    n = len(m)
    cols = [solve(m, tuple(Fraction(1 if i == j else 0) for i in range(n))) for j in range(n)]
    return transpose(cols)


def int_mat_inv(m: Sequence[Sequence[int]]) -> IntMat:
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    inv = mat_inv(m)
    return int_mat(inv)


def solve_in_span(basis: Sequence[Vec], w: Sequence) -> Vec | None:
    """Exact coordinates of w in the span of `basis` (as columns), or None.

    `basis` holds r <= n linearly independent vectors. Returns the unique
    coefficient tuple a with sum a_i * basis_i = w, or None when w is
    outside the span.
    """
    r = len(basis)
    if r == 0:
        return () if all(Fraction(x) == 0 for x in w) else None
    n = len(basis[0])
    a = [[Fraction(basis[j][i]) for j in range(r)] + [Fraction(w[i])] for i in range(n)]
    pivots: list[int] = []
    row = 0
    for col in range(r):
        pivot = next((i for i in range(row, n) if a[i][col] != 0), None)
        if pivot is None:
            raise DependentInput("span basis is linearly dependent")
        a[row], a[pivot] = a[pivot], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for i in range(n):
            if i != row and a[i][col] != 0:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[row])]
        pivots.append(row)
        row += 1
    # consistency: rows below the pivots must have zero right-hand side
    for i in range(row, n):
        if a[i][r] != 0:
            return None
    return tuple(a[pivots[col]][r] for col in range(r))


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive_vector(v: Sequence) -> IntVec:
    """Scale a nonzero rational vector by a positive rational to the
    primitive integer vector on the same ray."""
    fracs = [Fraction(x) for x in v]
    if all(x == 0 for x in fracs):
        raise ZeroDirection("cannot normalize the zero vector")
    mult = lcm(*(f.denominator for f in fracs))
    ints = [int(f * mult) for f in fracs]
    g = content(ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form data: left * input * right = diag(d).

    d satisfies the divisibility chain d_1 | d_2 | ... ; left and right are
    unimodular, so coset representatives computed in diagonal coordinates
    can be mapped back to the original basis.
    """

    d: IntVec
    left: IntMat
    right: IntMat


def _smith(a_in: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Reduce a rectangular integer matrix to Smith form.

    Returns (left, d, right) with left * a_in * right = d, d diagonal with
    the divisibility chain, left/right unimodular.
    """
    rows = len(a_in)
    cols = len(a_in[0])
    a = [[int(x) for x in row] for row in a_in]
    left = [list(r) for r in identity(rows)]
    right = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + c * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in right:
            row[dst] += c * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]

    k = 0
    limit = min(rows, cols)
    while k < limit:
        # move a minimal nonzero entry of the trailing block to (k, k)
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        dirty = False
        for i in range(k + 1, rows):
            if a[i][k] != 0:
                q = a[i][k] // a[k][k]
                add_row(i, k, -q)
                if a[i][k] != 0:
                    dirty = True
        for j in range(k + 1, cols):
            if a[k][j] != 0:
                q = a[k][j] // a[k][k]
                add_col(j, k, -q)
                if a[k][j] != 0:
                    dirty = True
        if dirty:
            continue
        # the pivot must divide the whole trailing block for the chain to hold
        witness = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if a[i][j] % a[k][k] != 0:
                    witness = i
                    break
            if witness is not None:
                break
        if witness is not None:
            add_row(k, witness, 1)
            continue
        if a[k][k] < 0:
            negate_row(k)
        k += 1
    return left, a, right


def snf(m: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form of a nonsingular square integer matrix."""
    n = len(m)
    mi = int_mat(m)
    if det(mi) == 0:
        raise SingularMatrix("Smith form requested for a singular matrix")
    left, d, right = _smith(mi)
    diag = tuple(d[i][i] for i in range(n))
    return SnfResult(d=diag, left=int_mat(left), right=int_mat(right))


def saturation_and_complement(vs: Sequence[Sequence]) -> tuple[list[IntVec], list[IntVec]]:
    """Split Z^n into the saturation of span(vs) and a complement.

    Returns (sat, comp): sat is an integer basis of span_Q(vs) n Z^n, and
    sat + comp together form a basis of Z^n. Input vectors may be rational;
    they must be linearly independent.
    """
    r = len(vs)
    if r == 0:
        raise DependentInput("need at least one vector")
    n = len(vs[0])
    rows = []
    for v in vs:
        fracs = [Fraction(x) for x in v]
        mult = lcm(*(f.denominator for f in fracs))
        rows.append([int(f * mult) for f in fracs])
    left, d, right = _smith(rows)
    if any(d[i][i] == 0 for i in range(min(r, n))) or r > n:
        raise DependentInput("vectors are linearly dependent")
    right_inv = int_mat_inv(right)
    # rows of right_inv form a Z^n basis; the first r span the saturation
    return [tuple(right_inv[i]) for i in range(r)], [tuple(right_inv[i]) for i in range(r, n)]


def saturate_span(vs: Sequence[Sequence]) -> list[IntVec]:
    """Integer basis of span_Q(vs) n Z^n for linearly independent vs."""
    sat, _ = saturation_and_complement(vs)
    return sat
