"""Independent oracles for the test suite.

Everything here is deliberately naive (cofactor expansion, box scans,
textbook recurrences) and shares no code with the library paths it checks.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, lcm


def det_cofactor(m) -> Fraction:
    """Determinant by recursive cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [[m[i][k] for k in range(n) if k != j] for i in range(1, n)]
        total += (-1) ** j * Fraction(m[0][j]) * det_cofactor(minor)
    return total


def bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0..B_n in the first convention (B_1 = -1/2), via the defining
    recurrence sum_{j<=m} C(m+1, j) B_j = 0."""
    out = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * out[j]
        out.append(-acc / (m + 1))
    return out


def bernoulli_polynomial(k: int, x) -> Fraction:
    """B_k(x) = sum_j C(k, j) B_j x^{k-j}."""
    x = Fraction(x)
    bs = bernoulli_numbers(k)
    return sum(comb(k, j) * bs[j] * x ** (k - j) for j in range(k + 1))


def hurwitz_zeta_neg(k: int, x) -> Fraction:
    """zeta(-k, x) = -B_{k+1}(x) / (k+1) for integer k >= 0."""
    return -bernoulli_polynomial(k + 1, x) / (k + 1)


def brute_cell_points(ws, n: int) -> list[tuple[int, ...]]:
    """Integer points of the half-open cell by bounding-box scan plus an
    exact coordinate check."""
    r = len(ws)
    lows = [sum(min(0, w[j]) for w in ws) for j in range(n)]
    highs = [sum(max(0, w[j]) for w in ws) for j in range(n)]
    out = []
    for pt in product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        coords = _solve_coords(ws, pt)
        if coords is not None and all(0 < c <= 1 for c in coords):
            out.append(pt)
    return sorted(out)


def _solve_coords(ws, pt):
    r = len(ws)
    n = len(pt)
    a = [[Fraction(ws[k][i]) for k in range(r)] + [Fraction(pt[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(r):
        piv = next((i for i in range(row, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for i in range(n):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(row)
        row += 1
    for i in range(row, n):
        if a[i][r] != 0:
            return None
    return [a[pivots[c]][r] for c in range(r)]


def brute_cone_lattice_points(gens, weights, bound) -> list[tuple[int, ...]]:
    """Integer points of an open cone with weight <= bound, by box scan.

    Assumes the weight functional is strictly positive on the closed cone
    minus the origin, so the region is bounded inside the scanned box.
    """
    n = len(gens[0])
    radius = int(bound) * max(
        1, max(abs(int(x)) for g in gens for x in [*g])
    ) + 1
    out = []
    for pt in product(range(-radius, radius + 1), repeat=n):
        w = sum(Fraction(a) * b for a, b in zip(weights, pt))
        if w > bound:
            continue
        coords = _solve_coords(gens, pt)
        if coords is not None and all(c > 0 for c in coords):
            out.append(pt)
    return sorted(out)


def value_at_rational(f, point) -> int:
    """Evaluate a level-M step function at a rational point that is
    integral away from p (denominators are powers of p), else 0."""
    M = f.ctx.M
    p = f.ctx.p
    residues = []
    for x in point:
        x = Fraction(x)
        den = x.denominator
        while den % p == 0:
            den //= p
        if den != 1:
            return 0  # not integral at some prime other than p
        residues.append((x.numerator * pow(x.denominator, -1, M)) % M)
    return f.values.get(tuple(residues), 0)


def rational_slice_haar(f, v, w) -> Fraction:
    """Haar average of the slice t -> f(w + t v) for rational w, computed
    directly: find a rational t0 putting the line onto the away-from-p
    lattice, then average one period; if no such t0 exists the slice is
    identically zero."""
    M = f.ctx.M
    p = f.ctx.p
    n = f.ctx.n
    dens = [Fraction(x).denominator for x in w]
    search = lcm(*dens, p, 4)
    t0 = None
    for d in range(1, search + 1):
        for a in range(-d * M, d * M + 1):
            cand = Fraction(a, d)
            ok = True
            for j in range(n):
                x = Fraction(w[j]) + cand * v[j]
                den = x.denominator
                while den % p == 0:
                    den //= p
                if den != 1:
                    ok = False
                    break
            if ok:
                t0 = cand
                break
        if t0 is not None:
            break
    if t0 is None:
        return Fraction(0)
    total = 0
    for j in range(M):
        pt = [Fraction(w[i]) + (t0 + j) * v[i] for i in range(n)]
        total += value_at_rational(f, pt)
    return Fraction(total, M)
