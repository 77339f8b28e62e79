"""Power-series realization of pseudo-measures on Z_p^n.

A measure on Z_p^n corresponds to a power series in n variables through
delta_{b_i} -> 1 + T_i for a basis b_1,...,b_n; the coefficient at a
multi-index k is the binomial moment of the measure. Pseudo-measures built
by the cone pairing have denominator factors aligned with basis rays, whose
transform is T_i times a unit series, so the fraction is an honest power
series exactly when the numerator vanishes at every T_i = 0. That
divisibility test is the series-side measure criterion; the exact
vanishing-hypothesis test on slices is the authoritative one, and the two
must agree on single-coset inputs.

When the denominator lattice has p-power index in Z^n, the numerator is
split along cosets: each coset contributes a Dirac prefactor times a
measure candidate on the sublattice, and the whole pseudo-measure is a
measure when every coset passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, prod
from typing import Mapping, Sequence

from . import linalg
from .cones import OpenCone
from .errors import (
    NonUnitDenominator,
    NotAMeasure,
    NotPIntegral,
    PrecisionExhausted,
    SingularMatrix,
    TruncationTooSmall,
)
from .linalg import IntVec
from .padic import PadicScalar
from .solomon_hu import GroupAlgebraElement, PseudoMeasure
from .testfunctions import TestFunction, check_vh

DEFAULT_PRECISION = 20
DEFAULT_DEGREE = 12


@dataclass(frozen=True)
class AmiceSeries:
    """Truncated multivariate power series with p-adic coefficients."""

    p: int
    nvars: int
    degree: int
    coeffs: Mapping[tuple[int, ...], PadicScalar]

    def __post_init__(self):
        cleaned = {
            exp: c
            for exp, c in self.coeffs.items()
            if sum(exp) <= self.degree and not c.is_exact_zero
        }
        object.__setattr__(self, "coeffs", cleaned)

    @staticmethod
    def zero(p: int, nvars: int, degree: int) -> "AmiceSeries":
        return AmiceSeries(p, nvars, degree, {})

    @staticmethod
    def constant(p: int, nvars: int, degree: int, c: PadicScalar) -> "AmiceSeries":
        return AmiceSeries(p, nvars, degree, {(0,) * nvars: c})

    def coefficient(self, exp: Sequence[int]) -> PadicScalar:
        return self.coeffs.get(tuple(exp), PadicScalar.exact_zero(self.p))

    def __add__(self, other: "AmiceSeries") -> "AmiceSeries":
        degree = min(self.degree, other.degree)
        out = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            out[exp] = out[exp] + c if exp in out else c
        return AmiceSeries(self.p, self.nvars, degree, out)

    def __neg__(self) -> "AmiceSeries":
        return AmiceSeries(
            self.p, self.nvars, self.degree, {e: -c for e, c in self.coeffs.items()}
        )

    def __sub__(self, other: "AmiceSeries") -> "AmiceSeries":
        return self + (-other)

    def __mul__(self, other: "AmiceSeries") -> "AmiceSeries":
        degree = min(self.degree, other.degree)
        out: dict[tuple[int, ...], PadicScalar] = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > degree:
                    continue
                key = tuple(a + b for a, b in zip(e1, e2))
                term = c1 * c2
                out[key] = out[key] + term if key in out else term
        return AmiceSeries(self.p, self.nvars, degree, out)

    def scale(self, c: PadicScalar) -> "AmiceSeries":
        return AmiceSeries(
            self.p, self.nvars, self.degree, {e: c * x for e, x in self.coeffs.items()}
        )

    def at_zero(self, i: int) -> "AmiceSeries":
        """Set T_i = 0: keep only terms with zero exponent in slot i."""
        return AmiceSeries(
            self.p,
            self.nvars,
            self.degree,
            {e: c for e, c in self.coeffs.items() if e[i] == 0},
        )

    def is_zero_at_precision(self) -> bool:
        """Every coefficient is indistinguishable from zero, with at least
        one surviving digit of absolute precision each."""
        for c in self.coeffs.values():
            if not c.is_zero:
                return False
            if c.abs_prec < 1:
                raise PrecisionExhausted(
                    "coefficient known to fewer than one digit; raise the precision"
                )
        return True


@lru_cache(maxsize=None)
def binom_fraction(x: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for t in range(j):
        out *= (x - t) / (t + 1)
    return out


@lru_cache(maxsize=None)
def _cached_scalar(x: Fraction, p: int, prec: int) -> PadicScalar:
    return PadicScalar.from_rational(x, p, prec)


def binom_pow(x, p: int, prec: int = DEFAULT_PRECISION, degree: int = DEFAULT_DEGREE) -> AmiceSeries:
    """(1 + T)^x as a one-variable truncated series, for p-integral x.

    The coefficients are the binomial values binom(x, j), which stay
    p-integral whenever x is.
    """
    x = Fraction(x)
    if x.denominator % p == 0:
        raise NotPIntegral(f"{x} has p in its denominator")
    coeffs = {}
    for j in range(degree + 1):
        c = binom_fraction(x, j)
        if c != 0:
            coeffs[(j,)] = _cached_scalar(c, p, prec)
    return AmiceSeries(p, 1, degree, coeffs)


def _dirac_series(
    coords: Sequence[Fraction], p: int, prec: int, degree: int
) -> AmiceSeries:
    """Transform of a Dirac at the point with the given basis coordinates."""
    coords = tuple(Fraction(x) for x in coords)
    return _dirac_series_cached(coords, p, prec, degree)


@lru_cache(maxsize=65536)
def _dirac_series_cached(
    coords: tuple[Fraction, ...], p: int, prec: int, degree: int
) -> AmiceSeries:
    n = len(coords)
    out = AmiceSeries.constant(p, n, degree, _cached_scalar(Fraction(1), p, prec))
    for i, x in enumerate(coords):
        if x == 0:
            continue
        one_var = binom_pow(x, p, prec, degree)
        lifted = AmiceSeries(
            p,
            n,
            degree,
            {
                tuple(j[0] if k == i else 0 for k in range(n)): c
                for j, c in one_var.coeffs.items()
            },
        )
        out = out * lifted
    return out


def _invert_unit_series(s: AmiceSeries) -> AmiceSeries:
    """Reciprocal of a series with unit constant term, by the usual
    triangular recursion on total degree."""
    const = s.coefficient((0,) * s.nvars)
    if const.is_zero or const.val != 0:
        raise NonUnitDenominator("series has no unit constant term")
    one = PadicScalar.from_rational(1, s.p, const.prec)
    inv_const = one / const
    # split s = const * (1 - t) with t of positive order, invert by geometric sum
    t = AmiceSeries(
        s.p,
        s.nvars,
        s.degree,
        {e: -(c / const) for e, c in s.coeffs.items() if sum(e) > 0},
    )
    acc = AmiceSeries.constant(s.p, s.nvars, s.degree, one)
    power = AmiceSeries.constant(s.p, s.nvars, s.degree, one)
    for _ in range(s.degree):
        power = power * t
        if not power.coeffs:
            break
        acc = acc + power
    return acc.scale(inv_const)


@dataclass(frozen=True)
class CosetDecomposition:
    """Representatives of Z_p^n modulo the p-completion of a sublattice."""

    basis: tuple[IntVec, ...]
    representatives: tuple[IntVec, ...]


def coset_reps(basis: Sequence[Sequence[int]], p: int) -> CosetDecomposition:
    """Coset representatives of Z_p^n modulo the Z_p-span of the basis.

    The count is the p-part of |det(basis)|, enumerated through Smith
    coordinates of the matrix with the basis vectors as columns.
    """
    cols = linalg.transpose([linalg.int_vec(b) for b in basis])
    d = linalg.det(cols)
    if d == 0:
        raise SingularMatrix("coset representatives need a nonsingular basis")
    res = linalg.snf(cols)
    left_inv = linalg.int_mat_inv(res.left)
    ranges = []
    for di in res.d:
        pk = 1
        while di % (pk * p) == 0:
            pk *= p
        ranges.append(range(pk))
    reps = []
    for digits in product(*ranges):
        reps.append(tuple(int(x) for x in linalg.mat_vec(left_inv, digits)))
    return CosetDecomposition(
        basis=tuple(tuple(int(x) for x in b) for b in basis),
        representatives=tuple(sorted(reps)),
    )


def _p_part(n: int, p: int) -> int:
    n = abs(n)
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def extend_denominator_basis(a: PseudoMeasure, n: int) -> list[IntVec]:
    """Basis of Q^n starting with the denominator vectors of a, completed
    by a complement of the saturation of their span."""
    dens = list(dict.fromkeys(a.den))
    if len(dens) != len(a.den):
        raise NonUnitDenominator("repeated denominator factors are not aligned")
    if not dens:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    _sat, comp = linalg.saturation_and_complement(dens)
    return dens + comp


def _coset_split(
    a: PseudoMeasure, basis: Sequence[IntVec], p: int
) -> list[tuple[IntVec, dict[IntVec, Fraction]]]:
    """Split the numerator along cosets of the basis lattice at p.

    Returns (representative, terms) pairs where each term key is the
    original lattice point minus the representative, guaranteed p-integral
    in basis coordinates.
    """
    cols = linalg.int_mat(linalg.transpose(basis))
    res = linalg.snf(cols)
    left_inv = linalg.int_mat_inv(res.left)
    pk = [_p_part(d, p) for d in res.d]

    def coset_key(v: Sequence[int]) -> tuple[int, ...]:
        y = linalg.mat_vec(res.left, v)
        return tuple(int(y[i]) % pk[i] for i in range(len(pk)))

    reps = [
        tuple(int(x) for x in linalg.mat_vec(left_inv, digits))
        for digits in product(*(range(k) for k in pk))
    ]
    rep_by_key = {coset_key(rep): rep for rep in reps}
    buckets: dict[IntVec, dict[IntVec, Fraction]] = {rep: {} for rep in reps}
    for v, c in a.num.terms.items():
        rep = rep_by_key[coset_key(v)]
        shifted = tuple(x - y for x, y in zip(v, rep))
        buckets[rep][shifted] = buckets[rep].get(shifted, Fraction(0)) + c
    return [(rep, terms) for rep, terms in buckets.items() if terms]


def _basis_coordinates(
    v: Sequence[int], cols, p: int
) -> tuple[Fraction, ...]:
    coords = linalg.solve(cols, linalg.vec(v))
    for x in coords:
        if x.denominator % p == 0:
            raise NotPIntegral(f"coordinate {x} is not p-integral")
    return coords


def _aligned_axis(y: Sequence[Fraction], p: int) -> tuple[int, Fraction]:
    """Axis index and scalar for a denominator coordinate vector that is a
    p-unit multiple of a basis vector."""
    nonzero = [(i, x) for i, x in enumerate(y) if x != 0]
    if len(nonzero) != 1:
        raise NonUnitDenominator(
            "denominator vector is not aligned with a single basis direction"
        )
    i, alpha = nonzero[0]
    if alpha.numerator % p == 0 or alpha.denominator % p == 0:
        raise NonUnitDenominator(f"denominator coordinate {alpha} is not a p-unit")
    return i, alpha


def amice_in_basis(
    a: PseudoMeasure,
    basis: Sequence[Sequence[int]],
    p: int,
    prec: int = DEFAULT_PRECISION,
    degree: int = DEFAULT_DEGREE,
) -> AmiceSeries:
    """Truncated transform of a pseudo-measure in the given basis.

    Every numerator point and denominator vector must have p-integral basis
    coordinates, each denominator vector must be a p-unit multiple of a
    basis vector (so its transform is T_i times a unit series), and the
    numerator must be divisible by the corresponding T_i's; otherwise the
    fraction has a pole and NotAMeasure is raised.
    """
    basis = [linalg.int_vec(b) for b in basis]
    n = len(basis)
    cols = linalg.transpose([linalg.vec(b) for b in basis])
    if linalg.det(cols) == 0:
        raise SingularMatrix("transform basis is singular")
    num = AmiceSeries.zero(p, n, degree)
    for v, c in a.num.terms.items():
        coords = _basis_coordinates(v, cols, p)
        term = _dirac_series(coords, p, prec, degree).scale(
            PadicScalar.from_rational(c, p, prec)
        )
        num = num + term
    out = num
    for u in a.den:
        y = _basis_coordinates(u, cols, p)
        i, alpha = _aligned_axis(y, p)
        # 1 - (1+T_i)^alpha = -T_i * E with E a unit series in T_i
        e_coeffs = {}
        for j in range(1, degree + 2):
            cj = binom_fraction(alpha, j)
            if cj != 0 and j - 1 <= degree:
                e_coeffs[tuple(j - 1 if k == i else 0 for k in range(n))] = (
                    PadicScalar.from_rational(-cj, p, prec)
                )
        unit_series = AmiceSeries(p, n, degree, e_coeffs)
        # divide by T_i: every surviving term must carry T_i
        blocked = out.at_zero(i)
        if not blocked.is_zero_at_precision():
            raise NotAMeasure(
                f"numerator does not vanish at T_{i} = 0; genuine pole at delta_{u}"
            )
        shifted = {
            tuple(x - 1 if k == i else x for k, x in enumerate(exp)): c
            for exp, c in out.coeffs.items()
            if exp[i] >= 1
        }
        out = AmiceSeries(p, n, degree, shifted) * _invert_unit_series(unit_series)
    return out


def amice_transform(
    a: PseudoMeasure,
    p: int,
    prec: int = DEFAULT_PRECISION,
    degree: int = DEFAULT_DEGREE,
) -> list[tuple[IntVec, AmiceSeries]]:
    """Per-coset transform of a pseudo-measure in its own denominator basis.

    Returns (representative, series) pairs: the pseudo-measure is the sum
    over pairs of delta_rep convolved with the measure of the series, read
    in basis coordinates.
    """
    n = a.dim
    basis = extend_denominator_basis(a, n)
    out = []
    for rep, terms in _coset_split(a, basis, p):
        shifted = PseudoMeasure(GroupAlgebraElement(terms), a.den)
        out.append((rep, amice_in_basis(shifted, basis, p, prec, degree)))
    return out


def is_measure_vh(c: OpenCone, f: TestFunction) -> bool:
    """Exact measure criterion: the vanishing hypothesis must hold for
    every extremal ray of the cone."""
    return all(check_vh(f, g) for g in c.generators)


def is_measure_amice(
    a: PseudoMeasure,
    p: int,
    prec: int = DEFAULT_PRECISION,
    degree: int = DEFAULT_DEGREE,
) -> bool:
    """Series-side measure criterion, per coset of the denominator lattice.

    True iff for every coset and every denominator ray, the coset numerator
    vanishes at T_i = 0 to working precision. Cross-validates the exact
    vanishing-hypothesis test; on single-coset inputs the two agree by the
    divisibility criterion.
    """
    if not a.num:
        return True
    n = a.dim
    basis = extend_denominator_basis(a, n)
    cols = linalg.transpose([linalg.vec(b) for b in basis])
    cols_inv = linalg.mat_inv(cols)
    axes = [_aligned_axis(_basis_coordinates(u, cols, p), p)[0] for u in a.den]
    for _rep, terms in _coset_split(a, basis, p):
        coords_of = {}
        for v in terms:
            coords = tuple(Fraction(x) for x in linalg.mat_vec(cols_inv, v))
            for x in coords:
                if x.denominator % p == 0:
                    raise NotPIntegral(f"coordinate {x} is not p-integral")
            coords_of[v] = coords
        for i in axes:
            # setting T_i = 0 drops the i-th factor of every Dirac series,
            # so points sharing the other coordinates can be summed first
            groups: dict[tuple[Fraction, ...], Fraction] = {}
            for v, c in terms.items():
                key = tuple(
                    x if k != i else Fraction(0)
                    for k, x in enumerate(coords_of[v])
                )
                groups[key] = groups.get(key, Fraction(0)) + c
            series = AmiceSeries.zero(p, n, degree)
            for key, c in groups.items():
                if c == 0:
                    continue
                series = series + _dirac_series(key, p, prec, degree).scale(
                    _cached_scalar(c, p, prec)
                )
            if not series.is_zero_at_precision():
                return False
    return True


def _stirling2(k: int, j: int) -> int:
    if j == 0:
        return 1 if k == 0 else 0
    return sum((-1) ** (j - t) * comb(j, t) * t**k for t in range(j + 1)) // prod(
        range(1, j + 1)
    )


def moments(s: AmiceSeries, kk: Sequence[int]) -> PadicScalar:
    """Power moment int x^kk dmu from the binomial-coefficient series.

    Uses x^k = sum_j S(k, j) j! binom(x, j) coordinatewise (S = Stirling
    numbers of the second kind), so the answer is a finite combination
    of series coefficients.
    """
    kk = tuple(int(k) for k in kk)
    if sum(kk) > s.degree:
        raise TruncationTooSmall(
            f"moment {kk} needs series degree {sum(kk)} > {s.degree}"
        )
    total = PadicScalar.exact_zero(s.p)
    for j in product(*(range(k + 1) for k in kk)):
        factor = 1
        for ki, ji in zip(kk, j):
            factor *= _stirling2(ki, ji) * prod(range(1, ji + 1))
        if factor == 0:
            continue
        coeff = s.coefficient(j)
        if coeff.is_exact_zero:
            continue
        total = total + coeff * PadicScalar.from_rational(factor, s.p, max(coeff.prec, 1))
    return total


def power_moments(
    a: PseudoMeasure,
    p: int,
    kk: Sequence[int],
    prec: int = DEFAULT_PRECISION,
    degree: int = DEFAULT_DEGREE,
) -> PadicScalar:
    """Moment int x^kk dmu of a pseudo-measure that is a measure, in the
    standard coordinates of the ambient lattice.

    Each coset contributes int (rep + B c)^kk dmu_rep(c) where B is the
    denominator basis; the integrand expands into basis-coordinate
    monomials whose moments come from the coset series.
    """
    kk = tuple(int(k) for k in kk)
    n = a.dim
    basis = extend_denominator_basis(a, n)
    total = PadicScalar.exact_zero(p)
    for rep, series in amice_transform(a, p, prec, degree):
        # expand prod_j (rep_j + sum_i B_{ji} c_i)^{kk_j} into c-monomials
        poly: dict[tuple[int, ...], Fraction] = {(0,) * n: Fraction(1)}
        for j in range(n):
            base: dict[tuple[int, ...], Fraction] = {(0,) * n: Fraction(rep[j])}
            for i in range(n):
                if basis[i][j]:
                    e = tuple(1 if t == i else 0 for t in range(n))
                    base[e] = base.get(e, Fraction(0)) + Fraction(basis[i][j])
            for _ in range(kk[j]):
                poly = _poly_mul(poly, base)
        for exp, coeff in poly.items():
            if coeff == 0:
                continue
            m = moments(series, exp)
            total = total + m * PadicScalar.from_rational(coeff, p, prec)
    return total


def _poly_mul(
    a: dict[tuple[int, ...], Fraction], b: dict[tuple[int, ...], Fraction]
) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def series_to_json(s: AmiceSeries, prec: int | None = None) -> dict:
    return {
        "p": s.p,
        "precision": prec if prec is not None else DEFAULT_PRECISION,
        "degree": s.degree,
        "coeffs": [
            {"exp": list(exp), "val": str(c)} for exp, c in sorted(s.coeffs.items())
        ],
    }
