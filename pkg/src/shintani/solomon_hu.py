"""Pseudo-measure arithmetic in the lattice group algebra and the pairing
of cone functions with step functions.

The group algebra is the ring of finite rational combinations of Dirac
symbols delta_v indexed by integer lattice vectors, with convolution
delta_u * delta_v = delta_{u+v}; it is a Laurent-polynomial ring, hence an
integral domain. A pseudo-measure is an unreduced fraction

    numerator / prod_u (1 - delta_u)

with nonzero lattice vectors u; equality is decided by cross-multiplication,
which is sound in an integral domain, so no canonical form is ever computed.

Pairing an open cone with a step function of level M scales the generators
positively to primitive vectors, multiplies by M to obtain periods, and sums
the function over the half-open fundamental cell of those periods; the
periods become the denominator factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from . import linalg
from .cones import ConeFunction, OpenCone
from .errors import (
    DependentInput,
    NonPositiveDenominator,
    NotUnimodular,
    SchemaError,
)
from .linalg import IntVec
from .testfunctions import TestFunction, haar, line_slice


class GroupAlgebraElement:
    """Finite rational combination of lattice Dirac symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[IntVec, Fraction] | None = None):
        cleaned: dict[IntVec, Fraction] = {}
        if terms:
            for v, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    cleaned[tuple(int(x) for x in v)] = c
        self.terms = cleaned

    @staticmethod
    def zero() -> "GroupAlgebraElement":
        return GroupAlgebraElement()

    @staticmethod
    def delta(v: Sequence[int], coeff=1) -> "GroupAlgebraElement":
        return GroupAlgebraElement({tuple(int(x) for x in v): Fraction(coeff)})

    @staticmethod
    def one(n: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement.delta((0,) * n)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupAlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        out = dict(self.terms)
        for v, c in other.terms.items():
            out[v] = out.get(v, Fraction(0)) + c
        return GroupAlgebraElement(out)

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement({v: -c for v, c in self.terms.items()})

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        out: dict[IntVec, Fraction] = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                key = tuple(a + b for a, b in zip(u, v))
                out[key] = out.get(key, Fraction(0)) + cu * cv
        return GroupAlgebraElement(out)

    def scale(self, c) -> "GroupAlgebraElement":
        c = Fraction(c)
        return GroupAlgebraElement({v: c * x for v, x in self.terms.items()})

    def map_exponents(self, fn) -> "GroupAlgebraElement":
        out: dict[IntVec, Fraction] = {}
        for v, c in self.terms.items():
            key = tuple(int(x) for x in fn(v))
            out[key] = out.get(key, Fraction(0)) + c
        return GroupAlgebraElement(out)

    def __repr__(self):
        if not self.terms:
            return "GA(0)"
        body = " + ".join(f"{c}*d{list(v)}" for v, c in sorted(self.terms.items()))
        return f"GA({body})"


def _one_minus_delta(u: IntVec) -> GroupAlgebraElement:
    n = len(u)
    return GroupAlgebraElement.one(n) - GroupAlgebraElement.delta(u)


def denominator_product(den: Sequence[IntVec], n: int) -> GroupAlgebraElement:
    out = GroupAlgebraElement.one(n)
    for u in den:
        out = out * _one_minus_delta(u)
    return out


@dataclass(frozen=True)
class PseudoMeasure:
    """Unreduced fraction numerator / prod (1 - delta_u)."""

    num: GroupAlgebraElement
    den: tuple[IntVec, ...]

    def __post_init__(self):
        den = tuple(sorted(tuple(int(x) for x in u) for u in self.den))
        for u in den:
            if all(x == 0 for x in u):
                raise ValueError("denominator vectors must be nonzero")
        object.__setattr__(self, "den", den)

    @property
    def dim(self) -> int:
        if self.den:
            return len(self.den[0])
        for v in self.num.terms:
            return len(v)
        raise ValueError("dimension of the zero pseudo-measure is ambiguous")


def pm_zero() -> PseudoMeasure:
    return PseudoMeasure(GroupAlgebraElement.zero(), ())


def pm_constant(n: int, c) -> PseudoMeasure:
    return PseudoMeasure(GroupAlgebraElement.one(n).scale(c), ())


def _lcm_denominator(
    a: tuple[IntVec, ...], b: tuple[IntVec, ...]
) -> tuple[tuple[IntVec, ...], tuple[IntVec, ...], tuple[IntVec, ...]]:
    """Least common multiset of denominator factors.

    Returns (union, extra_for_a, extra_for_b). Sharing factors keeps the
    cross-multiplied numerators small when many summands use the same
    periods, which is the normal case for pairings of faces of one cone.
    """
    count_a: dict[IntVec, int] = {}
    count_b: dict[IntVec, int] = {}
    for u in a:
        count_a[u] = count_a.get(u, 0) + 1
    for u in b:
        count_b[u] = count_b.get(u, 0) + 1
    union: list[IntVec] = []
    extra_a: list[IntVec] = []
    extra_b: list[IntVec] = []
    for u in sorted(set(count_a) | set(count_b)):
        ca, cb = count_a.get(u, 0), count_b.get(u, 0)
        m = max(ca, cb)
        union.extend([u] * m)
        extra_a.extend([u] * (m - ca))
        extra_b.extend([u] * (m - cb))
    return tuple(union), tuple(extra_a), tuple(extra_b)


def pm_add(a: PseudoMeasure, b: PseudoMeasure) -> PseudoMeasure:
    if not a.num:
        return b
    if not b.num:
        return a
    n = a.dim
    union, extra_a, extra_b = _lcm_denominator(a.den, b.den)
    num = a.num * denominator_product(extra_a, n) + b.num * denominator_product(extra_b, n)
    return PseudoMeasure(num, union)


def pm_neg(a: PseudoMeasure) -> PseudoMeasure:
    return PseudoMeasure(-a.num, a.den)


def pm_mul(a: PseudoMeasure, b: PseudoMeasure) -> PseudoMeasure:
    if not a.num or not b.num:
        return pm_zero()
    return PseudoMeasure(a.num * b.num, a.den + b.den)


def pm_scale(a: PseudoMeasure, c) -> PseudoMeasure:
    return PseudoMeasure(a.num.scale(c), a.den)


def pm_eq(a: PseudoMeasure, b: PseudoMeasure) -> bool:
    """Equality in the localization, by cross-multiplication."""
    if not a.num and not b.num:
        return True
    if not a.num or not b.num:
        return False
    n = a.dim
    return a.num * denominator_product(b.den, n) == b.num * denominator_product(a.den, n)


def pm_is_integer_constant(a: PseudoMeasure) -> int | None:
    """Return m when a equals m * delta_0 with m an integer, else None."""
    if not a.num:
        return 0
    n = a.dim
    dprod = denominator_product(a.den, n)
    anchor = min(dprod.terms)
    coeff = a.num.terms.get(anchor)
    if coeff is None:
        return None
    m = coeff / dprod.terms[anchor]
    if m.denominator != 1:
        return None
    return int(m) if a.num == dprod.scale(m) else None


def act_pm(g: Sequence[Sequence[int]], a: PseudoMeasure) -> PseudoMeasure:
    """Push a pseudo-measure forward along g in SL_n(Z): delta_v -> delta_{gv}."""
    gm = linalg.int_mat(g)
    if linalg.det(gm) != 1:
        raise NotUnimodular("pseudo-measure action requires determinant 1")
    num = a.num.map_exponents(lambda v: linalg.mat_vec(gm, v))
    den = tuple(tuple(int(x) for x in linalg.mat_vec(gm, u)) for u in a.den)
    return PseudoMeasure(num, den)


def enumerate_fundamental_domain(ws: Sequence[Sequence[int]], n: int) -> list[IntVec]:
    """Integer points of the half-open cell { sum x_i w_i : x_i in (0, 1] }.

    For r = n the count is |det|; every residue class mod the lattice
    spanned by ws has exactly one representative in the cell, so the points
    are enumerated through Smith-form coset representatives and shifted
    into the cell, with no box scanning. For r < n the enumeration runs
    inside the saturation of the span.
    """
    ws_int = [linalg.int_vec(w) for w in ws]
    r = len(ws_int)
    if r == 0:
        return [(0,) * n]
    if r == n:
        return _cell_points_full(ws_int)
    sat, _comp = linalg.saturation_and_complement(ws_int)
    coords = []
    for w in ws_int:
        c = linalg.solve_in_span([linalg.vec(s) for s in sat], linalg.vec(w))
        if c is None:
            raise DependentInput("vector escapes its own span")
        coords.append(linalg.int_vec(c))
    inner = _cell_points_full(coords)
    out = []
    for y in inner:
        v = tuple(sum(y[k] * sat[k][j] for k in range(r)) for j in range(n))
        out.append(v)
    return sorted(out)


def _cell_points_full(ws: list[IntVec]) -> list[IntVec]:
    r = len(ws)
    cols = linalg.transpose(ws)
    if linalg.det(cols) == 0:
        raise DependentInput("cell generators are linearly dependent")
    # one cell point per coset of the column lattice, via Smith coordinates
    sres = linalg.snf(cols)
    left_inv = linalg.int_mat_inv(sres.left)
    cols_inv = linalg.mat_inv(cols)
    out = []
    for digits in product(*(range(d) for d in sres.d)):
        rep = linalg.mat_vec(left_inv, digits)
        x = linalg.mat_vec(cols_inv, rep)
        shift = tuple(_ceil_fraction(xi) - 1 for xi in x)
        pt = tuple(
            rep[i] - sum(cols[i][k] * shift[k] for k in range(r)) for i in range(r)
        )
        out.append(tuple(int(v) for v in pt))
    return sorted(out)


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def pair_open_cone(c: OpenCone, f: TestFunction) -> PseudoMeasure:
    """Pair one open cone with a step function.

    Generators are positively rescaled to primitive vectors and multiplied
    by the level M so they become periods of f; the result is

        sum_{v in cell} f(v) delta_v / prod_i (1 - delta_{M v_i}).

    The rank-0 cone contributes f(0) * delta_0.
    """
    n = f.ctx.n
    if c.rank == 0:
        val = f.value_at((0,) * n)
        return PseudoMeasure(GroupAlgebraElement.delta((0,) * n, val), ()) if val else pm_zero()
    periods = [
        tuple(f.ctx.M * x for x in linalg.primitive_vector(g)) for g in c.generators
    ]
    pts = enumerate_fundamental_domain(periods, n)
    terms = {}
    for v in pts:
        val = f.value_at(v)
        if val:
            terms[v] = Fraction(val)
    if not terms:
        return pm_zero()
    return PseudoMeasure(GroupAlgebraElement(terms), tuple(periods))


def pair_cone_function(k: ConeFunction, f: TestFunction) -> PseudoMeasure:
    out = pm_zero()
    for coeff, cone in k.terms:
        out = pm_add(out, pm_scale(pair_open_cone(cone, f), coeff))
    return out


def truncated_q_expansion(
    a: PseudoMeasure, bound, weights: Sequence
) -> GroupAlgebraElement:
    """Geometric-series expansion of a pseudo-measure, graded by a positive
    linear functional.

    `weights` defines the functional; it must be strictly positive on every
    denominator vector, so each factor 1/(1 - delta_u) expands as a
    geometric series with finitely many terms of weight <= bound. The
    result agrees with the full expansion on all terms of weight <= bound.
    """
    wv = linalg.vec(weights)
    bound = Fraction(bound)

    def weight(v: IntVec) -> Fraction:
        return sum(Fraction(x) * w for x, w in zip(v, wv))

    for u in a.den:
        if weight(u) <= 0:
            raise NonPositiveDenominator(
                f"denominator vector {u} has nonpositive weight"
            )
    current = {v: c for v, c in a.num.terms.items() if weight(v) <= bound}
    for u in a.den:
        wu = weight(u)
        expanded: dict[IntVec, Fraction] = {}
        for v, c in current.items():
            k = 0
            wv_val = weight(v)
            while wv_val + k * wu <= bound:
                key = tuple(x + k * y for x, y in zip(v, u))
                expanded[key] = expanded.get(key, Fraction(0)) + c
                k += 1
        current = {v: c for v, c in expanded.items() if c != 0}
    return GroupAlgebraElement(current)


def _line_projection(direction: IntVec) -> tuple:
    """Integer projection Z^n -> Z^{n-1} with kernel exactly Q*direction.

    Realized by completing the primitive vector on the line to a basis of
    Z^n and dropping the coordinate along it.
    """
    s = linalg.primitive_vector(direction)
    n = len(s)
    sat, comp = linalg.saturation_and_complement([s])
    basis_rows = sat + comp  # rows form a Z^n basis, first row = +-s
    cols = linalg.transpose(basis_rows)
    inv = linalg.mat_inv(cols)
    return tuple(tuple(int(x) for x in inv[i]) for i in range(1, n))


def slice_identity_check(
    f: TestFunction, c: OpenCone, i: int, bound
) -> bool:
    """Verify that clearing one pole and specializing along its ray turns
    the pairing into the generating series of slice averages.

    Concretely: with periods u_j = M * prim(v_j), the coefficient of the
    projected point of w in (1 - delta_{u_i}) * <C, f>, specialized along
    v_i and renormalized by 1/M, must equal haar(slice(f, prim(v_i), w))
    for every integer w in the open face cone spanned by the other
    generators, up to the expansion bound.
    """
    n = f.ctx.n
    M = f.ctx.M
    pm = pair_open_cone(c, f)
    prims = [linalg.primitive_vector(g) for g in c.generators]
    periods = [tuple(M * x for x in s) for s in prims]
    u_i = periods[i]
    remaining = list(pm.den)
    if pm.num:
        remaining.remove(u_i)
        cleared = PseudoMeasure(pm.num, tuple(remaining))
    else:
        cleared = pm
    proj = _line_projection(prims[i])

    def project(v: Sequence[int]) -> IntVec:
        return tuple(sum(row[j] * v[j] for j in range(n)) for row in proj)

    face_periods = [periods[j] for j in range(len(periods)) if j != i]
    num_proj = cleared.num.map_exponents(project)
    den_proj = tuple(project(u) for u in face_periods)

    if not face_periods:
        # 0-dimensional face: the only face point is the origin
        coeff = num_proj.terms.get((0,) * (n - 1), Fraction(0))
        target = M * haar(line_slice(f, prims[i], (0,) * n))
        return coeff == target

    phi = _positive_functional(den_proj)
    expansion = truncated_q_expansion(
        PseudoMeasure(num_proj, den_proj), Fraction(bound), phi
    )
    ok = True
    for w in _face_points(face_periods, Fraction(bound), n):
        coeff = expansion.terms.get(project(w), Fraction(0))
        target = M * haar(line_slice(f, prims[i], w))
        if coeff != target:
            ok = False
            break
    return ok


def _positive_functional(vectors: tuple[IntVec, ...]) -> tuple[Fraction, ...]:
    """A rational functional taking the value 1 on each given vector.

    The vectors must be linearly independent; the functional is produced
    from a left inverse supported on independent coordinate rows.
    """
    m = len(vectors[0])
    cols = [linalg.vec(v) for v in vectors]
    # find len(vectors) independent rows of the column matrix
    a = [[Fraction(cols[k][row]) for k in range(len(cols))] for row in range(m)]
    chosen: list[int] = []
    work: list[list[Fraction]] = []
    for row in range(m):
        trial = work + [a[row]]
        if _rank_rows(trial) == len(trial):
            chosen.append(row)
            work = trial
        if len(chosen) == len(cols):
            break
    if len(chosen) < len(cols):
        raise DependentInput("projected face directions are dependent")
    sub = [[cols[k][row] for k in range(len(cols))] for row in chosen]
    ones = tuple(Fraction(1) for _ in cols)
    sol = linalg.solve(linalg.transpose(sub), ones)
    phi = [Fraction(0)] * m
    for idx, row in enumerate(chosen):
        phi[row] = sol[idx]
    return tuple(phi)


def _rank_rows(rows: list[list[Fraction]]) -> int:
    a = [row[:] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r2 in range(len(a)):
            if r2 != rank and a[r2][col] != 0:
                fct = a[r2][col]
                a[r2] = [x - fct * y for x, y in zip(a[r2], a[rank])]
        rank += 1
    return rank


def _face_points(face_periods: list[IntVec], bound: Fraction, n: int) -> list[IntVec]:
    """Integer points w = sum t_j u_j with t_j > 0 and sum t_j <= bound."""
    sat, _ = linalg.saturation_and_complement(face_periods)
    r = len(face_periods)
    coords = []
    for u in face_periods:
        cc = linalg.solve_in_span([linalg.vec(s) for s in sat], linalg.vec(u))
        coords.append(linalg.int_vec(cc))
    # box for y = C t with t in (0, bound]^r, in saturation coordinates
    lows, highs = [], []
    for k in range(r):
        lo = sum(min(0, coords[j][k]) * bound for j in range(r))
        hi = sum(max(0, coords[j][k]) * bound for j in range(r))
        lows.append(_ceil_fraction(lo))
        highs.append(int(hi))
    cmat = linalg.transpose(coords)
    out = []
    for y in product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        t = linalg.solve(cmat, y)
        if all(tj > 0 for tj in t) and sum(t) <= bound:
            w = tuple(sum(y[k] * sat[k][j] for k in range(r)) for j in range(n))
            out.append(w)
    return sorted(out)


def pm_to_json(a: PseudoMeasure) -> dict:
    return {
        "numerator": [
            {"vector": list(v), "coeff": str(c)}
            for v, c in sorted(a.num.terms.items())
        ],
        "denominator": [list(u) for u in a.den],
    }


def pm_from_json(data: dict) -> PseudoMeasure:
    try:
        num: dict[IntVec, Fraction] = {}
        for term in data["numerator"]:
            v = tuple(int(x) for x in term["vector"])
            num[v] = num.get(v, Fraction(0)) + Fraction(term["coeff"])
        den = tuple(tuple(int(x) for x in u) for u in data["denominator"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad pseudo-measure JSON: {exc}") from exc
    return PseudoMeasure(GroupAlgebraElement(num), den)
