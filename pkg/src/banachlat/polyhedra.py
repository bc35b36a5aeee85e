"""Exact linear programming, solid-hull gauges and vertex enumeration.

Linear programs are solved exactly.  A floating point simplex (HiGHS) is
only used to guess an optimal basis; the basis is then re-solved in exact
rational arithmetic and accepted only if primal feasibility, dual
feasibility and equality of the two objective values all hold exactly.
When the guess fails, an exact two-phase simplex with Bland's rule takes
over.  Either way the returned certificate is checked before it leaves
this module.

The solid convex hull of positive generators s_1..s_p is

    SCH(S) = { z : |z| <= sum_p lambda_p s_p, lambda >= 0, sum lambda <= 1 }.

The right hand side is solid and convex and contains S, and any solid convex
set containing S contains every z dominated in modulus by a convex
combination of S, so the two sets agree.  Its gauge is therefore an LP.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import flint
import highspy
import numpy as np

from .vectorlattice import dot, to_rational, vec

INF = math.inf

_LE, _GE, _EQ = "<=", ">=", "="
_RELATIONS = {"<=": _LE, "≤": _LE, ">=": _GE, "≥": _GE, "=": _EQ, "==": _EQ}


class LPError(RuntimeError):
    """Internal failure of the exact LP machinery (never expected)."""


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` c.x subject to rows and per-variable bounds.

    ``bounds`` defaults to x >= 0 for every variable; use ``(None, None)``
    for a free variable.
    """

    objective: tuple
    constraints: tuple = ()
    sense: str = "min"
    bounds: tuple | None = None

    def __post_init__(self):
        obj = vec(self.objective)
        n = len(obj)
        rows = []
        for row, rel, rhs in self.constraints:
            row = vec(row)
            if len(row) != n:
                raise ValueError("constraint row length differs from variable count")
            if rel not in _RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            rows.append((row, _RELATIONS[rel], to_rational(rhs)))
        bounds = self.bounds
        if bounds is None:
            bounds = ((Fraction(0), None),) * n
        else:
            bounds = tuple((None if lo is None else to_rational(lo),
                            None if hi is None else to_rational(hi)) for lo, hi in bounds)
            if len(bounds) != n:
                raise ValueError("one (lower, upper) pair per variable")
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(rows))
        object.__setattr__(self, "bounds", bounds)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def dump(self) -> str:
        """Plain-text rendering, one constraint per line (debug aid)."""
        from .vectorlattice import fmt_rational as f
        lines = [f"{self.sense} " + " ".join(f(c) for c in self.objective)]
        for row, rel, rhs in self.constraints:
            lines.append(" ".join(f(a) for a in row) + f" {rel} {f(rhs)}")
        for j, (lo, hi) in enumerate(self.bounds):
            lines.append(f"x{j} in [{'-inf' if lo is None else f(lo)}, {'inf' if hi is None else f(hi)}]")
        return "\n".join(lines)


@dataclass(frozen=True)
class LPResult:
    status: str
    optimum: Fraction | None = None
    primal: tuple | None = None
    dual: tuple | None = None
    ray: tuple | None = None


# ---------------------------------------------------------------------------
# standard form  min c.x, A x <= b, x >= 0

@dataclass
class _Std:
    c: list
    A: list  # dense rows
    b: list
    # recovery data
    var_map: list = field(default_factory=list)  # per original var: list of (std index, coefficient)
    var_shift: list = field(default_factory=list)
    row_origin: list = field(default_factory=list)  # per std row: (original constraint index or -1, sign)


def _standardize(lp: LinearProgram, negate: bool) -> _Std:
    n = lp.num_vars
    c_orig = [-a for a in lp.objective] if negate else list(lp.objective)
    var_map, shift, ncols = [], [], 0
    upper_rows = []
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            var_map.append([(ncols, Fraction(1))])
            shift.append(lo)
            if hi is not None:
                upper_rows.append((ncols, hi - lo))
            ncols += 1
        elif hi is not None:
            var_map.append([(ncols, Fraction(-1))])
            shift.append(hi)
            ncols += 1
        else:
            var_map.append([(ncols, Fraction(1)), (ncols + 1, Fraction(-1))])
            shift.append(Fraction(0))
            ncols += 2
    c = [Fraction(0)] * ncols
    for j in range(n):
        for k, s in var_map[j]:
            c[k] += s * c_orig[j]

    def transform(row, rhs):
        out = [Fraction(0)] * ncols
        for j, a in enumerate(row):
            if a:
                rhs -= a * shift[j]
                for k, s in var_map[j]:
                    out[k] += s * a
        return out, rhs

    A, b, origin = [], [], []
    for i, (row, rel, rhs) in enumerate(lp.constraints):
        trow, trhs = transform(row, rhs)
        if rel in (_LE, _EQ):
            A.append(trow)
            b.append(trhs)
            origin.append((i, 1))
        if rel in (_GE, _EQ):
            A.append([-a for a in trow])
            b.append(-trhs)
            origin.append((i, -1))
    for k, width in upper_rows:
        row = [Fraction(0)] * ncols
        row[k] = Fraction(1)
        A.append(row)
        b.append(width)
        origin.append((-1, 1))
    return _Std(c, A, b, var_map, shift, origin)


def _fmpq(q: Fraction):
    return flint.fmpq(q.numerator, q.denominator)


def _frac(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def _basis_solution(std: _Std, basis: list[int]):
    """Exact primal/dual values of a basis of [A | I]; None if singular."""
    m, n = len(std.A), len(std.c)
    if len(basis) != m:
        return None
    B = flint.fmpq_mat(m, m)
    cB = flint.fmpq_mat(m, 1)
    for col, j in enumerate(basis):
        if j < n:
            for i in range(m):
                a = std.A[i][j]
                if a:
                    B[i, col] = _fmpq(a)
            if std.c[j]:
                cB[col, 0] = _fmpq(std.c[j])
        else:
            B[j - n, col] = 1
    try:
        xB = B.solve(flint.fmpq_mat(m, 1, [_fmpq(v) for v in std.b]))
        y = B.transpose().solve(cB)
    except ZeroDivisionError:
        return None
    x = [Fraction(0)] * (n + m)
    for col, j in enumerate(basis):
        x[j] = _frac(xB[col, 0])
    return x, [_frac(y[i, 0]) for i in range(m)]


def _is_optimal(std: _Std, x, y) -> bool:
    m, n = len(std.A), len(std.c)
    if any(v < 0 for v in x):
        return False
    if any(v > 0 for v in y):  # slack reduced cost is -y_i
        return False
    for j in range(n):
        if std.c[j] - sum((std.A[i][j] * y[i] for i in range(m) if y[i] and std.A[i][j]), Fraction(0)) < 0:
            return False
    return dot(std.c, x[:n]) == dot(std.b, y)


def _highs_basis(std: _Std):
    m, n = len(std.A), len(std.c)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("solver", "simplex")
    h.setOptionValue("presolve", "off")
    h.setOptionValue("threads", 1)
    model = highspy.HighsLp()
    model.num_col_ = n
    model.num_row_ = m
    model.col_cost_ = np.array([float(v) for v in std.c])
    model.col_lower_ = np.zeros(n)
    model.col_upper_ = np.full(n, highspy.kHighsInf)
    model.row_lower_ = np.full(m, -highspy.kHighsInf)
    model.row_upper_ = np.array([float(v) for v in std.b])
    starts, index, value = [0], [], []
    for j in range(n):
        for i in range(m):
            a = std.A[i][j]
            if a:
                index.append(i)
                value.append(float(a))
        starts.append(len(index))
    model.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    model.a_matrix_.start_ = np.array(starts, dtype=np.int32)
    model.a_matrix_.index_ = np.array(index, dtype=np.int32)
    model.a_matrix_.value_ = np.array(value)
    h.passModel(model)
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        return None
    basis = h.getBasis()
    basic = highspy.HighsBasisStatus.kBasic
    cols = [j for j in range(n) if basis.col_status[j] == basic]
    cols += [n + i for i in range(m) if basis.row_status[i] == basic]
    return cols


# exact two-phase simplex with Bland's rule ---------------------------------

def _pivot(T, r, s):
    row = T[r]
    p = row[s]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[s]
            if f:
                T[i] = [a - f * b if b else a for a, b in zip(other, row)]


def _simplex_phase(T, basis, cost_row, allowed):
    """Minimise with the reduced-cost row stored at T[-1]; Bland's rule."""
    m = len(T) - 1
    while True:
        z = T[-1]
        enter = next((j for j in allowed if z[j] < 0), None)
        if enter is None:
            return "optimal", None
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded", enter
        _pivot(T, leave, enter)
        basis[leave] = enter


def _bland(std: _Std):
    m, n = len(std.A), len(std.c)
    width = n + m
    rows, art = [], []
    for i in range(m):
        r = list(std.A[i]) + [Fraction(int(k == i)) for k in range(m)]
        rhs = std.b[i]
        if rhs < 0:
            r = [-v for v in r]
            rhs = -rhs
            art.append(i)
        rows.append(r + [rhs])
    na = len(art)
    T = []
    for i, r in enumerate(rows):
        extra = [Fraction(0)] * na
        if i in art:
            extra[art.index(i)] = Fraction(1)
        T.append(r[:-1] + extra + [r[-1]])
    basis = [n + i if i not in art else width + art.index(i) for i in range(m)]
    total = width + na
    if na:
        z = [Fraction(0)] * (total + 1)
        for i in art:
            for j in range(total + 1):
                z[j] -= T[i][j]
        for k in range(na):
            z[width + k] += 1  # artificial cost 1 minus its own row
        T.append(z)
        _simplex_phase(T, basis, None, range(total))
        if T[-1][-1] != 0:
            return "infeasible", None, None
        for i in range(m):
            if basis[i] >= width:
                j = next(j for j in range(width) if T[i][j] != 0)
                _pivot(T, i, j)
                basis[i] = j
        T.pop()
        T = [r[:width] + [r[-1]] for r in T]
    z = list(std.c) + [Fraction(0)] * m + [Fraction(0)]
    for i, j in enumerate(basis):
        cj = z[j]
        if cj:
            z = [a - cj * b for a, b in zip(z, T[i])]
    T.append(z)
    status, enter = _simplex_phase(T, basis, None, range(width))
    if status == "unbounded":
        ray = [Fraction(0)] * width
        ray[enter] = Fraction(1)
        for i, j in enumerate(basis):
            ray[j] = -T[i][enter]
        return "unbounded", basis, ray
    return "optimal", basis, None


def _recover(lp: LinearProgram, std: _Std, xs, negate: bool):
    x = []
    for j in range(lp.num_vars):
        x.append(std.var_shift[j] + sum((s * xs[k] for k, s in std.var_map[j]), Fraction(0)))
    return tuple(x)


def _recover_dual(lp: LinearProgram, std: _Std, ys, negate: bool):
    y = [Fraction(0)] * len(lp.constraints)
    for (i, sign), v in zip(std.row_origin, ys):
        if i >= 0:
            y[i] += sign * v
    if negate:
        y = [-v for v in y]
    return tuple(y)


def check_certificate(lp: LinearProgram, res: LPResult) -> bool:
    """Re-verify an optimal result in the original formulation.

    With multipliers y (one per constraint) the reduced costs
    r = c - sum_i y_i a_i must be supported by finite bounds, and the dual
    objective sum y_i b_i + sum_j r_j * bound_j must equal c.x exactly.
    """
    if res.status != "optimal":
        return True
    sgn = -1 if lp.sense == "max" else 1
    c = [sgn * a for a in lp.objective]
    y = [sgn * v for v in res.dual]
    x = res.primal
    for (row, rel, rhs), yi in zip(lp.constraints, y):
        lhs = dot(row, x)
        if (rel == _LE and (lhs > rhs or yi > 0)) or (rel == _GE and (lhs < rhs or yi < 0)) \
                or (rel == _EQ and lhs != rhs):
            return False
    dual_obj = sum((yi * rhs for (_, _, rhs), yi in zip(lp.constraints, y)), Fraction(0))
    for j, (lo, hi) in enumerate(lp.bounds):
        if (lo is not None and x[j] < lo) or (hi is not None and x[j] > hi):
            return False
        r = c[j] - sum((yi * row[j] for (row, _, _), yi in zip(lp.constraints, y) if yi), Fraction(0))
        if r > 0:
            if lo is None:
                return False
            dual_obj += r * lo
        elif r < 0:
            if hi is None:
                return False
            dual_obj += r * hi
    return dual_obj == dot(c, x) and sgn * dual_obj == res.optimum


def solve_lp(lp: LinearProgram, method: str = "auto") -> LPResult:
    """Solve exactly.  ``method="exact"`` skips the floating point guess."""
    negate = lp.sense == "max"
    std = _standardize(lp, negate)
    m, n = len(std.A), len(std.c)
    sol = None
    if method == "auto" and m:
        guess = _highs_basis(std)
        if guess is not None:
            sol = _basis_solution(std, guess)
            if sol is not None and not _is_optimal(std, *sol):
                sol = None
    if sol is None:
        if m == 0:
            if any(v < 0 for v in std.c):
                ray = [Fraction(int(v < 0)) for v in std.c]
                return LPResult("unbounded", ray=_recover_ray(lp, std, ray))
            sol = ([Fraction(0)] * n, [])
        else:
            status, basis, ray = _bland(std)
            if status == "infeasible":
                return LPResult("infeasible")
            if status == "unbounded":
                return LPResult("unbounded", ray=_recover_ray(lp, std, ray))
            sol = _basis_solution(std, basis)
            if sol is None or not _is_optimal(std, *sol):
                raise LPError("exact simplex produced a non-optimal basis")
    xs, ys = sol
    value = dot(std.c, xs[:n]) + dot(lp.objective, std.var_shift) * (-1 if negate else 1)
    res = LPResult("optimal", -value if negate else value,
                   _recover(lp, std, xs, negate), _recover_dual(lp, std, ys, negate))
    if not check_certificate(lp, res):
        raise LPError("certificate failed exact verification")
    return res


def _recover_ray(lp, std, ray):
    return tuple(sum((s * ray[k] for k, s in std.var_map[j]), Fraction(0)) for j in range(lp.num_vars))


# ---------------------------------------------------------------------------
# gauges

def _cover_ok(x, gens) -> bool:
    return all(any(g[i] > 0 for g in gens) for i, v in enumerate(x) if v)


def sch_gauge(x: Sequence, generators: Sequence[Sequence], witness: bool = False):
    """Minkowski functional of SCH(generators) at x (``INF`` if unbounded).

    With ``witness=True`` returns ``(value, lambda, mu)`` where lambda is
    the optimal combination and mu a dual functional with mu.|x| = value
    and mu.s_p <= 1 for every generator.
    """
    if hasattr(x, "entries"):
        x = x.entries
    x = vec(x)
    gens = [vec(abs(a) for a in (g.entries if hasattr(g, "entries") else g)) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    if any(len(g) != len(x) for g in gens):
        raise ValueError("dimension mismatch")
    ax = [abs(a) for a in x]
    supp = [i for i, a in enumerate(ax) if a]
    if not supp:
        return (Fraction(0), (Fraction(0),) * len(gens), (Fraction(0),) * len(x)) if witness else Fraction(0)
    if not _cover_ok(ax, gens):
        return (INF, None, None) if witness else INF
    cols = [p for p, g in enumerate(gens) if any(g[i] for i in supp)]
    lp = LinearProgram(
        objective=[1] * len(cols),
        constraints=[([gens[p][i] for p in cols], ">=", ax[i]) for i in supp],
    )
    res = solve_lp(lp)
    if not witness:
        return res.optimum
    lam = [Fraction(0)] * len(gens)
    for p, v in zip(cols, res.primal):
        lam[p] = v
    mu = [Fraction(0)] * len(x)
    for i, v in zip(supp, res.dual):
        mu[i] = v
    return res.optimum, tuple(lam), tuple(mu)


def dominated_bound(x: Sequence[Fraction], generators) -> Fraction | float:
    """Cheap upper bound on the gauge: best single-generator domination."""
    best = INF
    for g in generators:
        t = Fraction(0)
        for a, s in zip(x, g):
            a = abs(a)
            if a:
                if not s:
                    t = None
                    break
                t = max(t, a / s)
        if t is not None and t < best:
            best = t
    return best


def order_extreme_points(ball_generators: Sequence[Sequence]) -> list[tuple]:
    """Order extreme points of SCH(generators).

    After taking moduli and removing duplicates, |s_p| is order extreme
    exactly when its gauge with respect to the remaining generators exceeds
    one: a gauge of at most one exhibits a convex combination of other
    generators dominating it, while a larger gauge forces any dominating
    convex combination of ball points to put all its weight on s_p itself.
    """
    gens = sorted({vec(abs(a) for a in g) for g in ball_generators})
    gens = [g for g in gens if any(g)]
    if not gens:
        raise ValueError("no nonzero generators")
    d = len(gens[0])
    if not all(any(g[i] for g in gens) for i in range(d)):
        raise ValueError("generators do not span: some coordinate is never positive")
    # generators dominated coordinatewise by a single other one go first
    out = []
    for p, g in enumerate(gens):
        others = gens[:p] + gens[p + 1:]
        if not others:
            out.append(g)
            continue
        if any(all(a <= b for a, b in zip(g, h)) for h in others):
            continue
        if sch_gauge(g, others) > 1:
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# vertex enumeration by double description

@dataclass(frozen=True)
class HRep:
    """Polyhedron { x : a_i . x <= b_i }."""

    rows: tuple
    rhs: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(vec(r) for r in self.rows))
        object.__setattr__(self, "rhs", vec(self.rhs))
        if len(self.rows) != len(self.rhs):
            raise ValueError("one right hand side per row")

    @property
    def dim(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def contains(self, x) -> bool:
        return all(dot(a, x) <= b for a, b in zip(self.rows, self.rhs))


@dataclass(frozen=True)
class VRep:
    vertices: tuple
    rays: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(vec(v) for v in self.vertices))
        object.__setattr__(self, "rays", tuple(vec(r) for r in self.rays))


class PolyhedronError(ValueError):
    def __init__(self, message, rays=()):
        super().__init__(message)
        self.rays = rays


def _primitive(v: list[int]) -> tuple[int, ...]:
    g = 0
    for a in v:
        g = math.gcd(g, a)
    return tuple(a // g for a in v) if g > 1 else tuple(v)


def _int_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for a in row:
        den = den * a.denominator // math.gcd(den, a.denominator)
    return [int(a * den) for a in row]


def _rank_select(rows: list[list[int]], need: int) -> list[int]:
    """Indices of a greedy maximal independent subset of rows."""
    chosen, basis = [], []  # basis: list of (pivot col, reduced row)
    for idx, r in enumerate(rows):
        v = [Fraction(a) for a in r]
        for col, b in basis:
            if v[col]:
                f = v[col] / b[col]
                v = [x - f * y for x, y in zip(v, b)]
        piv = next((k for k, a in enumerate(v) if a), None)
        if piv is not None:
            basis.append((piv, v))
            chosen.append(idx)
            if len(chosen) == need:
                break
    return chosen


def _dd_cone(H: list[list[int]], order: list[int]) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of { r : h . r >= 0 for h in H }, pointed cones only."""
    d = len(H[0])
    init = _rank_select([H[i] for i in order], d)
    if len(init) < d:
        raise PolyhedronError("polyhedron is not pointed (contains a line)")
    init = [order[i] for i in init]
    M = flint.fmpq_mat(d, d, [a for i in init for a in H[i]])
    inv = M.inv()
    rays = []
    for col in range(d):
        v = [_frac(inv[r, col]) for r in range(d)]
        rays.append(_primitive(_int_row(v)))
    index = {i: k for k, i in enumerate(init)}
    zero = []
    for r in rays:
        mask = 0
        for i in init:
            if sum(a * b for a, b in zip(H[i], r)) == 0:
                mask |= 1 << i
        zero.append(mask)
    rest = [i for i in order if i not in index]
    processed = 0
    for i in init:
        processed |= 1 << i
    for i in rest:
        h = H[i]
        vals = [sum(a * b for a, b in zip(h, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zer]
        new_zero = [zero[k] for k in pos] + [zero[k] | (1 << i) for k in zer]
        if pos and neg:
            need = d - 2
            for p in pos:
                for q in neg:
                    common = zero[p] & zero[q]
                    if bin(common).count("1") < need:
                        continue
                    if any((zero[k] & common) == common for k in range(len(rays)) if k != p and k != q):
                        continue
                    vp, vq = vals[p], vals[q]
                    r = [vp * b - vq * a for a, b in zip(rays[p], rays[q])]
                    new_rays.append(_primitive(r))
                    new_zero.append(common | (1 << i))
        rays, zero = new_rays, new_zero
        processed |= 1 << i
    return list(zip(rays, zero))


def enumerate_vertices(h: HRep) -> VRep:
    """Vertices (and extreme rays) of a pointed polyhedron, exactly."""
    d = h.dim
    H = []
    for a, b in zip(h.rows, h.rhs):
        H.append(_int_row([b] + [-x for x in a]))
    H.append([1] + [0] * d)  # homogenising coordinate t >= 0
    order = [len(H) - 1] + list(range(len(H) - 1))
    verts, rays = set(), set()
    for r, _ in _dd_cone(H, order):
        t = r[0]
        if t > 0:
            verts.add(tuple(Fraction(a, t) for a in r[1:]))
        elif any(r[1:]):
            rays.add(tuple(Fraction(a) for a in _primitive(list(r[1:]))))
    return VRep(tuple(sorted(verts)), tuple(sorted(rays)))


def polar_dual(v: VRep) -> VRep:
    """Vertices of { y : v . y <= 1 for every vertex v }."""
    if not v.vertices:
        raise PolyhedronError("empty vertex list")
    h = HRep(v.vertices, (1,) * len(v.vertices))
    try:
        out = enumerate_vertices(h)
    except PolyhedronError as exc:
        raise PolyhedronError("0 is not an interior point of the hull") from exc
    if out.rays:
        raise PolyhedronError("0 is not an interior point of the hull", out.rays)
    return out


def maximal_vertices(rows: Sequence[Sequence]) -> list[tuple]:
    """Maximal vertices of the down-closed polytope { z >= 0 : row . z <= 1 }.

    A vertex is maximal iff each coordinate carries a tight row with a
    positive entry there (otherwise that coordinate could still grow).
    """
    rows = [vec(r) for r in rows]
    d = len(rows[0])
    if not all(any(r[i] > 0 for r in rows) for i in range(d)):
        raise PolyhedronError("polytope is unbounded in some coordinate")
    H = [[1] + [0] * d]
    for i in range(d):
        H.append([0] * (i + 1) + [1] + [0] * (d - i - 1))
    for r in rows:
        H.append(_int_row([Fraction(1)] + [-a for a in r]))
    out = set()
    for ray, _ in _dd_cone(H, list(range(len(H)))):
        t = ray[0]
        if t <= 0:
            continue
        z = tuple(Fraction(a, t) for a in ray[1:])
        tight = [r for r in rows if dot(r, z) == 1]
        if all(any(r[i] > 0 for r in tight) for i in range(d)):
            out.add(z)
    return sorted(out)


def brute_force_vertices(h: HRep) -> list[tuple]:
    """Oracle: solve every d-subset of rows and keep feasible solutions."""
    d = h.dim
    found = set()
    for subset in combinations(range(len(h.rows)), d):
        M = flint.fmpq_mat(d, d, [_fmpq(a) for i in subset for a in h.rows[i]])
        if M.det() == 0:
            continue
        sol = M.solve(flint.fmpq_mat(d, 1, [_fmpq(h.rhs[i]) for i in subset]))
        x = tuple(_frac(sol[k, 0]) for k in range(d))
        if h.contains(x):
            found.add(x)
    return sorted(found)
