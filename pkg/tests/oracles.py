"""Independent brute-force oracles used by the tests.

Nothing here imports the package: every routine works from plain Fraction
Gaussian elimination and exhaustive enumeration, so agreement with the
library is a genuine second opinion.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def solve(A, b):
    """Unique solution of a square system, or None if singular."""
    n = len(A)
    M = [[F(a) for a in row] + [F(r)] for row, r in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(M[i][n] / M[i][i] for i in range(n))


def vertices(rows, rhs):
    """Vertices of { x : row . x <= rhs } by trying every d-subset of rows."""
    d = len(rows[0])
    out = set()
    for sub in itertools.combinations(range(len(rows)), d):
        x = solve([rows[i] for i in sub], [rhs[i] for i in sub])
        if x is None:
            continue
        if all(sum(F(a) * v for a, v in zip(r, x)) <= F(h) for r, h in zip(rows, rhs)):
            out.add(x)
    return sorted(out)


def lp_max(c, rows, rhs):
    """max c.x over { x >= 0 : rows x <= rhs }, assumed bounded and nonempty."""
    d = len(c)
    box = [tuple(-int(i == j) for j in range(d)) for i in range(d)]
    V = vertices(list(rows) + box, list(rhs) + [0] * d)
    if not V:
        return None
    return max(sum(F(a) * v for a, v in zip(c, x)) for x in V)


def functional_norm(funcs, x):
    return max(sum(F(a) * abs(F(v)) for a, v in zip(f, x)) for f in funcs)


def down_polytope_vertices(rows):
    """Vertices of { z >= 0 : row . z <= 1 }."""
    d = len(rows[0])
    box = [tuple(-int(i == j) for j in range(d)) for i in range(d)]
    return vertices(list(rows) + box, [1] * len(rows) + [0] * d)


def maximal(points):
    pts = sorted(set(points))
    return [p for p in pts
            if not any(q != p and all(a <= b for a, b in zip(p, q)) for q in pts)]


def gauge(x, gens):
    """Gauge of |x| for SCH(gens), via the dual description.

    The solid hull of positive generators is { z : |z| <= y for some y in
    conv(gens ∪ 0) }, whose positive polar is { f >= 0 : f . g <= 1 }, so
    the gauge is the max of f . |x| over that polar's vertices.
    """
    ax = [abs(F(a)) for a in x]
    if not any(ax):
        return Fraction(0)
    d = len(ax)
    for i in range(d):
        if ax[i] and not any(F(g[i]) > 0 for g in gens):
            return float("inf")
    live = [i for i in range(d) if any(F(g[i]) > 0 for g in gens)]
    rows = [[F(g[i]) for i in live] for g in gens]
    V = down_polytope_vertices(rows)
    return max(sum(f * ax[i] for f, i in zip(v, live)) for v in V)


def ball_vertices(funcs):
    """Extreme points of { x : max_f f . |x| <= 1 }, by brute force."""
    d = len(funcs[0])
    rows, rhs = [], []
    for f in funcs:
        for signs in itertools.product((1, -1), repeat=d):
            rows.append(tuple(s * F(a) for s, a in zip(signs, f)))
            rhs.append(1)
    return vertices(rows, rhs)


def oep_from_functionals(funcs):
    """Order extreme points: moduli of ball vertices that are maximal."""
    V = ball_vertices(funcs)
    return maximal(tuple(abs(a) for a in v) for v in V)


def extreme_functionals(funcs):
    """Irredundant functionals: maximal vertices of the positive dual ball."""
    oep = oep_from_functionals(funcs)
    return maximal(down_polytope_vertices(oep))


def rank(rows) -> int:
    M = [[F(a) for a in r] for r in rows]
    r = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    return r


def hull_2d(points):
    """Strict convex hull vertices of planar points (Andrew's monotone chain)."""
    pts = sorted(set((F(a), F(b)) for a, b in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return sorted(lower[:-1] + upper[:-1])
