import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from banachlat.polyhedra import (INF, HRep, LinearProgram, PolyhedronError, VRep, brute_force_vertices,
                                 check_certificate, enumerate_vertices, maximal_vertices, order_extreme_points,
                                 polar_dual, sch_gauge, solve_lp)
from banachlat.vectorlattice import dot
from strategies import rationals, vectors

Q = Fraction


def test_lp_trivial_max():
    res = solve_lp(LinearProgram([1], [([1], "<=", 3)], "max"))
    assert res.status == "optimal" and res.optimum == 3


def test_lp_infeasible():
    lp = LinearProgram([1], [([1], ">=", 1), ([1], "<=", 0)], "max", bounds=[(None, None)])
    assert solve_lp(lp).status == "infeasible"


def test_lp_unbounded_has_ray():
    res = solve_lp(LinearProgram([1, 0], [([0, 1], "<=", 1)], "max"))
    assert res.status == "unbounded"
    assert res.ray[0] > 0


def test_lp_bad_input():
    with pytest.raises(ValueError):
        LinearProgram([1, 2], [([1], "<=", 1)])
    with pytest.raises(ValueError):
        LinearProgram([1], [([1], "<", 1)])


def _random_system(rng):
    A = [[Q(rng.randint(0, 9), rng.randint(1, 6)) for _ in range(3)] for _ in range(3)]
    for i in range(3):
        A[i][i] += 1
    b = [Q(rng.randint(1, 9), rng.randint(1, 6)) for _ in range(3)]
    return A, b


@pytest.mark.parametrize("seed", range(25))
def test_lp_against_basis_enumeration(seed):
    # min Σλ subject to λ >= 0, Aλ >= b
    rng = random.Random(seed)
    A, b = _random_system(rng)
    lp = LinearProgram([1, 1, 1], [(row, ">=", r) for row, r in zip(A, b)])
    got = {m: solve_lp(lp, m) for m in ("auto", "bland")}
    box = [[-int(i == j) for j in range(3)] for i in range(3)]
    V = oracles.vertices([[-a for a in row] for row in A] + box, [-r for r in b] + [0, 0, 0])
    expected = min(sum(v) for v in V)
    for res in got.values():
        assert res.status == "optimal"
        assert res.optimum == expected
        assert check_certificate(lp, res)
        # strong duality, exactly
        assert sum(y * r for y, r in zip(res.dual, b)) == res.optimum


@given(st.lists(vectors(3, nonneg=True), min_size=1, max_size=4), vectors(3, nonneg=True))
def test_lp_max_matches_oracle(rows, c):
    rows = [tuple(a + 1 for a in r) for r in rows]  # bounded feasible region
    lp = LinearProgram(c, [(r, "<=", 1) for r in rows], "max")
    res = solve_lp(lp)
    assert res.optimum == oracles.lp_max(c, rows, [1] * len(rows))
    assert check_certificate(lp, res)


def test_gauge_examples():
    assert sch_gauge([1, 1], [[2, 0], [0, 2]]) == 1
    assert sch_gauge([1, 0, 0], [[0, 1, 0]]) == INF
    assert sch_gauge([0, 0], [[1, 1]]) == 0


@given(vectors(3, nonneg=True).filter(any))
def test_gauge_of_single_generator(g):
    assert sch_gauge(g, [g]) == 1


def test_gauge_witness_is_dual_certificate():
    gens = [(Q(1), Q(0)), (Q(1, 2), Q(1, 2))]
    value, lam, mu = sch_gauge((Q(3, 4), Q(1, 4)), gens, witness=True)
    assert value == 1
    assert dot(mu, (Q(3, 4), Q(1, 4))) == value
    assert all(dot(mu, g) <= 1 for g in gens)
    combo = [sum(l * g[i] for l, g in zip(lam, gens)) for i in range(2)]
    assert combo[0] >= Q(3, 4) and combo[1] >= Q(1, 4)


gen_sets = st.lists(vectors(3, nonneg=True).filter(any), min_size=1, max_size=4).filter(
    lambda gs: all(any(g[i] for g in gs) for i in range(3)))


@given(gen_sets, vectors(3))
def test_gauge_matches_dual_oracle(gens, x):
    assert sch_gauge(x, gens) == oracles.gauge(x, gens)


@given(gen_sets, vectors(3), vectors(3), rationals())
def test_gauge_is_lattice_norm(gens, x, y, c):
    gx, gy = sch_gauge(x, gens), sch_gauge(y, gens)
    assert sch_gauge([a + b for a, b in zip(x, y)], gens) <= gx + gy
    assert sch_gauge([c * a for a in x], gens) == abs(c) * gx
    small = [min(abs(a), abs(b)) for a, b in zip(x, y)]
    assert sch_gauge(small, gens) <= gy


def _ball_hrep(funcs):
    import itertools
    rows = []
    for f in funcs:
        for signs in itertools.product((1, -1), repeat=len(f)):
            rows.append(tuple(s * a for s, a in zip(signs, f)))
    return HRep(rows, (1,) * len(rows))


@given(gen_sets, vectors(3, max_num=3))
def test_three_way_membership(gens, x):
    oep = order_extreme_points(gens)
    funcs = maximal_vertices(oep)
    in_gauge = sch_gauge(x, gens) <= 1
    in_h = _ball_hrep(funcs).contains(x)
    # direct: |x| is dominated by a convex combination of generators
    in_direct = oracles.gauge(x, gens) <= 1
    assert in_gauge == in_h == in_direct


def test_square_vertices():
    sq = HRep([(1, 0), (-1, 0), (0, 1), (0, -1)], (1, 1, 1, 1))
    v = enumerate_vertices(sq)
    assert sorted(v.vertices) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    assert not v.rays


def test_polar_of_square_is_cross():
    v = polar_dual(VRep([(1, 1), (1, -1), (-1, 1), (-1, -1)]))
    assert sorted(v.vertices) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_polar_requires_interior_origin():
    with pytest.raises(PolyhedronError):
        polar_dual(VRep([(1, 0), (2, 1)]))


def _hexagon(rng):
    # six rational points, one in each sextant, so 0 is interior
    base = [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)]
    return [(Q(x) * Q(rng.randint(4, 12), 8), Q(y) * Q(rng.randint(4, 12), 8)) for x, y in base]


@pytest.mark.parametrize("seed", range(10))
def test_double_polar_on_random_hexagon(seed):
    pts = _hexagon(random.Random(seed))
    twice = polar_dual(polar_dual(VRep(pts)))
    assert sorted(twice.vertices) == oracles.hull_2d(pts)


@given(st.lists(vectors(3, max_num=4), min_size=1, max_size=6))
def test_dd_matches_brute_force(extra):
    rows = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)] + [tuple(r) for r in extra]
    rhs = (2,) * 6 + (1,) * len(extra)
    h = HRep(rows, rhs)
    got = sorted(enumerate_vertices(h).vertices)
    assert got == oracles.vertices(rows, rhs) == brute_force_vertices(h)
    # every vertex is cut out by 3 independent tight constraints
    for v in got:
        tight = [r for r, b in zip(h.rows, h.rhs) if dot(r, v) == b]
        assert oracles.rank(tight) == 3


def test_order_extreme_point_examples():
    linf = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    assert order_extreme_points(linf) == [(1, 1)]
    assert order_extreme_points([(1, 0), (0, 1), (-1, 0), (0, -1)]) == [(0, 1), (1, 0)]
    pts = [(Q(1), Q(0)), (Q(1, 2), Q(1, 2))]
    assert order_extreme_points(pts) == sorted(pts)
    # cross-check against the same ball written as {|x1| + |x2| <= 1, 2|x2| <= 1}
    assert oracles.oep_from_functionals([(1, 1), (0, 2)]) == sorted(pts)


@given(gen_sets)
def test_oep_matches_oracle(gens):
    oep = order_extreme_points(gens)
    funcs = oracles.maximal(oracles.down_polytope_vertices([tuple(g) for g in gens]))
    # order extreme points are the maximal vertices of the positive part of the ball
    assert oep == oracles.maximal(oracles.down_polytope_vertices(funcs))
    assert maximal_vertices(oep) == funcs


def test_maximal_vertices_needs_bounded():
    with pytest.raises(PolyhedronError):
        maximal_vertices([(1, 0)])
