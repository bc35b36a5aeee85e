import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from banachlat.generators import polytopal_lattice
from banachlat.lattices import (INF, FiniteLattice, LatticeError, LatticeMap, certify_embedding, check_homomorphism,
                                direct_sum_infty, dualize, eval_norm, equivalences_audit, ell1, ellinf,
                                extreme_points, from_functionals, from_generators, grid, identity_map,
                                induced_matrix, injections, operator_norm, real_line, with_both_forms,
                                zero_lattice)
from banachlat.vectorlattice import GridShape
from strategies import functional_rows, vectors

Q = Fraction
SCH = from_generators([(1, 0), (Q(1, 2), Q(1, 2))], "sch")


def test_homomorphism_checks():
    assert check_homomorphism(identity_map(ell1(3))).ok
    bad = check_homomorphism(LatticeMap(ell1(2), ell1(2), [[1, 0], [0, -1]]))
    assert not bad.ok and bad.witness == ("negative entry", 1, 1, -1)
    f = LatticeMap(ell1(2), ell1(3), [[1, 0], [1, 0], [0, 2]])
    assert check_homomorphism(f).ok
    overlap = LatticeMap(ell1(2), ell1(2), [[1, 1], [0, 1]])
    assert not check_homomorphism(overlap).ok


def test_norm_examples():
    assert eval_norm(ell1(3), (1, -2, 3)) == 6
    assert eval_norm(ellinf(2), (Q(1, 2), -3)) == 3
    assert eval_norm(SCH, (Q(3, 4), Q(1, 4))) == 1


def test_lattice_validation():
    with pytest.raises(LatticeError):
        FiniteLattice(2, ((1, 0),))          # atom 2 unseen: not positive-definite
    with pytest.raises(LatticeError):
        FiniteLattice(2, ((1, -1),))
    with pytest.raises(LatticeError):
        FiniteLattice(2)
    with pytest.raises(LatticeError):
        ell1(2).norm((1, 2, 3))
    assert zero_lattice().dim == 0 and zero_lattice().norm(()) == 0


@given(functional_rows(3), vectors(3))
def test_both_forms_agree(funcs, x):
    lat = from_functionals(funcs)
    ball = from_generators(lat.oep)
    assert lat.norm(x) == ball.norm(x) == oracles.functional_norm(funcs, x)
    assert sorted(lat.oep) == oracles.maximal(oracles.down_polytope_vertices(funcs))


def test_certificate_examples():
    for lat in (ell1(2), ellinf(3), SCH):
        cert = certify_embedding(identity_map(lat))
        assert cert.is_isometric()
    cert = certify_embedding(identity_map(ell1(2)).scaled(2))
    assert (cert.c_upper, cert.c_lower) == (2, Q(1, 2))


def test_certificate_witnesses_attain_bounds():
    rng = random.Random(5)
    for _ in range(20):
        dom = polytopal_lattice(rng, 2)
        cod = polytopal_lattice(rng, 3)
        f = LatticeMap(dom, cod, [[Q(rng.randint(1, 5), 3), 0], [0, 1], [0, Q(1, 2)]])
        cert = certify_embedding(f)
        assert dom.norm(cert.upper_witness) == 1
        assert cod.norm(f.apply(cert.upper_witness)) == cert.c_upper
        w = cert.lower_witness
        assert cod.norm(f.apply(w)) == 1 and dom.norm(w) == cert.c_lower


def test_non_injective_has_infinite_lower_constant():
    f = LatticeMap(ell1(2), ell1(1), [[1, 0]])
    cert = certify_embedding(f)
    assert cert.c_lower == INF
    assert certify_embedding(f, method="vertices").c_lower == INF


def test_certify_rejects_non_homomorphism():
    with pytest.raises(LatticeError):
        certify_embedding(LatticeMap(ell1(2), ell1(2), [[1, -1], [0, 1]]))


def _random_hom(rng, dom, cod):
    owners = list(range(dom.dim)) + [rng.choice([None] + list(range(dom.dim))) for _ in range(cod.dim - dom.dim)]
    rng.shuffle(owners)
    return LatticeMap(dom, cod, [[Q(rng.randint(1, 6), rng.randint(1, 4)) if owners[r] == j else Q(0)
                                  for j in range(dom.dim)] for r in range(cod.dim)])


def _oracle_constants(f):
    """(c_upper, c_lower) by brute force over the vertices of both balls."""
    dom_funcs, cod_funcs = f.dom.functionals, f.cod.functionals
    up = max(oracles.functional_norm(cod_funcs, f.apply(v)) for v in oracles.oep_from_functionals(dom_funcs))
    cols = f.columns()
    psi = [tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in cod_funcs]
    psi = [p for p in psi if any(p)]
    low = max(oracles.functional_norm(dom_funcs, v) for v in oracles.down_polytope_vertices(psi))
    return up, low


@pytest.mark.parametrize("seed", range(20))
def test_certificate_routes_agree_with_oracle(seed):
    rng = random.Random(seed)
    dom = polytopal_lattice(rng, rng.randint(1, 2))
    cod = polytopal_lattice(rng, 3)
    f = _random_hom(rng, dom, cod)
    lp, vx = certify_embedding(f), certify_embedding(f, method="vertices")
    assert (lp.c_upper, lp.c_lower) == (vx.c_upper, vx.c_lower) == _oracle_constants(f)
    # ball-form codomain takes the gauge route
    g = f.with_cod(from_generators(cod.oep))
    assert (certify_embedding(g).c_upper, certify_embedding(g).c_lower) == (lp.c_upper, lp.c_lower)


@pytest.mark.parametrize("seed", range(15))
def test_composition_bound(seed):
    rng = random.Random(100 + seed)
    A, B, C = (polytopal_lattice(rng, d) for d in (1, 2, 3))
    f, g = _random_hom(rng, A, B), _random_hom(rng, B, C)
    gf = g.compose(f)
    assert check_homomorphism(gf).ok
    assert certify_embedding(gf).c_upper <= certify_embedding(g).c_upper * certify_embedding(f).c_upper


@given(st.integers(0, 10 ** 6), vectors(2))
def test_modulus_commutes_with_homomorphisms(seed, x):
    rng = random.Random(seed)
    dom, cod = polytopal_lattice(rng, 2), polytopal_lattice(rng, 3)
    f = _random_hom(rng, dom, cod)
    lhs = [abs(a) for a in f.apply(x)]
    rhs = list(f.apply([abs(a) for a in x]))
    assert lhs == rhs
    assert cod.norm(lhs) == cod.norm(rhs)


def test_audit_examples():
    rep = equivalences_audit(ellinf(2))
    assert rep.ok and rep.oep == [(1, 1)]
    assert sorted(ellinf(2).dual_oep) == [(0, 1), (1, 0)]
    assert rep.dual_extreme_point_count == 4
    rep = equivalences_audit(ell1(2))
    assert rep.ok and sorted(rep.oep) == [(0, 1), (1, 0)]
    assert ell1(2).dual_oep == ((1, 1),) and rep.dual_extreme_point_count == 4


@pytest.mark.parametrize("seed", range(20))
def test_audit_against_extreme_point_oracle(seed):
    rng = random.Random(seed)
    lat = polytopal_lattice(rng, 3)
    rep = equivalences_audit(lat)
    assert rep.ok, rep.violations
    brute = oracles.ball_vertices(lat.functionals)
    assert extreme_points(lat) == brute
    assert rep.extreme_point_count == len(brute)
    assert sorted(lat.oep) == oracles.maximal(tuple(abs(a) for a in v) for v in brute)
    assert sorted(lat.dual_oep) == oracles.extreme_functionals(lat.functionals)


def test_dual_examples():
    assert dualize(ell1(3)).norm((1, -2, 3)) == 3
    assert dualize(ellinf(3)).norm((1, -2, 3)) == 6


@given(vectors(2))
def test_double_dual_preserves_norm(x):
    assert dualize(dualize(SCH)).norm(x) == SCH.norm(x)


@pytest.mark.parametrize("seed", range(10))
def test_dualize_involution_on_vertices(seed):
    lat = polytopal_lattice(random.Random(seed), 3)
    back = dualize(dualize(lat))
    for v in extreme_points(lat):
        assert back.norm(v) == lat.norm(v) == 1


def test_direct_sums():
    s = direct_sum_infty(real_line(), real_line())
    assert all(s.norm(v) == ellinf(2).norm(v) for v in [(1, 2), (-3, 1), (0, 0)])
    grid22 = grid(GridShape.uniform(2, 2))
    t = direct_sum_infty(ell1(2), ell1(2))
    assert sorted(t.functionals) == sorted(grid22.functionals)
    assert t.shape == grid22.shape


@given(functional_rows(2, 2), functional_rows(2, 2), vectors(2), vectors(2))
def test_direct_sum_norm_and_injections(fa, fb, x, y):
    A, B = from_functionals(fa), from_functionals(fb)
    S = direct_sum_infty(A, B)
    assert S.norm(x + y) == max(A.norm(x), B.norm(y))
    for inj in injections(A, B, S):
        assert certify_embedding(inj).is_isometric()


def test_induced_matrix():
    shape = GridShape(2, (2, 1))
    f = LatticeMap(ell1(2), grid(shape), [[Q(1, 2), 0], [0, 1], [Q(1, 3), 0]])
    A = induced_matrix(f)
    assert A.entries == ((Q(1, 2), 1), (Q(1, 3), 0))
    assert A.supports == (((0,), (1,)), ((0,), ()))
    for k in range(A.rows):
        for i in range(A.cols):
            assert (A.entries[k][i] == 0) == (A.supports[k][i] == ())


def test_operator_norm_of_general_map():
    # rotation-like map on ℓ∞²: not a homomorphism, still has an operator norm
    assert operator_norm(ellinf(2), ellinf(2), [[1, 1], [1, -1]]) == 2
    assert operator_norm(ell1(2), ell1(2), [[1, 1], [1, -1]]) == 2


def test_with_both_forms_keeps_norm():
    lat = polytopal_lattice(random.Random(3), 3)
    both = with_both_forms(lat)
    assert both.ball_form is not None and both.functional_form is not None
    for v in extreme_points(lat):
        assert both.norm(v) == 1
