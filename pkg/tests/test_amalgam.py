import random
from fractions import Fraction

import pytest

from banachlat.amalgam import (AmalgamationError, amalgamate, amalgamate_c_embeddings, check_row_domination,
                               near_amalgamate, normalize_to_full, pad_rows, pushout)
from banachlat.embeddings import embed_into_grid
from banachlat.generators import leg_from_matrix, near_legs, polytopal_lattice, pushout_legs
from banachlat.lattices import (LatticeError, LatticeMap, certify_embedding, direct_sum_infty, ell1, ellinf,
                                extreme_points, from_functionals, from_generators, grid, identity_map,
                                induced_matrix, injections, real_line, zero_lattice)
from banachlat.vectorlattice import GridShape

Q = Fraction
L1_2 = grid(GridShape(1, (2,)))


def _square_commutes(res, f1, f2):
    return res.g1.compose(f1).matrix == res.g2.compose(f2).matrix


def test_normalize_full_grid_is_identity():
    f = LatticeMap(ell1(2), grid(GridShape.uniform(2, 2)), [[1, 0], [0, 1], [1, 0], [0, 1]])
    n = normalize_to_full(f)
    assert n.embedding == identity_map(f.cod)
    assert n.leg.matrix == f.matrix


def test_padding_by_row_duplication_keeps_norms():
    f = LatticeMap(real_line(), L1_2, [[Q(1, 2)], [Q(1, 2)]])
    padded = pad_rows(f, 2)
    assert padded.cod.shape == GridShape.uniform(2, 2)
    rng = random.Random(0)
    for _ in range(100):
        x = [Q(rng.randint(-9, 9), rng.randint(1, 9))]
        assert padded.cod.norm(padded.apply(x)) == f.cod.norm(f.apply(x))


def test_normalize_ball_form_codomain():
    sch = from_generators([(1, 0), (Q(1, 2), Q(1, 2))])
    f = LatticeMap(real_line(), sch, [[1], [0]])
    n = normalize_to_full(f, rows=3)
    assert n.leg.cod.shape.rows == 3
    assert certify_embedding(n.embedding).is_isometric()
    assert (certify_embedding(n.leg).c_upper, certify_embedding(n.leg).c_lower) == \
        (certify_embedding(f).c_upper, certify_embedding(f).c_lower)


def test_pushout_identical_legs():
    F = grid(GridShape(1, (1,)))
    f = LatticeMap(real_line(), F, [[1]])
    res = pushout(f, f, 1)
    assert res.g1.matrix == res.g2.matrix
    assert all(c.is_isometric() for c in res.certificates)


def test_pushout_worked_example():
    f1 = LatticeMap(real_line(), L1_2, [[Q(1, 2)], [Q(1, 2)]])
    f2 = LatticeMap(real_line(), L1_2, [[Q(1, 3)], [Q(2, 3)]])
    res = pushout(f1, f2, 1)
    assert res.G.dim == 4
    assert res.atom_legend == ("u(1,1)⊗v(1,1)", "u(1,1)⊗v(1,2)", "u(1,2)⊗v(1,1)", "u(1,2)⊗v(1,2)")
    # g1(u(1,1)) = u(1,1)⊗(1/3 v(1,1) + 2/3 v(1,2))
    assert res.g1.column(0) == (Q(1, 3), Q(2, 3), 0, 0)
    expected = (Q(1, 6), Q(1, 3), Q(1, 6), Q(1, 3))
    assert res.g1.compose(f1).column(0) == res.g2.compose(f2).column(0) == expected
    assert all(c.is_isometric() for c in res.certificates)
    assert all(certify_embedding(g, method="vertices").is_isometric() for g in (res.g1, res.g2))


@pytest.mark.parametrize("seed", range(50))
def test_pushout_random_isometric_legs(seed):
    rng = random.Random(seed)
    f1, f2 = pushout_legs(rng, max_dim=2, max_rows=2, max_width=3)
    res = pushout(f1, f2, 1)
    assert _square_commutes(res, f1, f2)
    assert all(c.is_isometric() for c in res.certificates)
    # raw maps are contractive
    assert all(c.c_upper <= 1 for c in res.raw_certificates)
    assert check_row_domination(induced_matrix(f1), induced_matrix(f2), 1).ok


def test_pushout_rejects_mismatched_inputs():
    f1 = LatticeMap(real_line(), L1_2, [[1], [0]])
    f2 = LatticeMap(real_line(), grid(GridShape.uniform(2, 1)), [[1], [1]])
    with pytest.raises(LatticeError):
        pushout(f1, f2, 1)
    with pytest.raises(LatticeError):
        pushout(f1, LatticeMap(ell1(2), L1_2, [[1, 0], [0, 1]]), 1)
    with pytest.raises(LatticeError):
        pushout(f1.scaled(2), f1, 1)


def test_amalgamate_full_grids_matches_pushout():
    rng = random.Random(3)
    f1, f2 = pushout_legs(rng, max_dim=2, max_rows=2, max_width=3)
    a, p = amalgamate(f1, f2, 1), pushout(f1, f2, 1)
    assert a.G == p.G and a.g1.matrix == p.g1.matrix and a.g2.matrix == p.g2.matrix


def test_amalgamate_linf_with_ball_form():
    E = real_line()
    f1 = LatticeMap(E, ellinf(2), [[1], [1]])
    sch = from_generators([(1, 0), (Q(1, 2), Q(1, 2))])
    f2 = LatticeMap(E, sch, [[1], [0]])
    res = amalgamate(f1, f2, 1)
    assert _square_commutes(res, f1, f2)
    assert all(c.is_isometric() for c in res.certificates)


def test_joint_embedding_over_zero():
    E = zero_lattice()
    F1, F2 = ellinf(2), from_functionals([(1, Q(1, 2)), (Q(1, 2), 1)])
    f1 = LatticeMap(E, F1, [[], []])
    f2 = LatticeMap(E, F2, [[], []])
    res = amalgamate(f1, f2, 1)
    assert all(c.is_isometric() for c in res.certificates)
    S = direct_sum_infty(F1, F2)
    assert all(certify_embedding(j).is_isometric() for j in injections(F1, F2, S))
    for g, F in ((res.g1, F1), (res.g2, F2)):
        for v in extreme_points(F):
            assert res.G.norm(g.apply(v)) == 1


def _legs_for_c_modes(rng, c):
    A = [[Q(1), Q(1, 2)], [Q(1, 3), Q(1)]]
    E = from_functionals(A)
    f_iso = leg_from_matrix(rng, E, A)
    while True:
        B = [[a * rng.choice([1 / c, Q(1), c]) for a in r] for r in A]
        f_c = leg_from_matrix(rng, E, B)
        if certify_embedding(f_c).constant == c:
            return f_c, f_iso


def test_c_modes_coincide_at_one():
    rng = random.Random(8)
    f1, f2 = pushout_legs(rng, max_dim=2, max_rows=2, max_width=3)
    for mode in ("balanced", "one_isometric"):
        res = amalgamate_c_embeddings(f1, 1, f2, 1, mode)
        assert all(c.is_isometric() for c in res.certificates)
        assert _square_commutes(res, f1, f2)


def test_one_isometric_mode():
    c = Q(3, 2)
    f1, f2 = _legs_for_c_modes(random.Random(1), c)
    res = amalgamate_c_embeddings(f1, c, f2, 1, "one_isometric")
    assert res.certificates[0].is_isometric()
    assert res.certificates[1].constant <= c
    assert _square_commutes(res, f1, f2)


@pytest.mark.parametrize("seed", range(6))
def test_c_modes_random(seed):
    rng = random.Random(seed)
    c1, c2 = rng.choice([Q(5, 4), Q(3, 2)]), rng.choice([Q(5, 4), Q(3, 2)])
    c = max(c1, c2)
    f1, f2 = pushout_legs(rng, max_dim=2, max_rows=2, max_width=3, c=min(c1, c2))
    bal = amalgamate_c_embeddings(f1, c1, f2, c2, "balanced")
    assert bal.certificates[0].constant <= c1 and bal.certificates[1].constant <= c2
    one = amalgamate_c_embeddings(f1, c1, f2, c2, "one_isometric")
    assert one.certificates[0].is_isometric() and one.certificates[1].constant <= c1 * c2
    for res in (bal, one):
        assert _square_commutes(res, f1, f2)
    assert c >= 1


def test_c_modes_reject_unknown_mode():
    f = LatticeMap(real_line(), L1_2, [[1], [0]])
    with pytest.raises(ValueError):
        amalgamate_c_embeddings(f, 1, f, 1, "sideways")


def test_near_amalgamate_exact_case():
    rng = random.Random(2)
    f1, f2 = pushout_legs(rng, max_dim=2, max_rows=2, max_width=3)
    res = near_amalgamate(f1, f2, 0)
    assert res.bound == 0
    assert res.g1.compose(f1).matrix == res.g2.compose(f2).matrix


def test_near_amalgamate_one_isometric_leg():
    eps = Q(1, 10)
    E = from_functionals([(1, Q(1, 2))])
    f1 = embed_into_grid(E)
    f2 = LatticeMap(E, f1.cod, [[1 / (1 + eps), 0], [0, Q(1, 2)]])
    assert certify_embedding(f2).constant <= 1 + eps
    res = near_amalgamate(f1, f2, eps)
    assert res.bound <= 2 * eps
    assert certify_embedding(res.g1).is_isometric() and certify_embedding(res.g2).is_isometric()


@pytest.mark.parametrize("seed", range(5))
def test_near_amalgamate_random(seed):
    eps = Q(1, 20)
    f1, f2 = near_legs(random.Random(seed), 2, eps)
    res = near_amalgamate(f1, f2, eps)
    assert res.bound <= 2 * eps


def test_row_domination_examples():
    f = embed_into_grid(ellinf(2), functionals=[(1, 0), (0, 1)])
    A = induced_matrix(f)
    assert check_row_domination(A, A, 1).ok
    g = embed_into_grid(ellinf(2), functionals=[(0, 1), (1, 0)])
    rep = check_row_domination(A, induced_matrix(g), 1)
    assert rep.ok and rep.gauges == (1, 1) and rep.reverse_gauges == (1, 1)


def test_row_domination_coarsened_leg():
    c = Q(3, 2)
    f_c, f_iso = _legs_for_c_modes(random.Random(4), c)
    rep = check_row_domination(induced_matrix(f_c), induced_matrix(f_iso), c)
    assert rep.ok and all(gv <= c * c for gv in rep.gauges)
    assert rep.reverse_gauges is None


def test_row_domination_detects_failure():
    f = embed_into_grid(ell1(2))
    g = LatticeMap(ell1(2), f.cod, [[2, 0], [0, 2]])
    assert not check_row_domination(induced_matrix(g), induced_matrix(f), 1).ok


def test_iterated_amalgamation():
    rng = random.Random(11)
    E = polytopal_lattice(rng, 2, max_funcs=2)
    f1 = embed_into_grid(E)
    f2 = embed_into_grid(E, compact=True)
    f3 = leg_from_matrix(rng, E, E.dual_oep)
    first = amalgamate(f1, f2, 1, normalize=False)
    via = first.g1.compose(f1)
    second = amalgamate(via, f3, 1, normalize=False)
    maps = [second.g1.compose(first.g1), second.g1.compose(first.g2), second.g2]
    for m in maps:
        assert certify_embedding(m).is_isometric()
    images = {m.compose(f).matrix for m, f in zip(maps, (f1, f2, f3))}
    assert len(images) == 1


def test_amalgamation_error_is_internal():
    assert issubclass(AmalgamationError, RuntimeError)
    assert not issubclass(AmalgamationError, LatticeError)
