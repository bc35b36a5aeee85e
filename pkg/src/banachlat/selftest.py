"""A fast invariant suite for ``banachlat selftest``.

Each check builds seeded random instances and verifies the exact
properties the constructions promise.  Returns the names of failed checks.
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import documents as docs
from .amalgam import check_row_domination, near_amalgamate, pushout
from .branching import band_project, build_dyadic_tree, check_tree, two_generator, verify_reconstruction
from .embeddings import embed_into_grid, isometrize_pair, renorm_for_isometry
from .fraisse import GeneratedTuple, build_chain, dk_lower, dk_upper
from .generators import c_embedding, near_isometry, near_legs, polytopal_lattice, pushout_legs
from .lattices import (certify_embedding, ell1, ellinf, equivalences_audit, grid, induced_matrix)
from .vectorlattice import GridShape


class CheckFailed(Exception):
    pass


def _require(condition) -> None:
    if not condition:
        raise CheckFailed


def _pushouts(rng):
    for _ in range(10):
        f1, f2 = pushout_legs(rng)
        res = pushout(f1, f2, 1)
        _require(res.g1.compose(f1).matrix == res.g2.compose(f2).matrix)
        _require(all(c.is_isometric() for c in res.certificates))
        _require(check_row_domination(induced_matrix(f1), induced_matrix(f2), 1).ok)
    for _ in range(5):
        c = rng.choice([Fraction(5, 4), Fraction(3, 2)])
        f1, f2 = pushout_legs(rng, c=c)
        res = pushout(f1, f2, c)
        _require(all(r.c_upper <= 1 and r.c_lower <= c * c for r in res.raw_certificates))
        _require(all(r.constant <= c for r in res.certificates))


def _audits(rng):
    for _ in range(10):
        lat = polytopal_lattice(rng, rng.randint(1, 3))
        _require(equivalences_audit(lat).ok)
        emb = embed_into_grid(lat)
        _require(certify_embedding(emb).is_isometric())


def _renorm_and_splitting(rng):
    for _ in range(4):
        f = c_embedding(rng, 2, 3, Fraction(2))
        X = renorm_for_isometry(f, 2)
        _require(certify_embedding(f.with_cod(X)).is_isometric())
    for _ in range(4):
        eps = rng.choice([Fraction(1, 10), Fraction(1, 20)])
        f = near_isometry(rng, 2, 3, eps)
        _require(isometrize_pair(f, eps).bound <= eps)
        f1, f2 = near_legs(rng, 2, eps)
        _require(near_amalgamate(f1, f2, eps).bound <= 2 * eps)


def _trees(rng):
    tree = build_dyadic_tree(2)
    _require(check_tree(tree).ok)
    gens = two_generator(tree)
    _require(all(verify_reconstruction(tree, gens, k).ok for k in (1, 2)))
    _require(band_project(tree, (1,))[1].ok)


def _distances(rng):
    a = GeneratedTuple(ell1(2), [(1, 0), (0, 1)])
    b = GeneratedTuple(ellinf(2), [(1, 0), (0, 1)])
    lo, up = dk_lower(a, b), dk_upper(a, b)
    _require(lo.lower <= up.upper)
    _require(dk_upper(a, a).upper == 0)


def _chain(rng):
    cat = [ell1(2), ellinf(2), grid(GridShape(2, (2, 2)))]
    s1 = build_chain(cat, 5, 3)
    s2 = build_chain(cat, 5, 3)
    _require(docs.dumps(docs.chain_doc(s1)) == docs.dumps(docs.chain_doc(s2)))
    _require(all(certify_embedding(m).is_isometric() for m in s1.maps))
    _require(all(equivalences_audit(s).ok for s in s1.stages))


def _documents(rng):
    lat = polytopal_lattice(rng, 3)
    _require(docs.parse(docs.loads(docs.dumps(docs.lattice_doc(lat)))) == lat)
    f1, _ = pushout_legs(rng)
    back = docs.parse(docs.loads(docs.dumps(docs.map_doc(f1))))
    _require(back == f1)
    tree = build_dyadic_tree(1)
    text = docs.dumps(docs.tree_doc(tree))
    _require(docs.dumps(docs.tree_doc(docs.parse(docs.loads(text)))) == text)


CHECKS = [("pushouts", _pushouts), ("audits", _audits), ("renorm and splitting", _renorm_and_splitting),
          ("trees", _trees), ("distances", _distances), ("chain", _chain), ("documents", _documents)]


def run(verbose: bool = True, seed: int = 2024) -> list[str]:
    failed = []
    for name, check in CHECKS:
        try:
            check(random.Random(f"{seed}:{name}"))
            ok = True
        except CheckFailed:
            ok = False
        if not ok:
            failed.append(name)
        if verbose:
            print(f"{'ok' if ok else 'FAIL'}  {name}")
    return failed
