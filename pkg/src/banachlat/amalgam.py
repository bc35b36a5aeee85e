"""The amalgamation pushout and its variants.

Given homomorphisms f1: E → F1 and f2: E → F2, the ambient lattice G has
one atom u⊗v for every pair of cells u in the support of f1(e_i) and v in
the support of f2(e_i) (same i), plus a copy of every cell outside the
ideals generated by f1(E) and f2(E).  A cell u in the support of f1(e_i)
goes to u ⊗ f2(e_i), a cell v in the support of f2(e_i) to f1(e_i) ⊗ v,
and the unit ball of G is the solid hull of both image balls.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .embeddings import embed_into_grid, isometrize_pair, renorm_for_isometry
from .lattices import (FiniteLattice, InducedMatrix, LatticeError, LatticeMap, EmbeddingCertificate,
                       certify_embedding, grid, identity_map, operator_norm, require_homomorphism)
from .polyhedra import sch_gauge
from .vectorlattice import GridShape


class AmalgamationError(RuntimeError):
    """A promised certificate failed; indicates a bug, never bad input."""


@dataclass(frozen=True)
class PushoutResult:
    g1: LatticeMap
    g2: LatticeMap
    G: FiniteLattice
    atom_legend: tuple
    certificates: tuple
    raw_g1: LatticeMap | None = None
    raw_g2: LatticeMap | None = None
    raw_certificates: tuple | None = field(default=None)


def _is_grid(lat: FiniteLattice) -> bool:
    return lat.shape is not None and lat._is_plain_grid()


def _cell_tag(lat: FiniteLattice, letter: str, p: int) -> str:
    if _is_grid(lat):
        k, j = lat.shape.cell(p)
        return f"{letter}({k + 1},{j + 1})"
    return f"{letter}({p + 1})"


class Normalized(NamedTuple):
    leg: LatticeMap        # E → grid
    embedding: LatticeMap  # F → grid


def pad_rows(f: LatticeMap, rows: int) -> LatticeMap:
    """Duplicate rows of a grid codomain (cyclically) until it has ``rows`` rows."""
    shape = f.cod.shape
    if rows < shape.rows:
        raise LatticeError("cannot pad to fewer rows")
    slices = shape.row_slices()
    order = list(range(shape.rows)) + [k % shape.rows for k in range(rows - shape.rows)]
    new_shape = GridShape(rows, tuple(shape.cols[k] for k in order))
    matrix = [f.matrix[c] for k in order for c in slices[k]]
    return LatticeMap(f.dom, grid(new_shape), matrix)


def normalize_to_full(f: LatticeMap, rows: int | None = None, compact: bool = True) -> Normalized:
    """Compose f with a grid embedding of its codomain, optionally padding rows."""
    require_homomorphism(f)
    if _is_grid(f.cod):
        emb = identity_map(f.cod)
    else:
        emb = embed_into_grid(f.cod, compact=compact)
    if rows is not None and rows != emb.cod.shape.rows:
        emb = pad_rows(emb, rows)
    return Normalized(emb.compose(f), emb)


def _supports(f: LatticeMap) -> list[list[int]]:
    return [[p for p in range(f.cod.dim) if f.matrix[p][i]] for i in range(f.dom.dim)]


def pushout(f1: LatticeMap, f2: LatticeMap, c=1, check_inputs: bool = True,
            certify: bool = True) -> PushoutResult:
    """Amalgamate two c-embeddings of the same E.

    The raw maps are contractive c²-embeddings; the returned maps are
    c·g_j, which are c-embeddings.  Codomains are usually grids with equal
    row counts, but any lattices work since the construction only looks at
    atoms.
    """
    c = Fraction(c)
    if f1.dom != f2.dom:
        raise LatticeError("legs have different domains")
    if _is_grid(f1.cod) and _is_grid(f2.cod) and f1.cod.shape.rows != f2.cod.shape.rows:
        raise LatticeError("grid codomains have different row counts",
                           (f1.cod.shape.rows, f2.cod.shape.rows))
    require_homomorphism(f1)
    require_homomorphism(f2)
    if check_inputs:
        for f in (f1, f2):
            cert = certify_embedding(f)
            if cert.constant > c:
                raise LatticeError("input leg exceeds the distortion constant",
                                   (cert.c_upper, cert.c_lower))
    F1, F2 = f1.cod, f2.cod
    S1, S2 = _supports(f1), _supports(f2)
    for S in (S1, S2):
        seen = set()
        for cells in S:
            if seen & set(cells):
                raise LatticeError("images of E-atoms are not disjoint")
            seen |= set(cells)
    pairs = sorted((p, q, i) for i in range(f1.dom.dim) for p in S1[i] for q in S2[i])
    ideal1 = {p for s in S1 for p in s}
    ideal2 = {q for s in S2 for q in s}
    rest1 = [p for p in range(F1.dim) if p not in ideal1]
    rest2 = [q for q in range(F2.dim) if q not in ideal2]
    n = len(pairs) + len(rest1) + len(rest2)
    g1 = [[Fraction(0)] * F1.dim for _ in range(n)]
    g2 = [[Fraction(0)] * F2.dim for _ in range(n)]
    legend = []
    for a, (p, q, i) in enumerate(pairs):
        g1[a][p] = f2.matrix[q][i]
        g2[a][q] = f1.matrix[p][i]
        legend.append(_cell_tag(F1, "u", p) + "⊗" + _cell_tag(F2, "v", q))
    for a, p in enumerate(rest1, start=len(pairs)):
        g1[a][p] = Fraction(1)
        legend.append(_cell_tag(F1, "u", p))
    for a, q in enumerate(rest2, start=len(pairs) + len(rest1)):
        g2[a][q] = Fraction(1)
        legend.append(_cell_tag(F2, "v", q))

    def image(mat, w):
        return tuple(sum((r[j] * w[j] for j in range(len(w)) if w[j]), Fraction(0)) for r in mat)

    gens = []
    seen = set()
    for mat, lat in ((g1, F1), (g2, F2)):
        for w in lat.oep:
            v = image(mat, w)
            if v not in seen:
                seen.add(v)
                gens.append(v)
    G = FiniteLattice(n, None, tuple(gens), "G")
    raw1, raw2 = LatticeMap(F1, G, g1), LatticeMap(F2, G, g2)
    if raw1.compose(f1).matrix != raw2.compose(f2).matrix:
        raise AmalgamationError("pushout square does not commute")
    if not certify:
        return PushoutResult(raw1.scaled(c), raw2.scaled(c), G, tuple(legend), (), raw1, raw2, None)
    raw_certs = (certify_embedding(raw1, upper_hint=1), certify_embedding(raw2, upper_hint=1))
    for cert in raw_certs:
        if cert.c_upper > 1 or cert.c_lower > c * c:
            raise AmalgamationError("raw pushout map outside the promised bounds")
    out1, out2 = raw1.scaled(c), raw2.scaled(c)
    certs = tuple(cert.scaled(c) for cert in raw_certs)
    for cert in certs:
        if cert.constant > c:
            raise AmalgamationError("scaled pushout map exceeds c")
    return PushoutResult(out1, out2, G, tuple(legend), certs, raw1, raw2, raw_certs)


def amalgamate(f1: LatticeMap, f2: LatticeMap, c=1, normalize: bool = True,
               certify: bool = True) -> PushoutResult:
    """Pushout after embedding both codomains into grids with equal row counts.

    With ``normalize=False`` the construction runs directly on the given
    codomains, which keeps the ambient lattice small.
    """
    c = Fraction(c)
    if not normalize:
        return pushout(f1, f2, c, certify=certify)
    for f in (f1, f2):
        cert = certify_embedding(f)
        if cert.constant > c:
            raise LatticeError("input leg exceeds the distortion constant", (cert.c_upper, cert.c_lower))
    n1, n2 = normalize_to_full(f1), normalize_to_full(f2)
    rows = max(n1.embedding.cod.shape.rows, n2.embedding.cod.shape.rows)
    n1, n2 = normalize_to_full(f1, rows), normalize_to_full(f2, rows)
    res = pushout(n1.leg, n2.leg, c, check_inputs=False)
    h1 = res.g1.compose(n1.embedding)
    h2 = res.g2.compose(n2.embedding)
    certs = (certify_embedding(h1, upper_hint=c), certify_embedding(h2, upper_hint=c))
    for cert in certs:
        if cert.constant > c:
            raise AmalgamationError("amalgamated map exceeds c")
    if h1.compose(f1).matrix != h2.compose(f2).matrix:
        raise AmalgamationError("amalgamation square does not commute")
    return PushoutResult(h1, h2, res.G, res.atom_legend, certs,
                         res.raw_g1.compose(n1.embedding), res.raw_g2.compose(n2.embedding),
                         res.raw_certificates)


def amalgamate_c_embeddings(f1: LatticeMap, c1, f2: LatticeMap, c2, mode: str = "balanced") -> PushoutResult:
    c1, c2 = Fraction(c1), Fraction(c2)
    if mode not in ("balanced", "one_isometric"):
        raise ValueError("mode must be 'balanced' or 'one_isometric'")
    F1r = renorm_for_isometry(f1, c1)
    F2r = renorm_for_isometry(f2, c2)
    # the renormed codomains are ball-form lattices, so amalgamate them directly
    res = amalgamate(f1.with_cod(F1r), f2.with_cod(F2r), 1, normalize=False)
    g1 = res.g1.with_dom(f1.cod)
    g2 = res.g2.with_dom(f2.cod)
    G = res.G
    if mode == "one_isometric":
        G = renorm_for_isometry(g1, c1)
        g1, g2 = g1.with_cod(G), g2.with_cod(G)
    certs = (certify_embedding(g1), certify_embedding(g2))
    limits = (c1, c2) if mode == "balanced" else (Fraction(1), c1 * c2)
    for cert, lim in zip(certs, limits):
        if cert.constant > lim:
            raise AmalgamationError("renormed amalgam exceeds its promised constant")
    return PushoutResult(g1, g2, G, res.atom_legend, certs)


class NearAmalgam(NamedTuple):
    H: FiniteLattice
    g1: LatticeMap
    g2: LatticeMap
    bound: Fraction


def near_amalgamate(f1: LatticeMap, f2: LatticeMap, eps) -> NearAmalgam:
    """Isometries g_j: F_j → H with ‖g1∘f1 − g2∘f2‖ ≤ 2·eps."""
    eps = Fraction(eps)
    p1 = isometrize_pair(f1, eps)
    p2 = isometrize_pair(f2, eps)
    res = pushout(p1.g, p2.g, 1, check_inputs=False, certify=False)
    g1 = res.g1.compose(p1.h)
    g2 = res.g2.compose(p2.h)
    for g in (g1, g2):
        if not certify_embedding(g, upper_hint=1).is_isometric():
            raise AmalgamationError("near amalgam map is not isometric")
    lhs, rhs = g1.compose(f1), g2.compose(f2)
    diff = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(lhs.matrix, rhs.matrix))
    bound = operator_norm(f1.dom, res.G, diff)
    return NearAmalgam(res.G, g1, g2, bound)


class RowDomination(NamedTuple):
    ok: bool
    gauges: tuple
    reverse_gauges: tuple | None


def check_row_domination(A: InducedMatrix, B: InducedMatrix, c=1) -> RowDomination:
    """Every row of A lies in c²·SCH(rows of B); for c = 1 also the converse."""
    c = Fraction(c)
    if A.cols != B.cols:
        raise LatticeError("induced matrices have different column counts")
    rows_a = [r for r in A.entries if any(r)]
    rows_b = [r for r in B.entries if any(r)]
    forward = tuple(sch_gauge(r, rows_b) for r in A.entries)
    ok = all(g <= c * c for g in forward)
    backward = None
    if c == 1:
        backward = tuple(sch_gauge(r, rows_a) for r in B.entries)
        ok = ok and all(g <= 1 for g in backward)
    return RowDomination(ok, forward, backward)
