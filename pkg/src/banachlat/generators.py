"""Seeded random instances: polytopal lattices, embeddings and pushout legs."""
from __future__ import annotations

import random
from fractions import Fraction

from .lattices import FiniteLattice, LatticeMap, from_functionals, grid
from .vectorlattice import GridShape


def rational(rng: random.Random, max_den: int = 12, lo: int = 1, hi: int | None = None) -> Fraction:
    """Random positive rational k/q with q <= max_den and lo/q <= value <= hi/q."""
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(lo, hi if hi is not None else q), q)


def polytopal_lattice(rng: random.Random, dim: int, max_funcs: int = 4, max_den: int = 12) -> FiniteLattice:
    """Random functional-form lattice whose functionals cover every atom."""
    while True:
        funcs = []
        for _ in range(rng.randint(1, max_funcs)):
            row = [rational(rng, max_den, 0) if rng.random() < 0.8 else Fraction(0) for _ in range(dim)]
            if any(row):
                funcs.append(row)
        if funcs and all(any(f[j] for f in funcs) for j in range(dim)):
            return from_functionals(funcs, f"random{dim}")


def _split(rng: random.Random, value: Fraction, parts: int, unit: Fraction) -> list[Fraction]:
    units = int(value / unit)
    if units < parts or value != units * unit:
        return [value]
    cuts = sorted(rng.sample(range(1, units), parts - 1))
    bounds = [0] + cuts + [units]
    return [unit * (b - a) for a, b in zip(bounds, bounds[1:])]


def leg_from_matrix(rng: random.Random, E: FiniteLattice, A, max_width: int = 4,
                    unit: Fraction = Fraction(1, 12)) -> LatticeMap:
    """A homomorphism E → ℓ∞^N(ℓ1^{M_k}) whose induced matrix is A.

    Each positive A(k,i) is spread over one or two cells of row k; spare
    cells stay outside the ideal generated by the image.
    """
    N, n = len(A), E.dim
    widths, cells = [], []  # cells[k] = list of (atom or None, coefficient)
    for k in range(N):
        row = []
        present = [i for i in range(n) if A[k][i]]
        budget = max_width - len(present)
        for i in present:
            parts = 1
            if budget > 0 and rng.random() < 0.4:
                parts, budget = 2, budget - 1
            for v in _split(rng, A[k][i], parts, unit):
                row.append((i, v))
        while budget > 0 and rng.random() < 0.3:
            row.append((None, Fraction(0)))
            budget -= 1
        if not row:
            row.append((None, Fraction(0)))
        rng.shuffle(row)
        widths.append(len(row))
        cells.append(row)
    shape = GridShape(N, tuple(widths))
    F = grid(shape)
    matrix = []
    for row in cells:
        for atom, v in row:
            matrix.append([v if atom == i else Fraction(0) for i in range(n)])
    return LatticeMap(E, F, matrix)


def pushout_legs(rng: random.Random, max_dim: int = 3, max_rows: int = 3, max_width: int = 4,
                 c: Fraction = Fraction(1), max_den: int = 12):
    """Two c-embeddings of a random E into grids with the same row count.

    E's norm is max_k A(k)·|x| for a random N×n matrix A.  Leg one realizes A
    (perturbed entrywise into [A/c, A·c] when c > 1), leg two a row
    permutation of A perturbed the same way.
    """
    n = rng.randint(1, max_dim)
    N = rng.randint(1, max_rows)
    q = max_den
    unit = Fraction(1, q)
    while True:
        A = [[Fraction(rng.randint(1, q), q) if rng.random() < 0.75 else Fraction(0) for _ in range(n)]
             for _ in range(N)]
        if all(any(r[i] for r in A) for i in range(n)) and all(sum(1 for a in r if a) <= max_width for r in A):
            break
    E = from_functionals([r for r in A if any(r)], f"E{n}")

    def perturb(M):
        if c == 1:
            return [list(r) for r in M]
        out = []
        for r in M:
            row = []
            for a in r:
                if not a:
                    row.append(a)
                    continue
                lo, hi = a / c, a * c
                choices = [Fraction(k, q) for k in range(1, 4 * q) if lo <= Fraction(k, q) <= hi]
                row.append(rng.choice(choices))
            out.append(row)
        return out

    perm = list(range(N))
    rng.shuffle(perm)
    f1 = leg_from_matrix(rng, E, perturb(A), max_width, unit)
    f2 = leg_from_matrix(rng, E, perturb([A[k] for k in perm]), max_width, unit)
    return f1, f2


def c_embedding(rng: random.Random, dom_dim: int, cod_dim: int, c: Fraction, max_den: int = 12):
    """Random homomorphism between random polytopal lattices, rescaled so its
    distortion constant is at most c (the codomain norm is kept)."""
    from .lattices import certify_embedding

    while True:
        dom = polytopal_lattice(rng, dom_dim, 3, max_den)
        cod = polytopal_lattice(rng, cod_dim, 3, max_den)
        owners = list(range(dom_dim)) + [rng.randrange(dom_dim) if rng.random() < 0.7 else None
                                         for _ in range(cod_dim - dom_dim)]
        rng.shuffle(owners)
        matrix = [[rational(rng, max_den) if owners[r] == j else Fraction(0) for j in range(dom_dim)]
                  for r in range(cod_dim)]
        f = LatticeMap(dom, cod, matrix)
        cert = certify_embedding(f)
        if cert.c_lower == float("inf"):
            continue
        # scale so that c_upper * c_lower stays the same but both sides balance
        s = cert.c_lower if cert.c_lower >= 1 / cert.c_upper else 1 / cert.c_upper
        g = f.scaled(s)
        cert = certify_embedding(g)
        if cert.constant <= c:
            return g


def near_isometry(rng: random.Random, dom_dim: int, cod_dim: int, eps: Fraction, max_den: int = 12):
    """A (1+eps)-embedding: an isometric copy whose domain functionals are
    shrunk entrywise by factors in [1/(1+eps), 1]."""
    from .embeddings import sublattice

    cod = polytopal_lattice(rng, cod_dim, 3, max_den)
    owners = list(range(dom_dim)) + [rng.randrange(dom_dim) if rng.random() < 0.7 else None
                                     for _ in range(cod_dim - dom_dim)]
    rng.shuffle(owners)
    matrix = [[rational(rng, max_den) if owners[r] == j else Fraction(0) for j in range(dom_dim)]
              for r in range(cod_dim)]
    cols = [[matrix[r][j] for r in range(cod_dim)] for j in range(dom_dim)]
    exact = sublattice(cod, cols)
    lo = 1 / (1 + eps)
    funcs = []
    for f in exact.functionals:
        funcs.append([a * (lo + (1 - lo) * Fraction(rng.randint(0, 4), 4)) for a in f])
    dom = from_functionals(funcs, f"near{dom_dim}")
    return LatticeMap(dom, cod, matrix)


def near_legs(rng: random.Random, dim: int, eps: Fraction, max_den: int = 12):
    """Two (1+eps)-embeddings of one random E into grids.

    Each leg realizes E's functionals shrunk entrywise by factors in
    [1/(1+eps), 1], so ‖f x‖ lies between ‖x‖/(1+eps) and ‖x‖.
    """
    E = polytopal_lattice(rng, dim, 3, max_den)
    lo = 1 / (1 + eps)
    legs = []
    for _ in range(2):
        A = [[a * (lo + (1 - lo) * Fraction(rng.randint(0, 4), 4)) for a in f] for f in E.functionals]
        legs.append(leg_from_matrix(rng, E, A, 4, Fraction(1, max_den)))
    return legs[0], legs[1]
