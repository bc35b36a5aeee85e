"""Grid embeddings, renormings, almost-isometry splitting and atom snapping."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .lattices import (INF, FiniteLattice, LatticeError, LatticeMap, certify_embedding,
                       direct_sum_infty, grid, operator_norm, require_homomorphism)
from .polyhedra import order_extreme_points
from .vectorlattice import GridShape, dot, vec


def sublattice(ambient: FiniteLattice, atoms: Sequence[Sequence], label: str = "") -> FiniteLattice:
    """Coefficient lattice of positive vectors: ‖c‖ = ‖Σ |c_i| a_i‖ in ambient."""
    atoms = [vec(a) for a in atoms]
    funcs = set()
    for f in ambient.functionals:
        row = tuple(dot(f, a) for a in atoms)
        if any(row):
            funcs.add(row)
    lat = FiniteLattice(len(atoms), tuple(sorted(funcs)), None, label or f"sub({ambient.label})")
    return FiniteLattice(lat.dim, lat.dual_oep, None, lat.label)


def embed_into_grid(lat: FiniteLattice, functionals=None, compact: bool = False) -> LatticeMap:
    """φ(e_j) = Σ_i a(i,j) u(i,j), one grid row per functional.

    ``functionals`` may be indices into ``lat.dual_oep`` or explicit
    vectors.  With ``compact=True`` cells where a(i,j) = 0 are dropped, so
    row i only has one cell per atom in the support of the i-th functional.
    """
    if functionals is None:
        funcs = list(lat.dual_oep)
    else:
        funcs = [lat.dual_oep[k] if isinstance(k, int) else vec(k) for k in functionals]
    if not funcs:
        raise LatticeError("need at least one functional")
    n = lat.dim
    for j in range(n):
        if not any(f[j] > 0 for f in funcs):
            raise LatticeError("functional subset is not positive-definite",
                               tuple(Fraction(int(k == j)) for k in range(n)))
    if compact:
        widths = tuple(sum(1 for a in f if a) for f in funcs)
        cells = [(i, j) for i, f in enumerate(funcs) for j in range(n) if f[j]]
    else:
        widths = (n,) * len(funcs)
        cells = [(i, j) for i in range(len(funcs)) for j in range(n)]
    shape = GridShape(len(funcs), widths)
    matrix = [[Fraction(0)] * n for _ in cells]
    for r, (i, j) in enumerate(cells):
        matrix[r][j] = funcs[i][j]
    return LatticeMap(lat, grid(shape), matrix)


def renorm_for_isometry(f: LatticeMap, c) -> FiniteLattice:
    """A C-equivalent norm on f.cod making f an isometric embedding.

    If f already expands norms (c_lower <= 1) the new ball is the solid
    hull of f(B(A)) and B(X).  Otherwise C·f is an expansion for
    C = c_lower, and rescaling the expansion renorming by C gives the ball
    SCH(f(B(A)) ∪ (1/C)B(X)).
    """
    c = Fraction(c)
    require_homomorphism(f)
    cert = certify_embedding(f)
    if cert.constant > c:
        raise LatticeError("map distortion exceeds the given constant", (cert.c_upper, cert.c_lower))
    images = [f.apply(w) for w in f.dom.oep]
    cod_gens = list(f.cod.oep)
    if cert.c_lower > 1:
        C = cert.c_lower
        cod_gens = [tuple(a / C for a in w) for w in cod_gens]
    gens = order_extreme_points(images + cod_gens)
    return FiniteLattice(f.cod.dim, None, tuple(gens), f"renorm({f.cod.label})")


class IsometrizedPair(NamedTuple):
    Z: FiniteLattice
    g: LatticeMap
    h: LatticeMap
    bound: Fraction


def _difference(a: LatticeMap, b: LatticeMap) -> tuple:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a.matrix, b.matrix))


def isometrize_pair(f: LatticeMap, eps) -> IsometrizedPair:
    """Isometries g: X → Z, h: Y → Z with ‖g − h∘f‖ ≤ eps.

    Built on W = X ⊕∞ f(X) with j1(x) = x ⊕ f(x)/(1+eps) and
    j2(f(x)) = x/(1+eps) ⊕ f(x); when f is not onto, Y and W are
    amalgamated over f(X).
    """
    from .amalgam import amalgamate

    eps = Fraction(eps)
    require_homomorphism(f)
    cert = certify_embedding(f)
    if cert.constant > 1 + eps:
        raise LatticeError("map is not a (1+eps)-embedding", (cert.c_upper, cert.c_lower))
    X, Y = f.dom, f.cod
    n = X.dim
    fX = sublattice(Y, f.columns(), f"f({X.label})")
    W = direct_sum_infty(X, fX)
    s = 1 / (1 + eps)
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    j1 = LatticeMap(X, W, eye + [[s * a for a in r] for r in eye])
    j2 = LatticeMap(fX, W, [[s * a for a in r] for r in eye] + eye)
    if X.dim == Y.dim:
        inv = [[Fraction(0)] * Y.dim for _ in range(n)]
        for i, row in enumerate(f.matrix):
            for j, a in enumerate(row):
                if a:
                    inv[j][i] = 1 / a
        g, Z = j1, W
        h = j2.compose(LatticeMap(Y, fX, inv))
    else:
        inclusion = LatticeMap(fX, Y, f.matrix)
        res = amalgamate(inclusion, j2, 1, normalize=False, certify=False)
        Z = res.G
        g = res.g2.compose(j1)
        h = res.g1
    for m in (g, h):
        if not certify_embedding(m, upper_hint=1).is_isometric():
            raise LatticeError("isometrized map failed to certify", m)
    bound = operator_norm(X, Z, _difference(g, h.compose(f)))
    return IsometrizedPair(Z, g, h, bound)


@dataclass(frozen=True)
class SnapResult:
    map: LatticeMap
    distortion: Fraction
    reference_error: Fraction | None


def snap(atoms: Sequence[Sequence]) -> list[tuple]:
    """h(x_i, rest) = x_i − x_i ∧ ⋁_{k≠i} x_k applied to every vector."""
    atoms = [vec(a) for a in atoms]
    out = []
    for i, a in enumerate(atoms):
        others = [b for k, b in enumerate(atoms) if k != i]
        row = []
        for c, v in enumerate(a):
            top = max((b[c] for b in others), default=Fraction(0))
            row.append(v - min(v, top))
        out.append(tuple(row))
    return out


def snap_sublattice(ambient: FiniteLattice, approx_atoms, reference=None) -> SnapResult:
    approx = [vec(a) for a in approx_atoms]
    if any(x < 0 for a in approx for x in a):
        raise LatticeError("approximate atoms must be positive")
    snapped = snap(approx)
    for i, s in enumerate(snapped):
        if not any(s):
            raise LatticeError("snapped atom vanished; inputs too entangled", i)
    base = [vec(r) for r in reference] if reference is not None else approx
    dom = sublattice(ambient, base, "span")
    g = LatticeMap(dom, ambient, [tuple(s[r] for s in snapped) for r in range(ambient.dim)])
    cert = certify_embedding(g)
    err = None
    if reference is not None:
        err = max(ambient.norm([x - y for x, y in zip(e, s)]) for e, s in zip(base, snapped))
    return SnapResult(g, cert.constant, err)


__all__ = ["embed_into_grid", "renorm_for_isometry", "isometrize_pair", "snap_sublattice",
           "sublattice", "snap", "IsometrizedPair", "SnapResult", "INF"]
