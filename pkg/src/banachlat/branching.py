"""Finitely branching trees, the dyadic approximants and two generators.

Nodes are tuples of branch labels.  In the dyadic tree a label at level k
is ``2*bit + half``: ``bit`` picks a Cantor branch, ``half`` picks a half
of the current dyadic interval.  A node of length n therefore names a row
r (its bits) and a column c (its halves) of ℓ∞^{2ⁿ}(ℓ1^{2ⁿ}).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattices import (FiniteLattice, LatticeError, LatticeMap, certify_embedding, check_homomorphism,
                       grid, operator_norm)
from .terms import Term, evaluate, lipschitz, var
from .vectorlattice import GridShape, vec

Node = tuple[int, ...]


@dataclass
class BranchTree:
    depth: int
    branching: tuple[int, ...]          # |A_1|, ..., |A_D|
    ambient: FiniteLattice              # span of the leaves
    nodes: dict                         # node -> x_node in ambient coordinates
    levels: list = field(default_factory=list)       # FiniteLattice per level
    level_nodes: list = field(default_factory=list)  # atom order of each level
    level_scales: list = field(default_factory=list)  # atom of level n = scale * x_node
    inclusions: list = field(default_factory=list)   # level n -> level n+1

    def level(self, n: int) -> list[Node]:
        return self.level_nodes[n]

    def leaves(self) -> list[Node]:
        return self.level_nodes[self.depth]

    def children(self, node: Node) -> list[Node]:
        if len(node) >= self.depth:
            return []
        return [node + (b,) for b in range(self.branching[len(node)])]

    def embed_level(self, n: int) -> LatticeMap:
        """Level-n span into the ambient (leaf) lattice."""
        s = self.level_scales[n]
        cols = [tuple(s * a for a in self.nodes[v]) for v in self.level_nodes[n]]
        return LatticeMap(self.levels[n], self.ambient,
                          [[c[r] for c in cols] for r in range(self.ambient.dim)])


def _dyadic_rc(node: Node) -> tuple[int, int]:
    r = c = 0
    for b in node:
        r, c = 2 * r + b // 2, 2 * c + b % 2
    return r, c


def _dyadic_order(n: int) -> list[Node]:
    out = {}
    for node in itertools.product(range(4), repeat=n):
        r, c = _dyadic_rc(node)
        out[r * 2 ** n + c] = node
    return [out[k] for k in range(4 ** n)]


def build_dyadic_tree(depth: int) -> BranchTree:
    """Indicators χ_{N_σ} ⊗ χ_Q truncated at the given depth.

    The level-n span is ℓ∞^{2ⁿ}(ℓ1^{2ⁿ}); its atom (r, c) is
    χ_{N_r} ⊗ 2ⁿχ_{Q_c}, which equals 2ⁿ·x_σ and has norm 1.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    levels, orders, scales, incl = [], [], [], []
    for n in range(depth + 1):
        side = 2 ** n
        levels.append(grid(GridShape.uniform(side, side), f"dyadic{n}"))
        orders.append(_dyadic_order(n))
        scales.append(Fraction(side))
    ambient = levels[depth]
    index = {node: k for k, node in enumerate(orders[depth])}
    unit = Fraction(1, 2 ** depth)
    nodes = {}
    for n in range(depth + 1):
        for node in orders[n]:
            x = [Fraction(0)] * ambient.dim
            for tail in itertools.product(range(4), repeat=depth - n):
                x[index[node + tail]] = unit
            nodes[node] = tuple(x)
    for n in range(depth):
        pos = {node: k for k, node in enumerate(orders[n + 1])}
        m = [[Fraction(0)] * levels[n].dim for _ in range(levels[n + 1].dim)]
        for j, node in enumerate(orders[n]):
            for b in range(4):
                m[pos[node + (b,)]][j] = Fraction(1, 2)
        incl.append(LatticeMap(levels[n], levels[n + 1], m))
    return BranchTree(depth, (4,) * depth, ambient, nodes, levels, orders, scales, incl)


def product_tree(branching: Sequence[int], ambient: FiniteLattice | None = None) -> BranchTree:
    """Tree whose leaves are the atoms of ``ambient`` in lexicographic order.

    The ambient lattice defaults to ℓ1 on the leaves; level spans are the
    sublattices spanned by the node elements.
    """
    from .embeddings import sublattice
    from .lattices import ell1

    branching = tuple(int(b) for b in branching)
    if any(b < 1 for b in branching):
        raise ValueError("branching sets must be nonempty")
    leaves = list(itertools.product(*(range(b) for b in branching)))
    if ambient is None:
        ambient = ell1(len(leaves))
    if ambient.dim != len(leaves):
        raise LatticeError("ambient dimension differs from the number of leaves")
    depth = len(branching)
    nodes = {}
    for n in range(depth + 1):
        for node in itertools.product(*(range(b) for b in branching[:n])):
            nodes[node] = tuple(Fraction(int(leaf[:n] == node)) for leaf in leaves)
    orders = [list(itertools.product(*(range(b) for b in branching[:n]))) for n in range(depth + 1)]
    levels = [sublattice(ambient, [nodes[v] for v in orders[n]], f"level{n}") for n in range(depth + 1)]
    incl = []
    for n in range(depth):
        m = [[Fraction(int(kid[:n] == node)) for node in orders[n]] for kid in orders[n + 1]]
        incl.append(LatticeMap(levels[n], levels[n + 1], m))
    return BranchTree(depth, branching, ambient, nodes, levels, orders, [Fraction(1)] * (depth + 1), incl)


@dataclass
class TreeCheck:
    ok: bool
    problems: list


def check_tree(tree: BranchTree, certify: bool = True) -> TreeCheck:
    """Sibling disjointness, the partition identity and isometric inclusions."""
    bad = []
    for node, x in tree.nodes.items():
        if any(a < 0 for a in x):
            bad.append(("negative node element", node))
        kids = tree.children(node)
        if not kids:
            continue
        xs = [tree.nodes[k] for k in kids]
        for a, b in itertools.combinations(range(len(xs)), 2):
            if any(min(abs(p), abs(q)) for p, q in zip(xs[a], xs[b])):
                bad.append(("siblings not disjoint", (kids[a], kids[b])))
        total = tuple(sum(col, Fraction(0)) for col in zip(*xs))
        if total != x:
            bad.append(("partition identity fails", node))
    for n, iota in enumerate(tree.inclusions):
        e_n, e_next = tree.embed_level(n), tree.embed_level(n + 1)
        if e_next.compose(iota).matrix != e_n.matrix:
            bad.append(("inclusion does not commute with the ambient embedding", n))
        if certify and not certify_embedding(iota, upper_hint=1).is_isometric():
            bad.append(("inclusion is not isometric", n))
    return TreeCheck(not bad, bad)


# -- two generators ----------------------------------------------------------

@dataclass
class Recoverer:
    node: Node
    term: Term
    multiple: Fraction   # term(u, v) = multiple * x_node


@dataclass
class TwoGenerators:
    u: tuple
    v: tuple
    recoverers: list          # leaf recoverers, in leaf order
    coeffs: dict              # node -> a_node for every level >= 1
    level_recoverers: list    # level k -> recoverers over (u, v_k)
    level_vectors: list       # level k -> v_k


def leaf_coefficients(tree: BranchTree, lo=Fraction(1), hi=Fraction(2), leaf_values=None) -> dict:
    """Ranks 1..|S_D| in lexicographic leaf order, scaled into [lo, hi].

    Inner nodes get the mean of the leaves below them, so each level is
    again pairwise distinct and v_k drifts to v_{k+1} by small steps.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    leaves = sorted(tree.leaves())
    if leaf_values is not None:
        values = [Fraction(a) for a in leaf_values]
        if len(values) != len(leaves) or len(set(values)) != len(values) or min(values) <= 0:
            raise ValueError("leaf coefficients must be positive and pairwise distinct, one per leaf")
        coeffs = dict(zip(leaves, values))
    else:
        m = len(leaves)
        step = (hi - lo) / (m - 1) if m > 1 else Fraction(0)
        coeffs = {leaf: lo + step * k for k, leaf in enumerate(leaves)}
    for n in range(tree.depth - 1, 0, -1):
        for node in tree.level(n):
            kids = tree.children(node)
            coeffs[node] = sum((coeffs[k] for k in kids), Fraction(0)) / len(kids)
    return coeffs


def _recoverers(nodes: Sequence[Node], coeffs: dict) -> list[Recoverer]:
    u, v = var("u"), var("v")
    order = sorted(nodes, key=lambda s: coeffs[s])
    vals = [coeffs[s] for s in order]
    out = {}
    top = order[-1]
    below = vals[-2] if len(vals) > 1 else vals[-1] / 2
    c = 2 / (vals[-1] + below)
    out[top] = Recoverer(top, (v.scale(c) - u).pos(), c * vals[-1] - 1)
    for k, s in enumerate(order[:-1]):
        a = vals[k]
        lower = (vals[k - 1] + a) / 2 if k else a / 2
        upper = (a + vals[k + 1]) / 2
        C = max((b - lower) / (b - upper) for b in vals[k + 1:])
        x = (v - u.scale(lower)).pos()
        y = (v - u.scale(upper)).pos()
        out[s] = Recoverer(s, (x - y.scale(C)).pos(), a - lower)
    return [out[s] for s in nodes]


def two_generator(tree: BranchTree, lo=Fraction(1), hi=Fraction(2), leaf_values=None) -> TwoGenerators:
    """u = x_∅ and v = Σ a_σ x_σ over the leaves, with leaf recoverers.

    The top leaf comes out of (c·v − u)₊; every other leaf σ with
    thresholds s < a_σ < r out of ((v − s·u)₊ − C·(v − r·u)₊)₊.
    """
    if tree.depth < 1:
        raise ValueError("two generators need a tree of depth at least 1")
    coeffs = leaf_coefficients(tree, lo, hi, leaf_values)
    u = tree.nodes[()]
    level_vectors = [u]
    level_recs = [[Recoverer((), var("u"), Fraction(1))]]
    for n in range(1, tree.depth + 1):
        nodes = tree.level(n)
        vk = [Fraction(0)] * tree.ambient.dim
        for s in nodes:
            for i, a in enumerate(tree.nodes[s]):
                if a:
                    vk[i] += coeffs[s] * a
        level_vectors.append(tuple(vk))
        level_recs.append(_recoverers(nodes, coeffs))
    return TwoGenerators(u, level_vectors[-1], level_recs[-1], coeffs, level_recs, level_vectors)


@dataclass
class Reconstruction:
    ok: bool
    mismatches: list


def verify_reconstruction(tree: BranchTree, gens: TwoGenerators, level: int | None = None) -> Reconstruction:
    """Evaluate recoverers on (u, v_k) and compare to multiple·x_σ exactly."""
    k = tree.depth if level is None else level
    env = {"u": gens.u, "v": gens.level_vectors[k]}
    bad = []
    for rec in gens.level_recoverers[k]:
        got = evaluate(rec.term, env)
        want = tuple(rec.multiple * a for a in tree.nodes[rec.node])
        if rec.multiple <= 0 or got != want:
            bad.append(rec.node)
    return Reconstruction(not bad, bad)


def coefficient_budget(tree: BranchTree, eps, gens: TwoGenerators | None = None) -> list[Fraction]:
    """Allowed drift of the coefficients at each level 1..D.

    If every leaf coefficient below a level-k node σ stays within δ of a_σ,
    then |v − v_k| ≤ δ·u, so level-k recoverers move by at most
    Lip_v·δ·‖u‖.  The budget is the δ making that equal to eps.
    """
    eps = Fraction(eps)
    if gens is None:
        gens = two_generator(tree)
    norm_u = tree.ambient.norm(gens.u)
    out = []
    for k in range(1, tree.depth + 1):
        L = max(lipschitz(r.term, {"v"}) for r in gens.level_recoverers[k])
        out.append(eps / (L * norm_u) if eps else Fraction(0))
    return out


def drift_error(tree: BranchTree, gens: TwoGenerators, level: int, v_perturbed) -> Fraction:
    """Largest ambient-norm error of level recoverers evaluated at a perturbed v."""
    env = {"u": gens.u, "v": vec(v_perturbed)}
    worst = Fraction(0)
    for rec in gens.level_recoverers[level]:
        got = evaluate(rec.term, env)
        want = tuple(rec.multiple * a for a in tree.nodes[rec.node])
        worst = max(worst, tree.ambient.norm([p - q for p, q in zip(got, want)]))
    return worst


# -- band projections -----------------------------------------------------------

@dataclass
class BandReport:
    homomorphism: bool
    norm: Fraction
    idempotent: bool
    identity_on_band: bool
    disjoint_split: bool
    meet_compatible: bool

    @property
    def ok(self) -> bool:
        return (self.homomorphism and self.norm <= 1 and self.idempotent and self.identity_on_band
                and self.disjoint_split and self.meet_compatible)


def band_project(tree: BranchTree, node: Node) -> tuple[LatticeMap, BandReport]:
    """Projection of span(S_D) onto the band of leaves below ``node``."""
    node = tuple(node)
    if node not in tree.nodes:
        raise LatticeError("node is not in the tree", node)
    n = tree.ambient.dim
    keep = [bool(a) for a in tree.nodes[node]]
    matrix = [[Fraction(int(i == j and keep[i])) for j in range(n)] for i in range(n)]
    P = LatticeMap(tree.ambient, tree.ambient, matrix)
    hom = check_homomorphism(P).ok
    norm = operator_norm(tree.ambient, tree.ambient, P.matrix) if any(keep) else Fraction(0)
    idem = P.compose(P).matrix == P.matrix
    band = [tree.nodes[leaf] for leaf in tree.leaves() if leaf[:len(node)] == node]
    ident = all(P.apply(x) == x for x in band)
    split = meet_ok = True
    probes = [tree.nodes[s] for s in tree.nodes] + [
        tuple(Fraction((3 * i + 1) % 5 - 2, 3) for i in range(n))]
    for x in probes:
        px = P.apply(x)
        rest = tuple(a - b for a, b in zip(x, px))
        if any(min(abs(a), abs(b)) for a, b in zip(px, rest)):
            split = False
    for x, y in itertools.combinations(probes[:12], 2):
        m = tuple(min(a, b) for a, b in zip(x, y))
        if P.apply(m) != tuple(min(a, b) for a, b in zip(P.apply(x), P.apply(y))):
            meet_ok = False
    return P, BandReport(hom, norm, idem, ident, split, meet_ok)

