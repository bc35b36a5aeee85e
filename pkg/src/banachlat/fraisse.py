"""Certified bounds for the Fraïssé distance and a finite chain builder.

A tuple ā in a finite lattice generates the sublattice ⟨ā⟩; the distance
between ā and b̄ is an infimum over pairs of isometric embeddings into a
common lattice.  Upper bounds come with a concrete common lattice, lower
bounds with a lattice term whose norm separates the two tuples.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .amalgam import AmalgamationError, pushout
from .embeddings import isometrize_pair, sublattice
from .lattices import (INF, FiniteLattice, LatticeError, LatticeMap, certify_embedding, check_homomorphism,
                       direct_sum_infty, identity_map, injections)
from .terms import Term, evaluate, lipschitz, var
from .vectorlattice import vec

# -- generated tuples ---------------------------------------------------------


@dataclass(frozen=True)
class GeneratedTuple:
    lattice: FiniteLattice
    elements: tuple
    witness: tuple | None = None   # terms over x1..xn, one per atom of ⟨ā⟩

    def __post_init__(self):
        elems = tuple(vec(x) for x in self.elements)
        object.__setattr__(self, "elements", elems)
        for x in elems:
            if len(x) != self.lattice.dim:
                raise LatticeError("tuple entry does not live in the lattice", x)
        if self.witness is not None:
            cl = closure(self.lattice, elems)
            got = [evaluate(t, _env(elems)) for t in self.witness]
            if got != list(cl.atoms):
                raise LatticeError("witness terms do not reproduce the atoms of the generated sublattice")

    def __len__(self) -> int:
        return len(self.elements)

    def with_witness(self) -> "GeneratedTuple":
        return replace(self, witness=closure(self.lattice, self.elements).terms)


def _env(elements) -> dict:
    return {f"x{i + 1}": x for i, x in enumerate(elements)}


def _abs(t: Term) -> Term:
    return t | t.scale(-1)


@dataclass(frozen=True)
class Closure:
    atoms: tuple        # disjoint positive vectors of norm 1, canonical order
    terms: tuple        # terms over the tuple evaluating to the atoms
    coords: tuple       # coords[i][k]: element i = Σ_k coords[i][k]·atoms[k]
    sub: FiniteLattice  # ⟨ā⟩ with the atoms as basis
    inclusion: LatticeMap


def _split_piece(a, ta, p, tp):
    """Split piece p where the ratio a/p changes; terms are carried along."""
    supp = [j for j, x in enumerate(p) if x]
    ratios = sorted({a[j] / p[j] for j in supp})
    if len(ratios) == 1:
        return [(p, tp)]
    out = []
    top = ratios[-1]
    for l, r_l in enumerate(ratios):
        s = (ratios[l - 1] + r_l) / 2 if l else r_l - 1
        x = (ta - tp.scale(s)).pos() & tp.scale(top - s)
        if l == len(ratios) - 1:
            term, mult = x, r_l - s
        else:
            r = (r_l + ratios[l + 1]) / 2
            y = (ta - tp.scale(r)).pos() & tp.scale(top - r)
            C = max((q - s) / (q - r) for q in ratios[l + 1:])
            term, mult = (x - y.scale(C)).pos(), r_l - s
        term = term.scale(1 / mult)
        piece = tuple(x if x and a[j] / x == r_l else Fraction(0) for j, x in enumerate(p))
        out.append((piece, term))
    return out


def closure(lattice: FiniteLattice, elements: Sequence[Sequence]) -> Closure:
    """The sublattice generated by a tuple, with a term for every atom.

    Starting from Σ|x_i|, each piece is split wherever the ratio x_i/piece
    takes different values; splitting uses only lattice-linear terms, so
    the final pieces are atoms of ⟨ā⟩ and come with generating terms.
    """
    elements = [vec(x) for x in elements]
    n = lattice.dim
    xs = [var(f"x{i + 1}") for i in range(len(elements))]
    pieces = []
    if elements:
        t0 = _abs(xs[0])
        for t in xs[1:]:
            t0 = t0 + _abs(t)
        p0 = tuple(sum((abs(x[j]) for x in elements), Fraction(0)) for j in range(n))
        if any(p0):
            pieces = [(p0, t0)]
    for a, ta in zip(elements, xs):
        pieces = [q for p, tp in pieces for q in _split_piece(a, ta, p, tp)]
    pieces.sort(key=lambda q: min(j for j, x in enumerate(q[0]) if x))
    atoms, terms = [], []
    for p, tp in pieces:
        nrm = lattice.norm(p)
        atoms.append(tuple(x / nrm for x in p))
        terms.append(tp.scale(1 / nrm))
    coords = tuple(tuple(_coefficient(x, w) for w in atoms) for x in elements)
    sub = sublattice(lattice, atoms, "gen") if atoms else FiniteLattice(0, (), None, "0")
    inc = LatticeMap(sub, lattice, [[w[r] for w in atoms] for r in range(n)])
    return Closure(tuple(atoms), tuple(terms), coords, sub, inc)


def _coefficient(x, atom) -> Fraction:
    j = next(j for j, a in enumerate(atom) if a)
    return x[j] / atom[j]


def express(cl: Closure, x) -> tuple:
    """Coordinates of x in the atom basis of a closure; error if x is outside."""
    x = vec(x)
    coef = tuple(_coefficient(x, w) for w in cl.atoms)
    back = tuple(sum((c * w[j] for c, w in zip(coef, cl.atoms)), Fraction(0)) for j in range(len(x)))
    if back != x:
        raise LatticeError("vector is not in the generated sublattice", x)
    return coef


# -- distance bounds --------------------------------------------------------------

@dataclass(frozen=True)
class UpperWitness:
    strategy: str
    Z: FiniteLattice
    phi1: LatticeMap    # ⟨ā⟩ → Z
    phi2: LatticeMap    # ⟨b̄⟩ → Z
    value: Fraction


@dataclass(frozen=True)
class LowerWitness:
    term: Term
    norm_a: Fraction
    norm_b: Fraction
    lip: Fraction


@dataclass(frozen=True)
class DistanceBound:
    lower: Fraction | None = None
    lower_witness: LowerWitness | None = None
    upper: Fraction | None = None
    upper_witness: UpperWitness | None = None


def witness_value(phi1: LatticeMap, phi2: LatticeMap, ca, cb) -> Fraction:
    Z = phi1.cod
    return max((Z.norm([p - q for p, q in zip(phi1.apply(x), phi2.apply(y))]) for x, y in zip(ca, cb)),
               default=Fraction(0))


def verify_upper(w: UpperWitness, a: GeneratedTuple, b: GeneratedTuple) -> bool:
    """Both legs isometric homomorphisms and the stated value attained exactly."""
    ca = closure(a.lattice, a.elements)
    cb = closure(b.lattice, b.elements)
    if w.phi1.dom != ca.sub or w.phi2.dom != cb.sub or w.phi1.cod != w.phi2.cod:
        return False
    for m in (w.phi1, w.phi2):
        if not check_homomorphism(m).ok or not certify_embedding(m).is_isometric():
            return False
    return witness_value(w.phi1, w.phi2, ca.coords, cb.coords) == w.value


def _permutation_candidates(ca: Closure, cb: Closure, budget: int):
    m = len(ca.atoms)
    for perm in itertools.islice(itertools.permutations(range(m)), budget):
        aligned = []
        for k in range(m):
            j = perm[k]
            best = None
            for x, y in zip(ca.coords, cb.coords):
                if x[k] and y[j] and (x[k] > 0) == (y[j] > 0):
                    if best is None or abs(x[k]) > abs(best[0]):
                        best = (x[k], y[j])
            aligned.append(best[1] / best[0] if best else Fraction(1))
        for scales in ((Fraction(1),) * m, tuple(aligned)):
            yield perm, scales


def dk_upper(a: GeneratedTuple, b: GeneratedTuple, budget: int = 24) -> DistanceBound:
    """Smallest certified max-distance found among the candidate placements.

    Candidates: the ℓ∞-sum of the two generated lattices; atom
    correspondences (permutations with scalings) made isometric by
    splitting; and, for tuples in one lattice, the sublattice they
    generate together.
    """
    if len(a) != len(b):
        raise LatticeError("tuples have different lengths")
    ca = closure(a.lattice, a.elements)
    cb = closure(b.lattice, b.elements)
    found: list[UpperWitness] = []

    def offer(strategy, phi1, phi2):
        found.append(UpperWitness(strategy, phi1.cod, phi1, phi2,
                                  witness_value(phi1, phi2, ca.coords, cb.coords)))

    if a.lattice == b.lattice:
        joint = closure(a.lattice, a.elements + b.elements)
        cols1 = [express(joint, w) for w in ca.atoms]
        cols2 = [express(joint, w) for w in cb.atoms]
        m = len(joint.atoms)
        offer("joint", LatticeMap(ca.sub, joint.sub, [[c[r] for c in cols1] for r in range(m)]),
              LatticeMap(cb.sub, joint.sub, [[c[r] for c in cols2] for r in range(m)]))
    if len(ca.atoms) == len(cb.atoms) and ca.atoms:
        m = len(ca.atoms)
        for perm, scales in _permutation_candidates(ca, cb, budget):
            T = [[Fraction(0)] * m for _ in range(m)]
            for k in range(m):
                T[perm[k]][k] = scales[k]
            f = LatticeMap(ca.sub, cb.sub, T)
            cert = certify_embedding(f)
            if cert.is_isometric():
                offer("correspondence", f, identity_map(cb.sub))
                continue
            pair = isometrize_pair(f, cert.constant - 1)
            offer("correspondence", pair.g, pair.h)
    total = direct_sum_infty(ca.sub, cb.sub)
    i1, i2 = injections(ca.sub, cb.sub, total)
    offer("direct_sum", i1, i2)
    order = {"joint": 0, "correspondence": 1, "direct_sum": 2}
    best = min(found, key=lambda w: (w.value, order[w.strategy]))
    return DistanceBound(upper=best.value, upper_witness=best)


def enumerate_terms(n: int, depth: int, limit: int = 4000):
    """Lattice-linear terms over x1..xn up to the given nesting depth."""
    level = [var(f"x{i + 1}") for i in range(n)]
    every = list(level)
    for _ in range(depth):
        new = []
        for t in level:
            new += [t.pos(), t.scale(-1).pos(), _abs(t)]
        for s, t in itertools.product(every, level):
            if s is t:
                continue
            new += [s + t, s - t, s & t, s | t]
        level = new
        every += new
        if len(every) >= limit:
            break
    return every[:limit]


def dk_lower(a: GeneratedTuple, b: GeneratedTuple, term_depth: int = 1, limit: int = 4000) -> DistanceBound:
    """max over terms t of |‖t(ā)‖ − ‖t(b̄)‖| / Lip(t)."""
    if len(a) != len(b):
        raise LatticeError("tuples have different lengths")
    ea, eb = _env(a.elements), _env(b.elements)
    best, arg = Fraction(-1), None
    seen = set()
    for t in enumerate_terms(len(a), term_depth, limit):
        va, vb = evaluate(t, ea), evaluate(t, eb)
        if (va, vb) in seen:
            continue
        seen.add((va, vb))
        na, nb = a.lattice.norm(va), b.lattice.norm(vb)
        L = lipschitz(t)
        gap = abs(na - nb) / L
        if gap > best:
            best, arg = gap, LowerWitness(t, na, nb, L)
    if arg is None:
        return DistanceBound(lower=Fraction(0))
    return DistanceBound(lower=best, lower_witness=arg)


def distance(a: GeneratedTuple, b: GeneratedTuple, budget: int = 24, depth: int = 1) -> DistanceBound:
    lo, up = dk_lower(a, b, depth), dk_upper(a, b, budget)
    return DistanceBound(lo.lower, lo.lower_witness, up.upper, up.upper_witness)


def compose_witnesses(w_ab: UpperWitness, w_bc: UpperWitness, b: GeneratedTuple,
                      a_coords, c_coords) -> UpperWitness:
    """Amalgamate the two common lattices over ⟨b̄⟩; value ≤ sum of parts."""
    if w_ab.phi2.dom != w_bc.phi1.dom:
        raise LatticeError("witnesses do not share the middle tuple's lattice")
    res = pushout(w_ab.phi2, w_bc.phi1, 1, check_inputs=False, certify=False)
    phi1 = res.g1.compose(w_ab.phi1)
    phi2 = res.g2.compose(w_bc.phi2)
    for m in (phi1, phi2):
        if not certify_embedding(m).is_isometric():
            raise AmalgamationError("composed witness leg is not isometric")
    value = witness_value(phi1, phi2, a_coords, c_coords)
    if value > w_ab.value + w_bc.value:
        raise AmalgamationError("composed witness exceeds the sum of its parts")
    return UpperWitness("composed", res.G, phi1, phi2, value)


# -- chains ---------------------------------------------------------------------

@dataclass(frozen=True)
class Task:
    stage: int
    source: tuple           # tuple in stages[stage]
    target_lattice: FiniteLattice
    target: tuple           # tuple in target_lattice
    priority: int = 0
    label: str = ""


class TaskRejected(LatticeError):
    """The task's correspondence is not an isometric homomorphism on ⟨ā⟩."""


@dataclass
class ChainState:
    catalogue: list
    stages: list
    maps: list                      # maps[n]: stages[n] → stages[n+1]
    queue: list = field(default_factory=list)
    targets: list = field(default_factory=list)  # targets[n]: task lattice → stages[n+1]
    seed: int = 0
    log: list = field(default_factory=list)
    _composites: dict = field(default_factory=dict, repr=False, compare=False)

    def composite(self, n: int, m: int) -> LatticeMap:
        """ι_{m-1}∘…∘ι_n : stages[n] → stages[m]."""
        if (n, m) in self._composites:
            return self._composites[(n, m)]
        if n == m:
            out = identity_map(self.stages[n])
        else:
            out = self.maps[m - 1].compose(self.composite(n, m - 1))
        self._composites[(n, m)] = out
        return out

    def copy(self) -> "ChainState":
        return ChainState(list(self.catalogue), list(self.stages), list(self.maps), list(self.queue),
                          list(self.targets), self.seed, list(self.log), dict(self._composites))


def canonical(lat: FiniteLattice, label: str = "") -> FiniteLattice:
    """Both forms, each reduced to its order extreme points."""
    return FiniteLattice(lat.dim, tuple(sorted(lat.dual_oep)), tuple(sorted(lat.oep)), label or lat.label)


def task_correspondence(task: Task, stage: FiniteLattice) -> tuple[Closure, LatticeMap]:
    """⟨ā⟩ → B sending each atom's term to its value on b̄; checked isometric."""
    if len(task.source) != len(task.target):
        raise TaskRejected("source and target tuples differ in length")
    cl = closure(stage, task.source)
    B = task.target_lattice
    env = _env([vec(y) for y in task.target])
    for y in env.values():
        if len(y) != B.dim:
            raise TaskRejected("target entry does not live in the target lattice", y)
    images = [evaluate(t, env) for t in cl.terms]
    matrix = [[w[r] for w in images] for r in range(B.dim)]
    f = LatticeMap(cl.sub, B, matrix)
    for i, (x, y) in enumerate(zip(cl.coords, env.values())):
        if f.apply(x) != y:
            raise TaskRejected("the correspondence is not a lattice homomorphism on the tuple", i)
    hom = check_homomorphism(f)
    if not hom.ok:
        raise TaskRejected("correspondence is not a lattice homomorphism", hom.witness)
    cert = certify_embedding(f)
    if not cert.is_isometric():
        raise TaskRejected("correspondence is not isometric",
                           (cert.c_upper, cert.upper_witness, cert.c_lower, cert.lower_witness))
    return cl, f


def chain_step(state: ChainState) -> ChainState:
    if not state.queue:
        raise LatticeError("task queue is empty")
    new = state.copy()
    k = max(range(len(new.queue)), key=lambda i: (new.queue[i].priority, -i))
    task = new.queue.pop(k)
    last = len(new.stages) - 1
    if not 0 <= task.stage <= last:
        raise TaskRejected("task refers to a missing stage", task.stage)
    cl, leg2 = task_correspondence(task, new.stages[task.stage])
    leg1 = new.composite(task.stage, last).compose(cl.inclusion)
    res = pushout(leg1, leg2, 1, check_inputs=False, certify=False)
    G = canonical(res.G, f"A{last + 2}")
    iota = res.g1.with_cod(G)
    into = res.g2.with_cod(G)
    for m in (iota, into):
        if not certify_embedding(m, upper_hint=1).is_isometric():
            raise AmalgamationError("chain amalgam map is not isometric")
    if iota.compose(leg1).matrix != into.compose(leg2).matrix:
        raise AmalgamationError("chain amalgam square does not commute")
    new.stages.append(G)
    new.maps.append(iota)
    new.targets.append(into)
    new.log.append({"step": len(new.maps), "task": task.label, "stage": task.stage, "dim": G.dim,
                    "generators": len(G.oep), "functionals": len(G.dual_oep)})
    return new


def _positive_element(rng: random.Random, lat: FiniteLattice, max_support: int = 2) -> tuple:
    k = rng.randint(1, min(max_support, lat.dim))
    cells = rng.sample(range(lat.dim), k)
    x = [Fraction(0)] * lat.dim
    for c in cells:
        x[c] = Fraction(rng.randint(1, 3))
    nrm = lat.norm(x)
    return tuple(a / nrm for a in x)


GROWTH_CAP = (10, 24, 24)   # dim, generators, functionals of the newest stage


def _small(lat: FiniteLattice) -> bool:
    return lat.dim <= GROWTH_CAP[0] and len(lat.oep) <= GROWTH_CAP[1] and len(lat.dual_oep) <= GROWTH_CAP[2]


def _catalogue_copy(rng: random.Random, state: ChainState) -> Task | None:
    """Re-realize an earlier catalogue copy: its atoms' images correspond to the atoms."""
    placed = [k for k, t in enumerate(state.targets) if t.dom in state.catalogue]
    if not placed:
        return None
    k = rng.choice(placed)
    B = state.targets[k].dom
    n = rng.randrange(k + 1, len(state.stages))
    emb = state.composite(k + 1, n).compose(state.targets[k])
    atoms = [tuple(Fraction(int(i == j)) for i in range(B.dim)) for j in range(B.dim)]
    return Task(n, tuple(emb.apply(e) for e in atoms), B, tuple(atoms), 0, f"copy:{B.label}@{n}")


def next_task(state: ChainState) -> Task:
    """Deterministic random task derived from the seed and the step count.

    While the newest stage is small, a catalogue lattice is glued on along
    a one-element tuple.  Past the cap the task is one the chain already
    realizes (a catalogue copy over its atoms, or a tuple over its own
    generated sublattice), so stages stop growing.
    """
    rng = random.Random(f"{state.seed}:{len(state.log)}")
    grow = _small(state.stages[-1])
    if not grow and rng.random() < 0.5:
        task = _catalogue_copy(rng, state)
        if task is not None:
            return task
    n = rng.randrange(len(state.stages))
    A = state.stages[n]
    if (not grow or rng.random() < 0.2) and A.dim >= 1:
        a1 = _positive_element(rng, A)
        src = [a1]
        rest = [c for c in range(A.dim) if not a1[c]]
        if rest and rng.random() < 0.7:
            a2 = [Fraction(0)] * A.dim
            a2[rng.choice(rest)] = Fraction(1)
            nrm = A.norm(a2)
            src.append(tuple(a / nrm for a in a2))
        cl = closure(A, src)
        return Task(n, tuple(src), cl.sub, cl.coords, 0, f"self@{n}")
    B = rng.choice(state.catalogue)
    return Task(n, (_positive_element(rng, A),), B, (_positive_element(rng, B),), 0,
                f"{B.label}@{n}")


def build_chain(catalogue: Sequence[FiniteLattice], steps: int, seed: int) -> ChainState:
    if not catalogue:
        raise ValueError("catalogue must be nonempty")
    rng = random.Random(seed)
    first = canonical(rng.choice(list(catalogue)), "A1")
    state = ChainState(list(catalogue), [first], [], [], [], seed, [])
    for _ in range(steps):
        if not state.queue:
            state.queue.append(next_task(state))
        state = chain_step(state)
    return state


# -- homogeneity probe ----------------------------------------------------------

@dataclass
class ProbeReport:
    success: bool
    steps: int
    stage: int | None
    embedding: LatticeMap | None
    distance: Fraction | None
    bound: DistanceBound
    reason: str = ""
    state: ChainState | None = None


def homogeneity_probe(state: ChainState, a: GeneratedTuple, n: int, b: GeneratedTuple, m: int,
                      eps, max_steps: int = 3) -> ProbeReport:
    """Look for an extension carrying ā (in stage n) within eps of b̄ (in stage m).

    Needs a certified dk_upper below eps.  The extension task amalgamates
    the latest stage with a copy of stage n over the correspondence b̄ ↦ ā;
    the copy's embedding then sends ā exactly onto the image of b̄.
    """
    eps = Fraction(eps)
    if a.lattice != state.stages[n] or b.lattice != state.stages[m]:
        raise LatticeError("tuples must live in the named stages")
    bound = dk_upper(a, b)
    if bound.upper >= eps:
        lower = dk_lower(a, b)
        bound = DistanceBound(lower.lower, lower.lower_witness, bound.upper, bound.upper_witness)
        return ProbeReport(False, 0, None, None, None, bound, "no certified placement below eps")
    if a.elements == b.elements and n == m:
        return ProbeReport(True, 0, n, identity_map(state.stages[n]), Fraction(0), bound, "", state)
    last = len(state.stages) - 1
    current = state
    for step in range(1, max_steps + 1):
        top = len(current.stages) - 1
        src = tuple(current.composite(m, top).apply(y) for y in b.elements)
        task = Task(top, src, state.stages[n], a.elements, 10, "probe")
        current = current.copy()
        current.queue.append(task)
        try:
            current = chain_step(current)
        except TaskRejected as exc:
            return ProbeReport(False, step, None, None, None, bound, f"task rejected: {exc}", current)
        into = current.targets[-1]
        new = len(current.stages) - 1
        ib = [current.composite(m, new).apply(y) for y in b.elements]
        got = max(current.stages[new].norm([p - q for p, q in zip(into.apply(x), y)])
                  for x, y in zip(a.elements, ib))
        if got < eps:
            return ProbeReport(True, step, new, into, got, bound, "", current)
    return ProbeReport(False, max_steps, last, None, None, bound, "task budget exhausted", current)
