"""Finite-dimensional Banach lattices with polyhedral norms.

A lattice is R^dim with the coordinatewise order.  Its norm is given by
nonnegative functionals (``‖x‖ = max_i x*_i(|x|)``), by positive ball
generators (the unit ball is their solid convex hull), or by both.  The
missing form is computed on demand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

from .polyhedra import (INF, HRep, LinearProgram, dominated_bound, enumerate_vertices,
                        maximal_vertices, order_extreme_points, sch_gauge, solve_lp)
from .vectorlattice import GridShape, dot, fmt_rational, vec


class LatticeError(ValueError):
    """Mathematical precondition failure; ``witness`` explains it."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _matrix(rows) -> tuple:
    return tuple(vec(r) for r in rows)


@dataclass(frozen=True)
class FiniteLattice:
    dim: int
    functional_form: tuple | None = None
    ball_form: tuple | None = None
    label: str = ""
    shape: GridShape | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 0:
            raise LatticeError("dimension must be nonnegative")
        if self.functional_form is None and self.ball_form is None:
            if self.dim:
                raise LatticeError("a lattice needs a functional form or a ball form")
            object.__setattr__(self, "functional_form", ())
        for name in ("functional_form", "ball_form"):
            data = getattr(self, name)
            if data is None:
                continue
            data = _matrix(data)
            object.__setattr__(self, name, data)
            for row in data:
                if len(row) != self.dim:
                    raise LatticeError(f"{name} entry has wrong length", row)
                if any(a < 0 for a in row) or not any(row):
                    raise LatticeError(f"{name} entries must be nonnegative and nonzero", row)
            for j in range(self.dim):
                if not any(row[j] > 0 for row in data):
                    unit = tuple(Fraction(int(k == j)) for k in range(self.dim))
                    raise LatticeError(f"{name} is not positive-definite on atom {j}", unit)
        if self.shape is not None and self.shape.size != self.dim:
            raise LatticeError("grid shape does not match dimension")

    # -- the two forms -------------------------------------------------------
    @cached_property
    def functionals(self) -> tuple:
        """Functional form; computed as the dual order extreme points if absent."""
        if self.functional_form is not None:
            return self.functional_form
        return tuple(maximal_vertices(self.ball_form))

    @cached_property
    def generators(self) -> tuple:
        """Ball generators; computed as maximal vertices of the ball if absent."""
        if self.ball_form is not None:
            return self.ball_form
        if self.shape is not None and self._is_plain_grid():
            return tuple(_grid_choices(self.shape))
        return tuple(maximal_vertices(self.functional_form))

    @cached_property
    def oep(self) -> tuple:
        """Order extreme points of the unit ball."""
        if self.ball_form is None:
            return self.generators  # maximal vertices are already irredundant
        return tuple(order_extreme_points(self.ball_form))

    @cached_property
    def dual_oep(self) -> tuple:
        """Order extreme points of the positive part of the dual ball."""
        if self.functional_form is None:
            return self.functionals
        return tuple(order_extreme_points(self.functional_form))

    def has_functionals(self) -> bool:
        return self.functional_form is not None or "functionals" in self.__dict__

    def has_generators(self) -> bool:
        return self.ball_form is not None or "generators" in self.__dict__ or \
            (self.shape is not None and self._is_plain_grid())

    def _is_plain_grid(self) -> bool:
        return self.functional_form is not None and \
            self.functional_form == _grid_functionals(self.shape)

    # -- norm ----------------------------------------------------------------
    def norm(self, x) -> Fraction:
        x = vec(x)
        if len(x) != self.dim:
            raise LatticeError("vector length differs from lattice dimension")
        if not self.dim:
            return Fraction(0)
        ax = [abs(a) for a in x]
        if self.has_functionals():
            return max(dot(f, ax) for f in self.functionals)
        value = sch_gauge(ax, self.ball_form)
        if value == INF:
            raise LatticeError("infinite gauge: ball form is not positive-definite")
        return value

    def __repr__(self):
        return f"FiniteLattice(dim={self.dim}, label={self.label!r})"


def _grid_functionals(shape: GridShape) -> tuple:
    out = []
    for rng in shape.row_slices():
        out.append(tuple(Fraction(int(i in rng)) for i in range(shape.size)))
    return tuple(out)


def _grid_choices(shape: GridShape):
    for pick in itertools.product(*shape.row_slices()):
        v = [Fraction(0)] * shape.size
        for i in pick:
            v[i] = Fraction(1)
        yield tuple(v)


# -- constructors --------------------------------------------------------------

def grid(shape: GridShape | Sequence[int], label: str | None = None) -> FiniteLattice:
    """The lattice ℓ∞^N(ℓ1^{M_k}) with one functional per row."""
    if not isinstance(shape, GridShape):
        shape = GridShape(len(shape), tuple(shape))
    if label is None:
        widths = set(shape.cols)
        label = f"linf{shape.rows}(l1_{shape.cols[0]})" if len(widths) == 1 else \
            f"linf(l1 {'x'.join(map(str, shape.cols))})"
    return FiniteLattice(shape.size, _grid_functionals(shape), None, label, shape)


def ell1(n: int) -> FiniteLattice:
    return grid(GridShape(1, (n,)), f"l1_{n}")


def ellinf(n: int) -> FiniteLattice:
    return grid(GridShape(n, (1,) * n), f"linf_{n}")


def real_line() -> FiniteLattice:
    return grid(GridShape(1, (1,)), "R")


def zero_lattice() -> FiniteLattice:
    return FiniteLattice(0, (), None, "0")


def from_functionals(rows, label: str = "") -> FiniteLattice:
    rows = _matrix(rows)
    return FiniteLattice(len(rows[0]), rows, None, label)


def from_generators(rows, label: str = "") -> FiniteLattice:
    rows = _matrix(rows)
    return FiniteLattice(len(rows[0]), None, rows, label)


def with_both_forms(lat: FiniteLattice) -> FiniteLattice:
    return FiniteLattice(lat.dim, lat.functionals, lat.oep, lat.label, lat.shape)


def eval_norm(lat: FiniteLattice, x) -> Fraction:
    return lat.norm(x)


# -- maps ----------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeMap:
    dom: FiniteLattice
    cod: FiniteLattice
    matrix: tuple

    def __post_init__(self):
        m = _matrix(self.matrix) if self.cod.dim else ()
        object.__setattr__(self, "matrix", m)
        if len(m) != self.cod.dim or any(len(r) != self.dom.dim for r in m):
            raise LatticeError("matrix must be cod.dim x dom.dim")

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.matrix)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.dom.dim)]

    def apply(self, x) -> tuple:
        x = vec(x)
        return tuple(dot(r, x) for r in self.matrix)

    def __call__(self, x):
        return self.apply(x)

    def compose(self, inner: "LatticeMap") -> "LatticeMap":
        """self ∘ inner."""
        if inner.cod.dim != self.dom.dim:
            raise LatticeError("maps are not composable")
        cols = [self.apply(c) for c in inner.columns()]
        rows = [tuple(c[i] for c in cols) for i in range(self.cod.dim)]
        return LatticeMap(inner.dom, self.cod, rows)

    def scaled(self, c) -> "LatticeMap":
        c = Fraction(c)
        return LatticeMap(self.dom, self.cod, [[c * a for a in r] for r in self.matrix])

    def with_dom(self, dom: FiniteLattice) -> "LatticeMap":
        return LatticeMap(dom, self.cod, self.matrix)

    def with_cod(self, cod: FiniteLattice) -> "LatticeMap":
        return LatticeMap(self.dom, cod, self.matrix)


def identity_map(lat: FiniteLattice) -> LatticeMap:
    return LatticeMap(lat, lat, [[Fraction(int(i == j)) for j in range(lat.dim)] for i in range(lat.dim)])


class HomCheck(NamedTuple):
    ok: bool
    witness: tuple | None


def check_homomorphism(f: LatticeMap) -> HomCheck:
    """Nonnegative entries and pairwise disjoint column supports."""
    owner = {}
    for i, row in enumerate(f.matrix):
        for j, a in enumerate(row):
            if a < 0:
                return HomCheck(False, ("negative entry", i, j, a))
            if a:
                if i in owner:
                    return HomCheck(False, ("columns overlap", owner[i], j, i))
                owner[i] = j
    return HomCheck(True, None)


def require_homomorphism(f: LatticeMap) -> None:
    ok, witness = check_homomorphism(f)
    if not ok:
        raise LatticeError("map is not a lattice homomorphism", witness)


@dataclass(frozen=True)
class EmbeddingCertificate:
    """(1/c_lower)‖x‖ ≤ ‖φx‖ ≤ c_upper‖x‖; each witness attains its bound."""

    c_upper: Fraction
    upper_witness: tuple
    c_lower: Fraction | float
    lower_witness: tuple | None

    @property
    def constant(self):
        return max(self.c_upper, self.c_lower)

    def is_isometric(self) -> bool:
        return self.c_upper == 1 and self.c_lower == 1

    def scaled(self, c) -> "EmbeddingCertificate":
        c = Fraction(c)
        return EmbeddingCertificate(c * self.c_upper, self.upper_witness,
                                    self.c_lower / c if self.c_lower != INF else INF, self.lower_witness)


def _normalize(x, n):
    return tuple(a / n for a in x)


def _upper_bound(f: LatticeMap, upper_hint) -> Fraction:
    cod = f.cod
    dom = f.dom
    if cod.has_functionals():
        psi = [tuple(dot(r, col) for col in f.columns()) for r in cod.functionals]
        if dom.has_generators():
            best, arg = Fraction(-1), None
            for w in dom.oep:
                v = max(dot(p, w) for p in psi)
                if v > best:
                    best, arg = v, w
            return best, arg
        best, arg = Fraction(-1), None
        rows = [(r, "<=", 1) for r in dom.functionals]
        for p in psi:
            res = solve_lp(LinearProgram(p, rows, "max"))
            if res.optimum > best:
                best, arg = res.optimum, res.primal
        return best, _normalize(arg, dom.norm(arg))
    best, arg = Fraction(-1), None
    gens = cod.generators
    for w in dom.oep:
        y = f.apply(w)
        if upper_hint is not None and best >= upper_hint:
            break
        if dominated_bound(y, gens) <= best:
            continue
        v = sch_gauge(y, gens)
        if v > best:
            best, arg = v, w
    return best, arg


def _lower_lp(f: LatticeMap):
    """max over dom functionals r of max{ r.x : x >= 0, ‖φx‖ <= 1 }."""
    dom, cod = f.dom, f.cod
    n = dom.dim
    cols = f.columns()
    if cod.has_functionals():
        psi = [tuple(dot(r, c) for c in cols) for r in cod.functionals]
        rows = [(p, "<=", 1) for p in psi if any(p)]
        extra = 0
    else:
        gens = cod.generators
        extra = len(gens)
        rows = []
        touched = sorted({i for c in cols for i, a in enumerate(c) if a})
        for i in touched:
            rows.append((tuple(f.matrix[i]) + tuple(-g[i] for g in gens), "<=", 0))
        rows.append(((Fraction(0),) * n + (Fraction(1),) * extra, "<=", 1))
    best, arg = Fraction(-1), None
    for r in dom.dual_oep:
        res = solve_lp(LinearProgram(tuple(r) + (Fraction(0),) * extra, rows, "max"))
        if res.status == "unbounded":
            ray = res.ray[:n]
            return INF, ray
        if res.optimum > best:
            best, arg = res.optimum, res.primal[:n]
    return best, arg


def _lower_vertices(f: LatticeMap):
    """The same constant via vertices of the pullback { x >= 0 : ‖φx‖ <= 1 }."""
    cols = f.columns()
    psi = [tuple(dot(r, c) for c in cols) for r in f.cod.functionals]
    if any(not any(p[j] for p in psi) for j in range(f.dom.dim)):
        j = next(j for j in range(f.dom.dim) if not any(p[j] for p in psi))
        return INF, tuple(Fraction(int(k == j)) for k in range(f.dom.dim))
    best, arg = Fraction(-1), None
    for v in maximal_vertices([p for p in psi if any(p)]):
        n = f.dom.norm(v)
        if n > best:
            best, arg = n, v
    return best, arg


def certify_embedding(f: LatticeMap, method: str = "lp", upper_hint=None) -> EmbeddingCertificate:
    """Exact distortion constants of a lattice homomorphism.

    ``upper_hint`` is a known upper bound on ‖φ‖ that lets the generator
    scan stop early once it is attained.
    """
    require_homomorphism(f)
    if not f.dom.dim:
        return EmbeddingCertificate(Fraction(1), (), Fraction(1), ())
    c_up, w_up = _upper_bound(f, upper_hint)
    if method == "vertices":
        c_low, w_low = _lower_vertices(f)
    else:
        c_low, w_low = _lower_lp(f)
    if c_low != INF:
        image = f.cod.norm(f.apply(w_low))
        w_low = _normalize(w_low, image)
    return EmbeddingCertificate(c_up, tuple(w_up), c_low, tuple(w_low))


def signed_copies(w: Sequence[Fraction]):
    supp = [i for i, a in enumerate(w) if a]
    for signs in itertools.product((1, -1), repeat=len(supp)):
        v = list(w)
        for i, s in zip(supp, signs):
            v[i] = s * v[i]
        yield tuple(v)


def extreme_points(lat: FiniteLattice) -> list[tuple]:
    """Extreme points of the unit ball: every sign pattern of every OEP."""
    return sorted(v for w in lat.oep for v in signed_copies(w))


def operator_norm(dom: FiniteLattice, cod: FiniteLattice, matrix) -> Fraction:
    """‖T‖ for any linear T, as the max over extreme points of the dom ball."""
    T = LatticeMap(dom, cod, matrix)
    best = Fraction(0)
    for v in extreme_points(dom):
        best = max(best, cod.norm(T.apply(v)))
    return best


# -- audit -----------------------------------------------------------------------

@dataclass
class AuditReport:
    label: str
    oep: list
    extreme_point_count: int
    dual_extreme_point_count: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def ball_hrep(lat: FiniteLattice) -> HRep:
    rows = {v for f in lat.functionals for v in signed_copies(f)}
    rows = sorted(rows)
    return HRep(rows, (1,) * len(rows))


def equivalences_audit(lat: FiniteLattice, brute_force_limit: int = 5) -> AuditReport:
    """Check the finite-OEP / finite-EP / dual-EP / grid-embedding equivalences."""
    from .embeddings import embed_into_grid

    bad = []
    oep = list(lat.oep)
    dual = list(lat.dual_oep)
    ep_count = sum(2 ** sum(1 for a in w if a) for w in oep)
    dual_count = sum(2 ** sum(1 for a in f if a) for f in dual)
    # the two forms describe the same ball
    for w in oep:
        if max(dot(f, w) for f in dual) != 1:
            bad.append(("generator off the unit sphere", w))
    for f in dual:
        if max(dot(f, w) for w in oep) != 1:
            bad.append(("functional off the dual unit sphere", f))
    if sorted(maximal_vertices(dual)) != sorted(oep):
        bad.append(("ball vertices disagree with functional form", None))
    if lat.dim <= brute_force_limit:
        eps = enumerate_vertices(ball_hrep(lat))
        if eps.rays or sorted(eps.vertices) != extreme_points(lat):
            bad.append(("extreme points are not the signed order extreme points", None))
        if sorted({tuple(abs(a) for a in v) for v in eps.vertices}) != sorted(oep):
            bad.append(("moduli of extreme points differ from order extreme points", None))
    full = FiniteLattice(lat.dim, tuple(dual), tuple(oep), lat.label)
    cert = certify_embedding(embed_into_grid(full))
    if not cert.is_isometric():
        bad.append(("grid embedding not isometric", (cert.c_upper, cert.c_lower)))
    return AuditReport(lat.label, oep, ep_count, dual_count, bad)


def dualize(lat: FiniteLattice) -> FiniteLattice:
    """The dual lattice: functionals and ball generators swap roles."""
    return FiniteLattice(lat.dim, tuple(lat.oep), tuple(lat.dual_oep),
                         f"dual({lat.label})" if lat.label else "")


def direct_sum_infty(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    pad_a = (Fraction(0),) * b.dim
    pad_b = (Fraction(0),) * a.dim
    funcs = [tuple(f) + pad_a for f in a.functionals] + [pad_b + tuple(f) for f in b.functionals]
    shape = None
    if a.shape is not None and b.shape is not None and a._is_plain_grid() and b._is_plain_grid():
        shape = GridShape(a.shape.rows + b.shape.rows, a.shape.cols + b.shape.cols)
    return FiniteLattice(a.dim + b.dim, tuple(funcs), None, f"({a.label} (+)inf {b.label})", shape)


def direct_sum_one(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    """ℓ1-sum: the ball is the solid hull of both balls."""
    pad_a = (Fraction(0),) * b.dim
    pad_b = (Fraction(0),) * a.dim
    gens = [tuple(w) + pad_a for w in a.oep] + [pad_b + tuple(w) for w in b.oep]
    return FiniteLattice(a.dim + b.dim, None, tuple(gens), f"({a.label} (+)1 {b.label})")


def injections(a: FiniteLattice, b: FiniteLattice, total: FiniteLattice) -> tuple[LatticeMap, LatticeMap]:
    n = a.dim + b.dim
    left = [[Fraction(int(i == j)) for j in range(a.dim)] for i in range(n)]
    right = [[Fraction(int(i == a.dim + j)) for j in range(b.dim)] for i in range(n)]
    return LatticeMap(a, total, left), LatticeMap(b, total, right)


# -- induced matrices ------------------------------------------------------------

@dataclass(frozen=True)
class InducedMatrix:
    rows: int
    cols: int
    entries: tuple
    supports: tuple  # supports[k][i] = cells of row k in the support of f(e_i)

    def row(self, k: int) -> tuple:
        return self.entries[k]


def induced_matrix(f: LatticeMap) -> InducedMatrix:
    shape = f.cod.shape
    if shape is None:
        raise LatticeError("induced matrices need a grid codomain")
    entries, supports = [], []
    for rng in shape.row_slices():
        erow, srow = [], []
        for i in range(f.dom.dim):
            cells = tuple(c - rng.start for c in rng if f.matrix[c][i])
            srow.append(cells)
            erow.append(sum((f.matrix[c][i] for c in rng), Fraction(0)))
        entries.append(tuple(erow))
        supports.append(tuple(srow))
    return InducedMatrix(shape.rows, f.dom.dim, tuple(entries), tuple(supports))


def describe(lat: FiniteLattice) -> str:
    fs = "; ".join(" ".join(fmt_rational(a) for a in f) for f in lat.functionals)
    return f"{lat.label or 'lattice'} dim {lat.dim}: {fs}"
