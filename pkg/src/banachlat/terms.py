"""Lattice-linear terms: a small AST over +, scalar·, ∧, ∨ and (·)₊.

Terms evaluate coordinatewise on tuples of vectors, serialize to nested
lists with "p/q" scalars, and carry an exact Lipschitz bound with respect
to the max-distance on tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .vectorlattice import fmt_rational, to_rational


@dataclass(frozen=True)
class Term:
    op: str                 # var, scale, add, meet, join, pos
    args: tuple = ()
    name: str = ""
    scalar: Fraction = Fraction(1)

    def __add__(self, other: "Term") -> "Term":
        return Term("add", (self, other))

    def __sub__(self, other: "Term") -> "Term":
        return Term("add", (self, other.scale(-1)))

    def __and__(self, other: "Term") -> "Term":
        return Term("meet", (self, other))

    def __or__(self, other: "Term") -> "Term":
        return Term("join", (self, other))

    def scale(self, c) -> "Term":
        return Term("scale", (self,), scalar=to_rational(c))

    def pos(self) -> "Term":
        return Term("pos", (self,))

    def variables(self) -> frozenset[str]:
        if self.op == "var":
            return frozenset([self.name])
        return frozenset().union(*(a.variables() for a in self.args))

    def depth(self) -> int:
        return 0 if self.op == "var" else 1 + max(a.depth() for a in self.args)

    def __str__(self) -> str:
        if self.op == "var":
            return self.name
        if self.op == "scale":
            return f"{fmt_rational(self.scalar)}*{self.args[0]}"
        if self.op == "pos":
            return f"({self.args[0]})+"
        sym = {"add": " + ", "meet": " ^ ", "join": " v "}[self.op]
        return "(" + sym.join(str(a) for a in self.args) + ")"


def var(name: str) -> Term:
    return Term("var", name=name)


def evaluate(t: Term, env: Mapping[str, Sequence[Fraction]]) -> tuple[Fraction, ...]:
    """Evaluate t with coordinatewise lattice operations."""
    cache: dict[int, tuple] = {}

    def ev(s: Term):
        key = id(s)
        if key in cache:
            return cache[key]
        if s.op == "var":
            out = tuple(env[s.name])
        elif s.op == "scale":
            out = tuple(s.scalar * a for a in ev(s.args[0]))
        elif s.op == "pos":
            out = tuple(max(a, 0) for a in ev(s.args[0]))
        else:
            x, y = ev(s.args[0]), ev(s.args[1])
            fn = {"add": lambda a, b: a + b, "meet": min, "join": max}[s.op]
            out = tuple(fn(a, b) for a, b in zip(x, y))
        cache[key] = out
        return out

    return ev(t)


def lipschitz(t: Term, wrt: frozenset[str] | set[str] | None = None) -> Fraction:
    """Lipschitz bound of t for any lattice norm, in the listed variables.

    Uses ‖x∧y − x'∧y'‖ ≤ ‖x − x'‖ + ‖y − y'‖ (same for ∨) and
    ‖x₊ − x'₊‖ ≤ ‖x − x'‖.  Variables outside ``wrt`` are held fixed.
    """
    if t.op == "var":
        return Fraction(1) if wrt is None or t.name in wrt else Fraction(0)
    if t.op == "scale":
        return abs(t.scalar) * lipschitz(t.args[0], wrt)
    if t.op == "pos":
        return lipschitz(t.args[0], wrt)
    return lipschitz(t.args[0], wrt) + lipschitz(t.args[1], wrt)


def to_json(t: Term):
    if t.op == "var":
        return t.name
    if t.op == "scale":
        return ["scale", fmt_rational(t.scalar), to_json(t.args[0])]
    return [t.op] + [to_json(a) for a in t.args]


class TermSyntaxError(ValueError):
    pass


def from_json(data, where: str = "term") -> Term:
    if isinstance(data, str):
        return var(data)
    if not isinstance(data, list) or not data or not isinstance(data[0], str):
        raise TermSyntaxError(f"{where}: malformed term")
    op = data[0]
    if op == "scale":
        if len(data) != 3 or not isinstance(data[1], str):
            raise TermSyntaxError(f"{where}: scale takes a rational string and a term")
        try:
            c = to_rational(data[1])
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise TermSyntaxError(f"{where}: {exc}") from None
        return from_json(data[2], where + "[2]").scale(c)
    if op == "pos":
        if len(data) != 2:
            raise TermSyntaxError(f"{where}: pos takes one term")
        return from_json(data[1], where + "[1]").pos()
    if op in ("add", "meet", "join"):
        if len(data) != 3:
            raise TermSyntaxError(f"{where}: {op} takes two terms")
        return Term(op, (from_json(data[1], where + "[1]"), from_json(data[2], where + "[2]")))
    raise TermSyntaxError(f"{where}: unknown operation {op!r}")
