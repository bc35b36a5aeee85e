"""Exact rational grid vectors and coordinatewise lattice operations.

Every element lives in a grid with ``rows`` rows, row ``k`` having ``cols[k]``
cells.  The norm is the sup over rows of the row-wise absolute sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected so that no rounding can sneak into computations.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "p") and hasattr(value, "q"):  # flint.fmpq
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def fmt_rational(q: Fraction) -> str:
    """Canonical ``p/q`` string (``q`` omitted when it equals 1)."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vec(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


class ShapeError(ValueError):
    """Raised when two operands do not live in the same grid."""


@dataclass(frozen=True)
class GridShape:
    rows: int
    cols: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(int(c) for c in self.cols)
        object.__setattr__(self, "cols", cols)
        if self.rows < 1 or len(cols) != self.rows:
            raise ShapeError("need rows >= 1 and one width per row")
        if any(c < 1 for c in cols):
            raise ShapeError("every row width must be positive")

    @classmethod
    def uniform(cls, rows: int, width: int) -> "GridShape":
        return cls(rows, (width,) * rows)

    @property
    def size(self) -> int:
        return sum(self.cols)

    def offset(self, k: int) -> int:
        return sum(self.cols[:k])

    def index(self, k: int, j: int) -> int:
        """Flat position of cell (k, j), both zero based."""
        if not (0 <= k < self.rows and 0 <= j < self.cols[k]):
            raise IndexError((k, j))
        return self.offset(k) + j

    def cell(self, flat: int) -> tuple[int, int]:
        for k, width in enumerate(self.cols):
            if flat < width:
                return k, flat
            flat -= width
        raise IndexError(flat)

    def row_slices(self) -> list[range]:
        out, start = [], 0
        for width in self.cols:
            out.append(range(start, start + width))
            start += width
        return out


@dataclass(frozen=True)
class GridVector:
    shape: GridShape
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = vec(self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.shape.size:
            raise ShapeError(f"expected {self.shape.size} entries, got {len(entries)}")

    @classmethod
    def zeros(cls, shape: GridShape) -> "GridVector":
        return cls(shape, (Fraction(0),) * shape.size)

    @classmethod
    def unit(cls, shape: GridShape, k: int, j: int) -> "GridVector":
        e = [Fraction(0)] * shape.size
        e[shape.index(k, j)] = Fraction(1)
        return cls(shape, tuple(e))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "GridVector":
        shape = GridShape(len(rows), tuple(len(r) for r in rows))
        return cls(shape, tuple(v for r in rows for v in r))

    def rows(self) -> list[tuple[Fraction, ...]]:
        return [self.entries[s.start:s.stop] for s in self.shape.row_slices()]

    def _check(self, other: "GridVector") -> None:
        if not isinstance(other, GridVector) or other.shape != self.shape:
            raise ShapeError("operands live in different grids")

    def _zip(self, other, op) -> "GridVector":
        self._check(other)
        return GridVector(self.shape, tuple(op(a, b) for a, b in zip(self.entries, other.entries)))

    def _map(self, op) -> "GridVector":
        return GridVector(self.shape, tuple(op(a) for a in self.entries))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self._map(lambda a: -a)

    def __mul__(self, scalar):
        s = to_rational(scalar)
        return self._map(lambda a: s * a)

    __rmul__ = __mul__

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __abs__(self):
        return absolute(self)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def norm(self) -> Fraction:
        return infty_l1_norm(self)


# Coordinatewise operations.  They accept grid vectors or plain tuples.

def _binary(x, y, op):
    if isinstance(x, GridVector):
        return x._zip(y, op)
    if len(x) != len(y):
        raise ShapeError("length mismatch")
    return tuple(op(a, b) for a, b in zip(x, y))


def _unary(x, op):
    if isinstance(x, GridVector):
        return x._map(op)
    return tuple(op(a) for a in x)


def add(x, y):
    return _binary(x, y, lambda a, b: a + b)


def sub(x, y):
    return _binary(x, y, lambda a, b: a - b)


def scale(c, x):
    c = to_rational(c)
    return _unary(x, lambda a: c * a)


def meet(x, y):
    return _binary(x, y, min)


def join(x, y):
    return _binary(x, y, max)


def absolute(x):
    return _unary(x, abs)


def pos_part(x):
    return _unary(x, lambda a: a if a > 0 else Fraction(0))


def neg_part(x):
    return _unary(x, lambda a: -a if a < 0 else Fraction(0))


def lattice_ops(op: str, x, y=None, scalar=None):
    """Dispatch by name: add, scale, meet, join, abs, pos_part, neg_part."""
    if op == "add":
        return add(x, y)
    if op == "scale":
        return scale(scalar, x)
    if op == "meet":
        return meet(x, y)
    if op == "join":
        return join(x, y)
    if op == "abs":
        return absolute(x)
    if op == "pos_part":
        return pos_part(x)
    if op == "neg_part":
        return neg_part(x)
    raise ValueError(f"unknown lattice operation {op!r}")


def infty_l1_norm(x: GridVector) -> Fraction:
    return max(sum((abs(a) for a in row), Fraction(0)) for row in x.rows())


def disjoint(x, y) -> bool:
    m = meet(absolute(x), absolute(y))
    return not any(m.entries if isinstance(m, GridVector) else m)


def support(x: Sequence[Fraction]) -> frozenset[int]:
    return frozenset(i for i, a in enumerate(x) if a)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((p * q for p, q in zip(a, b) if p and q), Fraction(0))
