"""Exact rational scalars, points, affine functions, hyperplanes and boxes.

Every scalar is a :class:`fractions.Fraction`; nothing in this module rounds.
Rationals travel as strings ``"p/q"`` (or ``"p"`` when ``q == 1``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from .errors import DimensionMismatch, IdenticalComponents, MalformedInput

RationalLike = Union[Fraction, int, str]
Point = Tuple[Fraction, ...]


def parse_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MalformedInput(f"Not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        # decimals are read exactly: "0.25" -> 1/4
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"Not a rational: {value!r}") from exc
    raise MalformedInput(f"Not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_point(values: Iterable[RationalLike]) -> Point:
    return tuple(parse_rational(v) for v in values)


def parse_point(text: str) -> Point:
    """Parse ``"1/2,-3"`` into a point."""
    parts = [p for p in text.split(",") if p.strip() != ""]
    if not parts:
        raise MalformedInput(f"Empty point: {text!r}")
    return as_point(parts)


def _check_dim(expected: int, got: int) -> None:
    if expected != got:
        raise DimensionMismatch(f"expected dimension {expected}, got {got}")


@dataclass(frozen=True)
class AffineFunction:
    """x -> <v, x> + b."""

    v: Tuple[Fraction, ...]
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "v", tuple(parse_rational(c) for c in self.v))
        object.__setattr__(self, "b", parse_rational(self.b))

    @classmethod
    def constant(cls, m: int, c: RationalLike) -> "AffineFunction":
        return cls((Fraction(0),) * m, parse_rational(c))

    @classmethod
    def coordinate(cls, m: int, i: int, sign: int = 1) -> "AffineFunction":
        v = [Fraction(0)] * m
        v[i] = Fraction(sign)
        return cls(tuple(v), Fraction(0))

    @property
    def dim(self) -> int:
        return len(self.v)

    @property
    def is_constant(self) -> bool:
        return not any(self.v)

    def __call__(self, x: Sequence[Fraction]) -> Fraction:
        return eval_affine(self, x)

    def __add__(self, other: "AffineFunction") -> "AffineFunction":
        _check_dim(self.dim, other.dim)
        return AffineFunction(tuple(a + c for a, c in zip(self.v, other.v)), self.b + other.b)

    def __neg__(self) -> "AffineFunction":
        return AffineFunction(tuple(-a for a in self.v), -self.b)

    def __sub__(self, other: "AffineFunction") -> "AffineFunction":
        return self + (-other)

    def scale(self, lam: RationalLike) -> "AffineFunction":
        lam = parse_rational(lam)
        return AffineFunction(tuple(lam * a for a in self.v), lam * self.b)

    def shift(self, c: RationalLike) -> "AffineFunction":
        return AffineFunction(self.v, self.b + parse_rational(c))

    def __str__(self) -> str:
        terms = [f"{format_rational(a)}*x{i + 1}" for i, a in enumerate(self.v) if a]
        terms.append(format_rational(self.b))
        return " + ".join(terms)


def eval_affine(f: AffineFunction, x: Sequence[Fraction]) -> Fraction:
    _check_dim(len(f.v), len(x))
    total = f.b
    for a, xi in zip(f.v, x):
        if a:
            total += a * xi
    return total


def affine_equal(f: AffineFunction, g: AffineFunction) -> bool:
    _check_dim(f.dim, g.dim)
    return f.v == g.v and f.b == g.b


class _Empty:
    """Agreement set of two parallel, non-identical affine functions."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY"

    def __bool__(self) -> bool:
        return False


EMPTY = _Empty()


@dataclass(frozen=True)
class Hyperplane:
    """The zero set {g = 0} of an affine g with non-zero gradient."""

    g: AffineFunction

    def __post_init__(self) -> None:
        if self.g.is_constant:
            raise ValueError("a hyperplane needs a non-zero gradient")

    def normalized(self) -> "Hyperplane":
        """Scale so that the first non-zero gradient entry is 1."""
        lead = next(a for a in self.g.v if a)
        return Hyperplane(self.g.scale(1 / lead))

    def side(self, x: Sequence[Fraction]) -> int:
        value = eval_affine(self.g, x)
        return (value > 0) - (value < 0)


def difference_hyperplane(fi: AffineFunction, fj: AffineFunction) -> Union[Hyperplane, _Empty]:
    if affine_equal(fi, fj):
        raise IdenticalComponents(f"{fi} and {fj} are the same function")
    d = fi - fj
    if d.is_constant:
        return EMPTY
    return Hyperplane(d)


@dataclass(frozen=True)
class SolidBox:
    """Closed L-infinity box ``center + radius * B_inf^m``."""

    center: Point
    radius: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", parse_rational(self.radius))
        if self.radius <= 0:
            raise ValueError(f"box radius must be positive, got {self.radius}")

    @classmethod
    def omega(cls, m: int, n: RationalLike) -> "SolidBox":
        return cls((Fraction(0),) * m, parse_rational(n))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def lower(self) -> Point:
        return tuple(c - self.radius for c in self.center)

    @property
    def upper(self) -> Point:
        return tuple(c + self.radius for c in self.center)

    def contains(self, x: Sequence[Fraction]) -> bool:
        _check_dim(self.dim, len(x))
        return all(abs(xi - c) <= self.radius for xi, c in zip(x, self.center))

    def intersects(self, other: "SolidBox") -> bool:
        _check_dim(self.dim, other.dim)
        return all(abs(a - c) <= self.radius + other.radius for a, c in zip(self.center, other.center))

    def contains_box(self, other: "SolidBox") -> bool:
        _check_dim(self.dim, other.dim)
        return all(abs(a - c) + other.radius <= self.radius for a, c in zip(self.center, other.center))

    def expanded(self, by: RationalLike) -> "SolidBox":
        return SolidBox(self.center, self.radius + parse_rational(by))

    def hull(self, other: "SolidBox") -> "SolidBox":
        """Smallest box of this shape containing both boxes."""
        _check_dim(self.dim, other.dim)
        lo = [min(a, b) for a, b in zip(self.lower, other.lower)]
        hi = [max(a, b) for a, b in zip(self.upper, other.upper)]
        radius = max((h - l) / 2 for l, h in zip(lo, hi))
        return SolidBox(tuple((l + h) / 2 for l, h in zip(lo, hi)), radius)

    def max_of(self, f: AffineFunction) -> Fraction:
        """Exact maximum of an affine function over the closed box."""
        _check_dim(self.dim, f.dim)
        return eval_affine(f, self.center) + self.radius * sum(abs(a) for a in f.v)

    def min_of(self, f: AffineFunction) -> Fraction:
        _check_dim(self.dim, f.dim)
        return eval_affine(f, self.center) - self.radius * sum(abs(a) for a in f.v)

    def meets_interior(self, h: Hyperplane) -> bool:
        return self.min_of(h.g) < 0 < self.max_of(h.g)

    def interior_constraints(self) -> List[AffineFunction]:
        """Strict inequalities g > 0 describing the open box."""
        m = self.dim
        out: List[AffineFunction] = []
        for i, c in enumerate(self.center):
            out.append(AffineFunction.coordinate(m, i).shift(-(c - self.radius)))
            out.append(AffineFunction.coordinate(m, i, -1).shift(c + self.radius))
        return out

    def bisect(self) -> List["SolidBox"]:
        half = self.radius / 2
        children = []
        for signs in itertools.product((-1, 1), repeat=self.dim):
            children.append(SolidBox(tuple(c + s * half for c, s in zip(self.center, signs)), half))
        return children

    def lattice_points(self) -> Iterator[Tuple[int, ...]]:
        """Integer points of the closed box."""
        ranges = []
        for c in self.center:
            lo = math.ceil(c - self.radius)
            hi = math.floor(c + self.radius)
            ranges.append(range(lo, hi + 1))
        return itertools.product(*ranges)
