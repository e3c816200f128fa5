"""Locally piecewise affine functions as suprema of locally finite families.

Members are boxed PA functions anchored at integer points; a member anchored
at ``c`` vanishes outside a support box inside ``c + reach * B_inf^m``, so
every bounded set meets finitely many supports and evaluation only ever
consults finitely many members.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Literal, Optional, Sequence, Tuple

from .affine import AffineFunction, Point, RationalLike, SolidBox, _check_dim, as_point, parse_rational
from .cells import (
    INFEASIBLE,
    CellComplex,
    CharacteristicPair,
    bound_on_box,
    build_complex,
    check_pair_axioms,
    interior_witness,
    upper_bound_on_box,
)
from .config import DEFAULT_CONFIG, EngineConfig
from .errors import BadRadii, InternalInconsistency, NotNonnegative
from .expr import MinMaxExpr, add, join, join_all, meet, meet_all, negate, prune

logger = logging.getLogger(__name__)

Anchor = Tuple[int, ...]
Mode = Literal["sup", "inf"]


def bump(center: Sequence[RationalLike], inner: RationalLike, outer: RationalLike, height: RationalLike) -> MinMaxExpr:
    """PA bump: ``height`` on the inner box, 0 outside the outer box, L-inf radial ramp between."""
    c = as_point(center)
    inner, outer, height = parse_rational(inner), parse_rational(outer), parse_rational(height)
    if not 0 < inner < outer:
        raise BadRadii(f"need 0 < inner < outer, got inner={inner}, outer={outer}")
    if height <= 0:
        raise ValueError(f"bump height must be positive, got {height}")
    m = len(c)
    k = height / (outer - inner)
    ramp = []
    for i, ci in enumerate(c):
        for sign in (1, -1):
            # k * (outer - sign * (x_i - c_i))
            ramp.append(AffineFunction.coordinate(m, i, -sign).scale(k).shift(k * (outer + sign * ci)))
    top = (AffineFunction.constant(m, height),) + tuple(ramp)
    return MinMaxExpr(m, (top, (AffineFunction.constant(m, 0),)))


@dataclass(frozen=True)
class BoxedPA:
    expr: MinMaxExpr
    support: SolidBox
    anchor: Anchor


def enumerate_anchors(m: int, radius: int) -> List[Anchor]:
    """Integer points with L-inf norm <= radius, by norm then lexicographically."""
    pts = itertools.product(range(-radius, radius + 1), repeat=m)
    return sorted(pts, key=lambda p: (max((abs(a) for a in p), default=0), p))


@dataclass(frozen=True)
class LocallyFiniteFamily:
    m: int
    positive: bool = False
    members: Tuple[BoxedPA, ...] = ()
    factory: Optional[Callable[[Anchor], BoxedPA]] = None
    reach: Fraction = Fraction(2)
    truncation_radius: Optional[int] = None
    certified_radius: Optional[int] = None
    _cache: Dict[Anchor, BoxedPA] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "reach", parse_rational(self.reach))
        for b in self.members:
            _check_dim(self.m, b.expr.m)
            if not SolidBox(b.anchor, self.reach).contains_box(b.support):
                raise ValueError(f"support {b.support} leaves the reach of anchor {b.anchor}")

    @property
    def is_generated(self) -> bool:
        return self.factory is not None

    def member(self, anchor: Anchor) -> BoxedPA:
        if not self.is_generated:
            for b in self.members:
                if b.anchor == anchor:
                    return b
            raise KeyError(f"No member anchored at {anchor}")
        if anchor not in self._cache:
            self._cache[anchor] = self.factory(anchor)
        return self._cache[anchor]

    def _anchors_near(self, box: SolidBox) -> Iterator[Anchor]:
        near = sorted(box.expanded(self.reach).lattice_points(), key=lambda p: (max(abs(a) for a in p), p))
        if self.truncation_radius is not None:
            near = [p for p in near if max(abs(a) for a in p) <= self.truncation_radius]
        return iter(near)

    def members_meeting(self, box: SolidBox) -> List[BoxedPA]:
        _check_dim(self.m, box.dim)
        if self.is_generated:
            candidates = [self.member(a) for a in self._anchors_near(box)]
        else:
            candidates = list(self.members)
        return [b for b in candidates if b.support.intersects(box)]

    def members_containing(self, x: Point) -> List[BoxedPA]:
        return [b for b in self.members_meeting(SolidBox(x, Fraction(1, 2))) if b.support.contains(x)]

    def zero_present(self, region: SolidBox) -> bool:
        """Whether the zero constant has to join the members meeting ``region``.

        Members meeting ``region`` vanish off their supports and supply 0
        themselves; only a member missing from ``region`` altogether does not.
        """
        if self.is_generated or not self.members:
            return True
        return any(not b.support.intersects(region) for b in self.members)

    def truncated(self, radius: int) -> "LocallyFiniteFamily":
        """Explicit family of the members anchored within ``radius``."""
        if self.is_generated:
            members = tuple(self.member(a) for a in enumerate_anchors(self.m, radius))
        else:
            members = tuple(b for b in self.members if max(abs(a) for a in b.anchor) <= radius)
        return LocallyFiniteFamily(
            self.m, self.positive, members, None, self.reach, radius, self.certified_radius
        )


def verify_locally_finite(family: LocallyFiniteFamily, n: int) -> int:
    """Number of members whose support meets Omega_n."""
    return len(family.members_meeting(SolidBox.omega(family.m, n)))


def anchor_geometry_count(m: int, n: int, reach: int = 2) -> int:
    """Members of a full lattice family with supports c + reach*B that meet Omega_n."""
    return (2 * (n + reach) + 1) ** m


@dataclass(frozen=True)
class LPAFunction:
    mode: Mode
    family: LocallyFiniteFamily
    base: Optional[MinMaxExpr] = None
    subtrahend: Optional["LPAFunction"] = None

    @property
    def m(self) -> int:
        return self.family.m

    def __sub__(self, other: "LPAFunction") -> "LPAFunction":
        if self.subtrahend is not None:
            raise ValueError("an LPA difference cannot be nested")
        return LPAFunction(self.mode, self.family, self.base, other)


def sup_family(family: LocallyFiniteFamily) -> LPAFunction:
    return LPAFunction("sup", family)


def inf_family(family: LocallyFiniteFamily) -> LPAFunction:
    return LPAFunction("inf", family)


def eval_lpa(h: LPAFunction, x: Sequence[RationalLike]) -> Fraction:
    x = as_point(x)
    _check_dim(h.m, len(x))
    here = h.family.members_containing(x)
    values = [b.expr.eval(x) for b in here]
    fam = h.family
    if fam.is_generated or not fam.members or len(here) < len(fam.members):
        values.append(Fraction(0))
    value = max(values) if h.mode == "sup" else min(values)
    if h.base is not None:
        value += h.base.eval(x)
    if h.subtrahend is not None:
        value -= eval_lpa(h.subtrahend, x)
    return value


def restrict_to_box(h: LPAFunction, n: int, config: EngineConfig = DEFAULT_CONFIG) -> MinMaxExpr:
    """A PA expression equal to ``h`` on Omega_n."""
    box = SolidBox.omega(h.m, n)
    exprs = [b.expr for b in h.family.members_meeting(box)]
    if h.family.zero_present(box) or not exprs:
        exprs.append(MinMaxExpr.zero(h.m))
    out = join_all(exprs) if h.mode == "sup" else meet_all(exprs, config)
    if h.base is not None:
        out = add(out, h.base, config)
    if h.subtrahend is not None:
        minus = prune(restrict_to_box(h.subtrahend, n, config), box)
        out = add(out, negate(minus, config), config)
    return out


class _TileMember:
    """f meet g_n for the unit box K_n around an anchor."""

    def __init__(self, f: MinMaxExpr, config: EngineConfig):
        self.f = f
        self.config = config

    def __call__(self, anchor: Anchor) -> BoxedPA:
        c = tuple(Fraction(a) for a in anchor)
        top = upper_bound_on_box(self.f, SolidBox(c, 1))
        height = max(top, Fraction(0)) + 1
        g = bump(c, 1, 2, height)
        return BoxedPA(meet(self.f, g, self.config), SolidBox(c, 2), tuple(anchor))


def certify_nonnegative(f: MinMaxExpr, radius: int, config: EngineConfig = DEFAULT_CONFIG) -> Optional[int]:
    """Return None for a global certificate, ``radius`` for a box certificate.

    Global: some clause has only constant members with non-negative offsets.
    """
    for clause in f.clauses:
        if all(a.is_constant and a.b >= 0 for a in clause):
            return None
    lo, _ = bound_on_box(f, SolidBox.omega(f.m, radius), config)
    if lo < 0:
        raise NotNonnegative(f"minimum {lo} on Omega_{radius} is negative")
    return radius


def tile_decompose(
    f: MinMaxExpr,
    positive_check: bool = True,
    config: EngineConfig = DEFAULT_CONFIG,
    certify_radius: Optional[int] = None,
) -> LocallyFiniteFamily:
    """Locally finite family of PA members with sup equal to ``f`` (for f >= 0)."""
    certified = None
    if positive_check:
        certified = certify_nonnegative(f, certify_radius or config.certify_radius, config)
    return LocallyFiniteFamily(f.m, positive=True, factory=_TileMember(f, config), certified_radius=certified)


def lattice_closure(
    family: LocallyFiniteFamily, op: Literal["join", "meet"], config: EngineConfig = DEFAULT_CONFIG
) -> LocallyFiniteFamily:
    """Pairwise joins or meets of the members of a finite family.

    Each combined member is anchored at its first member's anchor; the reach
    grows by the largest anchor distance, so the result is again locally finite.
    """
    if family.is_generated:
        raise ValueError("lattice_closure needs an explicit family; truncate it first")
    members = list(family.members)
    combined: List[BoxedPA] = []
    spread = Fraction(0)
    for i, j in itertools.combinations(range(len(members)), 2):
        a, b = members[i], members[j]
        if op == "join":
            expr = join(a.expr, b.expr)
        else:
            expr = meet(a.expr, b.expr, config)
        if op == "meet" and family.positive:
            support = a.support
        else:
            support = a.support.hull(b.support)
        spread = max(spread, max(abs(p - q) for p, q in zip(a.anchor, b.anchor)))
        combined.append(BoxedPA(expr, support, a.anchor))
    return LocallyFiniteFamily(
        family.m, family.positive, tuple(combined), None, family.reach + spread, family.truncation_radius
    )


def lpa_pairs_with_complex(
    h: LPAFunction, n: int, config: EngineConfig = DEFAULT_CONFIG
) -> Tuple[CellComplex, List[CharacteristicPair]]:
    """Characteristic pairs of ``h`` on Omega_n with indices stable across n, and their complex.

    Components are numbered by first appearance while walking Omega_1..Omega_n.
    Agreement, non-empty regions, disjointness and coverage are checked on
    Omega_n; only finitely many regions meet it.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    ledger: List[AffineFunction] = []
    pairs: List[CharacteristicPair] = []
    cx: Optional[CellComplex] = None
    for k in range(1, n + 1):
        expr = restrict_to_box(h, k, config)
        cx = build_complex(expr, SolidBox.omega(h.m, k), config)
        pairs = cx.pairs()
        for p in pairs:
            if p.component not in ledger:
                ledger.append(p.component)
        if k == n:
            report = check_pair_axioms(prune(expr, cx.box), cx, pairs)
            failed = [name for name, ok in report.items() if not ok]
            if failed:
                raise InternalInconsistency(f"characteristic pair conditions failed on Omega_{n}: {failed}")
    logger.info("lpa pairs on Omega_%d: %d regions, %d components seen", n, len(pairs), len(ledger))
    out = [CharacteristicPair(p.component, p.region_cells, ledger.index(p.component)) for p in pairs]
    return cx, sorted(out, key=lambda p: p.index)


def lpa_characteristic_pairs(h: LPAFunction, n: int, config: EngineConfig = DEFAULT_CONFIG) -> List[CharacteristicPair]:
    return lpa_pairs_with_complex(h, n, config)[1]


def vanishes_outside(expr: MinMaxExpr, support: SolidBox, config: EngineConfig = DEFAULT_CONFIG) -> bool:
    """Exact check that ``expr`` is 0 off ``support``.

    Every cell of ``expr`` on a box one unit wider than the support that meets
    the complement of the support must carry the zero component.
    """
    m = support.dim
    r = support.radius
    beyond = []
    for i, c in enumerate(support.center):
        beyond.append(AffineFunction.coordinate(m, i).shift(-(c + r)))
        beyond.append(AffineFunction.coordinate(m, i, -1).shift(c - r))
    cx = build_complex(expr, support.expanded(1), config)
    for cell, comp in zip(cx.cells, cx.assignment):
        f = cx.components[comp]
        if f.is_constant and f.b == 0:
            continue
        if any(interior_witness(cell.constraints + (g,)) is not INFEASIBLE for g in beyond):
            return False
    return True
