"""Certified PA/LPA approximation of continuous functions.

Interpolation is linear on the Kuhn triangulation of a uniform grid: every grid
cube splits into m! simplices, one per ordering of the axes. With an
L-infinity Lipschitz bound L on the box, the interpolant is within ``L * step``
of the target everywhere on the box.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .affine import AffineFunction, Point, RationalLike, SolidBox, as_point, parse_rational
from .cells import max_min_from_simplices, upper_bound_on_box
from .config import DEFAULT_CONFIG, EngineConfig
from .engines import EnginePlanner
from .errors import BadStep, GridTooLarge, NotNonnegative
from .expr import MinMaxExpr, add, join, meet, subtract
from .lpa import Anchor, BoxedPA, LocallyFiniteFamily, LPAFunction, bump, enumerate_anchors, eval_lpa
from .oracles import ContinuousOracle

logger = logging.getLogger(__name__)

Approximant = Union[MinMaxExpr, LPAFunction]


def _grid_size(box: SolidBox, step: Fraction) -> int:
    if step <= 0:
        raise BadStep(f"step must be positive, got {step}")
    count = 2 * box.radius / step
    if count.denominator != 1:
        raise BadStep(f"step {step} does not divide the edge length {2 * box.radius}")
    return int(count)


def grid_points(box: SolidBox, step: RationalLike, config: EngineConfig = DEFAULT_CONFIG) -> List[Point]:
    """Vertices of the uniform grid of pitch ``step`` over the box, lexicographic."""
    step = parse_rational(step)
    n = _grid_size(box, step)
    if (n + 1) ** box.dim > config.grid_budget:
        raise GridTooLarge(f"{(n + 1) ** box.dim} grid vertices exceed the budget of {config.grid_budget}")
    lower = box.lower
    return [
        tuple(lo + i * step for lo, i in zip(lower, idx))
        for idx in itertools.product(range(n + 1), repeat=box.dim)
    ]


def kuhn_interpolant(
    oracle: ContinuousOracle, box: SolidBox, step: RationalLike, config: EngineConfig = DEFAULT_CONFIG
) -> MinMaxExpr:
    step = parse_rational(step)
    n = _grid_size(box, step)
    m = box.dim
    if (n + 1) ** m > config.grid_budget:
        raise GridTooLarge(f"{(n + 1) ** m} grid vertices exceed the budget of {config.grid_budget}")
    lower = box.lower
    values: Dict[Tuple[int, ...], Fraction] = {}

    def point(idx: Sequence[int]) -> Point:
        return tuple(lo + i * step for lo, i in zip(lower, idx))

    def value(idx: Tuple[int, ...]) -> Fraction:
        if idx not in values:
            values[idx] = oracle.sample(point(idx))
        return values[idx]

    pieces: List[Tuple[AffineFunction, List[Point]]] = []
    for base in itertools.product(range(n), repeat=m):
        for order in itertools.permutations(range(m)):
            idx = list(base)
            prev = value(base)
            grad = [Fraction(0)] * m
            vertices = [point(base)]
            for axis in order:
                idx[axis] += 1
                cur = value(tuple(idx))
                grad[axis] = (cur - prev) / step
                prev = cur
                vertices.append(point(idx))
            origin = vertices[0]
            offset = value(base) - sum(g * x for g, x in zip(grad, origin))
            pieces.append((AffineFunction(tuple(grad), offset), vertices))
    expr = max_min_from_simplices(pieces)
    logger.debug("kuhn_interpolant: %d vertices, %d simplices, %d clauses", len(values), len(pieces), len(expr.clauses))
    return expr


@dataclass
class ValidationResult:
    max_observed_error: Fraction
    rows: List[Tuple[Fraction, ...]] = field(default_factory=list)  # x..., f, h, |f-h|


@dataclass
class ApproxReport:
    epsilon: Fraction
    boxes_processed: int
    grid_steps: Dict[Anchor, Fraction]
    max_observed_error: Fraction
    certified_bound: Optional[Fraction]
    covered_radius: int = 0


def _evaluate(h: Approximant, x: Point) -> Fraction:
    if isinstance(h, LPAFunction):
        return eval_lpa(h, x)
    return h.eval(x)


def random_points(box: SolidBox, count: int, seed: int = 0, resolution: int = 1024) -> List[Point]:
    """Rational points of the box on a grid of pitch radius/resolution."""
    rng = random.Random(seed)
    return [
        tuple(c + box.radius * Fraction(rng.randint(-resolution, resolution), resolution) for c in box.center)
        for _ in range(count)
    ]


def validate(
    oracle: ContinuousOracle,
    h: Approximant,
    box: SolidBox,
    count: int = 200,
    seed: int = 0,
    points: Optional[Sequence[Point]] = None,
) -> ValidationResult:
    pts = list(points) if points is not None else random_points(box, count, seed)
    rows = []
    worst = Fraction(0)
    for x in pts:
        f = oracle.sample(x)
        v = _evaluate(h, x)
        err = abs(f - v)
        worst = max(worst, err)
        rows.append(tuple(x) + (f, v, err))
    return ValidationResult(worst, rows)


def _step_for(lipschitz: Fraction, tolerance: Fraction) -> Fraction:
    """Largest 2^-j <= 1 with lipschitz * step <= tolerance."""
    step = Fraction(1)
    while lipschitz * step > tolerance:
        step /= 2
    return step


class _BoxedInterpolant:
    """Member at an anchor: max(interpolant on c + 2B, 0) cut off by a bump."""

    def __init__(self, oracle: ContinuousOracle, epsilon: Fraction, config: EngineConfig):
        self.oracle = oracle
        self.epsilon = epsilon
        self.config = config

    def __call__(self, anchor: Anchor) -> Tuple[BoxedPA, Fraction, Optional[Fraction]]:
        c = tuple(Fraction(a) for a in anchor)
        outer = SolidBox(c, 2)
        lip = self.oracle.lipschitz_on(outer)
        if lip is None:
            step, bound = self.config.best_effort_step, None
        else:
            step = _step_for(lip, self.epsilon / 2)
            bound = lip * step + self.oracle.snap_error
        local = join(kuhn_interpolant(self.oracle, outer, step, self.config), MinMaxExpr.zero(len(c)))
        height = upper_bound_on_box(local, outer) + 1
        member = meet(local, bump(c, 1, 2, height), self.config)
        return BoxedPA(member, outer, tuple(anchor)), step, bound


def _part_family(
    part: ContinuousOracle,
    anchors: List[Anchor],
    epsilon: Fraction,
    radius: int,
    config: EngineConfig,
    planner: EnginePlanner,
) -> Tuple[LocallyFiniteFamily, Dict[Anchor, Fraction], Optional[Fraction]]:
    results = planner.run(_BoxedInterpolant(part, epsilon, config), anchors, serial=part.serial)
    members = tuple(r[0] for r in results)
    steps = {a: r[1] for a, r in zip(anchors, results)}
    bounds = [r[2] for r in results]
    bound = None if any(b is None for b in bounds) else max(bounds, default=Fraction(0))
    family = LocallyFiniteFamily(part.m, positive=True, members=members, truncation_radius=radius)
    return family, steps, bound


def uniform_approx(
    oracle: ContinuousOracle,
    epsilon: RationalLike,
    radius: int,
    config: EngineConfig = DEFAULT_CONFIG,
    planner: Optional[EnginePlanner] = None,
    samples: int = 200,
) -> Tuple[LPAFunction, ApproxReport]:
    """LPA h with |f - h| <= epsilon on Omega_{radius+1}, the union of the unit boxes K_n.

    f is split into f+ and f-; each part becomes the sup of a positive family
    with one member per anchor, and h = sup(F+) - sup(F-).
    """
    epsilon = parse_rational(epsilon)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    planner = planner or EnginePlanner(config=config)
    anchors = enumerate_anchors(oracle.m, radius)

    plus, steps, bound_plus = _part_family(oracle.positive_part(), anchors, epsilon, radius, config, planner)
    if oracle.nonnegative:
        # f- vanishes identically
        minus = LocallyFiniteFamily(oracle.m, positive=True, members=(), truncation_radius=radius)
        bound_minus: Optional[Fraction] = Fraction(0)
    else:
        minus, minus_steps, bound_minus = _part_family(
            oracle.negative_part(), anchors, epsilon, radius, config, planner
        )
        steps = {a: min(s, minus_steps[a]) for a, s in steps.items()}

    h = LPAFunction("sup", plus, subtrahend=LPAFunction("sup", minus))
    certified = None if bound_plus is None or bound_minus is None else bound_plus + bound_minus
    check = validate(oracle, h, SolidBox.omega(oracle.m, radius + 1), samples, config.sample_seed)
    if certified is not None and certified > epsilon:
        logger.warning("certified bound %s exceeds epsilon %s (snap error %s)", certified, epsilon, oracle.snap_error)
    report = ApproxReport(epsilon, len(anchors), steps, check.max_observed_error, certified, radius + 1)
    logger.info(
        "uniform_approx %s: %d anchors, certified %s, observed %s",
        oracle.name,
        len(anchors),
        certified,
        check.max_observed_error,
    )
    return h, report


def monotone_under_approx(
    oracle: ContinuousOracle, count: int, config: EngineConfig = DEFAULT_CONFIG
) -> List[MinMaxExpr]:
    """h_1 <= h_2 <= ... <= f for a nonnegative oracle, with f - h_k <= 2 L delta_k on Omega_k.

    l_k is the interpolant on Omega_{k+1} lowered by its error bound, clipped
    at 0 and cut off outside Omega_{k+1} by a bump; h_k = h_{k-1} v l_k.
    """
    if not oracle.nonnegative:
        raise NotNonnegative(f"oracle {oracle.name} is not flagged nonnegative")
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    m = oracle.m
    zero = MinMaxExpr.zero(m)
    h = zero
    out: List[MinMaxExpr] = []
    for k in range(1, count + 1):
        delta = Fraction(1, 2**k)
        box = SolidBox.omega(m, k + 1)
        lip = oracle.lipschitz_on(box)
        if lip is None:
            raise ValueError(f"oracle {oracle.name} has no Lipschitz data; monotone approximation needs it")
        shift = lip * delta + oracle.snap_error
        interp = kuhn_interpolant(oracle, box, delta, config)
        shifted = join(add(interp, MinMaxExpr.constant(m, -shift), config), zero)
        height = upper_bound_on_box(shifted, box)
        if height > 0:
            piece = meet(shifted, bump((0,) * m, k, k + 1, height), config)
        else:
            piece = zero
        h = join(h, piece).simplified()
        logger.debug("monotone step %d: delta=%s, %d clauses", k, delta, len(h.clauses))
        out.append(h)
    return out


def order_approx(oracle: ContinuousOracle, count: int, config: EngineConfig = DEFAULT_CONFIG) -> List[MinMaxExpr]:
    """g_k - h_k with g_k increasing to f+ and h_k increasing to f-."""
    ups = monotone_under_approx(oracle.positive_part(), count, config)
    downs = monotone_under_approx(oracle.negative_part(), count, config)
    return [subtract(g, h, config) for g, h in zip(ups, downs)]


def positive_minorant(
    oracle: ContinuousOracle, center: Sequence[RationalLike], config: EngineConfig = DEFAULT_CONFIG
) -> MinMaxExpr:
    """A bump y with 0 < y <= f, for a point where f(center) > 0.

    Height f(c)/2 and outer radius f(c)/(2L) keep y under f on the support.
    """
    c = as_point(center)
    value = oracle.sample(c) - oracle.snap_error
    if value <= 0:
        raise ValueError(f"f({', '.join(str(x) for x in c)}) must be positive, got {value}")
    lip = oracle.lipschitz_on(SolidBox(c, 1))
    if lip is None:
        raise ValueError(f"oracle {oracle.name} has no Lipschitz data")
    outer = Fraction(1) if lip == 0 else min(value / (2 * lip), Fraction(1))
    return bump(c, outer / 2, outer, value / 2)
