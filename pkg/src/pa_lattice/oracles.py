"""Continuous target functions sampled exactly, with per-box Lipschitz data.

Lipschitz constants are taken with respect to the L-infinity norm, matching the
box geometry used everywhere else: ``|f(x) - f(y)| <= L(B) * |x - y|_inf`` on B.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Protocol, Sequence

from .affine import Point, SolidBox, as_point, parse_rational
from .errors import MalformedInput, NotNonnegative

logger = logging.getLogger(__name__)

Evaluator = Callable[[Point], Fraction]
LipschitzData = Callable[[SolidBox], Fraction]


@dataclass(frozen=True)
class ContinuousOracle:
    m: int
    evaluate: Evaluator
    lipschitz: Optional[LipschitzData] = None
    nonnegative: bool = False
    name: str = "oracle"
    serial: bool = False  # evaluation is not safe to fan out
    snap_error: Fraction = Fraction(0)

    def sample(self, x: Sequence) -> Fraction:
        value = parse_rational(self.evaluate(as_point(x)))
        if self.nonnegative and value < 0:
            raise NotNonnegative(f"oracle {self.name} flagged nonnegative returned {value} at {tuple(x)}")
        return value

    def lipschitz_on(self, box: SolidBox) -> Optional[Fraction]:
        if self.lipschitz is None:
            return None
        value = parse_rational(self.lipschitz(box))
        if value < 0:
            raise ValueError(f"oracle {self.name} reported a negative Lipschitz bound {value}")
        return value

    @classmethod
    def from_float(
        cls,
        m: int,
        fn: Callable[[Sequence[float]], float],
        lipschitz: Optional[LipschitzData] = None,
        denominator: int = 2**20,
        nonnegative: bool = False,
        name: str = "float",
    ) -> "ContinuousOracle":
        """Snap float samples to the grid ``1/denominator``; the snap error joins every bound."""

        def snapped(x: Point) -> Fraction:
            return Fraction(round(fn([float(c) for c in x]) * denominator), denominator)

        return cls(m, snapped, lipschitz, nonnegative, name, snap_error=Fraction(1, 2 * denominator))

    def positive_part(self) -> "ContinuousOracle":
        base = self.evaluate
        return replace(self, evaluate=_PartEvaluator(base, 1), nonnegative=True, name=f"{self.name}+")

    def negative_part(self) -> "ContinuousOracle":
        base = self.evaluate
        return replace(self, evaluate=_PartEvaluator(base, -1), nonnegative=True, name=f"{self.name}-")


class _PartEvaluator:
    """max(sign * f, 0); Lipschitz data of f carries over."""

    def __init__(self, base: Evaluator, sign: int):
        self.base = base
        self.sign = sign

    def __call__(self, x: Point) -> Fraction:
        return max(self.sign * parse_rational(self.base(x)), Fraction(0))


class OracleFactory(Protocol):
    def __call__(self, m: int, params: List[str]) -> ContinuousOracle: ...


def _abs_oracle(m: int, params: List[str]) -> ContinuousOracle:
    return ContinuousOracle(m, lambda x: max(abs(c) for c in x), lambda box: Fraction(1), True, "abs")


def _min_abs_1_oracle(m: int, params: List[str]) -> ContinuousOracle:
    return ContinuousOracle(
        m, lambda x: min(max(abs(c) for c in x), Fraction(1)), lambda box: Fraction(1), True, "min-abs-1"
    )


def _quadratic_oracle(m: int, params: List[str]) -> ContinuousOracle:
    def lipschitz(box: SolidBox) -> Fraction:
        return sum(2 * max(abs(lo), abs(hi)) for lo, hi in zip(box.lower, box.upper))

    return ContinuousOracle(m, lambda x: sum(c * c for c in x), lipschitz, True, "quadratic")


def _poly_oracle(m: int, params: List[str]) -> ContinuousOracle:
    """Polynomial in the first coordinate: ``poly:c0,c1,...``."""
    if not params:
        raise MalformedInput("poly needs coefficients, e.g. poly:0,0,1")
    coeffs = [parse_rational(p) for p in params]

    def evaluate(x: Point) -> Fraction:
        total = Fraction(0)
        for c in reversed(coeffs):
            total = total * x[0] + c
        return total

    def lipschitz(box: SolidBox) -> Fraction:
        r = max(abs(box.lower[0]), abs(box.upper[0]))
        return sum((k * abs(c) * r ** (k - 1) for k, c in enumerate(coeffs) if k), Fraction(0))

    nonneg = len(coeffs) == 1 and coeffs[0] >= 0
    return ContinuousOracle(m, evaluate, lipschitz, nonneg, "poly:" + ",".join(params))


def _constant_oracle(m: int, params: List[str]) -> ContinuousOracle:
    if len(params) != 1:
        raise MalformedInput("constant takes one value, e.g. constant:-1")
    c = parse_rational(params[0])
    return ContinuousOracle(m, lambda x: c, lambda box: Fraction(0), c >= 0, f"constant:{params[0]}")


class OracleRegistry:
    def __init__(self, factories: Optional[Dict[str, OracleFactory]] = None):
        self._factories: Dict[str, OracleFactory] = {}
        for name, factory in (factories or {}).items():
            self.register(name, factory)

    def get(self, name: str) -> OracleFactory:
        if name not in self._factories:
            raise KeyError(f"Unknown oracle '{name}'. Registered: {sorted(self._factories)}")
        return self._factories[name]

    def register(self, name: str, factory: OracleFactory) -> None:
        self._factories[name] = factory

    def list(self) -> list[str]:
        return sorted(self._factories)

    def build(self, spec: str, m: int = 1) -> ContinuousOracle:
        name, params = parse_oracle_spec(spec)
        oracle = self.get(name)(m, params)
        logger.debug("built oracle %s in dimension %d", oracle.name, m)
        return oracle


def parse_oracle_spec(spec: str) -> tuple[str, List[str]]:
    """``"poly:0,0,1"`` -> ``("poly", ["0", "0", "1"])``."""
    name, _, rest = spec.strip().partition(":")
    if not name:
        raise MalformedInput(f"Empty oracle name in {spec!r}")
    params = [p.strip() for p in rest.split(",")] if rest else []
    return name, params


def build_default_registry(extra: Iterable[tuple[str, OracleFactory]] = ()) -> OracleRegistry:
    registry = OracleRegistry(
        {
            "abs": _abs_oracle,
            "min-abs-1": _min_abs_1_oracle,
            "quadratic": _quadratic_oracle,
            "poly": _poly_oracle,
            "constant": _constant_oracle,
        }
    )
    for name, factory in extra:
        registry.register(name, factory)
    return registry
