"""Piecewise affine functions in max-of-mins normal form.

A :class:`MinMaxExpr` is ``x -> max_C min_{a in C} a(x)`` over a non-empty
list of non-empty clauses of affine functions. Every piecewise affine function
on R^m has this form, and the form is closed under the lattice and vector
operations below.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Sequence, Tuple

from .affine import AffineFunction, RationalLike, SolidBox, _check_dim, eval_affine, parse_rational
from .config import DEFAULT_CONFIG, EngineConfig
from .errors import ExpressionTooLarge
from .lp import max_of_min

logger = logging.getLogger(__name__)

Clause = Tuple[AffineFunction, ...]


def _dedupe(items: Iterable) -> list:
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


@dataclass(frozen=True)
class MinMaxExpr:
    m: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self) -> None:
        if not self.clauses:
            raise ValueError("a MinMaxExpr needs at least one clause")
        cleaned = []
        seen = set()
        for clause in self.clauses:
            members = tuple(_dedupe(clause))
            if not members:
                raise ValueError("every clause needs at least one member")
            for a in members:
                _check_dim(self.m, a.dim)
            key = frozenset(members)
            if key not in seen:
                seen.add(key)
                cleaned.append(members)
        object.__setattr__(self, "clauses", tuple(cleaned))

    @classmethod
    def constant(cls, m: int, c: RationalLike) -> "MinMaxExpr":
        return from_affine(AffineFunction.constant(m, c))

    @classmethod
    def zero(cls, m: int) -> "MinMaxExpr":
        return cls.constant(m, 0)

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.clauses)

    def eval(self, x: Sequence[Fraction]) -> Fraction:
        _check_dim(self.m, len(x))
        return max(min(eval_affine(a, x) for a in clause) for clause in self.clauses)

    __call__ = eval

    def members(self) -> List[AffineFunction]:
        return _dedupe(a for clause in self.clauses for a in clause)

    def simplified(self) -> "MinMaxExpr":
        """Exact global absorption; evaluation is unchanged on all of R^m."""
        return MinMaxExpr(self.m, _absorb_clauses([_absorb_members(c) for c in self.clauses]))


def _profile(clause: Clause) -> Dict[Tuple[Fraction, ...], Fraction]:
    prof: Dict[Tuple[Fraction, ...], Fraction] = {}
    for a in clause:
        if a.v not in prof or a.b < prof[a.v]:
            prof[a.v] = a.b
    return prof


def _absorb_members(clause: Clause) -> Clause:
    # among parallel members only the lowest can attain the min
    prof = _profile(clause)
    return tuple(a for a in clause if prof[a.v] == a.b)


def _absorb_clauses(clauses: Sequence[Clause]) -> List[Clause]:
    profiles = [_profile(c) for c in clauses]
    keys = [frozenset(p) for p in profiles]
    alive = [True] * len(clauses)
    for i in range(len(clauses)):
        for j in range(len(clauses)):
            if i == j or not alive[j] or not keys[j] <= keys[i]:
                continue
            pi, pj = profiles[i], profiles[j]
            if all(pi[g] <= off for g, off in pj.items()):
                alive[i] = False
                break
    return [c for c, keep in zip(clauses, alive) if keep]


def _same_dim(e1: MinMaxExpr, e2: MinMaxExpr) -> None:
    _check_dim(e1.m, e2.m)


def _check_budget(count: int, config: EngineConfig, what: str) -> None:
    if count > config.clause_budget:
        raise ExpressionTooLarge(f"{what} would produce {count} clauses (budget {config.clause_budget})")


def from_affine(f: AffineFunction) -> MinMaxExpr:
    return MinMaxExpr(f.dim, ((f,),))


def join(e1: MinMaxExpr, e2: MinMaxExpr) -> MinMaxExpr:
    _same_dim(e1, e2)
    return MinMaxExpr(e1.m, e1.clauses + e2.clauses)


def meet(e1: MinMaxExpr, e2: MinMaxExpr, config: EngineConfig = DEFAULT_CONFIG) -> MinMaxExpr:
    _same_dim(e1, e2)
    _check_budget(len(e1.clauses) * len(e2.clauses), config, "meet")
    clauses = [c1 + c2 for c1 in e1.clauses for c2 in e2.clauses]
    return MinMaxExpr(e1.m, tuple(clauses)).simplified()


def join_all(exprs: Sequence[MinMaxExpr]) -> MinMaxExpr:
    return reduce(join, exprs)


def meet_all(exprs: Sequence[MinMaxExpr], config: EngineConfig = DEFAULT_CONFIG) -> MinMaxExpr:
    return reduce(lambda a, b: meet(a, b, config), exprs)


def add(e1: MinMaxExpr, e2: MinMaxExpr, config: EngineConfig = DEFAULT_CONFIG) -> MinMaxExpr:
    # min_p s_p + min_q t_q = min_{p,q} (s_p + t_q)
    _same_dim(e1, e2)
    _check_budget(len(e1.clauses) * len(e2.clauses), config, "add")
    clauses = [tuple(a + b for a in c1 for b in c2) for c1 in e1.clauses for c2 in e2.clauses]
    return MinMaxExpr(e1.m, tuple(clauses)).simplified()


def negate(e: MinMaxExpr, config: EngineConfig = DEFAULT_CONFIG) -> MinMaxExpr:
    """-(max of mins) = min of maxes, expanded back to max of mins.

    Result clauses are the choice functions picking one negated member per
    original clause, absorbed after every step.
    """
    current: List[Clause] = [()]
    for clause in e.clauses:
        _check_budget(len(current) * len(clause), config, "negate")
        current = [c + (-a,) for c in current for a in clause]
        current = _absorb_clauses([_absorb_members(c) for c in current])
    logger.debug("negate: %d clauses -> %d clauses", len(e.clauses), len(current))
    return MinMaxExpr(e.m, tuple(current))


def subtract(e1: MinMaxExpr, e2: MinMaxExpr, config: EngineConfig = DEFAULT_CONFIG) -> MinMaxExpr:
    return add(e1, negate(e2, config), config)


def scale(e: MinMaxExpr, lam: RationalLike, config: EngineConfig = DEFAULT_CONFIG) -> MinMaxExpr:
    lam = parse_rational(lam)
    if lam < 0:
        return scale(negate(e, config), -lam, config)
    return MinMaxExpr(e.m, tuple(tuple(a.scale(lam) for a in c) for c in e.clauses))


def _clause_below(lower: Clause, upper: Clause, box: SolidBox) -> bool:
    """min(lower) <= min(upper) on the whole box."""
    region = box.interior_constraints()
    for b in upper:
        if any(box.max_of(a - b) <= 0 for a in lower):
            continue
        res = max_of_min([a - b for a in lower], region)
        if res.value > 0:
            return False
    return True


def prune(e: MinMaxExpr, box: SolidBox) -> MinMaxExpr:
    """Drop members and clauses that never matter on ``box``.

    A member is dropped when another member of its clause is below it on the
    whole box; a clause is dropped when another clause is above it on the
    whole box. Dominance is decided exactly (closed form or LP).
    """
    _check_dim(e.m, box.dim)
    clauses: List[Clause] = []
    for clause in e.clauses:
        members = list(clause)
        for p in list(members):
            if any(q != p and box.max_of(q - p) <= 0 for q in members):
                members.remove(p)
        clauses.append(tuple(members))
    clauses = _dedupe(clauses)
    alive = [True] * len(clauses)
    for i in range(len(clauses)):
        for j in range(len(clauses)):
            if i != j and alive[j] and _clause_below(clauses[i], clauses[j], box):
                alive[i] = False
                break
    kept = tuple(c for c, keep in zip(clauses, alive) if keep)
    logger.debug("prune: %d -> %d clauses on %s", len(e.clauses), len(kept), box)
    return MinMaxExpr(e.m, kept)


def semantic_equal(e1: MinMaxExpr, e2: MinMaxExpr, box: SolidBox, config: EngineConfig = DEFAULT_CONFIG) -> bool:
    """True iff the two expressions agree at every point of ``box``."""
    from .cells import difference_bounds

    _same_dim(e1, e2)
    lo, hi = difference_bounds(e1, e2, box, config)
    return lo == 0 and hi == 0
