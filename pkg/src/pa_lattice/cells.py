"""Cells, components and characteristic pairs of a PA function on a box.

Cells are the open convex pieces that the agreement hyperplanes
``{f_i = f_j}`` of the collected components cut out of the open box. They are
enumerated by inserting hyperplanes one at a time and keeping every side that
the exact LP finds non-empty; each cell carries a strict interior witness.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .affine import EMPTY, AffineFunction, Hyperplane, Point, SolidBox, _check_dim, difference_hyperplane, eval_affine
from .config import DEFAULT_CONFIG, EngineConfig
from .errors import InternalInconsistency, NotAComponent, TooManyHyperplanes
from .expr import MinMaxExpr, _dedupe, prune
from .lp import max_of_min, optimize_affine

logger = logging.getLogger(__name__)


class _Infeasible:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFEASIBLE"

    def __bool__(self) -> bool:
        return False


INFEASIBLE = _Infeasible()


class Order(str, Enum):
    BELOW = "below"
    ABOVE = "above"
    EQUAL = "equal"


@dataclass(frozen=True)
class Cell:
    constraints: Tuple[AffineFunction, ...]  # open cell: every g > 0
    witness: Point
    signs: str

    def closure_contains(self, x: Sequence[Fraction]) -> bool:
        return all(eval_affine(g, x) >= 0 for g in self.constraints)


@dataclass(frozen=True)
class CharacteristicPair:
    component: AffineFunction
    region_cells: FrozenSet[int]
    index: int = 0


@dataclass(frozen=True)
class CellComplex:
    box: SolidBox
    components: Tuple[AffineFunction, ...]
    hyperplanes: Tuple[Hyperplane, ...]
    cells: Tuple[Cell, ...]
    assignment: Tuple[int, ...]  # cell id -> component index

    def locate(self, x: Sequence[Fraction]) -> Optional[int]:
        """Id of the first cell whose closure holds ``x``."""
        for cid, cell in enumerate(self.cells):
            if cell.closure_contains(x):
                return cid
        return None

    def pairs(self) -> List[CharacteristicPair]:
        groups: Dict[int, List[int]] = {}
        for cid, comp in enumerate(self.assignment):
            groups.setdefault(comp, []).append(cid)
        return [
            CharacteristicPair(self.components[comp], frozenset(cids), index=comp)
            for comp, cids in sorted(groups.items())
        ]


def collect_components(e: MinMaxExpr) -> List[AffineFunction]:
    return e.members()


def arrangement_hyperplanes(components: Sequence[AffineFunction], box: SolidBox) -> List[Hyperplane]:
    """Normalised, deduplicated agreement hyperplanes that cut the open box."""
    out: List[Hyperplane] = []
    seen = set()
    for i in range(len(components)):
        for j in range(i + 1, len(components)):
            h = difference_hyperplane(components[i], components[j])
            if h is EMPTY:
                continue
            h = h.normalized()
            if h in seen or not box.meets_interior(h):
                continue
            seen.add(h)
            out.append(h)
    return out


def interior_witness(constraints: Sequence[AffineFunction], m: Optional[int] = None) -> Union[Point, _Infeasible]:
    """A point with every ``g(x) > 0``, or ``INFEASIBLE``.

    Maximizes a slack ``s <= 1`` with ``g(x) >= s``; the open polyhedron is
    non-empty iff the optimum is positive.
    """
    if not constraints:
        if m is None:
            raise ValueError("dimension required for an empty constraint list")
        return (Fraction(0),) * m
    dim = constraints[0].dim
    res = max_of_min(list(constraints) + [AffineFunction.constant(dim, 1)], [])
    if not res.optimal or res.value <= 0:
        return INFEASIBLE
    return res.x


def _cells_from_hyperplanes(hyperplanes: Sequence[Hyperplane], box: SolidBox) -> List[Cell]:
    cells: List[Tuple[Tuple[AffineFunction, ...], Point, str]] = [
        (tuple(box.interior_constraints()), box.center, "")
    ]
    for h in hyperplanes:
        nxt = []
        for cons, w, signs in cells:
            side = h.side(w)
            for sign, mark in ((1, "+"), (-1, "-")):
                g = h.g if sign > 0 else -h.g
                new_cons = cons + (g,)
                if side == sign:
                    nxt.append((new_cons, w, signs + mark))
                    continue
                wit = interior_witness(new_cons)
                if wit is not INFEASIBLE:
                    nxt.append((new_cons, wit, signs + mark))
        cells = nxt
    cells.sort(key=lambda c: c[1])
    return [Cell(cons, w, signs) for cons, w, signs in cells]


def enumerate_cells(
    components: Sequence[AffineFunction], box: SolidBox, config: EngineConfig = DEFAULT_CONFIG
) -> List[Cell]:
    if not components:
        raise ValueError("at least one component is required")
    for f in components:
        _check_dim(box.dim, f.dim)
    hyperplanes = arrangement_hyperplanes(components, box)
    if len(hyperplanes) > config.hyperplane_limit:
        raise TooManyHyperplanes(f"{len(hyperplanes)} hyperplanes exceed the limit of {config.hyperplane_limit}")
    cells = _cells_from_hyperplanes(hyperplanes, box)
    logger.debug("enumerate_cells: %d hyperplanes, %d cells", len(hyperplanes), len(cells))
    return cells


def _component_at(e: MinMaxExpr, components: Sequence[AffineFunction], x: Point) -> int:
    value = e.eval(x)
    hits = [i for i, f in enumerate(components) if eval_affine(f, x) == value]
    if len(hits) != 1:
        raise InternalInconsistency(f"{len(hits)} components match the function at witness {x}")
    return hits[0]


def assign_components(
    e: MinMaxExpr, cells: Sequence[Cell], components: Optional[Sequence[AffineFunction]] = None
) -> Tuple[int, ...]:
    comps = collect_components(e) if components is None else list(components)
    return tuple(_component_at(e, comps, cell.witness) for cell in cells)


def build_complex(e: MinMaxExpr, box: SolidBox, config: EngineConfig = DEFAULT_CONFIG) -> CellComplex:
    """Cell complex of ``e`` on ``box``; ``e`` is pruned on the box first."""
    local = prune(e, box)
    components = collect_components(local)
    hyperplanes = arrangement_hyperplanes(components, box)
    if len(hyperplanes) > config.hyperplane_limit:
        raise TooManyHyperplanes(f"{len(hyperplanes)} hyperplanes exceed the limit of {config.hyperplane_limit}")
    cells = _cells_from_hyperplanes(hyperplanes, box)
    assignment = assign_components(local, cells, components)
    return CellComplex(box, tuple(components), tuple(hyperplanes), tuple(cells), assignment)


def characteristic_pairs(e: MinMaxExpr, box: SolidBox, config: EngineConfig = DEFAULT_CONFIG) -> List[CharacteristicPair]:
    """Components attained on some cell, each with the cells of its region."""
    return build_complex(e, box, config).pairs()


def strict_order_on_cell(e: MinMaxExpr, cell: Cell, g: AffineFunction) -> Order:
    components = collect_components(e)
    if g not in components:
        raise NotAComponent(f"{g} is not a member of the expression")
    fi = components[_component_at(e, components, cell.witness)]
    if g == fi:
        return Order.EQUAL
    return Order.BELOW if eval_affine(g, cell.witness) < eval_affine(fi, cell.witness) else Order.ABOVE


def _affine_range(f: AffineFunction, cell: Cell, box: SolidBox) -> Tuple[Fraction, Fraction]:
    if f.is_constant:
        return f.b, f.b
    if len(cell.constraints) == 2 * box.dim:
        return box.min_of(f), box.max_of(f)
    lo = optimize_affine(f, cell.constraints, maximize_=False)
    hi = optimize_affine(f, cell.constraints, maximize_=True)
    return lo.value, hi.value


def _bounds_by_cells(
    exprs: Sequence[MinMaxExpr],
    combine: Callable[[List[AffineFunction]], AffineFunction],
    box: SolidBox,
    config: EngineConfig,
) -> Tuple[Fraction, Fraction]:
    local = [prune(e, box) for e in exprs]
    members = [collect_components(e) for e in local]
    hyperplanes = arrangement_hyperplanes(_dedupe(a for ms in members for a in ms), box)
    if len(hyperplanes) > config.hyperplane_limit:
        if box.radius / 2 < config.min_split_radius:
            raise TooManyHyperplanes(
                f"{len(hyperplanes)} hyperplanes on a box of radius {box.radius} exceed the limit of {config.hyperplane_limit}"
            )
        logger.debug("subdividing box %s (%d hyperplanes)", box, len(hyperplanes))
        parts = [_bounds_by_cells(local, combine, child, config) for child in box.bisect()]
        return min(p[0] for p in parts), max(p[1] for p in parts)
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for cell in _cells_from_hyperplanes(hyperplanes, box):
        pieces = [ms[_component_at(e, ms, cell.witness)] for e, ms in zip(local, members)]
        c_lo, c_hi = _affine_range(combine(pieces), cell, box)
        lo = c_lo if lo is None else min(lo, c_lo)
        hi = c_hi if hi is None else max(hi, c_hi)
    return lo, hi


def bound_on_box(e: MinMaxExpr, box: SolidBox, config: EngineConfig = DEFAULT_CONFIG) -> Tuple[Fraction, Fraction]:
    """Exact (min, max) of ``e`` over the closed box."""
    _check_dim(e.m, box.dim)
    return _bounds_by_cells([e], lambda p: p[0], box, config)


def difference_bounds(
    e1: MinMaxExpr, e2: MinMaxExpr, box: SolidBox, config: EngineConfig = DEFAULT_CONFIG
) -> Tuple[Fraction, Fraction]:
    """Exact (min, max) of ``e1 - e2`` over the closed box, on the common refinement."""
    _check_dim(e1.m, box.dim)
    _check_dim(e2.m, box.dim)
    return _bounds_by_cells([e1, e2], lambda p: p[0] - p[1], box, config)


def upper_bound_on_box(e: MinMaxExpr, box: SolidBox) -> Fraction:
    """Exact max over the closed box: one LP per clause, each clause being concave."""
    _check_dim(e.m, box.dim)
    region = box.interior_constraints()
    best: Optional[Fraction] = None
    for clause in e.clauses:
        if len(clause) == 1:
            value = box.max_of(clause[0])
        else:
            value = max_of_min(list(clause), region).value
        best = value if best is None else max(best, value)
    return best


def _dominates_on(fj: AffineFunction, fi: AffineFunction, cell: Cell, box: SolidBox) -> bool:
    """fj >= fi on the closure of the cell."""
    d = fj - fi
    if box.min_of(d) >= 0:
        return True
    if box.max_of(d) < 0:
        return False
    return optimize_affine(d, cell.constraints, maximize_=False).value >= 0


def max_min_from_pairs(cx: CellComplex) -> MinMaxExpr:
    """Max over cells K_p of min over {f_j >= f_i(p) on closure(K_p)}.

    The result is defined on all of R^m and agrees with the function on the box.
    """
    attained = sorted(set(cx.assignment))
    clauses = []
    for cell, i in zip(cx.cells, cx.assignment):
        fi = cx.components[i]
        clause = [fi] + [
            cx.components[j] for j in attained if j != i and _dominates_on(cx.components[j], fi, cell, cx.box)
        ]
        if not clause:
            raise InternalInconsistency("empty clause in max-min reconstruction")
        clauses.append(tuple(clause))
    return MinMaxExpr(cx.box.dim, tuple(clauses))


def max_min_from_simplices(pieces: Sequence[Tuple[AffineFunction, Sequence[Point]]]) -> MinMaxExpr:
    """Max-min form of a continuous function that is affine on each simplex.

    On a simplex an affine function dominates another iff it does at every vertex.
    """
    components = _dedupe(f for f, _ in pieces)
    clauses = []
    for fi, vertices in pieces:
        base = [eval_affine(fi, v) for v in vertices]
        clause = [fi] + [
            fj
            for fj in components
            if fj != fi and all(eval_affine(fj, v) >= bv for v, bv in zip(vertices, base))
        ]
        clauses.append(tuple(clause))
    return MinMaxExpr(components[0].dim, tuple(clauses))


def check_pair_axioms(e: MinMaxExpr, cx: CellComplex, pairs: Sequence[CharacteristicPair]) -> Dict[str, bool]:
    """Exact check of agreement, non-empty regions, disjoint interiors and coverage."""
    agreement = all(
        e.eval(cx.cells[cid].witness) == eval_affine(p.component, cx.cells[cid].witness)
        for p in pairs
        for cid in p.region_cells
    )
    nonempty = all(p.region_cells for p in pairs)
    claimed = [cid for p in pairs for cid in p.region_cells]
    signs = [c.signs for c in cx.cells]
    disjoint = len(claimed) == len(set(claimed)) and len(signs) == len(set(signs))
    coverage = set(claimed) == set(range(len(cx.cells)))
    distinct = len({p.component for p in pairs}) == len(pairs)
    return {
        "agreement": agreement,
        "nonempty": nonempty,
        "disjoint": disjoint,
        "coverage": coverage,
        "distinct_components": distinct,
    }
