from __future__ import annotations

import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from pa_lattice.affine import AffineFunction, SolidBox, eval_affine
from pa_lattice.approx import random_points
from pa_lattice.cells import (
    INFEASIBLE,
    Order,
    bound_on_box,
    build_complex,
    characteristic_pairs,
    check_pair_axioms,
    collect_components,
    difference_bounds,
    enumerate_cells,
    interior_witness,
    max_min_from_pairs,
    max_min_from_simplices,
    strict_order_on_cell,
    upper_bound_on_box,
)
from pa_lattice.config import EngineConfig
from pa_lattice.errors import NotAComponent, TooManyHyperplanes
from pa_lattice.expr import MinMaxExpr, from_affine, join, meet, prune, semantic_equal
from strategies import dims, exprs

F = Fraction
T = AffineFunction((1,), 0)
ONE = AffineFunction.constant(1, 1)
EX1 = MinMaxExpr(1, ((T, ONE), (-T, ONE)))
ABS = MinMaxExpr(1, ((T,), (-T,)))


def interval(cell):
    """(lo, hi) of a 1-D cell from its constraints."""
    lo = max(-g.b / g.v[0] for g in cell.constraints if g.v[0] > 0)
    hi = min(-g.b / g.v[0] for g in cell.constraints if g.v[0] < 0)
    return lo, hi


class ComponentTests(unittest.TestCase):
    def test_example_components(self):
        self.assertEqual(set(collect_components(EX1)), {T, -T, ONE})

    def test_dedup(self):
        self.assertEqual(collect_components(MinMaxExpr(1, ((T,), (T,)))), [T])
        self.assertEqual(collect_components(MinMaxExpr(1, ((T, T),))), [T])


class CellEnumerationTests(unittest.TestCase):
    def test_example_cells_on_omega_2(self):
        cells = enumerate_cells([T, -T, ONE], SolidBox.omega(1, 2))
        self.assertEqual([interval(c) for c in cells], [(-2, -1), (-1, 0), (0, 1), (1, 2)])
        for cell in cells:
            lo, hi = interval(cell)
            self.assertTrue(lo < cell.witness[0] < hi)

    def test_single_component(self):
        cells = enumerate_cells([T], SolidBox.omega(1, 3))
        self.assertEqual(len(cells), 1)
        self.assertEqual(interval(cells[0]), (-3, 3))

    def test_diagonal_split(self):
        x1 = AffineFunction((1, 0), 0)
        x2 = AffineFunction((0, 1), 0)
        cells = enumerate_cells([x1, x2], SolidBox.omega(2, 1))
        self.assertEqual(len(cells), 2)
        self.assertEqual({c.signs for c in cells}, {"+", "-"})

    def test_hyperplane_limit(self):
        comps = [T.shift(F(k, 8)).scale(k + 1) for k in range(12)]
        with self.assertRaises(TooManyHyperplanes):
            enumerate_cells(comps, SolidBox.omega(1, 100), EngineConfig(hyperplane_limit=4))


class WitnessTests(unittest.TestCase):
    def test_open_interval(self):
        w = interior_witness([T, (-T).shift(1)])
        self.assertTrue(0 < w[0] < 1)

    def test_infeasible(self):
        self.assertIs(interior_witness([T, -T]), INFEASIBLE)

    def test_three_constraints(self):
        w = interior_witness([T.shift(-1), T.shift(-2), (-T).shift(3)])
        self.assertTrue(2 < w[0] < 3)


class ExamplePairsTests(unittest.TestCase):
    def setUp(self):
        self.cx = build_complex(EX1, SolidBox.omega(1, 2))

    def component_of(self, lo, hi):
        for cell, comp in zip(self.cx.cells, self.cx.assignment):
            if interval(cell) == (lo, hi):
                return self.cx.components[comp]
        self.fail(f"no cell ({lo}, {hi})")

    def test_assignment(self):
        self.assertEqual(self.component_of(0, 1), T)
        self.assertEqual(self.component_of(-1, 0), -T)
        self.assertEqual(self.component_of(1, 2), ONE)
        self.assertEqual(self.component_of(-2, -1), ONE)

    def test_pairs(self):
        pairs = self.cx.pairs()
        self.assertEqual(len(pairs), 3)
        regions = {p.component: sorted(interval(self.cx.cells[c]) for c in p.region_cells) for p in pairs}
        self.assertEqual(regions[T], [(0, 1)])
        self.assertEqual(regions[-T], [(-1, 0)])
        self.assertEqual(regions[ONE], [(-2, -1), (1, 2)])
        self.assertTrue(all(check_pair_axioms(EX1, self.cx, pairs).values()))

    def test_strict_order(self):
        cell = {interval(c): c for c in self.cx.cells}
        self.assertEqual(strict_order_on_cell(EX1, cell[(0, 1)], ONE), Order.ABOVE)
        self.assertEqual(strict_order_on_cell(EX1, cell[(1, 2)], T), Order.ABOVE)
        self.assertEqual(strict_order_on_cell(EX1, cell[(0, 1)], T), Order.EQUAL)
        self.assertEqual(strict_order_on_cell(EX1, cell[(1, 2)], -T), Order.BELOW)
        with self.assertRaises(NotAComponent):
            strict_order_on_cell(EX1, cell[(0, 1)], T.shift(7))

    def test_reconstruction(self):
        rebuilt = max_min_from_pairs(self.cx)
        self.assertEqual(rebuilt.eval((F(1, 2),)), F(1, 2))
        self.assertEqual(rebuilt.eval((2,)), 1)
        self.assertEqual(rebuilt.eval((-2,)), 1)
        self.assertTrue(semantic_equal(rebuilt, EX1, self.cx.box))

    def test_trivial_pairs(self):
        f = AffineFunction((2,), 1)
        pairs = characteristic_pairs(from_affine(f), SolidBox.omega(1, 4))
        self.assertEqual(len(pairs), 1)
        self.assertEqual(pairs[0].component, f)
        abs_pairs = characteristic_pairs(ABS, SolidBox.omega(1, 1))
        self.assertEqual({p.component for p in abs_pairs}, {T, -T})


class ComplexUniquenessTests(unittest.TestCase):
    def assert_same_pairs(self, e1, e2, box):
        cx1, cx2 = build_complex(e1, box), build_complex(e2, box)
        self.assertEqual({p.component for p in cx1.pairs()}, {p.component for p in cx2.pairs()})
        # each cell's witness lies in the region of the same component in the other complex
        for a, b in ((cx1, cx2), (cx2, cx1)):
            for cell, comp in zip(a.cells, a.assignment):
                other = b.locate(cell.witness)
                self.assertIsNotNone(other)
                self.assertEqual(b.components[b.assignment[other]], a.components[comp])

    def test_reordered_and_redundant_forms(self):
        box = SolidBox.omega(1, 2)
        reordered = MinMaxExpr(1, ((ONE, -T), (ONE, T)))
        redundant = MinMaxExpr(1, ((ONE, -T), (ONE, T, T.shift(2)), (ONE, T), (T.shift(-5),)))
        self.assert_same_pairs(EX1, reordered, box)
        self.assert_same_pairs(EX1, redundant, box)
        self.assertEqual(len(build_complex(redundant, box).pairs()), 3)

    def test_lattice_rewrite(self):
        box = SolidBox.omega(1, 3)
        self.assert_same_pairs(EX1, meet(EX1, join(EX1, ABS)), box)

    @settings(max_examples=60, deadline=None)
    @given(dims.filter(lambda m: m <= 2).flatmap(lambda m: st.tuples(exprs(m, 3), exprs(m, 2))))
    def test_absorbed_forms(self, pair):
        e1, e2 = pair
        self.assert_same_pairs(e1, meet(e1, join(e1, e2)), SolidBox.omega(e1.m, 2))


class PartitionTests(unittest.TestCase):
    def check_partition(self, e, box, seed):
        cx = build_complex(e, box)
        for x in random_points(box, 1000, seed):
            cid = cx.locate(x)
            self.assertIsNotNone(cid, f"{x} is in no cell closure")
            self.assertEqual(eval_affine(cx.components[cx.assignment[cid]], x), e.eval(x))

    def test_example_on_omega_2(self):
        self.check_partition(EX1, SolidBox.omega(1, 2), seed=31)

    def test_two_dimensional(self):
        x1, x2 = AffineFunction((1, 0), 0), AffineFunction((0, 1), 0)
        e = MinMaxExpr(2, ((x1, x2.shift(1)), (-x1, (-x2).shift(F(1, 2))), (AffineFunction((1, 1), -1),)))
        self.check_partition(e, SolidBox.omega(2, 2), seed=32)

    def test_three_dimensional(self):
        xs = [AffineFunction.coordinate(3, i) for i in range(3)]
        e = MinMaxExpr(3, ((xs[0], xs[1]), (-xs[2],), (AffineFunction((1, 0, 1), 0),)))
        self.check_partition(e, SolidBox.omega(3, 1), seed=33)


class BoundTests(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(bound_on_box(EX1, SolidBox.omega(1, 2)), (0, 1))
        self.assertEqual(bound_on_box(MinMaxExpr.constant(1, 5), SolidBox.omega(1, 9)), (5, 5))
        self.assertEqual(bound_on_box(ABS, SolidBox.omega(1, 3)), (0, 3))
        self.assertEqual(upper_bound_on_box(EX1, SolidBox.omega(1, 2)), 1)

    def test_subdivision_matches(self):
        # more hyperplanes than the limit forces bisection; the answer is unchanged
        zigzag = MinMaxExpr(1, tuple((T.shift(-k), (-T).shift(k)) for k in range(-3, 4)))
        box = SolidBox.omega(1, 4)
        exact = bound_on_box(zigzag, box)
        split = bound_on_box(zigzag, box, EngineConfig(hyperplane_limit=3))
        self.assertEqual(exact, split)
        self.assertEqual(exact, (-1, 0))

    def test_difference_bounds(self):
        self.assertEqual(difference_bounds(ABS, EX1, SolidBox.omega(1, 3)), (0, 2))


class ReconstructionTests(unittest.TestCase):
    @settings(max_examples=100, deadline=None)
    @given(dims.flatmap(lambda m: exprs(m, 5)))
    def test_max_min_roundtrip(self, e):
        box = SolidBox.omega(e.m, 2)
        cx = build_complex(e, box)
        self.assertTrue(all(check_pair_axioms(prune(e, box), cx, cx.pairs()).values()))
        self.assertTrue(semantic_equal(max_min_from_pairs(cx), e, box))

    def test_from_simplices(self):
        pieces = [(-T, [(-1,), (0,)]), (T, [(0,), (1,)])]
        self.assertTrue(semantic_equal(max_min_from_simplices(pieces), ABS, SolidBox.omega(1, 3)))
        hat = [(T.shift(1), [(-1,), (0,)]), ((-T).shift(1), [(0,), (1,)])]
        e = max_min_from_simplices(hat)
        self.assertEqual(e.eval((0,)), 1)
        self.assertEqual(e.eval((F(-1, 2),)), F(1, 2))


if __name__ == "__main__":
    unittest.main()
