from __future__ import annotations

import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from pa_lattice.affine import AffineFunction, SolidBox
from pa_lattice.approx import random_points
from pa_lattice.config import EngineConfig
from pa_lattice.errors import DimensionMismatch, ExpressionTooLarge
from pa_lattice.expr import MinMaxExpr, add, from_affine, join, meet, negate, prune, scale, semantic_equal, subtract
from strategies import expr_with_points, exprs, small_rationals

F = Fraction
T = AffineFunction((1,), 0)
ONE = AffineFunction.constant(1, 1)
ABS = MinMaxExpr(1, ((T,), (-T,)))
EX1 = MinMaxExpr(1, ((T, ONE), (-T, ONE)))  # min(|t|, 1)


def c1(value):
    return MinMaxExpr.constant(1, value)


class EvalTests(unittest.TestCase):
    def test_from_affine(self):
        self.assertEqual(from_affine(T).eval((5,)), 5)
        self.assertEqual(from_affine(AffineFunction((1, 2), 3)).eval((1, 1)), 6)
        self.assertEqual(c1(1).eval((F(-9, 2),)), 1)

    def test_example_function(self):
        self.assertEqual(EX1.eval((F(1, 2),)), F(1, 2))
        self.assertEqual(EX1.eval((2,)), 1)
        self.assertEqual(ABS.eval((-3,)), 3)

    def test_construction_dedupes(self):
        e = MinMaxExpr(1, ((T, T), (T,)))
        self.assertEqual(e.clauses, ((T,),))

    def test_empty_clause_rejected(self):
        with self.assertRaises(ValueError):
            MinMaxExpr(1, ())
        with self.assertRaises(ValueError):
            MinMaxExpr(1, ((),))

    def test_dimension_checked(self):
        with self.assertRaises(DimensionMismatch):
            MinMaxExpr(2, ((T,),))
        with self.assertRaises(DimensionMismatch):
            ABS.eval((1, 2))


class LatticeTests(unittest.TestCase):
    def test_join_examples(self):
        self.assertEqual(join(from_affine(T), from_affine(-T)).eval((-2,)), 2)
        self.assertEqual(join(EX1, c1(0)).eval((F(1, 2),)), F(1, 2))

    def test_meet_examples(self):
        e = meet(ABS, c1(1))
        self.assertEqual(e.eval((3,)), 1)
        self.assertEqual(meet(from_affine(T), from_affine(T.shift(1))).eval((0,)), 0)

    def test_add_examples(self):
        self.assertEqual(add(ABS, c1(1)).eval((-2,)), 3)
        both = add(MinMaxExpr(1, ((T, ONE),)), MinMaxExpr(1, ((-T, ONE),)))
        self.assertEqual(both.eval((0,)), 0)

    def test_negate_examples(self):
        self.assertEqual(negate(from_affine(T)).eval((4,)), -4)
        neg_abs = negate(ABS)
        self.assertEqual(len(neg_abs.clauses), 1)
        self.assertEqual(neg_abs.eval((2,)), -2)

    def test_scale_examples(self):
        self.assertEqual(scale(ABS, 2).eval((-1,)), 2)
        self.assertEqual(scale(ABS, -1).eval((2,)), -2)
        self.assertEqual(scale(ABS, 0).eval((7,)), 0)

    def test_budget_guard(self):
        tight = EngineConfig(clause_budget=3)
        wide = MinMaxExpr(1, tuple((T.shift(k),) for k in range(4)))
        with self.assertRaises(ExpressionTooLarge):
            meet(wide, MinMaxExpr(1, ((T,), (-T,))), tight)

    def test_simplified_is_global(self):
        e = MinMaxExpr(1, ((T, T.shift(1)), (T.shift(-1),), (T,)))
        s = e.simplified()
        self.assertEqual(s.clauses, ((T,),))


class LatticeLawTests(unittest.TestCase):
    @settings(max_examples=500, deadline=None)
    @given(st.data())
    def test_pointwise_contracts(self, data):
        m, e1, pts = data.draw(expr_with_points(count=50, max_members=6))
        e2 = data.draw(exprs(m, 6))
        lam = data.draw(small_rationals)
        joined, met, summed = join(e1, e2), meet(e1, e2), add(e1, e2)
        neg, scaled = negate(e1), scale(e1, lam)
        for x in pts:
            a, b = e1.eval(x), e2.eval(x)
            self.assertEqual(joined.eval(x), max(a, b))
            self.assertEqual(met.eval(x), min(a, b))
            self.assertEqual(summed.eval(x), a + b)
            self.assertEqual(neg.eval(x), -a)
            self.assertEqual(scaled.eval(x), lam * a)

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_absorption_and_distributivity(self, data):
        m, e1, pts = data.draw(expr_with_points(count=30, max_members=3))
        e2, e3 = data.draw(exprs(m, 3)), data.draw(exprs(m, 3))
        absorbed_meet = meet(e1, join(e1, e2))
        absorbed_join = join(e1, meet(e1, e2))
        left = meet(e1, join(e2, e3))
        right = join(meet(e1, e2), meet(e1, e3))
        for x in pts:
            self.assertEqual(absorbed_meet.eval(x), e1.eval(x))
            self.assertEqual(absorbed_join.eval(x), e1.eval(x))
            self.assertEqual(left.eval(x), right.eval(x))

    def test_absorption_exact_on_box(self):
        box = SolidBox.omega(1, 4)
        self.assertTrue(semantic_equal(meet(EX1, join(EX1, ABS)), EX1, box))
        lhs = meet(ABS, join(EX1, c1(F(1, 2))))
        rhs = join(meet(ABS, EX1), meet(ABS, c1(F(1, 2))))
        self.assertTrue(semantic_equal(lhs, rhs, box))

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_single_clause_is_midpoint_concave(self, data):
        m, e, pts = data.draw(expr_with_points(count=10, max_members=6))
        for clause in e.clauses:
            g = MinMaxExpr(m, (clause,))
            for x, y in zip(pts, pts[1:] + pts[:1]):
                mid = tuple((a + b) / 2 for a, b in zip(x, y))
                self.assertGreaterEqual(g.eval(mid), (g.eval(x) + g.eval(y)) / 2)

    @settings(max_examples=100, deadline=None)
    @given(expr_with_points(count=20))
    def test_simplified_and_subtract(self, sample):
        m, e, pts = sample
        s = e.simplified()
        diff = subtract(e, e)
        for x in pts:
            self.assertEqual(s.eval(x), e.eval(x))
            self.assertEqual(diff.eval(x), 0)


class PruneTests(unittest.TestCase):
    def test_dominated_member(self):
        self.assertEqual(prune(MinMaxExpr(1, ((T, T.shift(1)),)), SolidBox.omega(1, 5)).clauses, ((T,),))

    def test_dominated_clause(self):
        self.assertEqual(prune(MinMaxExpr(1, ((T,), (T.shift(-1),))), SolidBox.omega(1, 5)).clauses, ((T,),))

    def test_prune_is_box_local(self):
        # on [-1, 1] the constant 1 never wins the min
        pruned = prune(EX1, SolidBox.omega(1, 1))
        self.assertEqual(pruned.clauses, ((T,), (-T,)))

    def test_prune_keeps_values(self):
        box = SolidBox.omega(1, 1)
        pruned = prune(EX1, box)
        for x in random_points(box, 100, seed=3):
            self.assertEqual(pruned.eval(x), EX1.eval(x))

    @settings(max_examples=60, deadline=None)
    @given(expr_with_points(count=20))
    def test_prune_random(self, sample):
        m, e, pts = sample
        pruned = prune(e, SolidBox.omega(m, 2))
        for x in pts:
            self.assertEqual(pruned.eval(x), e.eval(x))


class SemanticEqualTests(unittest.TestCase):
    def test_redundant_forms(self):
        redundant = MinMaxExpr(1, ((T, T), (-T, -T)))
        self.assertTrue(semantic_equal(ABS, redundant, SolidBox.omega(1, 2)))

    def test_differ_outside_unit_box(self):
        self.assertFalse(semantic_equal(EX1, ABS, SolidBox.omega(1, 2)))
        self.assertTrue(semantic_equal(EX1, ABS, SolidBox.omega(1, 1)))

    def test_two_dimensional(self):
        x1 = AffineFunction((1, 0), 0)
        x2 = AffineFunction((0, 1), 0)
        lhs = meet(from_affine(x1), from_affine(x2))
        rhs = negate(join(from_affine(-x1), from_affine(-x2)))
        self.assertTrue(semantic_equal(lhs, rhs, SolidBox.omega(2, 3)))


if __name__ == "__main__":
    unittest.main()
