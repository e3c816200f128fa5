from __future__ import annotations

import unittest
from fractions import Fraction

from pa_lattice.affine import AffineFunction, SolidBox
from pa_lattice.approx import (
    grid_points,
    kuhn_interpolant,
    monotone_under_approx,
    order_approx,
    positive_minorant,
    random_points,
    uniform_approx,
    validate,
)
from pa_lattice.cells import bound_on_box, difference_bounds
from pa_lattice.config import EngineConfig
from pa_lattice.errors import BadStep, GridTooLarge, NotNonnegative
from pa_lattice.expr import MinMaxExpr, from_affine, semantic_equal
from pa_lattice.lpa import eval_lpa
from pa_lattice.oracles import ContinuousOracle, build_default_registry

F = Fraction
T = AffineFunction((1,), 0)
REGISTRY = build_default_registry()


class GridTests(unittest.TestCase):
    def test_grid_points(self):
        pts = grid_points(SolidBox.omega(1, 1), F(1, 2))
        self.assertEqual(pts, [(-1,), (F(-1, 2),), (0,), (F(1, 2),), (1,)])
        self.assertEqual(len(grid_points(SolidBox.omega(2, 1), 1)), 9)

    def test_step_must_divide(self):
        with self.assertRaises(BadStep):
            grid_points(SolidBox.omega(1, 1), F(3, 4))
        with self.assertRaises(BadStep):
            grid_points(SolidBox.omega(1, 1), 0)

    def test_budget(self):
        with self.assertRaises(GridTooLarge):
            grid_points(SolidBox.omega(2, 4), F(1, 8), EngineConfig(grid_budget=100))


class KuhnTests(unittest.TestCase):
    def test_reproduces_abs(self):
        box = SolidBox.omega(1, 1)
        interp = kuhn_interpolant(REGISTRY.build("abs"), box, 1)
        self.assertTrue(semantic_equal(interp, MinMaxExpr(1, ((T,), (-T,))), box))

    def test_constant(self):
        box = SolidBox((3,), 2)
        interp = kuhn_interpolant(REGISTRY.build("constant:-5/2"), box, F(1, 2))
        self.assertEqual(bound_on_box(interp, box), (F(-5, 2), F(-5, 2)))

    def test_reproduces_affine_in_two_dimensions(self):
        plane = ContinuousOracle(2, lambda x: x[0] + x[1], lambda box: F(2))
        box = SolidBox.omega(2, 1)
        interp = kuhn_interpolant(plane, box, 1)
        self.assertTrue(semantic_equal(interp, from_affine(AffineFunction((1, 1), 0)), box))

    def test_error_within_lipschitz_step(self):
        oracle = REGISTRY.build("quadratic", 2)
        box = SolidBox.omega(2, 1)
        step = F(1, 4)
        interp = kuhn_interpolant(oracle, box, step)
        bound = oracle.lipschitz_on(box) * step
        self.assertLessEqual(validate(oracle, interp, box, 100, seed=1).max_observed_error, bound)


class UniformApproxTests(unittest.TestCase):
    def test_square_within_quarter(self):
        oracle = REGISTRY.build("poly:0,0,1")
        quadratic = REGISTRY.build("quadratic")
        self.assertFalse(oracle.nonnegative)
        h, report = uniform_approx(quadratic, F(1, 4), 1, samples=500)
        self.assertLessEqual(report.certified_bound, F(1, 4))
        self.assertLessEqual(report.max_observed_error, F(1, 4))
        self.assertEqual(report.boxes_processed, 3)
        self.assertEqual(report.covered_radius, 2)
        for x in random_points(SolidBox.omega(1, 2), 20, seed=9):
            self.assertLessEqual(abs(oracle.sample(x) - eval_lpa(h, x)), F(1, 4))

    def test_pa_target_is_exact(self):
        h, report = uniform_approx(REGISTRY.build("min-abs-1"), F(1, 2), 2, samples=100)
        self.assertLessEqual(report.certified_bound, F(1, 2))
        self.assertEqual(report.max_observed_error, 0)
        for x in grid_points(SolidBox.omega(1, 3), F(1, 4)):
            self.assertEqual(eval_lpa(h, x), min(abs(x[0]), 1))

    def test_zero(self):
        h, report = uniform_approx(REGISTRY.build("constant:0"), F(1, 8), 1, samples=50)
        self.assertEqual(report.max_observed_error, 0)
        self.assertEqual(eval_lpa(h, (F(3, 2),)), 0)

    def test_signed_target(self):
        h, report = uniform_approx(REGISTRY.build("poly:0,1"), F(1, 4), 1, samples=100)
        self.assertIsNotNone(h.subtrahend)
        self.assertTrue(h.subtrahend.family.members)
        self.assertEqual(report.max_observed_error, 0)
        self.assertEqual(eval_lpa(h, (F(-3, 2),)), F(-3, 2))

    def test_best_effort_without_lipschitz(self):
        oracle = ContinuousOracle(1, lambda x: x[0] * x[0], nonnegative=True, name="blind")
        _, report = uniform_approx(oracle, F(1, 4), 0, samples=20)
        self.assertIsNone(report.certified_bound)
        self.assertEqual(set(report.grid_steps.values()), {EngineConfig().best_effort_step})

    def test_float_oracle_carries_snap_error(self):
        oracle = ContinuousOracle.from_float(1, lambda x: abs(x[0]) / 3, lambda box: F(1, 3), denominator=2**10)
        _, report = uniform_approx(oracle, F(1, 4), 0, samples=20)
        self.assertGreaterEqual(report.certified_bound, oracle.snap_error)

    def test_rejects_bad_epsilon(self):
        with self.assertRaises(ValueError):
            uniform_approx(REGISTRY.build("abs"), 0, 1)


class MonotoneTests(unittest.TestCase):
    def test_abs_sequence(self):
        oracle = REGISTRY.build("abs")
        seq = monotone_under_approx(oracle, 5)
        self.assertEqual(len(seq), 5)
        box = SolidBox.omega(1, 6)
        self.assertGreaterEqual(bound_on_box(seq[0], box)[0], 0)
        for lower, upper in zip(seq, seq[1:]):
            self.assertGreaterEqual(difference_bounds(upper, lower, box)[0], 0)
        for x in random_points(box, 100, seed=2):
            for h in seq:
                self.assertLessEqual(h.eval(x), oracle.sample(x))
        self.assertLessEqual(1 - seq[-1].eval((1,)), 2 * F(1, 2**5))

    def test_requires_nonnegative_flag(self):
        with self.assertRaises(NotNonnegative):
            monotone_under_approx(REGISTRY.build("poly:0,1"), 2)

    def test_requires_lipschitz(self):
        blind = ContinuousOracle(1, lambda x: abs(x[0]), nonnegative=True)
        with self.assertRaises(ValueError):
            monotone_under_approx(blind, 1)


class OrderApproxTests(unittest.TestCase):
    def test_identity(self):
        oracle = REGISTRY.build("poly:0,1")
        seq = order_approx(oracle, 4)
        points = random_points(SolidBox.omega(1, 2), 100, seed=6)
        errors = [[abs(oracle.sample(x) - e.eval(x)) for x in points] for e in seq]
        for before, after in zip(errors, errors[1:]):
            for a, b in zip(before, after):
                self.assertLessEqual(b, a)
        self.assertLessEqual(max(errors[-1]), 4 * F(1, 2**4))
        self.assertTrue(all(e.eval((0,)) == 0 for e in seq))


class MinorantTests(unittest.TestCase):
    def test_bump_under_abs(self):
        oracle = REGISTRY.build("abs")
        y = positive_minorant(oracle, (1,))
        self.assertEqual(y.eval((1,)), F(1, 2))
        for x in random_points(SolidBox((1,), 1), 100, seed=4):
            value = y.eval(x)
            self.assertTrue(0 <= value <= oracle.sample(x))
        self.assertEqual(y.eval((F(1, 2),)), 0)

    def test_needs_positive_value(self):
        with self.assertRaises(ValueError):
            positive_minorant(REGISTRY.build("abs"), (0,))


if __name__ == "__main__":
    unittest.main()
