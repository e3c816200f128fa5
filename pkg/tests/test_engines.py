from __future__ import annotations

import importlib.util
import unittest
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from pa_lattice.approx import uniform_approx
from pa_lattice.config import EngineConfig
from pa_lattice.engines import EnginePlanner, RayEngine, SerialEngine
from pa_lattice.oracles import build_default_registry

HAS_RAY = importlib.util.find_spec("ray") is not None


@dataclass
class RecordingEngine:
    """Stands in for the Ray engine: runs locally and counts calls."""

    kind: str = "ray"
    calls: List[int] = field(default_factory=list)

    def map(self, fn, items):
        items = list(items)
        self.calls.append(len(items))
        return [fn(item) for item in items]


class PlannerTests(unittest.TestCase):
    def test_serial_without_ray(self):
        planner = EnginePlanner()
        self.assertIsInstance(planner.choose(10_000), SerialEngine)

    def test_threshold(self):
        fake = RecordingEngine()
        planner = EnginePlanner(ray_engine=fake, config=EngineConfig(distributed_task_threshold=5))
        self.assertIsInstance(planner.choose(4), SerialEngine)
        self.assertIs(planner.choose(5), fake)
        self.assertIsInstance(planner.choose(50, serial=True), SerialEngine)

    def test_run_keeps_order(self):
        fake = RecordingEngine()
        planner = EnginePlanner(ray_engine=fake, config=EngineConfig(distributed_task_threshold=1))
        self.assertEqual(planner.run(lambda x: x * x, [3, 1, 2]), [9, 1, 4])
        self.assertEqual(fake.calls, [3])

    def test_ray_engine_is_lazy(self):
        # constructing the engine must not import or start ray
        engine = RayEngine(num_cpus=2)
        self.assertEqual(engine.kind, "ray")


@unittest.skipUnless(HAS_RAY, "needs the ray extra")
class RayEngineTests(unittest.TestCase):
    def setUp(self):
        import ray

        self.addCleanup(ray.shutdown)

    def test_map_keeps_order(self):
        engine = RayEngine(num_cpus=1)
        self.assertEqual(engine.map(abs, [-3, 1, -2]), [3, 1, 2])

    def test_uniform_approx_on_ray(self):
        oracle = build_default_registry().build("min-abs-1")
        serial_h, serial_report = uniform_approx(oracle, Fraction(1, 2), 1, samples=30)
        planner = EnginePlanner(ray_engine=RayEngine(num_cpus=1), config=EngineConfig(distributed_task_threshold=1))
        self.assertEqual(planner.choose(3).kind, "ray")
        ray_h, ray_report = uniform_approx(oracle, Fraction(1, 2), 1, planner=planner, samples=30)
        self.assertEqual(serial_h.family.members, ray_h.family.members)
        self.assertEqual(serial_report, ray_report)


class DeterminismTests(unittest.TestCase):
    def test_engine_choice_does_not_change_results(self):
        oracle = build_default_registry().build("min-abs-1")
        serial_h, serial_report = uniform_approx(oracle, Fraction(1, 2), 1, samples=30)
        fake = RecordingEngine()
        planner = EnginePlanner(ray_engine=fake, config=EngineConfig(distributed_task_threshold=1))
        fanned_h, fanned_report = uniform_approx(oracle, Fraction(1, 2), 1, planner=planner, samples=30)
        self.assertEqual(fake.calls, [3])
        self.assertEqual(serial_h.family.members, fanned_h.family.members)
        self.assertEqual(serial_report, fanned_report)


if __name__ == "__main__":
    unittest.main()
