#!/usr/bin/env python3
"""Run the worked examples end to end and print a JSON summary.

Usage::

    PYTHONPATH=src python scripts/run_acceptance_examples.py
    PYTHONPATH=src python scripts/run_acceptance_examples.py --only tiling --samples 100
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import time
from fractions import Fraction
from typing import Any, Callable, Dict

from pa_lattice import (
    AffineFunction,
    MinMaxExpr,
    SolidBox,
    build_complex,
    build_default_registry,
    eval_lpa,
    format_rational,
    max_min_from_pairs,
    monotone_under_approx,
    order_approx,
    semantic_equal,
    sup_family,
    tile_decompose,
    uniform_approx,
)
from pa_lattice.approx import random_points
from pa_lattice.cells import difference_bounds
from pa_lattice.lpa import anchor_geometry_count, verify_locally_finite

T = AffineFunction((1,), 0)
ONE = AffineFunction.constant(1, 1)
EX1 = MinMaxExpr(1, ((T, ONE), (-T, ONE)))


def _interval(cell) -> str:
    lo = max(-g.b / g.v[0] for g in cell.constraints if g.v[0] > 0)
    hi = min(-g.b / g.v[0] for g in cell.constraints if g.v[0] < 0)
    return f"({format_rational(lo)},{format_rational(hi)})"


def example_pairs(samples: int) -> Dict[str, Any]:
    cx = build_complex(EX1, SolidBox.omega(1, 2))
    pairs = cx.pairs()
    cells = sorted(_interval(c) for c in cx.cells)
    return {
        "cells": cells,
        "components": sorted(str(p.component) for p in pairs),
        "passed": cells == sorted(["(-2,-1)", "(-1,0)", "(0,1)", "(1,2)"]) and len(pairs) == 3,
    }


def example_roundtrip(samples: int) -> Dict[str, Any]:
    rng = random.Random(5)
    box = SolidBox.omega(2, 2)
    ok = 0
    for _ in range(samples):
        clauses = tuple(
            tuple(
                AffineFunction((Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5))), Fraction(rng.randint(-5, 5)))
                for _ in range(rng.randint(1, 2))
            )
            for _ in range(rng.randint(1, 2))
        )
        e = MinMaxExpr(2, clauses)
        ok += semantic_equal(max_min_from_pairs(build_complex(e, box)), e, box)
    return {"expressions": samples, "equal": ok, "passed": ok == samples}


def example_tiling(samples: int) -> Dict[str, Any]:
    pyramid = MinMaxExpr(
        2,
        (
            (AffineFunction.constant(2, 0),),
            tuple(AffineFunction.coordinate(2, i, s).shift(1) for i in (0, 1) for s in (1, -1)),
        ),
    )
    family = tile_decompose(pyramid)
    h = sup_family(family)
    points = random_points(SolidBox.omega(2, 3), samples, seed=13)
    mismatches = sum(eval_lpa(h, x) != pyramid.eval(x) for x in points)
    count = verify_locally_finite(family, 1)
    return {
        "points": len(points),
        "mismatches": mismatches,
        "members_on_omega_1": count,
        "passed": mismatches == 0 and count == anchor_geometry_count(2, 1),
    }


def example_uniform(samples: int) -> Dict[str, Any]:
    oracle = build_default_registry().build("quadratic")
    _, report = uniform_approx(oracle, Fraction(1, 4), 1, samples=samples)
    bound = report.certified_bound
    return {
        "certified_bound": None if bound is None else format_rational(bound),
        "max_observed_error": format_rational(report.max_observed_error),
        "passed": bound is not None and bound <= Fraction(1, 4) and report.max_observed_error <= Fraction(1, 4),
    }


def example_monotone(samples: int) -> Dict[str, Any]:
    oracle = build_default_registry().build("abs")
    seq = monotone_under_approx(oracle, 5)
    box = SolidBox.omega(1, 6)
    increasing = all(difference_bounds(b, a, box)[0] >= 0 for a, b in zip(seq, seq[1:]))
    gap = 1 - seq[-1].eval((1,))
    return {"count": len(seq), "gap_at_1": format_rational(gap), "passed": increasing and gap <= Fraction(2, 32)}


def example_order(samples: int) -> Dict[str, Any]:
    oracle = build_default_registry().build("poly:0,1")
    seq = order_approx(oracle, 4)
    points = random_points(SolidBox.omega(1, 2), samples, seed=3)
    errors = [max(abs(x[0] - e.eval(x)) for x in points) for e in seq]
    return {
        "errors": [format_rational(e) for e in errors],
        "passed": all(b <= a for a, b in zip(errors, errors[1:])) and errors[-1] <= Fraction(1, 4),
    }


EXAMPLES: Dict[str, Callable[[int], Dict[str, Any]]] = {
    "pairs": example_pairs,
    "roundtrip": example_roundtrip,
    "tiling": example_tiling,
    "uniform": example_uniform,
    "monotone": example_monotone,
    "order": example_order,
}


def main() -> None:
    parser = argparse.ArgumentParser(description="Run the worked PA/LPA examples")
    parser.add_argument("--only", choices=sorted(EXAMPLES), action="append", help="run only these examples")
    parser.add_argument("--samples", type=int, default=100, help="sample points or expressions per example")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    results: Dict[str, Any] = {}
    for name in args.only or EXAMPLES:
        start = time.perf_counter()
        results[name] = EXAMPLES[name](args.samples)
        results[name]["seconds"] = round(time.perf_counter() - start, 3)
        print(f"{name:<10} {'ok' if results[name]['passed'] else 'FAILED'} ({results[name]['seconds']}s)")
    print(json.dumps(results, indent=2))


if __name__ == "__main__":
    main()
