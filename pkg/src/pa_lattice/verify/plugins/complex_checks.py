from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List

from ...affine import eval_affine
from ...approx import random_points
from ...codec import complex_from_dict, pairs_from_dict
from ...config import EngineConfig
from ..base import CheckResult


@dataclass
class ComplexChecks:
    name: str = "complex_checks"
    kinds: List[str] = field(default_factory=lambda: ["complex", "pairs"])

    def run(self, data: Dict[str, Any], config: EngineConfig, params: Dict[str, Any]) -> List[CheckResult]:
        if "pairs" in data:
            cx, pairs = pairs_from_dict(data)
        else:
            cx = complex_from_dict(data)
            pairs = cx.pairs()
        checks = []
        strict = all(eval_affine(g, c.witness) > 0 for c in cx.cells for g in c.constraints)
        checks.append(CheckResult("witnesses_strict", strict))
        signs = [c.signs for c in cx.cells]
        checks.append(CheckResult("distinct_signs", len(signs) == len(set(signs))))
        in_range = all(0 <= i < len(cx.components) for i in cx.assignment)
        checks.append(CheckResult("assignment_in_range", in_range))
        if not in_range:
            return checks
        points = random_points(cx.box, int(params.get("samples", 200)), config.sample_seed)
        missed = [x for x in points if cx.locate(x) is None]
        checks.append(CheckResult("closures_cover_box", not missed, f"{len(missed)} points unlocated" if missed else ""))

        claimed = [cid for p in pairs for cid in p.region_cells]
        checks.append(CheckResult("regions_nonempty", all(p.region_cells for p in pairs)))
        checks.append(CheckResult("regions_disjoint", len(claimed) == len(set(claimed))))
        checks.append(CheckResult("regions_cover", set(claimed) == set(range(len(cx.cells)))))
        checks.append(CheckResult("distinct_components", len({p.component for p in pairs}) == len(pairs)))
        consistent = all(
            0 <= cid < len(cx.cells) and cx.components[cx.assignment[cid]] == p.component
            for p in pairs
            for cid in p.region_cells
        )
        checks.append(CheckResult("regions_match_assignment", consistent))
        if "regions_touching" in data:
            checks.append(CheckResult("regions_touching_count", data["regions_touching"] == len(pairs)))
        return checks
