from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List

from ...affine import SolidBox
from ...cells import bound_on_box, difference_bounds
from ...codec import report_from_dict, sequence_from_dict
from ...config import EngineConfig
from ..base import CheckResult


@dataclass
class ApproxChecks:
    name: str = "approx_checks"
    kinds: List[str] = field(default_factory=lambda: ["report", "sequence"])

    def _report(self, data: Dict[str, Any]) -> List[CheckResult]:
        report = report_from_dict(data)
        checks = []
        bound = report.certified_bound
        if bound is None:
            checks.append(CheckResult("certified_within_epsilon", True, "best effort: no certificate"))
        else:
            checks.append(CheckResult("certified_within_epsilon", bound <= report.epsilon, f"{bound} vs {report.epsilon}"))
            checks.append(CheckResult("observed_within_certified", report.max_observed_error <= bound))
        # member boxes have edge 4
        steps_ok = all(s > 0 and (4 / s).denominator == 1 for s in report.grid_steps.values())
        checks.append(CheckResult("grid_steps_divide_boxes", steps_ok))
        return checks

    def _sequence(self, data: Dict[str, Any], config: EngineConfig) -> List[CheckResult]:
        seq = sequence_from_dict(data)
        if not seq:
            return [CheckResult("non_empty", False)]
        box = SolidBox.omega(seq[0].m, len(seq) + 1)
        if data.get("kind", "monotone") != "monotone":
            # order sequences change sign and need not increase
            return [CheckResult("non_empty", True)]
        checks = [CheckResult("first_nonnegative", bound_on_box(seq[0], box, config)[0] >= 0)]
        gaps = [difference_bounds(b, a, box, config)[0] for a, b in zip(seq, seq[1:])]
        bad = [k + 1 for k, g in enumerate(gaps) if g < 0]
        checks.append(CheckResult("monotone", not bad, f"decreasing after steps {bad}" if bad else ""))
        return checks

    def run(self, data: Dict[str, Any], config: EngineConfig, params: Dict[str, Any]) -> List[CheckResult]:
        if "sequence" in data:
            return self._sequence(data, config)
        return self._report(data)
