from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List

from ...affine import SolidBox
from ...approx import random_points
from ...cells import bound_on_box
from ...codec import lpa_from_dict
from ...config import EngineConfig
from ...expr import semantic_equal
from ...lpa import LPAFunction, eval_lpa, restrict_to_box, vanishes_outside, verify_locally_finite
from ..base import CheckResult


@dataclass
class FamilyChecks:
    """Member supports, positivity, local finiteness and restriction coherence of an LPA file.

    Params: ``radius`` n for the Omega_n checks (default 1), ``samples``.
    """

    name: str = "family_checks"
    kinds: List[str] = field(default_factory=lambda: ["lpa"])

    def _member_checks(self, h: LPAFunction, n: int, config: EngineConfig, prefix: str) -> List[CheckResult]:
        fam = h.family
        omega = SolidBox.omega(fam.m, n)
        direct = sum(1 for b in fam.members if b.support.intersects(omega))
        checks = [CheckResult(f"{prefix}locally_finite", verify_locally_finite(fam, n) == direct, f"{direct} members")]
        checks.append(
            CheckResult(f"{prefix}vanish_outside_support", all(vanishes_outside(b.expr, b.support, config) for b in fam.members))
        )
        if fam.positive:
            ok = all(bound_on_box(b.expr, b.support.expanded(1), config)[0] >= 0 for b in fam.members)
            checks.append(CheckResult(f"{prefix}members_nonnegative", ok))
        if h.subtrahend is not None:
            checks.extend(self._member_checks(h.subtrahend, n, config, prefix + "subtrahend."))
        return checks

    def run(self, data: Dict[str, Any], config: EngineConfig, params: Dict[str, Any]) -> List[CheckResult]:
        h = lpa_from_dict(data)
        n = int(params.get("radius", 1))
        checks = self._member_checks(h, n, config, "")
        omega = SolidBox.omega(h.m, n)
        local = restrict_to_box(h, n, config)
        points = random_points(omega, int(params.get("samples", 50)), config.sample_seed)
        checks.append(CheckResult("restriction_agrees", all(local.eval(x) == eval_lpa(h, x) for x in points)))
        wider = restrict_to_box(h, n + 1, config)
        checks.append(CheckResult("restriction_coherent", semantic_equal(local, wider, omega, config)))
        return checks
