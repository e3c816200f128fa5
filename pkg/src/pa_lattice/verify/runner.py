from __future__ import annotations

import logging
from typing import Any, Dict, Iterable, Optional

from ..config import DEFAULT_CONFIG, EngineConfig
from ..errors import MalformedInput
from .base import VerifyPlugin, VerifyResult

logger = logging.getLogger(__name__)


def detect_kind(data: Any) -> str:
    """Artifact kind from the top-level keys of a JSON document."""
    if not isinstance(data, dict):
        raise MalformedInput("artifact must be a JSON object")
    if "clauses" in data:
        return "expr"
    if "pairs" in data:
        return "pairs"
    if "cells" in data:
        return "complex"
    if "members" in data:
        return "lpa"
    if "certified_bound" in data:
        return "report"
    if "sequence" in data:
        return "sequence"
    raise MalformedInput(f"unrecognised artifact with keys {sorted(data)}")


class VerifyRunner:
    def __init__(self, plugins: Optional[Iterable[VerifyPlugin]] = None, config: EngineConfig | None = None):
        if plugins is None:
            from .plugins import default_plugins

            plugins = default_plugins()
        self.config = config or DEFAULT_CONFIG
        self._by_kind: Dict[str, VerifyPlugin] = {}
        for plugin in plugins:
            for kind in plugin.kinds:
                self._by_kind[kind] = plugin

    def choose_plugin(self, kind: str) -> VerifyPlugin:
        if kind not in self._by_kind:
            raise KeyError(f"No checks for artifact kind '{kind}'. Registered: {sorted(self._by_kind)}")
        return self._by_kind[kind]

    def run(self, data: Dict[str, Any], params: Optional[Dict[str, Any]] = None) -> VerifyResult:
        kind = detect_kind(data)
        plugin = self.choose_plugin(kind)
        checks = plugin.run(data, self.config, dict(params or {}))
        result = VerifyResult(kind, checks)
        logger.info("verify %s with %s: %d checks, passed=%s", kind, plugin.name, len(checks), result.passed)
        return result
