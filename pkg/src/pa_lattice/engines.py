from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, List, Literal, Optional, Protocol, TypeVar

from .config import DEFAULT_CONFIG, EngineConfig

logger = logging.getLogger(__name__)

EngineType = Literal["serial", "ray"]
T = TypeVar("T")
R = TypeVar("R")


class Engine(Protocol):
    kind: EngineType

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]: ...


@dataclass
class SerialEngine:
    kind: EngineType = "serial"

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        return [fn(item) for item in items]


def _apply(fn: Callable[[T], R], item: T) -> R:
    return fn(item)


@dataclass
class RayEngine:
    address: Optional[str] = None
    num_cpus: Optional[int] = None
    kind: EngineType = "ray"

    def _ensure_started(self) -> Any:
        import ray

        if not ray.is_initialized():
            kwargs = {"ignore_reinit_error": True, "log_to_driver": False}
            if self.address:
                kwargs["address"] = self.address
            if self.num_cpus is not None:
                kwargs["num_cpus"] = self.num_cpus
            ray.init(**kwargs)
        return ray

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        ray = self._ensure_started()
        remote = ray.remote(_apply)
        fn_ref = ray.put(fn)
        # ray.get keeps submission order
        return ray.get([remote.remote(fn_ref, item) for item in items])


@dataclass
class EnginePlanner:
    serial_engine: SerialEngine = field(default_factory=SerialEngine)
    ray_engine: Optional[RayEngine] = None
    config: EngineConfig = DEFAULT_CONFIG

    def choose(self, task_count: int, serial: bool = False) -> Engine:
        if serial or self.ray_engine is None:
            return self.serial_engine
        if task_count >= self.config.distributed_task_threshold:
            return self.ray_engine
        return self.serial_engine

    def run(self, fn: Callable[[T], R], items: Iterable[T], serial: bool = False) -> List[R]:
        items = list(items)
        engine = self.choose(len(items), serial=serial)
        logger.info("running %d tasks on the %s engine", len(items), engine.kind)
        return engine.map(fn, items)
