"""Exact piecewise affine functions and their locally finite lattice extensions."""

from .affine import AffineFunction, Hyperplane, SolidBox, format_rational, parse_point, parse_rational
from .approx import monotone_under_approx, order_approx, positive_minorant, uniform_approx
from .cells import CellComplex, CharacteristicPair, build_complex, characteristic_pairs, max_min_from_pairs
from .config import DEFAULT_CONFIG, EngineConfig
from .engines import EnginePlanner, RayEngine, SerialEngine
from .expr import MinMaxExpr, add, join, meet, negate, prune, scale, semantic_equal, subtract
from .lpa import (
    BoxedPA,
    LocallyFiniteFamily,
    LPAFunction,
    bump,
    eval_lpa,
    lattice_closure,
    lpa_characteristic_pairs,
    restrict_to_box,
    sup_family,
    tile_decompose,
)
from .oracles import ContinuousOracle, OracleRegistry, build_default_registry

__all__ = [
    "AffineFunction",
    "Hyperplane",
    "SolidBox",
    "parse_rational",
    "format_rational",
    "parse_point",
    "MinMaxExpr",
    "join",
    "meet",
    "add",
    "negate",
    "subtract",
    "scale",
    "prune",
    "semantic_equal",
    "CellComplex",
    "CharacteristicPair",
    "build_complex",
    "characteristic_pairs",
    "max_min_from_pairs",
    "bump",
    "BoxedPA",
    "LocallyFiniteFamily",
    "LPAFunction",
    "sup_family",
    "eval_lpa",
    "restrict_to_box",
    "tile_decompose",
    "lattice_closure",
    "lpa_characteristic_pairs",
    "ContinuousOracle",
    "OracleRegistry",
    "build_default_registry",
    "uniform_approx",
    "monotone_under_approx",
    "order_approx",
    "positive_minorant",
    "EngineConfig",
    "DEFAULT_CONFIG",
    "SerialEngine",
    "RayEngine",
    "EnginePlanner",
]
