"""``pa``: command-line front end.

Every verb reads and writes the JSON schemas of :mod:`pa_lattice.codec`.
Errors print ``{"error": kind, "detail": message}`` on stdout; malformed input
exits with 2, every other failure with 1.
"""

from __future__ import annotations

import argparse
import importlib.util
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import codec
from .affine import SolidBox, format_rational, parse_point, parse_rational
from .approx import grid_points, monotone_under_approx, order_approx, positive_minorant, uniform_approx, validate
from .cells import build_complex
from .config import EngineConfig
from .engines import EnginePlanner, RayEngine
from .errors import EngineUnavailable, MalformedInput, PAError
from .expr import MinMaxExpr
from .lpa import LPAFunction, bump, eval_lpa, lpa_pairs_with_complex, restrict_to_box, sup_family, tile_decompose
from .oracles import build_default_registry
from .verify import VerifyRunner

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise MalformedInput(message)


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise MalformedInput(f"not an integer: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pa", description="Exact piecewise affine and LPA function engine")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs on stderr")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name: str, help_text: str, *flags: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        for flag in flags:
            if flag == "expr":
                p.add_argument("--expr", help="MinMaxExpr JSON file")
            elif flag == "family":
                p.add_argument("--family", help="LPA function / family JSON file")
            elif flag == "point":
                p.add_argument("--point", help="comma-separated rationals, e.g. '1/2,-3'")
            elif flag == "radius":
                p.add_argument("--radius", type=_int, help="n for the box Omega_n")
            elif flag == "box":
                p.add_argument("--box", help="'c1,...,cm;r'")
            elif flag == "step":
                p.add_argument("--step", help="grid pitch (rational)")
            elif flag == "eps":
                p.add_argument("--eps", help="target accuracy (rational)")
            elif flag == "oracle":
                p.add_argument("--oracle", help="NAME[:params], e.g. poly:0,0,1")
                p.add_argument("--dim", type=_int, default=1, help="dimension m of the oracle domain")
        p.add_argument("--out", help="write the result here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        return p

    add("eval", "evaluate an expression or LPA function at a point", "expr", "family", "point")
    add("cells", "cells of an expression on a box", "expr", "radius", "box")
    add("pairs", "characteristic pairs on a box", "expr", "family", "radius", "box")
    p = add("bump", "PA bump function")
    p.add_argument("--center", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("--outer", required=True)
    p.add_argument("--height", default="1")
    p = add("decompose", "tile decomposition of a nonnegative expression", "expr", "radius")
    p.add_argument("--no-check", action="store_true", help="skip the nonnegativity certificate")
    add("restrict", "restriction of an LPA function to Omega_n", "family", "radius")
    p = add("approx", "uniform LPA approximation of an oracle", "oracle", "eps", "radius")
    p.add_argument("--lpa-out", help="also write the LPA function here")
    p.add_argument("--samples", type=_int, default=200)
    p.add_argument("--engine", choices=("serial", "ray"), default="serial", help="where per-anchor members are built")
    p.add_argument("--ray-address", default=None, help="existing Ray cluster to join")
    p.add_argument("--num-cpus", type=_int, default=None)
    p.add_argument("--min-tasks", type=_int, default=None, help="fewest anchors worth sending to Ray")
    p = add("monotone", "increasing PA under-approximations of a nonnegative oracle", "oracle")
    p.add_argument("--count", type=_int, default=3)
    p.add_argument("--order", action="store_true", help="order approximation g_k - h_k of a signed oracle")
    p = add("sample", "dense grid samples of an expression or LPA function", "expr", "family", "radius", "box", "step")
    p.add_argument("--digits", type=_int, default=None, help="significant digits for decimal output")
    p = add("verify", "run the invariant checks on an artifact file", "radius")
    p.add_argument("artifact")
    p.add_argument("--samples", type=_int, default=50)
    add("minorant", "bump 0 < y <= f around a point where f > 0", "oracle", "point")
    return parser


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise MalformedInput(f"{args.verb} needs {', '.join(missing)}")


def _load_target(args: argparse.Namespace) -> MinMaxExpr | LPAFunction:
    if getattr(args, "expr", None) and getattr(args, "family", None):
        raise MalformedInput("give either --expr or --family, not both")
    if getattr(args, "expr", None):
        return codec.expr_from_dict(codec.read_json(args.expr))
    if getattr(args, "family", None):
        return codec.lpa_from_dict(codec.read_json(args.family))
    raise MalformedInput(f"{args.verb} needs --expr or --family")


def _box(args: argparse.Namespace, m: int) -> SolidBox:
    if getattr(args, "box", None):
        box = codec.parse_box(args.box)
        if box.dim != m:
            raise MalformedInput(f"box has dimension {box.dim}, expected {m}")
        return box
    if getattr(args, "radius", None) is not None:
        if args.radius <= 0:
            raise MalformedInput(f"radius must be positive, got {args.radius}")
        return SolidBox.omega(m, args.radius)
    raise MalformedInput(f"{args.verb} needs --radius or --box")


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _oracle(args: argparse.Namespace):
    _require(args, "oracle")
    try:
        return build_default_registry().build(args.oracle, args.dim)
    except KeyError as exc:
        raise MalformedInput(str(exc.args[0])) from exc


def _cmd_eval(args: argparse.Namespace, config: EngineConfig) -> Any:
    _require(args, "point")
    target = _load_target(args)
    x = parse_point(args.point)
    value = eval_lpa(target, x) if isinstance(target, LPAFunction) else target.eval(x)
    return format_rational(value) + "\n"


def _cmd_cells(args: argparse.Namespace, config: EngineConfig) -> Any:
    _require(args, "expr")
    e = codec.expr_from_dict(codec.read_json(args.expr))
    return codec.complex_to_dict(build_complex(e, _box(args, e.m), config))


def _cmd_pairs(args: argparse.Namespace, config: EngineConfig) -> Any:
    target = _load_target(args)
    if isinstance(target, LPAFunction):
        _require(args, "radius")
        cx, pairs = lpa_pairs_with_complex(target, args.radius, config)
    else:
        cx = build_complex(target, _box(args, target.m), config)
        pairs = cx.pairs()
    return codec.pairs_to_dict(cx, pairs)


def _cmd_bump(args: argparse.Namespace, config: EngineConfig) -> Any:
    return codec.expr_to_dict(bump(parse_point(args.center), args.inner, args.outer, args.height))


def _cmd_decompose(args: argparse.Namespace, config: EngineConfig) -> Any:
    _require(args, "expr", "radius")
    e = codec.expr_from_dict(codec.read_json(args.expr))
    family = tile_decompose(e, positive_check=not args.no_check, config=config, certify_radius=args.radius + 2)
    return codec.lpa_to_dict(sup_family(family), args.radius)


def _cmd_restrict(args: argparse.Namespace, config: EngineConfig) -> Any:
    _require(args, "family", "radius")
    h = codec.lpa_from_dict(codec.read_json(args.family))
    return codec.expr_to_dict(restrict_to_box(h, args.radius, config))


def _planner(args: argparse.Namespace, config: EngineConfig) -> EnginePlanner:
    if args.min_tasks is not None:
        if args.min_tasks <= 0:
            raise MalformedInput(f"--min-tasks must be positive, got {args.min_tasks}")
        config = replace(config, distributed_task_threshold=args.min_tasks)
    if args.engine != "ray":
        return EnginePlanner(config=config)
    if importlib.util.find_spec("ray") is None:
        raise EngineUnavailable("--engine ray needs the 'ray' extra: pip install 'pa-lattice[ray]'")
    return EnginePlanner(ray_engine=RayEngine(args.ray_address, args.num_cpus), config=config)


def _cmd_approx(args: argparse.Namespace, config: EngineConfig) -> Any:
    _require(args, "eps", "radius")
    oracle = _oracle(args)
    planner = _planner(args, config)
    h, report = uniform_approx(
        oracle, parse_rational(args.eps), args.radius, config, planner=planner, samples=args.samples
    )
    if args.lpa_out:
        Path(args.lpa_out).write_text(codec.dumps(codec.lpa_to_dict(h)))
    if args.format == "csv":
        check = validate(oracle, h, SolidBox.omega(oracle.m, args.radius + 1), args.samples, config.sample_seed)
        columns = [f"x{i + 1}" for i in range(oracle.m)] + ["f", "h", "abs_error"]
        return codec.sample_table(columns, check.rows, config.decimal_digits)
    return codec.report_to_dict(report)


def _cmd_monotone(args: argparse.Namespace, config: EngineConfig) -> Any:
    oracle = _oracle(args)
    if args.order:
        return codec.sequence_to_dict(order_approx(oracle, args.count, config), kind="order")
    return codec.sequence_to_dict(monotone_under_approx(oracle, args.count, config))


def _cmd_sample(args: argparse.Namespace, config: EngineConfig) -> Any:
    _require(args, "step")
    target = _load_target(args)
    m = target.m
    box = _box(args, m)
    rows = []
    for x in grid_points(box, parse_rational(args.step), config):
        value = eval_lpa(target, x) if isinstance(target, LPAFunction) else target.eval(x)
        rows.append(tuple(x) + (value,))
    columns = [f"x{i + 1}" for i in range(m)] + ["value"]
    if args.format == "json":
        return {"columns": columns, "rows": [[format_rational(v) for v in row] for row in rows]}
    digits = args.digits if args.digits is not None else config.decimal_digits
    return codec.sample_table(columns, rows, digits)


def _cmd_verify(args: argparse.Namespace, config: EngineConfig) -> Any:
    data = codec.read_json(args.artifact)
    params: Dict[str, Any] = {"samples": args.samples}
    if args.radius is not None:
        params["radius"] = args.radius
    return VerifyRunner(config=config).run(data, params)


def _cmd_minorant(args: argparse.Namespace, config: EngineConfig) -> Any:
    _require(args, "point")
    x = parse_point(args.point)
    oracle = _oracle(argparse.Namespace(**{**vars(args), "dim": len(x)}))
    return codec.expr_to_dict(positive_minorant(oracle, x, config))


COMMANDS = {
    "eval": _cmd_eval,
    "cells": _cmd_cells,
    "pairs": _cmd_pairs,
    "bump": _cmd_bump,
    "decompose": _cmd_decompose,
    "restrict": _cmd_restrict,
    "approx": _cmd_approx,
    "monotone": _cmd_monotone,
    "sample": _cmd_sample,
    "verify": _cmd_verify,
    "minorant": _cmd_minorant,
}


def _error(kind: str, detail: str) -> None:
    sys.stdout.write(codec.dumps({"error": kind, "detail": detail}))


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
    except MalformedInput as exc:
        _error(exc.kind, str(exc))
        return 2
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = EngineConfig.from_env()
        result = COMMANDS[args.verb](args, config)
    except MalformedInput as exc:
        _error(exc.kind, str(exc))
        return 2
    except PAError as exc:
        _error(exc.kind, str(exc))
        return 1
    except (KeyError, ValueError) as exc:
        detail = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        _error("MalformedInput", str(detail))
        return 2

    if isinstance(result, str):
        _emit(args, result)
    elif hasattr(result, "column_names"):
        codec.write_csv(result, args.out)
    elif hasattr(result, "to_dict"):
        _emit(args, codec.dumps(result.to_dict()))
        return 0 if result.passed else 1
    else:
        _emit(args, codec.dumps(result))
    return 0


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
