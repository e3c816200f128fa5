"""JSON interchange and CSV sample tables.

Rationals travel as ``"p/q"`` strings, points as arrays of them. Dumping is
deterministic, so dump -> load -> dump reproduces the same bytes.
"""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

import pyarrow as pa
import pyarrow.csv as pacsv

from .affine import AffineFunction, Hyperplane, Point, SolidBox, format_rational, parse_point, parse_rational
from .approx import ApproxReport
from .cells import Cell, CellComplex, CharacteristicPair
from .errors import MalformedInput
from .expr import MinMaxExpr
from .lpa import BoxedPA, LocallyFiniteFamily, LPAFunction


@contextmanager
def _decoding(what: str) -> Iterator[None]:
    try:
        yield
    except MalformedInput:
        raise
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise MalformedInput(f"bad {what}: {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc


def read_json(path: str | Path) -> Any:
    try:
        return loads(Path(path).read_text())
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def point_to_list(x: Sequence[Fraction]) -> List[str]:
    return [format_rational(c) for c in x]


def point_from_list(data: Sequence[str]) -> Point:
    with _decoding("point"):
        return tuple(parse_rational(c) for c in data)


def parse_box(text: str) -> SolidBox:
    """``"c1,c2;r"`` -> box with that center and radius."""
    center, sep, radius = text.partition(";")
    if not sep:
        raise MalformedInput(f"box must look like 'c1,...,cm;r', got {text!r}")
    with _decoding("box"):
        return SolidBox(parse_point(center), parse_rational(radius))


def box_to_dict(box: SolidBox) -> Dict[str, Any]:
    return {"center": point_to_list(box.center), "radius": format_rational(box.radius)}


def box_from_dict(data: Dict[str, Any]) -> SolidBox:
    with _decoding("box"):
        return SolidBox(point_from_list(data["center"]), parse_rational(data["radius"]))


def affine_to_dict(f: AffineFunction) -> Dict[str, Any]:
    return {"v": point_to_list(f.v), "b": format_rational(f.b)}


def affine_from_dict(data: Dict[str, Any]) -> AffineFunction:
    with _decoding("affine function"):
        return AffineFunction(point_from_list(data["v"]), parse_rational(data["b"]))


def expr_to_dict(e: MinMaxExpr) -> Dict[str, Any]:
    return {"m": e.m, "clauses": [[affine_to_dict(a) for a in clause] for clause in e.clauses]}


def expr_from_dict(data: Dict[str, Any]) -> MinMaxExpr:
    with _decoding("expression"):
        m = int(data["m"])
        clauses = tuple(tuple(affine_from_dict(a) for a in clause) for clause in data["clauses"])
        return MinMaxExpr(m, clauses)


def complex_to_dict(cx: CellComplex) -> Dict[str, Any]:
    return {
        "box": box_to_dict(cx.box),
        "components": [affine_to_dict(f) for f in cx.components],
        "hyperplanes": [affine_to_dict(h.g) for h in cx.hyperplanes],
        "cells": [
            {"witness": point_to_list(cell.witness), "signs": cell.signs, "component": comp}
            for cell, comp in zip(cx.cells, cx.assignment)
        ],
    }


def complex_from_dict(data: Dict[str, Any]) -> CellComplex:
    with _decoding("cell complex"):
        box = box_from_dict(data["box"])
        components = tuple(affine_from_dict(f) for f in data["components"])
        hyperplanes = tuple(Hyperplane(affine_from_dict(g)) for g in data["hyperplanes"])
        base = tuple(box.interior_constraints())
        cells = []
        assignment = []
        for raw in data["cells"]:
            signs = raw["signs"]
            if len(signs) != len(hyperplanes) or set(signs) - {"+", "-"}:
                raise ValueError(f"sign vector {signs!r} does not match {len(hyperplanes)} hyperplanes")
            cons = base + tuple(h.g if s == "+" else -h.g for h, s in zip(hyperplanes, signs))
            cells.append(Cell(cons, point_from_list(raw["witness"]), signs))
            assignment.append(int(raw["component"]))
        return CellComplex(box, components, hyperplanes, tuple(cells), tuple(assignment))


def pairs_to_dict(cx: CellComplex, pairs: Sequence[CharacteristicPair]) -> Dict[str, Any]:
    return {
        "complex": complex_to_dict(cx),
        "regions_touching": len(pairs),
        "pairs": [
            {"index": p.index, "component": affine_to_dict(p.component), "cells": sorted(p.region_cells)}
            for p in pairs
        ],
    }


def pairs_from_dict(data: Dict[str, Any]) -> Tuple[CellComplex, List[CharacteristicPair]]:
    with _decoding("characteristic pairs"):
        cx = complex_from_dict(data["complex"])
        pairs = [
            CharacteristicPair(affine_from_dict(p["component"]), frozenset(int(c) for c in p["cells"]), int(p["index"]))
            for p in data["pairs"]
        ]
        return cx, pairs


def family_to_dict(family: LocallyFiniteFamily, radius: Optional[int] = None) -> Dict[str, Any]:
    """Explicit members only; generated families are truncated at ``radius`` first."""
    if family.is_generated:
        if radius is None:
            raise ValueError("a generated family needs a truncation radius to be serialized")
        family = family.truncated(radius)
    return {
        "m": family.m,
        "positivity": family.positive,
        "reach": format_rational(family.reach),
        "truncation_radius": family.truncation_radius,
        "certified_radius": family.certified_radius,
        "members": [
            {"anchor": list(b.anchor), "support": box_to_dict(b.support), "expr": expr_to_dict(b.expr)}
            for b in family.members
        ],
    }


def family_from_dict(data: Dict[str, Any]) -> LocallyFiniteFamily:
    with _decoding("family"):
        members = tuple(
            BoxedPA(expr_from_dict(raw["expr"]), box_from_dict(raw["support"]), tuple(int(a) for a in raw["anchor"]))
            for raw in data["members"]
        )
        trunc = data.get("truncation_radius")
        cert = data.get("certified_radius")
        return LocallyFiniteFamily(
            int(data["m"]),
            bool(data["positivity"]),
            members,
            None,
            parse_rational(data.get("reach", "2")),
            None if trunc is None else int(trunc),
            None if cert is None else int(cert),
        )


def lpa_to_dict(h: LPAFunction, radius: Optional[int] = None) -> Dict[str, Any]:
    out = {"mode": h.mode}
    out.update(family_to_dict(h.family, radius))
    out["base"] = None if h.base is None else expr_to_dict(h.base)
    out["subtrahend"] = None if h.subtrahend is None else lpa_to_dict(h.subtrahend, radius)
    return out


def lpa_from_dict(data: Dict[str, Any]) -> LPAFunction:
    with _decoding("LPA function"):
        mode = data.get("mode", "sup")
        if mode not in ("sup", "inf"):
            raise ValueError(f"mode must be 'sup' or 'inf', got {mode!r}")
        base = data.get("base")
        sub = data.get("subtrahend")
        return LPAFunction(
            mode,
            family_from_dict(data),
            None if base is None else expr_from_dict(base),
            None if sub is None else lpa_from_dict(sub),
        )


def report_to_dict(report: ApproxReport) -> Dict[str, Any]:
    return {
        "epsilon": format_rational(report.epsilon),
        "boxes_processed": report.boxes_processed,
        "covered_radius": report.covered_radius,
        "grid_steps": [
            {"anchor": list(anchor), "step": format_rational(step)} for anchor, step in report.grid_steps.items()
        ],
        "max_observed_error": format_rational(report.max_observed_error),
        "certified_bound": None if report.certified_bound is None else format_rational(report.certified_bound),
    }


def report_from_dict(data: Dict[str, Any]) -> ApproxReport:
    with _decoding("report"):
        bound = data["certified_bound"]
        return ApproxReport(
            parse_rational(data["epsilon"]),
            int(data["boxes_processed"]),
            {tuple(int(a) for a in g["anchor"]): parse_rational(g["step"]) for g in data["grid_steps"]},
            parse_rational(data["max_observed_error"]),
            None if bound is None else parse_rational(bound),
            int(data.get("covered_radius", 0)),
        )


def sequence_to_dict(exprs: Sequence[MinMaxExpr], kind: str = "monotone") -> Dict[str, Any]:
    return {"kind": kind, "sequence": [expr_to_dict(e) for e in exprs]}


def sequence_from_dict(data: Dict[str, Any]) -> List[MinMaxExpr]:
    with _decoding("expression sequence"):
        return [expr_from_dict(e) for e in data["sequence"]]


def format_decimal(q: Fraction, digits: int = 12) -> str:
    """Decimal rendering for plotting only, ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return format(d.normalize(), "f") if d else "0"


def sample_table(columns: Sequence[str], rows: Sequence[Sequence[Fraction]], digits: int = 12) -> pa.Table:
    data = {name: [format_decimal(row[i], digits) for row in rows] for i, name in enumerate(columns)}
    return pa.table({name: pa.array(values, type=pa.string()) for name, values in data.items()})


def write_csv(table: pa.Table, out: Optional[str | Path] = None, stream: Optional[TextIO] = None) -> None:
    options = pacsv.WriteOptions(include_header=True, quoting_style="needed")
    if out is not None:
        pacsv.write_csv(table, str(out), write_options=options)
        return
    sink = pa.BufferOutputStream()
    pacsv.write_csv(table, sink, write_options=options)
    (stream or sys.stdout).write(sink.getvalue().to_pybytes().decode("utf-8"))
