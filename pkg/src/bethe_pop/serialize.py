"""JSON and DOT encodings.  Rationals are "p/q" strings; directions are 1-based."""

from __future__ import annotations

import json
from typing import Any

from .bethe_core import BetheProblem, FertilityLine, PolyTuple, Verdict
from .exact_arith import Poly, format_rational, parse_rational
from .kac_moody import build_cartan
from .population import PopulationEdge, PopulationGraph, PopulationNode


class FormatError(ValueError):
    """Malformed input; ``field`` names the offending location."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def poly_to_list(p: Poly) -> list:
    return [format_rational(c) for c in p.coeffs]


def poly_from_list(data, field: str = "poly") -> Poly:
    if not isinstance(data, list):
        raise FormatError(field, "expected an array of rational strings")
    try:
        return Poly(parse_rational(c) for c in data)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(field, str(exc)) from None


def tuple_to_list(t: PolyTuple) -> list:
    return [poly_to_list(p) for p in t.polys]


def tuple_from_list(data, rank: int | None = None, field: str = "tuple") -> PolyTuple:
    if not isinstance(data, list):
        raise FormatError(field, "expected an array of coefficient arrays")
    if rank is not None and len(data) != rank:
        raise FormatError(field, f"expected {rank} polynomials, got {len(data)}")
    polys = [poly_from_list(d, f"{field}[{k}]") for k, d in enumerate(data)]
    for k, p in enumerate(polys):
        if p.is_zero():
            raise FormatError(f"{field}[{k}]", "polynomial must be nonzero")
    return PolyTuple(tuple(polys))


def problem_to_dict(p: BetheProblem) -> dict:
    return {
        "cartan": [list(row) for row in p.cartan.A],
        "h": format_rational(p.h),
        "points": [format_rational(z) for z in p.z],
        "weights": [list(w) for w in p.lambdas],
    }


def _int_matrix(data, field: str) -> list:
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise FormatError(field, "expected an array of integer arrays")
    for row in data:
        for v in row:
            if isinstance(v, bool) or not isinstance(v, int):
                raise FormatError(field, f"non-integer entry {v!r}")
    return data


def problem_from_dict(data: dict, convention: str = "hi") -> BetheProblem:
    if not isinstance(data, dict):
        raise FormatError("<root>", "expected a JSON object")
    for key in ("cartan", "h", "points", "weights"):
        if key not in data:
            raise FormatError(key, "missing field")
    A = _int_matrix(data["cartan"], "cartan")
    try:
        cartan = build_cartan(A)
    except ValueError as exc:
        raise FormatError("cartan", str(exc)) from None
    try:
        h = parse_rational(data["h"])
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError("h", str(exc)) from None
    if not isinstance(data["points"], list):
        raise FormatError("points", "expected an array of rational strings")
    points = []
    for k, zs in enumerate(data["points"]):
        try:
            points.append(parse_rational(zs))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"points[{k}]", str(exc)) from None
    weights = _int_matrix(data["weights"], "weights")
    if h == 0:
        raise FormatError("h", "h must be non-zero")
    if len(set(points)) != len(points):
        raise FormatError("points", "points must be distinct")
    if len(weights) != len(points):
        raise FormatError("weights", "need exactly one weight per point")
    for k, w in enumerate(weights):
        if len(w) != cartan.rank:
            raise FormatError(f"weights[{k}]", f"expected {cartan.rank} coordinates")
        if any(v < 0 for v in w):
            raise FormatError(f"weights[{k}]", "weight is not dominant")
    return BetheProblem(cartan, h, points, [tuple(w) for w in weights], convention)


def load_problem_file(path: str, convention: str = "hi") -> tuple:
    """Return ``(problem, tuple-or-None)`` from a problem file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}", exc.msg) from None
    except OSError as exc:
        raise FormatError(path, exc.strerror or str(exc)) from None
    p = problem_from_dict(data, convention)
    t = None
    if data.get("tuple") is not None:
        t = tuple_from_list(data["tuple"], p.rank)
    return p, t


def line_to_dict(line: FertilityLine) -> dict:
    return {
        "canonical": poly_to_list(line.canonical),
        "offset": poly_to_list(line.offset),
        "degree_changed": line.degree_changed,
        "exceptional": line.exceptional,
    }


def line_from_dict(direction: int, data: dict) -> FertilityLine:
    return FertilityLine(direction, poly_from_list(data["canonical"]).monic(),
                         poly_from_list(data["offset"]).monic(),
                         bool(data["degree_changed"]), bool(data.get("exceptional", False)))


def graph_to_dict(g: PopulationGraph) -> dict:
    nodes = sorted(g.nodes, key=lambda n: n.id)
    return {
        "problem": problem_to_dict(g.problem),
        "wronskian_step": g.problem.wronskian_step,
        "truncated": g.truncated,
        "anomalies": list(g.anomalies),
        "nodes": [
            {
                "id": n.id,
                "polys": tuple_to_list(n.tuple),
                "degrees": list(n.degrees),
                "weight": list(n.weight),
                "verdict": n.verdict.value,
                "depth": n.depth,
            }
            for n in nodes
        ],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "direction": e.direction + 1,
                "family": line_to_dict(e.line),
            }
            for e in g.edges
        ],
    }


def graph_from_dict(data: dict) -> PopulationGraph:
    p = problem_from_dict(data["problem"], data.get("wronskian_step", "hi"))
    nodes = [
        PopulationNode(n["id"], tuple_from_list(n["polys"], p.rank), tuple(n["weight"]),
                       tuple(n["degrees"]), Verdict(n["verdict"]), n["depth"])
        for n in data["nodes"]
    ]
    edges = [
        PopulationEdge(e["source"], e["target"], e["direction"] - 1,
                       line_from_dict(e["direction"] - 1, e["family"]))
        for e in data["edges"]
    ]
    return PopulationGraph(p, nodes, edges, bool(data["truncated"]), list(data.get("anomalies", [])))


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def graph_to_dot(g: PopulationGraph) -> str:
    lines = ["digraph population {"]
    for n in sorted(g.nodes, key=lambda n: n.id):
        label = f"l={list(n.degrees)}\\nw={list(n.weight)}"
        shape = "box" if n.verdict is Verdict.BETHE else "ellipse"
        lines.append(f'  n{n.id} [label="{label}", shape={shape}];')
    for e in g.edges:
        lines.append(f'  n{e.source} -> n{e.target} [label="{e.direction + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
