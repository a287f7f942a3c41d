"""Command-line entry point: ``bethe-pop``.

Exit codes: 0 success / Bethe, 1 a negative mathematical verdict, 2 malformed input.
"""

from __future__ import annotations

import json
import sys

import click

from . import serialize as ser
from .bethe_core import (
    NotFertile,
    PolyTuple,
    Verdict,
    bethe_report,
    expected_descendant_degree,
    fertility_solve,
    is_generic,
    obstruction_cone,
    obstruction_fixed_point,
    weight_at_infinity,
)
from .exact_arith import format_rational, parse_rational
from .kac_moody import build_cartan, shifted_orbit
from .oracle import direct_bethe_check
from .population import (
    ExplorationLimits,
    SeedNotFertile,
    default_max_nodes,
    explore,
    sample_generic_member,
    weights_realized,
)


def _fail(message: str, code: int = 2):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(obj) -> None:
    click.echo(ser.dumps(obj), nl=False)


def _load(ctx, path, tuple_json=None, field="tuple"):
    convention = ctx.obj["step"]
    try:
        p, t = ser.load_problem_file(path, convention)
        if tuple_json is not None:
            try:
                data = json.loads(tuple_json)
            except json.JSONDecodeError as exc:
                raise ser.FormatError(f"--{field}", exc.msg) from None
            t = ser.tuple_from_list(data, p.rank, f"--{field}")
    except ser.FormatError as exc:
        _fail(str(exc))
    return p, t


def _int_list(text: str, option: str) -> list:
    try:
        data = json.loads(text if text.strip().startswith("[") else f"[{text}]")
    except json.JSONDecodeError:
        _fail(f"{option}: expected a comma-separated list of integers")
    if not isinstance(data, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
        _fail(f"{option}: expected a comma-separated list of integers")
    return data


@click.group()
@click.option("--wronskian-step", "step", type=click.Choice(["hi", "hi/2"]), default="hi",
              show_default=True, help="Shift step p*h_i or p*h_i/2 for neighbour factors.")
@click.pass_context
def main(ctx, step):
    """Exact verification and reproduction of XXX Bethe solutions."""
    ctx.ensure_object(dict)
    ctx.obj["step"] = step


@main.command()
@click.argument("problem", type=click.Path())
@click.option("--tuple", "tuple_json", help="Tuple as JSON coefficient arrays (overrides the file).")
@click.pass_context
def verify(ctx, problem, tuple_json):
    """Decide whether a tuple represents a Bethe solution."""
    p, t = _load(ctx, problem, tuple_json)
    if t is None:
        _fail("tuple: no tuple given in file or via --tuple")
    rep = bethe_report(p, t)
    direct = direct_bethe_check(p, t)
    _emit({
        "verdict": rep.verdict.value,
        "generic": rep.generic.ok,
        "genericity_violations": rep.generic.violations,
        "directions": [
            {
                "direction": i + 1,
                "divisible": rep.divisible[i],
                "fertile": rep.fertile[i],
                "expected_descendant_degree": expected_descendant_degree(p, t, i),
            }
            for i in range(p.rank)
        ],
        "degrees": list(t.degrees),
        "weight_at_infinity": list(weight_at_infinity(p, t)),
        "direct_check": {"status": direct.status.value, "diagnostics": direct.diagnostics},
        "wronskian_step": p.wronskian_step,
    })
    sys.exit(0 if rep.verdict is Verdict.BETHE else 1)


@main.command()
@click.argument("problem", type=click.Path())
@click.option("--tuple", "tuple_json", help="Tuple as JSON coefficient arrays; default (1,...,1).")
@click.option("--direction", "-i", type=int, required=True, help="1-based direction.")
@click.option("--c", "c_text", default="auto", show_default=True, help="Rational c, or 'auto'.")
@click.option("--c-samples", type=int, default=41, show_default=True)
@click.pass_context
def reproduce(ctx, problem, tuple_json, direction, c_text, c_samples):
    """Simple reproduction of a tuple in one direction."""
    p, t = _load(ctx, problem, tuple_json)
    t = t if t is not None else PolyTuple.ones(p.rank)
    if not 1 <= direction <= p.rank:
        _fail(f"--direction: must be between 1 and {p.rank}")
    i = direction - 1
    try:
        line = fertility_solve(p, t, i)
    except NotFertile as exc:
        _fail(str(exc), 1)
    warnings = []
    if c_text == "auto":
        sample = sample_generic_member(p, t, line, c_samples)
        if sample is None:
            c = parse_rational("0")
            warnings.append(f"no generic member among the first {c_samples} values of c")
        else:
            c = sample.c
    else:
        try:
            c = parse_rational(c_text)
        except (ValueError, ZeroDivisionError) as exc:
            _fail(f"--c: {exc}")
    member = line.member(c)
    if member.is_zero():
        _fail("--c: this value gives the zero polynomial")
    child = t.replace(i, member)
    generic = is_generic(p, child).ok
    if not generic:
        warnings.append("descendant is not generic")
    _emit({
        "direction": direction,
        "family": ser.line_to_dict(line),
        "canonical_descendant": ser.tuple_to_list(t.replace(i, line.canonical)),
        "c": format_rational(c),
        "member": ser.tuple_to_list(child),
        "generic": generic,
        "weight_source": list(weight_at_infinity(p, t)),
        "weight_target": list(weight_at_infinity(p, child)),
        "degree_changed": child.degrees != t.degrees,
        "warnings": warnings,
        "wronskian_step": p.wronskian_step,
    })


@main.command()
@click.argument("problem", type=click.Path())
@click.option("--seed", "seed_json", help="Seed tuple as JSON; default file tuple or (1,...,1).")
@click.option("--max-nodes", type=int, default=None, help="Default: $BETHE_MAX_NODES or 500.")
@click.option("--max-depth", type=int, default=12, show_default=True)
@click.option("--c-samples", type=int, default=41, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json", show_default=True)
@click.option("--out", type=click.Path(), help="Write the graph here instead of stdout.")
@click.pass_context
def population(ctx, problem, seed_json, max_nodes, max_depth, c_samples, fmt, out):
    """Explore the population generated from a seed tuple."""
    p, seed = _load(ctx, problem, seed_json, "seed")
    seed = seed if seed is not None else PolyTuple.ones(p.rank)
    try:
        limits = ExplorationLimits(max_nodes or default_max_nodes(), max_depth, c_samples)
    except ValueError as exc:
        _fail(str(exc))
    try:
        g = explore(p, seed, limits)
    except SeedNotFertile as exc:
        _fail(str(exc), 1)
    text = ser.dumps(ser.graph_to_dict(g)) if fmt == "json" else ser.graph_to_dot(g)
    realized = weights_realized(g)
    orbit = shifted_orbit(p.cartan, weight_at_infinity(p, seed), max(10 * len(realized), 1000))
    summary = {
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "weights_realized": sorted(list(w) for w in realized),
        "truncated": g.truncated,
        # null when a weight lies outside a truncated orbit enumeration
        "orbit_containment": True if realized <= set(orbit.weights) else (False if not orbit.truncated else None),
        "orbit_truncated": orbit.truncated,
        "anomalies": g.anomalies,
        "wronskian_step": p.wronskian_step,
    }
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        _emit(summary)
    else:
        click.echo(text, nl=False)
        click.echo(ser.dumps(summary), err=True, nl=False)


@main.command()
@click.argument("problem", type=click.Path())
@click.option("--degrees", required=True, help="Degree vector l, e.g. '1,0' or '[1,0]'.")
@click.option("--max-nodes", type=int, default=None, help="Default: $BETHE_MAX_NODES or 500.")
@click.pass_context
def feasibility(ctx, problem, degrees, max_nodes):
    """Check the no-solution obstructions for a degree vector."""
    p, _ = _load(ctx, problem)
    l = _int_list(degrees, "--degrees")
    if len(l) != p.rank:
        _fail(f"--degrees: expected {p.rank} entries")
    cap = max_nodes or default_max_nodes()
    fixed = obstruction_fixed_point(p, l)
    cone = obstruction_cone(p, l, cap)
    w = weight_at_infinity(p, l)
    orbit = shifted_orbit(p.cartan, w, cap)
    _emit({
        "degrees": l,
        "weight_at_infinity": list(w),
        "fixed_point_obstruction": bool(fixed),
        "fixed_directions": [i + 1 for i in fixed],
        "cone_obstruction": cone.obstructed,
        "cone_witness": list(cone.witness) if cone.witness else None,
        "cone_truncated": cone.truncated,
        "orbit_sample": [list(v) for v in orbit.weights[:50]],
        "orbit_truncated": orbit.truncated,
        "wronskian_step": p.wronskian_step,
    })
    sys.exit(1 if fixed or cone.obstructed else 0)


@main.command()
@click.option("--cartan", "cartan_json", required=True, help="Cartan matrix as JSON.")
@click.option("--weight", "weight_json", required=True, help="Weight in coroot coordinates.")
@click.option("--max-nodes", type=int, default=None, help="Default: $BETHE_MAX_NODES or 500.")
def orbit(cartan_json, weight_json, max_nodes):
    """Print the shifted Weyl orbit of a weight."""
    try:
        A = ser._int_matrix(json.loads(cartan_json), "--cartan")
        cartan = build_cartan(A)
    except json.JSONDecodeError as exc:
        _fail(f"--cartan: {exc.msg}")
    except ValueError as exc:
        _fail(f"--cartan: {exc}")
    w = _int_list(weight_json, "--weight")
    if len(w) != cartan.rank:
        _fail(f"--weight: expected {cartan.rank} entries")
    res = shifted_orbit(cartan, tuple(w), max_nodes or default_max_nodes())
    _emit({
        "cartan": [list(r) for r in cartan.A],
        "symmetrizer": list(cartan.D),
        "weights": [list(v) for v in res.weights],
        "size": len(res.weights),
        "truncated": res.truncated,
    })


if __name__ == "__main__":
    main()
