"""Independent checks: direct evaluation of the Bethe equations and brute-force searches.

Nothing here goes through divisibility or the Wronskian linear system; the
direct check works from the roots of each y_i.
"""

from __future__ import annotations

import enum
import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .bethe_core import (
    BetheProblem,
    NotFertile,
    PolyTuple,
    divisibility_check,
    fertility_solve,
    is_generic,
)
from .exact_arith import Poly, rational_roots
from .kac_moody import build_cartan


class Status(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INAPPLICABLE = "Inapplicable"


class RootData(NamedTuple):
    roots: list  # per direction, list of Fractions with repetition
    complete: bool


def root_data(t: PolyTuple) -> RootData:
    out = []
    complete = True
    for y in t.polys:
        rr = rational_roots(y)
        complete &= rr.complete
        out.append([r for r, m in rr.roots for _ in range(m)])
    return RootData(out, complete)


@dataclass
class DirectCheck:
    status: Status
    diagnostics: list = field(default_factory=list)
    values: dict = field(default_factory=dict)  # (i, j) -> left side
    per_direction: list = field(default_factory=list)  # equations for t^(i) all hold


def _exclusions(p: BetheProblem, roots: list) -> list:
    bad = []
    A = p.cartan.A
    for i, ti in enumerate(roots):
        hi = p.step(i)
        for j, tj in enumerate(ti):
            for k, tk in enumerate(ti):
                if j != k and (tj == tk or tj == tk + hi):
                    bad.append(f"t^({i + 1})_{j + 1} collides with t^({i + 1})_{k + 1} (shift 0 or h_{i + 1})")
            for m in range(p.rank):
                if m == i:
                    continue
                for k, tk in enumerate(roots[m]):
                    for q in range(1, -A[i][m] + 1):
                        if tj == tk - A[i][m] * hi / 2 - q * hi:
                            bad.append(f"t^({i + 1})_{j + 1} collides with t^({m + 1})_{k + 1}, p={q}")
            for s, zs in enumerate(p.z):
                L = p.pairing(s, i)
                for q in range(1, L + 1):
                    if tj == zs + L * hi / 2 - q * hi:
                        bad.append(f"t^({i + 1})_{j + 1} collides with z_{s + 1}, p={q}")
    return bad


def bethe_lhs(p: BetheProblem, roots: list, i: int, j: int, include_self: bool = True) -> Fraction:
    """Left side of the Bethe equation for the variable t^(i)_j, evaluated exactly.

    ``(Lambda_s, alpha_i) = d_i <Lambda_s, alpha_i^vee>`` and
    ``(alpha_m, alpha_i) = d_i a_im``.  With ``include_self`` the k=j factor
    (identically -1) is kept and the expected value is -1; without it, +1.
    """
    t = roots[i][j]
    h = p.h
    d = p.cartan.D[i]
    val = Fraction(1)
    for s, zs in enumerate(p.z):
        lam = d * p.pairing(s, i) * h
        if lam == 0:
            continue
        val *= (t - zs + lam) / (t - zs - lam)
    for m in range(p.rank):
        am = d * p.cartan.a(i, m) * h
        if am == 0:
            continue
        for k, tk in enumerate(roots[m]):
            if m == i and k == j and not include_self:
                continue
            val *= (t - tk - am) / (t - tk + am)
    return val


def direct_bethe_check(p: BetheProblem, t: PolyTuple) -> DirectCheck:
    rd = root_data(t)
    if not rd.complete:
        return DirectCheck(Status.INAPPLICABLE, ["some y_i does not split over the rationals"])
    bad = _exclusions(p, rd.roots)
    if bad:
        return DirectCheck(Status.FAIL, bad)
    values = {}
    diags = []
    per_direction = []
    for i in range(p.rank):
        ok = True
        for j in range(len(rd.roots[i])):
            try:
                v = bethe_lhs(p, rd.roots, i, j)
            except ZeroDivisionError:
                diags.append(f"equation ({i + 1},{j + 1}): a factor has a vanishing denominator")
                ok = False
                continue
            values[(i, j)] = v
            if v != -1:
                diags.append(f"equation ({i + 1},{j + 1}): left side is {v}, not -1")
                ok = False
        per_direction.append(ok)
    return DirectCheck(Status.FAIL if diags else Status.PASS, diags, values, per_direction)


def height_grid(height: int) -> list:
    """All rationals p/q with max(|p|, q) <= height, sorted."""
    vals = {Fraction(num, den) for den in range(1, height + 1) for num in range(-height, height + 1)}
    return sorted(vals)


def exhaustive_fertile_search(p: BetheProblem, degrees: Sequence[int], coefficient_height: int,
                              limit: int | None = None) -> list:
    """Generic tuples with monic grid coefficients that pass the divisibility test in every direction.

    The grid is finite, so an empty result is evidence, not proof.
    """
    grid = height_grid(coefficient_height)
    per_dir = []
    for l in degrees:
        if l < 0:
            return []
        per_dir.append([Poly(list(cs) + [1]) for cs in itertools.product(grid, repeat=l)])
    found = []
    for polys in itertools.product(*per_dir):
        t = PolyTuple(polys)
        if not all(divisibility_check(p, t, i) for i in range(p.rank)):
            continue
        if not is_generic(p, t).ok:
            continue
        found.append(t)
        if limit is not None and len(found) >= limit:
            break
    return found


# -- randomized equivalence harness ----------------------------------------

CARTAN_TYPES = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "G2": [[2, -1], [-3, 2]],
    "A1^(1)": [[2, -2], [-2, 2]],
}

STEPS = (Fraction(1, 2), Fraction(1), Fraction(1, 3))


def random_problem(rng: random.Random, A, max_points: int = 3, max_coord: int = 2,
                   convention: str = "hi") -> BetheProblem:
    cartan = build_cartan(A)
    n = rng.randint(1, max_points)
    z = set()
    while len(z) < n:
        z.add(Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))))
    lambdas = [tuple(rng.randint(0, max_coord) for _ in range(cartan.rank)) for _ in range(n)]
    return BetheProblem(cartan, rng.choice(STEPS), sorted(z), lambdas, convention)


def _rand_q(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-5, 5), rng.choice((1, 2, 3)))


def random_tuple(rng: random.Random, p: BetheProblem) -> tuple:
    """A labelled random tuple: reproduction walks, split tuples or dense random ones."""
    kind = rng.choice(("descendant", "descendant", "split", "random"))
    r = p.rank
    if kind == "descendant":
        t = PolyTuple.ones(r)
        for _ in range(rng.randint(1, 3)):
            i = rng.randrange(r)
            try:
                line = fertility_solve(p, t, i)
            except NotFertile:
                break
            # pick c so that a random rational becomes a root, when possible
            root = _rand_q(rng)
            yi = line.offset(root)
            c = -line.canonical(root) / yi if yi != 0 and rng.random() < 0.7 else Fraction(rng.randint(-3, 3))
            member = line.member(c)
            if member.is_zero():
                break
            t = t.replace(i, member)
        return kind, t
    if kind == "split":
        return kind, PolyTuple(tuple(Poly.from_roots(_rand_q(rng) for _ in range(rng.randint(0, 3)))
                                     for _ in range(r)))
    return kind, PolyTuple(tuple(Poly([_rand_q(rng) for _ in range(rng.randint(0, 3))] + [1])
                                 for _ in range(r)))


def self_factor_guard(p: BetheProblem, t: PolyTuple) -> bool:
    """The k=j factor is -1: dropping it must turn every -1 into +1."""
    rd = root_data(t)
    if not rd.complete:
        return True
    for i in range(p.rank):
        for j in range(len(rd.roots[i])):
            try:
                with_self = bethe_lhs(p, rd.roots, i, j, True)
                without = bethe_lhs(p, rd.roots, i, j, False)
            except ZeroDivisionError:
                continue
            if with_self != -without:
                return False
    return True


def equivalence_harness(trials: int, types: Sequence[str] = tuple(CARTAN_TYPES), seed: int = 0,
                        problem_factory: Callable | None = None, convention: str = "hi") -> dict:
    """Randomized cross-check of divisibility, fertility and the direct Bethe evaluation.

    For generic tuples divisibility in all directions must match fertility in
    all directions; when every y_i splits over the rationals the direct check
    must match as well.  ``trials`` is per Cartan type.
    """
    from .serialize import problem_to_dict, tuple_to_list

    if trials < 1:
        raise ValueError("trials must be positive")
    make = problem_factory or random_problem
    report = {"trials_per_type": trials, "convention": convention, "types": {}, "discrepancies": []}
    guard_done = False
    for name in types:
        rng = random.Random(f"{seed}:{name}")
        tally = Counter()
        for trial in range(trials):
            p = make(rng, CARTAN_TYPES[name], convention=convention)
            kind, t = random_tuple(rng, p)
            tally["trials"] += 1
            tally[f"kind_{kind}"] += 1
            div = [divisibility_check(p, t, i) for i in range(p.rank)]
            fert = []
            for i in range(p.rank):
                try:
                    fertility_solve(p, t, i)
                    fert.append(True)
                except NotFertile:
                    fert.append(False)
            gen = is_generic(p, t).ok
            tally["fertile"] += all(fert)
            if not gen:
                tally["non_generic"] += 1
                continue
            tally["generic"] += 1
            tally["bethe"] += all(div)
            problems = []
            # the equivalence holds direction by direction, which is stronger than for all i at once
            if div != fert:
                problems.append(f"(ii)={div} but (iii)={fert}")
            direct = direct_bethe_check(p, t)
            if direct.status is not Status.INAPPLICABLE:
                tally["direct_applicable"] += 1
                tally["direct_pass"] += direct.status is Status.PASS
                if direct.per_direction != div:
                    problems.append(f"(i)={direct.per_direction} but (ii)={div}")
                if not guard_done and direct.status is Status.PASS:
                    if not self_factor_guard(p, t):
                        problems.append("self-factor convention guard failed")
                    guard_done = True
            if problems:
                report["discrepancies"].append({
                    "type": name, "trial": trial, "kind": kind, "problems": problems,
                    "problem": problem_to_dict(p), "tuple": tuple_to_list(t),
                })
        report["types"][name] = dict(sorted(tally.items()))
    report["self_factor_guard_checked"] = guard_done
    return report
