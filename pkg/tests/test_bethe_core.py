import random
from fractions import Fraction

import pytest
import sympy

from bethe_pop.bethe_core import (
    BetheProblem,
    EquivalenceViolation,
    InvalidProblem,
    NotFertile,
    PolyTuple,
    Verdict,
    bethe_report,
    division_polynomial,
    divisibility_check,
    expected_descendant_degree,
    fertility_solve,
    is_bethe,
    is_generic,
    master_polynomial,
    obstruction_cone,
    obstruction_fixed_point,
    weight_at_infinity,
    wronskian_rhs,
)
from bethe_pop.exact_arith import Poly, discrete_wronskian
from bethe_pop.kac_moody import build_cartan, shifted_reflect
from bethe_pop.oracle import CARTAN_TYPES, exhaustive_fertile_search, random_problem, random_tuple

X = sympy.Symbol("x")
HALF = Fraction(1, 2)


@pytest.fixture
def rank1():
    return BetheProblem(build_cartan([[2]]), HALF, [0], [(1,)])


def tup(*coeff_lists):
    return PolyTuple(tuple(Poly(c) for c in coeff_lists))


def test_problem_validation():
    c = build_cartan([[2]])
    with pytest.raises(InvalidProblem, match="non-zero"):
        BetheProblem(c, 0, [0], [(1,)])
    with pytest.raises(InvalidProblem, match="distinct"):
        BetheProblem(c, 1, [0, 0], [(1,), (1,)])
    with pytest.raises(InvalidProblem, match="dominant"):
        BetheProblem(c, 1, [0], [(-1,)])


def test_step_is_twice_symmetrizer_times_h():
    p = BetheProblem(build_cartan([[2, -1], [-3, 2]]), Fraction(1, 3), [0], [(0, 0)])
    assert p.step(0) == 2 and p.step(1) == Fraction(2, 3)


def test_master_polynomial(rank1):
    assert master_polynomial(rank1, 0) == Poly([HALF, 1])
    p2 = BetheProblem(build_cartan([[2]]), HALF, [0], [(2,)])
    assert master_polynomial(p2, 0) == Poly([0, 1, 1])
    p0 = BetheProblem(build_cartan([[2, -1], [-1, 2]]), 1, [3], [(0, 2)])
    assert master_polynomial(p0, 0) == Poly([1])
    assert master_polynomial(p0, 1).degree == 2


def test_weight_at_infinity(rank1):
    assert weight_at_infinity(rank1, (0,)) == (1,)
    assert weight_at_infinity(rank1, (2,)) == (-3,)
    a2 = BetheProblem(build_cartan([[2, -1], [-1, 2]]), 1, [0], [(1, 1)])
    assert weight_at_infinity(a2, (1, 0)) == (-1, 2)


def test_wronskian_rhs():
    p = BetheProblem(build_cartan([[2, -1], [-1, 2]]), HALF, [0], [(1, 0)])
    T1 = master_polynomial(p, 0)
    assert wronskian_rhs(p, PolyTuple.ones(2), 0) == T1
    assert wronskian_rhs(p, tup([1], [0, 1]), 0) == T1 * Poly([HALF, 1])


def test_rank1_rhs_is_master(rank1):
    assert wronskian_rhs(rank1, tup([-1, 0, 1]), 0) == master_polynomial(rank1, 0)


def test_genericity(rank1):
    assert is_generic(rank1, PolyTuple.ones(1)).ok
    g = is_generic(rank1, tup([0, 0, 1]))
    assert not g.ok and any("multiple" in v for v in g.violations)
    assert is_generic(rank1, tup([-1, 0, 1])).ok


def test_division_polynomial_hand_expansion(rank1):
    assert division_polynomial(rank1, tup([-1, 0, 1]), 0) == Poly([0, -2, 0, 2])
    assert divisibility_check(rank1, tup([-1, 0, 1]), 0)
    assert divisibility_check(rank1, PolyTuple.ones(1), 0)
    assert division_polynomial(rank1, tup([0, 1]), 0)(0) == -1
    assert not divisibility_check(rank1, tup([0, 1]), 0)


def sympy_fertility(rhs: Poly, y: Poly, step, degree: int):
    """Independent solve of W(y, g, step) = rhs by matching coefficients in sympy."""
    cs = sympy.symbols(f"c0:{degree + 1}")
    g = sum(c * X**k for k, c in enumerate(cs))
    ys = sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(y.coeffs))
    rs = sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(rhs.coeffs))
    s = sympy.Rational(step.numerator, step.denominator)
    expr = sympy.expand(ys.subs(X, X + s) * g - ys * g.subs(X, X + s) - rs)
    return sympy.solve(sympy.Poly(expr, X).all_coeffs(), cs, dict=True)


def test_fertility_seed_rank1(rank1):
    line = fertility_solve(rank1, PolyTuple.ones(1), 0)
    assert line.canonical == Poly([0, 0, 1])
    sol = sympy_fertility(Poly([HALF, 1]), Poly([1]), Fraction(1), 2)
    assert sol and sol[0][sympy.Symbol("c2")] == sympy.Rational(-1, 2)
    assert sol[0][sympy.Symbol("c1")] == 0


def test_fertility_of_bethe_tuple_goes_down(rank1):
    line = fertility_solve(rank1, tup([-1, 0, 1]), 0)
    assert line.canonical == Poly([1])
    assert line.degree_changed and not line.exceptional


def test_ones_fertile_everywhere():
    rng = random.Random(3)
    for name, A in CARTAN_TYPES.items():
        p = random_problem(rng, A)
        for i in range(p.rank):
            fertility_solve(p, PolyTuple.ones(p.rank), i)


def test_verdicts(rank1):
    assert is_bethe(rank1, tup([-1, 0, 1])) is Verdict.BETHE
    assert is_bethe(rank1, tup([0, 0, 1])) is Verdict.FERTILE_NOT_GENERIC
    assert is_bethe(rank1, tup([0, 1])) is Verdict.NOT_FERTILE
    with pytest.raises(NotFertile):
        fertility_solve(rank1, tup([0, 1]), 0)


def test_expected_degree(rank1):
    assert expected_descendant_degree(rank1, (0,), 0) == 2
    assert expected_descendant_degree(rank1, (2,), 0) == 0
    assert expected_descendant_degree(rank1, (1,), 0) == 1  # fixed point: degenerate


def test_obstructions(rank1):
    assert obstruction_fixed_point(rank1, (1,)) == [0]
    assert not obstruction_fixed_point(rank1, (0,))
    assert not obstruction_fixed_point(rank1, (2,))
    res = obstruction_cone(rank1, (3,))
    assert res.obstructed and res.witness == (-1,)
    assert not obstruction_cone(rank1, (0,)).obstructed
    assert not obstruction_cone(rank1, (2,)).obstructed


def test_cone_truncates_on_affine():
    p = BetheProblem(build_cartan([[2, -2], [-2, 2]]), 1, [0], [(1, 0)])
    res = obstruction_cone(p, (0, 0), max_nodes=20)
    assert not res.obstructed and res.truncated


def _random_instances(n_per_type, seed):
    rng = random.Random(seed)
    for name, A in CARTAN_TYPES.items():
        for _ in range(n_per_type):
            p = random_problem(rng, A)
            yield name, p, random_tuple(rng, p)[1]


def test_null_space_and_degree_dichotomy():
    for name, p, t in _random_instances(25, 11):
        for i in range(p.rank):
            try:
                line = fertility_solve(p, t, i)
            except NotFertile:
                continue
            rhs = wronskian_rhs(p, t, i)
            # every member solves the equation up to the common scale
            w0 = discrete_wronskian(t[i], line.canonical, p.step(i))
            w1 = discrete_wronskian(t[i], line.member(3), p.step(i))
            assert w0 == w1 and w0.monic() == rhs.monic()
            exp = expected_descendant_degree(p, t, i)
            assert line.degree_changed and line.canonical.degree == exp
            assert line.member(1).degree == max(exp, t[i].degree)


def test_weight_follows_shifted_reflection():
    for name, p, t in _random_instances(20, 5):
        for i in range(p.rank):
            try:
                line = fertility_solve(p, t, i)
            except NotFertile:
                continue
            child = t.replace(i, line.canonical)
            assert weight_at_infinity(p, child) == shifted_reflect(p.cartan, weight_at_infinity(p, t), i)


def test_report_guards_equivalence(monkeypatch, rank1):
    import bethe_pop.bethe_core as core

    monkeypatch.setattr(core, "divisibility_check", lambda *a: False)
    with pytest.raises(EquivalenceViolation):
        bethe_report(rank1, tup([-1, 0, 1]))


def test_half_step_convention_is_selectable():
    p = BetheProblem(build_cartan([[2, -1], [-1, 2]]), HALF, [0], [(1, 0)], "hi/2")
    t = tup([1], [0, 1])
    # y_2(x - h_1/2 + h_1/2) = x instead of x + 1/2
    assert wronskian_rhs(p, t, 0) == master_polynomial(p, 0) * Poly([0, 1])


def test_fixed_point_obstruction_backed_by_search(rank1):
    assert obstruction_fixed_point(rank1, (1,))
    assert exhaustive_fertile_search(rank1, (1,), 5) == []
    a2 = BetheProblem(build_cartan([[2, -1], [-1, 2]]), 1, [Fraction(1, 3)], [(1, 0)])
    assert obstruction_fixed_point(a2, (1, 0)) == [0]
    assert exhaustive_fertile_search(a2, (1, 0), 3) == []
