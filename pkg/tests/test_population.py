from fractions import Fraction

import pytest

from bethe_pop.bethe_core import BetheProblem, NotFertile, PolyTuple, Verdict, is_bethe, is_generic
from bethe_pop.exact_arith import Poly
from bethe_pop.kac_moody import build_cartan, shifted_orbit
from bethe_pop.population import (
    ExplorationLimits,
    SeedNotFertile,
    c_sequence,
    explore,
    family_contains,
    immediate_descendants,
    sample_generic_member,
    shared_nodes,
    weights_realized,
)

HALF = Fraction(1, 2)


@pytest.fixture
def rank1():
    return BetheProblem(build_cartan([[2]]), HALF, [0], [(1,)])


def tup(*coeff_lists):
    return PolyTuple(tuple(Poly(c) for c in coeff_lists))


def test_c_sequence():
    assert list(c_sequence(5)) == [0, 1, -1, 2, -2]


def test_descendant_of_seed(rank1):
    line, child = immediate_descendants(rank1, PolyTuple.ones(1), 0)
    assert child == tup([0, 0, 1])
    assert line.member(-1) == Poly([-1, 0, 1])


def test_descendant_of_bethe_tuple_returns_to_constant(rank1):
    line, child = immediate_descendants(rank1, tup([-1, 0, 1]), 0)
    assert line.contains(Poly([1]))
    assert child == PolyTuple.ones(1)


def test_seed_has_one_line_per_direction():
    p = BetheProblem(build_cartan([[2, -1], [-3, 2]]), 1, [0, 2], [(1, 0), (0, 1)])
    lines = [immediate_descendants(p, PolyTuple.ones(2), i).line for i in range(2)]
    assert [ln.direction for ln in lines] == [0, 1]


def test_sample_generic_member(rank1):
    line = immediate_descendants(rank1, PolyTuple.ones(1), 0).line
    s = sample_generic_member(rank1, PolyTuple.ones(1), line)
    # c=0 gives the double root x^2; c=1 gives x^2+1 which is generic over Q
    assert s.c == 1 and s.tuple == tup([1, 0, 1])


def test_sample_returns_canonical_when_generic():
    p = BetheProblem(build_cartan([[2]]), HALF, [Fraction(1, 5)], [(1,)])
    line = immediate_descendants(p, PolyTuple.ones(1), 0).line
    assert sample_generic_member(p, PolyTuple.ones(1), line).c == 0


def test_sample_skips_collisions_with_master_roots():
    # found by search: canonical x^4 - 2x^3 - x^2 + 2x; c=0 and c=1 both collide
    p = BetheProblem(build_cartan([[2]]), HALF, [0, Fraction(3, 2)], [(2,), (1,)])
    seed = PolyTuple.ones(1)
    line = immediate_descendants(p, seed, 0).line
    assert line.canonical == Poly([0, 2, -1, -2, 1])
    for c in (0, 1):
        assert not is_generic(p, seed.replace(0, line.member(c))).ok
    s = sample_generic_member(p, seed, line)
    assert s.c == -1
    assert is_bethe(p, s.tuple) is Verdict.BETHE
    assert sample_generic_member(p, seed, line, c_samples=2) is None


def test_rank1_population_closes(rank1):
    g = explore(rank1, PolyTuple.ones(1))
    assert not g.truncated
    assert sorted(n.degrees for n in g.nodes) == [(0,), (2,)]
    assert weights_realized(g) == {(1,), (-3,)}


def test_single_node_graph(rank1):
    g = explore(rank1, PolyTuple.ones(1), ExplorationLimits(max_nodes=1))
    assert weights_realized(g) == {(1,)} and g.truncated


def test_seed_not_fertile(rank1):
    with pytest.raises(SeedNotFertile):
        explore(rank1, tup([0, 1]))


def test_a2_population_realizes_orbit():
    p = BetheProblem(build_cartan([[2, -1], [-1, 2]]), Fraction(1, 3), [Fraction(1, 5)], [(1, 0)])
    g = explore(p, PolyTuple.ones(2))
    orbit = shifted_orbit(p.cartan, p.total_weight())
    assert weights_realized(g) == set(orbit.weights) and len(orbit.weights) == 6


def test_affine_population_stays_in_orbit():
    p = BetheProblem(build_cartan([[2, -2], [-2, 2]]), Fraction(1, 3), [Fraction(1, 5)], [(1, 0)])
    g = explore(p, PolyTuple.ones(2), ExplorationLimits(max_depth=4))
    assert g.truncated
    orbit = shifted_orbit(p.cartan, p.total_weight(), 2000)
    assert weights_realized(g) <= set(orbit.weights)


def test_reachability_of_known_bethe_tuple(rank1):
    g = explore(rank1, PolyTuple.ones(1))
    assert family_contains(g, tup([-1, 0, 1]))
    assert not family_contains(g, tup([-1, 1]))


def test_populations_from_bethe_members_intersect(rank1):
    g1 = explore(rank1, PolyTuple.ones(1))
    g2 = explore(rank1, tup([-1, 0, 1]))
    assert shared_nodes(g1, g2)


def test_exploration_is_deterministic():
    p = BetheProblem(build_cartan([[2, -1], [-2, 2]]), HALF, [Fraction(1, 7), 2], [(1, 0), (0, 1)])
    limits = ExplorationLimits(max_nodes=40, max_depth=5)
    g1, g2 = explore(p, PolyTuple.ones(2), limits), explore(p, PolyTuple.ones(2), limits)
    assert [n.tuple for n in g1.nodes] == [n.tuple for n in g2.nodes]
    assert [(e.source, e.target, e.direction) for e in g1.edges] == \
           [(e.source, e.target, e.direction) for e in g2.edges]


def test_limit_specialisations_remain_fertile(rank1):
    # c=0 on the seed's line is non-generic (x^2) yet still fertile
    line, child = immediate_descendants(rank1, PolyTuple.ones(1), 0)
    assert is_bethe(rank1, child) is Verdict.FERTILE_NOT_GENERIC
    immediate_descendants(rank1, child, 0)


def test_non_fertile_descendant_raises(rank1):
    with pytest.raises(NotFertile):
        immediate_descendants(rank1, tup([0, 1]), 0)
