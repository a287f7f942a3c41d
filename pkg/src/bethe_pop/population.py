"""Reproduction procedure and bounded population exploration."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

from .bethe_core import (
    BetheProblem,
    FertilityLine,
    NotFertile,
    PolyTuple,
    Verdict,
    bethe_report,
    fertility_solve,
    is_generic,
    weight_at_infinity,
)
from .kac_moody import Weight


class SeedNotFertile(Exception):
    pass


def default_max_nodes(fallback: int = 500) -> int:
    return int(os.environ.get("BETHE_MAX_NODES", fallback))


@dataclass(frozen=True)
class ExplorationLimits:
    max_nodes: int = field(default_factory=default_max_nodes)
    max_depth: int = 12
    c_samples: int = 41

    def __post_init__(self):
        if min(self.max_nodes, self.max_depth, self.c_samples) < 1:
            raise ValueError("exploration limits must be positive")


class Descendant(NamedTuple):
    line: FertilityLine
    tuple: PolyTuple


def immediate_descendants(p: BetheProblem, t: PolyTuple, i: int) -> Descendant:
    line = fertility_solve(p, t, i)
    return Descendant(line, t.replace(i, line.canonical))


def c_sequence(n: int) -> Iterator[int]:
    """0, 1, -1, 2, -2, ... (n terms)."""
    for k in range(n):
        yield (k + 1) // 2 if k % 2 else -(k // 2)


class Sample(NamedTuple):
    c: Fraction
    tuple: PolyTuple


def sample_generic_member(p: BetheProblem, t: PolyTuple, line: FertilityLine,
                          c_samples: int = 41) -> Sample | None:
    """First generic tuple ``(.., canonical + c*y_i, ..)`` for c in 0, 1, -1, 2, ..."""
    for c in c_sequence(c_samples):
        member = line.member(c)
        if member.is_zero():
            continue
        cand = t.replace(line.direction, member)
        if is_generic(p, cand).ok:
            return Sample(Fraction(c), cand)
    return None


@dataclass
class PopulationNode:
    id: int
    tuple: PolyTuple
    weight: Weight
    degrees: tuple
    verdict: Verdict
    depth: int


@dataclass
class PopulationEdge:
    source: int
    target: int
    direction: int
    line: FertilityLine

    @property
    def degree_changed(self) -> bool:
        return self.line.degree_changed


@dataclass
class PopulationGraph:
    problem: BetheProblem
    nodes: list
    edges: list
    truncated: bool
    anomalies: list = field(default_factory=list)

    def node_by_key(self) -> dict:
        return {n.tuple.key: n for n in self.nodes}


def explore(p: BetheProblem, seed: PolyTuple, limits: ExplorationLimits | None = None) -> PopulationGraph:
    """Breadth-first reproduction from ``seed``.

    Nodes are expanded FIFO, directions in index order, and only canonical
    descendants are enqueued, so the result is deterministic.  An edge that
    would need a node beyond ``max_depth`` or ``max_nodes`` is dropped and the
    graph is marked truncated.
    """
    limits = limits or ExplorationLimits()
    seed_lines = []
    for i in range(p.rank):
        try:
            seed_lines.append(fertility_solve(p, seed, i))
        except NotFertile as exc:
            raise SeedNotFertile(f"seed is not fertile in direction {i + 1}") from exc

    def make_node(t: PolyTuple, depth: int) -> PopulationNode:
        verdict = bethe_report(p, t).verdict
        return PopulationNode(len(nodes), t, weight_at_infinity(p, t), t.degrees, verdict, depth)

    nodes: list[PopulationNode] = []
    edges: list[PopulationEdge] = []
    anomalies: list[str] = []
    index: dict = {}
    truncated = False

    root = make_node(seed, 0)
    nodes.append(root)
    index[seed.key] = root
    queue = deque([(root, seed_lines)])
    while queue:
        node, lines = queue.popleft()
        if lines is None:
            lines = []
            for i in range(p.rank):
                try:
                    lines.append(fertility_solve(p, node.tuple, i))
                except NotFertile:
                    anomalies.append(f"node {node.id} is not fertile in direction {i + 1}")
                    lines.append(None)
        for i, line in enumerate(lines):
            if line is None:
                continue
            child_tuple = node.tuple.replace(i, line.canonical)
            if not line.degree_changed:
                # same weight, same line: recorded on a self-loop edge
                edges.append(PopulationEdge(node.id, node.id, i, line))
                continue
            child = index.get(child_tuple.key)
            if child is None:
                if node.depth + 1 > limits.max_depth or len(nodes) >= limits.max_nodes:
                    truncated = True
                    continue
                child = make_node(child_tuple, node.depth + 1)
                nodes.append(child)
                index[child_tuple.key] = child
                queue.append((child, None))
            edges.append(PopulationEdge(node.id, child.id, i, line))
    return PopulationGraph(p, nodes, edges, truncated, anomalies)


def weights_realized(g: PopulationGraph) -> set:
    return {n.weight for n in g.nodes}


def shared_nodes(g1: PopulationGraph, g2: PopulationGraph) -> list:
    """Tuple keys present in both graphs; any overlap means the populations coincide."""
    k2 = {n.tuple.key for n in g2.nodes}
    return sorted(n.tuple.key for n in g1.nodes if n.tuple.key in k2)


def family_contains(g: PopulationGraph, t: PolyTuple) -> bool:
    """Whether ``t`` lies on one of the stored lines (or is a stored node)."""
    nodes = g.node_by_key()
    if t.key in nodes:
        return True
    by_id = {n.id: n for n in g.nodes}
    for e in g.edges:
        src = by_id[e.source].tuple
        if all(src[j] == t[j] for j in range(len(t)) if j != e.direction) and e.line.contains(t[e.direction]):
            return True
    return False
