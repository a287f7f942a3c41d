"""Generalized Cartan matrices, symmetrizers and the shifted Weyl action.

Weights are integer tuples of coroot pairings ``m_j = <lambda, alpha_j^vee>``.
In these coordinates rho is the all-ones vector and ``<alpha_i, alpha_j^vee>``
is ``a_ji``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple, Sequence

Weight = tuple  # tuple[int, ...]


class NotGeneralizedCartan(ValueError):
    pass


class NotSymmetrizable(ValueError):
    pass


@dataclass(frozen=True)
class CartanData:
    A: tuple  # tuple of row tuples
    D: tuple

    @property
    def rank(self) -> int:
        return len(self.A)

    def a(self, i: int, j: int) -> int:
        return self.A[i][j]

    def d(self, i: int) -> int:
        return self.D[i]

    def root_pairing(self, i: int, j: int) -> int:
        """``(alpha_i, alpha_j) = d_i a_ij``."""
        return self.D[i] * self.A[i][j]

    def step(self, i: int, h: Fraction) -> Fraction:
        """``h_i = (alpha_i, alpha_i) h = 2 d_i h``."""
        return 2 * self.D[i] * Fraction(h)

    def neighbours(self, i: int) -> list[int]:
        return [m for m in range(self.rank) if m != i and self.A[i][m] < 0]

    def check_index(self, i: int) -> None:
        if not (isinstance(i, int) and 0 <= i < self.rank):
            raise IndexError(f"direction {i} out of range for rank {self.rank}")


def build_cartan(A: Sequence[Sequence[int]]) -> CartanData:
    """Validate a generalized Cartan matrix and compute its symmetrizer."""
    r = len(A)
    if r == 0 or any(len(row) != r for row in A):
        raise NotGeneralizedCartan("Cartan matrix must be square and non-empty")
    for row in A:
        for v in row:
            if isinstance(v, bool) or not isinstance(v, int):
                raise NotGeneralizedCartan(f"non-integer entry {v!r}")
    for i in range(r):
        if A[i][i] != 2:
            raise NotGeneralizedCartan(f"a_{i}{i} = {A[i][i]}, expected 2")
        for j in range(r):
            if i == j:
                continue
            if A[i][j] > 0:
                raise NotGeneralizedCartan(f"a_{i}{j} = {A[i][j]} is positive")
            if (A[i][j] == 0) != (A[j][i] == 0):
                raise NotGeneralizedCartan(f"zero pattern not symmetric at ({i}, {j})")

    # d_j = d_i a_ij / a_ji along edges of the Dynkin graph
    d: list[Fraction | None] = [None] * r
    for root in range(r):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        component = [root]
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(r):
                if j == i or A[i][j] == 0:
                    continue
                want = d[i] * A[i][j] / A[j][i]
                if d[j] is None:
                    d[j] = want
                    component.append(j)
                    queue.append(j)
                elif d[j] != want:
                    raise NotSymmetrizable(f"inconsistent ratio cycle through {i} and {j}")
        scale = lcm(*(d[k].denominator for k in component))
        for k in component:
            d[k] = d[k] * scale
        g = gcd(*(int(d[k]) for k in component))
        for k in component:
            d[k] = d[k] / g
    D = [int(v) for v in d]
    g = gcd(*D)
    D = tuple(v // g for v in D)
    for i in range(r):
        for j in range(r):
            if D[i] * A[i][j] != D[j] * A[j][i]:
                raise NotSymmetrizable("DA is not symmetric")
    return CartanData(tuple(tuple(row) for row in A), D)


def rho(cartan: CartanData) -> Weight:
    return (1,) * cartan.rank


def is_dominant(w: Weight) -> bool:
    return all(m >= 0 for m in w)


def reflect(cartan: CartanData, w: Weight, i: int) -> Weight:
    """``s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i``."""
    cartan.check_index(i)
    mi = w[i]
    return tuple(w[j] - mi * cartan.A[j][i] for j in range(cartan.rank))


def shifted_reflect(cartan: CartanData, w: Weight, i: int) -> Weight:
    """``s_i . lambda = s_i(lambda + rho) - rho``."""
    cartan.check_index(i)
    k = w[i] + 1
    return tuple(w[j] - k * cartan.A[j][i] for j in range(cartan.rank))


def apply_word(cartan: CartanData, word: Sequence[int], w: Weight) -> Weight:
    """Shifted action of ``s_word[0] ... s_word[-1]``; rightmost letter acts first."""
    for i in reversed(word):
        w = shifted_reflect(cartan, w, i)
    return w


class Orbit(NamedTuple):
    weights: list  # BFS order
    truncated: bool


def shifted_orbit(cartan: CartanData, w0: Weight, max_nodes: int = 10_000) -> Orbit:
    """BFS closure of ``w0`` under all shifted simple reflections."""
    if max_nodes < 1:
        raise ValueError("max_nodes must be positive")
    w0 = tuple(int(v) for v in w0)
    seen = {w0}
    order = [w0]
    queue = deque([w0])
    while queue:
        w = queue.popleft()
        for i in range(cartan.rank):
            v = shifted_reflect(cartan, w, i)
            if v in seen:
                continue
            if len(order) >= max_nodes:
                return Orbit(order, True)
            seen.add(v)
            order.append(v)
            queue.append(v)
    return Orbit(order, False)
