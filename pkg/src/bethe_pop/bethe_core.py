"""Master polynomials, genericity, divisibility and fertility for XXX Bethe data.

Directions ``i`` are 0-based here; the CLI and file formats are 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exact_arith import (
    Poly,
    coprime,
    discrete_wronskian,
    divides,
    has_multiple_roots,
    shift,
    solve_affine_linear,
    to_rational,
)
from .kac_moody import CartanData, Weight, is_dominant, shifted_reflect

STEP_CONVENTIONS = ("hi", "hi/2")


class InvalidProblem(ValueError):
    pass


class NotFertile(Exception):
    def __init__(self, direction: int, message: str = ""):
        self.direction = direction
        super().__init__(message or f"tuple is not fertile in direction {direction + 1}")


class WronskianKernelError(RuntimeError):
    """The homogeneous Wronskian equation had a kernel other than span{y_i}."""


class EquivalenceViolation(AssertionError):
    """Divisibility and fertility disagreed on a generic tuple."""


@dataclass(frozen=True)
class BetheProblem:
    cartan: CartanData
    h: Fraction
    z: tuple
    lambdas: tuple  # one Weight per marked point
    wronskian_step: str = "hi"

    def __post_init__(self):
        object.__setattr__(self, "h", to_rational(self.h))
        object.__setattr__(self, "z", tuple(to_rational(v) for v in self.z))
        object.__setattr__(self, "lambdas", tuple(tuple(int(v) for v in w) for w in self.lambdas))
        if self.h == 0:
            raise InvalidProblem("h must be non-zero")
        if len(self.z) != len(self.lambdas):
            raise InvalidProblem("need exactly one weight per point")
        if len(set(self.z)) != len(self.z):
            raise InvalidProblem("points must be distinct")
        for w in self.lambdas:
            if len(w) != self.cartan.rank:
                raise InvalidProblem(f"weight {list(w)} has wrong length for rank {self.cartan.rank}")
            if not is_dominant(w):
                raise InvalidProblem(f"weight {list(w)} is not dominant")
        if self.wronskian_step not in STEP_CONVENTIONS:
            raise InvalidProblem(f"unknown wronskian step convention {self.wronskian_step!r}")

    @property
    def rank(self) -> int:
        return self.cartan.rank

    def step(self, i: int) -> Fraction:
        return self.cartan.step(i, self.h)

    def pairing(self, s: int, i: int) -> int:
        """``<Lambda_s, alpha_i^vee>``."""
        return self.lambdas[s][i]

    def total_weight(self) -> Weight:
        return tuple(sum(w[j] for w in self.lambdas) for j in range(self.rank))

    def with_step(self, convention: str) -> BetheProblem:
        return BetheProblem(self.cartan, self.h, self.z, self.lambdas, convention)


@dataclass(frozen=True)
class PolyTuple:
    """r-tuple of nonzero polynomials, stored monic (projective classes)."""

    polys: tuple

    def __post_init__(self):
        ps = []
        for p in self.polys:
            p = p if isinstance(p, Poly) else Poly(p)
            if p.is_zero():
                raise ValueError("tuple entries must be nonzero polynomials")
            ps.append(p.monic())
        object.__setattr__(self, "polys", tuple(ps))

    @classmethod
    def ones(cls, r: int) -> PolyTuple:
        return cls((Poly.const(1),) * r)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i) -> Poly:
        return self.polys[i]

    @property
    def degrees(self) -> tuple:
        return tuple(p.degree for p in self.polys)

    @property
    def key(self) -> tuple:
        return tuple(p.coeffs for p in self.polys)

    def replace(self, i: int, poly: Poly) -> PolyTuple:
        ps = list(self.polys)
        ps[i] = poly
        return PolyTuple(tuple(ps))


def _check_tuple(p: BetheProblem, t: PolyTuple) -> None:
    if len(t) != p.rank:
        raise ValueError(f"tuple has {len(t)} entries, rank is {p.rank}")


def master_polynomial(p: BetheProblem, i: int) -> Poly:
    p.cartan.check_index(i)
    hi = p.step(i)
    roots = []
    for s, zs in enumerate(p.z):
        L = p.pairing(s, i)
        roots.extend(zs + L * hi / 2 - k * hi for k in range(1, L + 1))
    return Poly.from_roots(roots)


def weight_at_infinity(p: BetheProblem, t_or_degrees) -> Weight:
    degrees = t_or_degrees.degrees if isinstance(t_or_degrees, PolyTuple) else tuple(t_or_degrees)
    A = p.cartan.A
    tot = p.total_weight()
    return tuple(tot[j] - sum(degrees[i] * A[j][i] for i in range(p.rank)) for j in range(p.rank))


def _neighbour_shift(p: BetheProblem, i: int, m: int, k: int) -> Fraction:
    """Argument shift of the k-th factor y_m(x + a_im h_i/2 + k*step) in the Wronskian equation."""
    hi = p.step(i)
    step = hi if p.wronskian_step == "hi" else hi / 2
    return p.cartan.a(i, m) * hi / 2 + k * step


def wronskian_rhs(p: BetheProblem, t: PolyTuple, i: int) -> Poly:
    _check_tuple(p, t)
    out = master_polynomial(p, i)
    for m in p.cartan.neighbours(i):
        for k in range(1, -p.cartan.a(i, m) + 1):
            out = out * shift(t[m], _neighbour_shift(p, i, m, k))
    return out


class Genericity(NamedTuple):
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def is_generic(p: BetheProblem, t: PolyTuple) -> Genericity:
    """Squarefree y_i with no roots shared with the designated shifted partners."""
    _check_tuple(p, t)
    bad = []
    for i in range(p.rank):
        y = t[i]
        if y.is_constant():
            continue
        hi = p.step(i)
        if has_multiple_roots(y):
            bad.append(f"y_{i + 1} has a multiple root")
        if not coprime(y, shift(y, hi)):
            bad.append(f"y_{i + 1} shares a root with y_{i + 1}(x+h_{i + 1})")
        if not coprime(y, master_polynomial(p, i)):
            bad.append(f"y_{i + 1} shares a root with T_{i + 1}")
        for m in p.cartan.neighbours(i):
            a = p.cartan.a(i, m)
            for k in range(1, -a + 1):
                if not coprime(y, shift(t[m], a * hi / 2 + k * hi)):
                    bad.append(f"y_{i + 1} shares a root with y_{m + 1}(x{_fmt_shift(a * hi / 2 + k * hi)})")
    return Genericity(not bad, bad)


def _fmt_shift(c: Fraction) -> str:
    from .exact_arith import format_rational

    return ("+" if c >= 0 else "-") + format_rational(abs(c))


def division_polynomial(p: BetheProblem, t: PolyTuple, i: int) -> Poly:
    """The polynomial whose divisibility by y_i characterises the Bethe equations."""
    _check_tuple(p, t)
    p.cartan.check_index(i)
    hi = p.step(i)
    left = Poly.const(1)
    right = Poly.const(1)
    for s, zs in enumerate(p.z):
        L = p.pairing(s, i)
        if L == 0:
            # (x - z_s) would divide both terms; keeping it makes a root at z_s pass spuriously
            continue
        left = left * Poly.linear_root(zs + L * hi / 2)
        right = right * Poly.linear_root(zs - L * hi / 2)
    for m in p.cartan.neighbours(i):
        a = p.cartan.a(i, m)
        left = left * shift(t[m], a * hi / 2)
        right = right * shift(t[m], -a * hi / 2)
    return left * shift(t[i], hi) + right * shift(t[i], -hi)


def divisibility_check(p: BetheProblem, t: PolyTuple, i: int) -> bool:
    return divides(t[i], division_polynomial(p, t, i))


def expected_descendant_degree(p: BetheProblem, t_or_degrees, i: int) -> int:
    """Degree forced on a descendant whose degree differs from l_i."""
    degrees = t_or_degrees.degrees if isinstance(t_or_degrees, PolyTuple) else tuple(t_or_degrees)
    w = weight_at_infinity(p, degrees)
    return degrees[i] + w[i] + 1


@dataclass(frozen=True)
class FertilityLine:
    """The family ``canonical + c * offset`` of solutions of the i-th Wronskian equation.

    ``offset`` is y_i itself.  ``canonical`` is the monic member whose
    coefficient of ``x^deg(offset)`` vanishes.
    """

    direction: int
    canonical: Poly
    offset: Poly
    degree_changed: bool
    exceptional: bool = False

    def member(self, c) -> Poly:
        return self.canonical + self.offset * to_rational(c)

    def contains(self, f: Poly) -> bool:
        """Whether ``f`` lies in the projective line spanned by canonical and offset."""
        if f.is_zero():
            return False
        n = max(len(f.coeffs), len(self.canonical.coeffs), len(self.offset.coeffs))
        M = [[self.canonical.coeff(k), self.offset.coeff(k)] for k in range(n)]
        return solve_affine_linear(M, [f.coeff(k) for k in range(n)]) is not None


def fertility_solve(p: BetheProblem, t: PolyTuple, i: int) -> FertilityLine:
    """Solve ``W(y_i, y~, h_i) = rhs_i`` for y~ as an exact linear system.

    Raises NotFertile when no polynomial solution exists.
    """
    _check_tuple(p, t)
    p.cartan.check_index(i)
    y = t[i]
    li = y.degree
    hi = p.step(i)
    rhs = wronskian_rhs(p, t, i)
    bound = max(li, expected_descendant_degree(p, t, i))
    columns = [discrete_wronskian(y, Poly([0] * k + [1]), hi) for k in range(bound + 1)]
    nrows = max([len(c.coeffs) for c in columns] + [len(rhs.coeffs)])
    M = [[col.coeff(r) for col in columns] for r in range(nrows)]
    sol = solve_affine_linear(M, [rhs.coeff(r) for r in range(nrows)], ncols=bound + 1)
    if sol is None:
        raise NotFertile(i)
    if len(sol.null_basis) != 1 or not Poly(sol.null_basis[0]).monic() == y:
        raise WronskianKernelError(
            f"direction {i + 1}: homogeneous solutions are not span(y_{i + 1})"
        )
    particular = Poly(sol.particular)
    reduced = particular - y * particular.coeff(li)
    if reduced.is_zero():
        # only possible when the right side vanishes
        raise WronskianKernelError(f"direction {i + 1}: degenerate zero solution")
    canonical = reduced.monic()
    exceptional = canonical.degree == li
    return FertilityLine(i, canonical, y, canonical.degree != li, exceptional)


def is_fertile(p: BetheProblem, t: PolyTuple, i: int) -> bool:
    try:
        fertility_solve(p, t, i)
    except NotFertile:
        return False
    return True


class Verdict(str, enum.Enum):
    BETHE = "Bethe"
    FERTILE_NOT_GENERIC = "FertileNotGeneric"
    NOT_FERTILE = "NotFertile"


@dataclass
class BetheReport:
    verdict: Verdict
    generic: Genericity
    divisible: list
    fertile: list
    lines: list = field(default_factory=list)  # FertilityLine or None per direction

    @property
    def agree(self) -> bool:
        return self.divisible == self.fertile


def bethe_report(p: BetheProblem, t: PolyTuple) -> BetheReport:
    _check_tuple(p, t)
    gen = is_generic(p, t)
    divisible = [divisibility_check(p, t, i) for i in range(p.rank)]
    lines = []
    for i in range(p.rank):
        try:
            lines.append(fertility_solve(p, t, i))
        except NotFertile:
            lines.append(None)
    fertile = [ln is not None for ln in lines]
    if gen.ok and p.wronskian_step == "hi" and divisible != fertile:
        raise EquivalenceViolation(
            f"divisibility {divisible} and fertility {fertile} disagree on a generic tuple"
        )
    if gen.ok and all(divisible):
        verdict = Verdict.BETHE
    elif all(fertile) and not gen.ok:
        verdict = Verdict.FERTILE_NOT_GENERIC
    else:
        verdict = Verdict.NOT_FERTILE
    return BetheReport(verdict, gen, divisible, fertile, lines)


def is_bethe(p: BetheProblem, t: PolyTuple) -> Verdict:
    return bethe_report(p, t).verdict


def obstruction_fixed_point(p: BetheProblem, degrees: Sequence[int]) -> list:
    """Directions i with ``s_i . Lambda_inf = Lambda_inf``; non-empty means no Bethe solutions."""
    w = weight_at_infinity(p, degrees)
    return [i for i in range(p.rank) if w[i] == -1]


class ConeResult(NamedTuple):
    obstructed: bool
    truncated: bool
    witness: tuple | None  # a reachable degree vector with a negative entry
    visited: int


def obstruction_cone(p: BetheProblem, degrees: Sequence[int], max_nodes: int = 10_000) -> ConeResult:
    """Propagate degree vectors along the shifted Weyl orbit and look for negative entries.

    Works directly on degree vectors, so singular (affine) Cartan matrices
    are handled without inverting the pairing.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be positive")
    start = tuple(int(v) for v in degrees)
    if any(v < 0 for v in start):
        return ConeResult(True, False, start, 1)
    seen = {start}
    queue = [start]
    head = 0
    while head < len(queue):
        l = queue[head]
        head += 1
        w = weight_at_infinity(p, l)
        for i in range(p.rank):
            nxt = l[:i] + (l[i] + w[i] + 1,) + l[i + 1:]
            if nxt in seen:
                continue
            # weight bookkeeping must follow the shifted reflection
            assert weight_at_infinity(p, nxt) == shifted_reflect(p.cartan, w, i)
            if nxt[i] < 0:
                return ConeResult(True, False, nxt, len(seen) + 1)
            if len(seen) >= max_nodes:
                return ConeResult(False, True, None, len(seen))
            seen.add(nxt)
            queue.append(nxt)
    return ConeResult(False, False, None, len(seen))
