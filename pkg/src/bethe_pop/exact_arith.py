"""Exact rational scalars and univariate polynomials.

Scalars are :class:`fractions.Fraction`.  Polynomials are immutable and keep
their coefficients in ascending degree order with no trailing zeros, so the
zero polynomial is the empty tuple and has degree ``-inf``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, NamedTuple, Sequence, Union

NEG_INF = float("-inf")

Scalar = Union[Fraction, int, str]


def to_rational(value: Scalar) -> Fraction:
    """Coerce ``value`` to a Fraction; floats are refused to keep things exact."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise ValueError(f"expected a rational string, got {text!r}")
    s = str(text).strip()
    if any(ch in s for ch in ".eE"):
        raise ValueError(f"decimal notation not allowed in rational {text!r}")
    return Fraction(s)


class Poly:
    """Univariate polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c: Scalar) -> Poly:
        return cls([c])

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def linear_root(cls, root: Scalar) -> Poly:
        """``x - root``."""
        return cls([-to_rational(root), 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> Poly:
        p = cls.const(1)
        for r in roots:
            p = p * cls.linear_root(r)
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def monic(self) -> Poly:
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic form")
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return Poly(c / lc for c in self.coeffs)

    def __call__(self, t: Scalar) -> Fraction:
        t = to_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                body = mono
            elif mono and c == -1:
                body = "-" + mono
            else:
                cs = format_rational(c)
                if "/" in cs and mono:
                    cs = f"({cs})"
                body = cs + ("*" + mono if mono else "")
            terms.append(body)
        return " + ".join(terms).replace("+ -", "- ")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = to_rational(other)
            return Poly(c * a for a in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other):
        return poly_divmod(self, self._coerce(other))[0]

    def __mod__(self, other):
        return poly_divmod(self, self._coerce(other))[1]

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)


def poly_divmod(f: Poly, d: Poly) -> tuple[Poly, Poly]:
    if d.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(f.coeffs)
    dd = len(d.coeffs) - 1
    lc = d.coeffs[-1]
    if len(rem) <= dd:
        return Poly(), f
    quot = [Fraction(0)] * (len(rem) - dd)
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        q = c / lc
        quot[k - dd] = q
        for j, dj in enumerate(d.coeffs):
            rem[k - dd + j] -= q * dj
    return Poly(quot), Poly(rem[:dd])


def shift(f: Poly, c: Scalar) -> Poly:
    """Return f(x + c) by Taylor shift."""
    c = to_rational(c)
    if c == 0 or f.is_constant():
        return f
    n = len(f.coeffs)
    powers = [Fraction(1)]
    for _ in range(n - 1):
        powers.append(powers[-1] * c)
    out = [Fraction(0)] * n
    for k, a in enumerate(f.coeffs):
        if a == 0:
            continue
        # a * (x + c)^k = sum_j a * C(k, j) c^(k-j) x^j
        for j in range(k + 1):
            out[j] += a * comb(k, j) * powers[k - j]
    return Poly(out)


def discrete_wronskian(f: Poly, g: Poly, step: Scalar) -> Poly:
    """``f(x+step) g(x) - f(x) g(x+step)``."""
    return shift(f, step) * g - f * shift(g, step)


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over the rationals."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = f, g
    while not b.is_zero():
        r = a % b
        a, b = b, (r if r.is_zero() else r.monic())
    return a.monic()


def has_multiple_roots(f: Poly) -> bool:
    if f.is_zero():
        raise ValueError("zero polynomial has no root structure")
    if f.degree < 2:
        return False
    return gcd(f, f.derivative()).degree > 0


def divides(d: Poly, f: Poly) -> bool:
    if d.is_zero():
        raise ZeroDivisionError("zero divisor")
    return (f % d).is_zero()


def coprime(f: Poly, g: Poly) -> bool:
    return gcd(f, g).degree == 0


class RationalRoots(NamedTuple):
    roots: list  # [(Fraction, multiplicity)], sorted by root
    complete: bool


def rational_roots(f: Poly) -> RationalRoots:
    """All rational roots of ``f`` with multiplicities.

    ``complete`` is true when ``f`` splits into rational linear factors.
    """
    if f.is_zero():
        raise ValueError("zero polynomial has every root")
    if f.is_constant():
        return RationalRoots([], True)
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(f.coeffs))
    _, factors = sympy.Poly(expr, x, domain="QQ").factor_list()
    roots = []
    linear_degree = 0
    for fac, mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append((Fraction(int(r.p), int(r.q)), int(mult)))
            linear_degree += int(mult)
    roots.sort()
    # cross-check the extracted factors by exact division
    rest = f.monic()
    for r, m in roots:
        for _ in range(m):
            rest, rem = poly_divmod(rest, Poly.linear_root(r))
            if not rem.is_zero():
                raise ArithmeticError(f"root {r} failed exact division")
    return RationalRoots(roots, linear_degree == f.degree)


class AffineSolution(NamedTuple):
    particular: list  # [Fraction]
    null_basis: list  # [[Fraction]]


def solve_affine_linear(M: Sequence[Sequence[Scalar]], b: Sequence[Scalar],
                        ncols: int | None = None) -> AffineSolution | None:
    """Solve ``M v = b`` exactly by Gauss-Jordan elimination.

    Returns None when inconsistent, otherwise a particular solution (free
    variables set to zero) and a basis of the null space of ``M``.
    ``ncols`` is needed only when ``M`` has no rows.
    """
    rows = [[to_rational(v) for v in row] for row in M]
    rhs = [to_rational(v) for v in b]
    if len(rows) != len(rhs):
        raise ValueError("row count of M does not match length of b")
    n = len(rows[0]) if rows else (ncols or 0)
    if any(len(row) != n for row in rows):
        raise ValueError("ragged matrix")
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = 1 / rows[r][c]
        if inv != 1:
            rows[r] = [v * inv for v in rows[r]]
            rhs[r] *= inv
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
                rhs[i] -= f * rhs[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    if any(v != 0 for v in rhs[r:]):
        return None
    particular = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        particular[c] = rhs[i]
    pivot_set = set(pivots)
    null_basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * n
        vec[free] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][free]
        null_basis.append(vec)
    return AffineSolution(particular, null_basis)
