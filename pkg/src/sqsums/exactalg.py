"""Exact rational polynomial and rational-function algebra.

Builds the squared-basis sums that admit exact forms (the Bernstein
polynomial F_n, the Baskakov rational function G_n, the Meyer-Konig-Zeller
J_n and the Bleimann-Butzer-Hahn U_n) over arbitrary-precision rationals,
and verifies their recurrences, differential equations and Heun-form
solutions with exact zero residuals.

Scope is deliberately small: ring operations, formal derivatives, Moebius
substitutions and exact evaluation.  No factorization or general computer
algebra.  Every denominator produced here is a product of linear factors
with roots in {0, 1, -1, 1/2, -1/2}, which the reduction fast path exploits;
a generic primitive-remainder-sequence gcd remains as fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .core import ParameterError, Params, RationalLike

__all__ = [
    "HeunParams",
    "OdeSpec",
    "RationalFn",
    "RationalPoly",
    "UnsupportedFamilyError",
    "eq_f",
    "eq_g",
    "eq_j",
    "eq_s",
    "eq_u",
    "f_poly_direct",
    "f_poly_parseval",
    "f_value",
    "g_rational",
    "g_series_coeffs",
    "g_value",
    "heun_residual",
    "j_rational",
    "j_series_coeffs",
    "j_value",
    "ode_residual_poly",
    "poly_on_rational",
    "recurrence_check",
    "recurrence_residuals",
    "u_rational",
    "u_value",
]

CoefLike = Union[int, Fraction]


class UnsupportedFamilyError(ValueError):
    """Raised for differential equations outside the exactly representable families."""


class RationalPoly:
    """Dense univariate polynomial with Fraction coefficients, ascending degree.

    ``var`` is a symbol descriptor only ('x', 's', 'u', 'w', 't'); binary
    operations require matching descriptors.  Trailing zeros are trimmed,
    the zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[CoefLike] = (), var: str = "x") -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("RationalPoly is immutable")

    @classmethod
    def zero(cls, var: str = "x") -> "RationalPoly":
        return cls((), var)

    @classmethod
    def one(cls, var: str = "x") -> "RationalPoly":
        return cls((1,), var)

    @classmethod
    def x(cls, var: str = "x") -> "RationalPoly":
        return cls((0, 1), var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def _check_var(self, other: "RationalPoly") -> None:
        if self.var != other.var and self.coeffs and other.coeffs:
            raise ValueError(f"mixed variables {self.var!r} and {other.var!r}")

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPoly((other,), self.var)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly((-c for c in self.coeffs), self.var)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPoly((other,), self.var)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        self._check_var(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPoly(out, self.var if self.coeffs else other.var)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, RationalPoly) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalPoly.zero(self.var)
            return RationalPoly((c * other for c in self.coeffs), self.var)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        self._check_var(other)
        if self.is_zero or other.is_zero:
            return RationalPoly.zero(self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return RationalPoly(out, self.var if self.coeffs else other.var)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (Fraction(1) / Fraction(scalar))

    def __pow__(self, k: int) -> "RationalPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = RationalPoly.one(self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def derivative(self) -> "RationalPoly":
        return RationalPoly(
            (i * c for i, c in enumerate(self.coeffs) if i > 0), self.var
        )

    def __call__(self, v):
        """Horner evaluation; exact on Fraction input, float on float."""
        acc = v * 0
        for c in reversed(self.coeffs):
            acc = acc * v + (float(c) if isinstance(v, float) else c)
        return acc

    def compose_linear(self, a: CoefLike, b: CoefLike) -> "RationalPoly":
        """p(a*X + b); the result is reported in variable 'x'."""
        arg = RationalPoly((b, a), "x")
        acc = RationalPoly.zero("x")
        for c in reversed(self.coeffs):
            acc = acc * arg + c
        return acc

    def divmod_linear(self, root: Fraction) -> tuple["RationalPoly", Fraction]:
        """Synthetic division by the monic linear (X - root)."""
        if self.is_zero:
            return self, Fraction(0)
        q = [Fraction(0)] * (len(self.coeffs) - 1)
        acc = Fraction(0)
        for i in range(len(self.coeffs) - 1, 0, -1):
            acc = self.coeffs[i] + root * acc
            q[i - 1] = acc
        rem = self.coeffs[0] + root * acc
        return RationalPoly(q, self.var), rem

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalPoly":
        return cls((Fraction(c) for c in data["coeffs"]), data.get("var", "x"))

    def __repr__(self) -> str:
        if self.is_zero:
            return "RationalPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*{self.var}^{i}" if i else f"{c}")
        return "RationalPoly(" + " + ".join(parts) + ")"


# Roots of every linear denominator factor this artifact constructs.
_CANDIDATE_ROOTS = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(1, 2),
    Fraction(-1, 2),
)

_COPRIME_GAP = 1 << 16


def _int_clear(p: RationalPoly) -> list[int]:
    """Primitive integer coefficient list (content removed)."""
    den = math.lcm(*(c.denominator for c in p.coeffs)) if p.coeffs else 1
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    return [c // g for c in ints] if g > 1 else ints


def _certified_coprime(a: RationalPoly, b: RationalPoly) -> bool:
    """True certifies gcd(a, b) = 1; False is inconclusive.

    Any common factor g evaluated at an integer k beyond the Cauchy root
    bound M satisfies |g(k)| >= (k - M)^deg(g), so a small integer gcd of
    the two values at k = M + 2^16 rules out a nonconstant common factor.
    """
    ia, ib = _int_clear(a), _int_clear(b)

    def root_bound(cs: list[int]) -> int:
        lead = abs(cs[-1])
        m = max(abs(c) for c in cs[:-1]) if len(cs) > 1 else 0
        return 1 + (m + lead - 1) // lead

    k = min(root_bound(ia), root_bound(ib)) + _COPRIME_GAP

    def eval_int(cs: list[int]) -> int:
        acc = 0
        for c in reversed(cs):
            acc = acc * k + c
        return acc

    return math.gcd(abs(eval_int(ia)), abs(eval_int(ib))) < _COPRIME_GAP


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials (lead(b)-scaled)."""
    r = list(a)
    lead_b = b[-1]
    while len(r) >= len(b) and any(r):
        if r[-1] == 0:
            r.pop()
            continue
        shift = len(r) - len(b)
        coef = r[-1]
        r = [c * lead_b for c in r]
        for i, bc in enumerate(b):
            r[shift + i] -= coef * bc
        while r and r[-1] == 0:
            r.pop()
    return r


def _primitive(cs: list[int]) -> list[int]:
    g = 0
    for c in cs:
        g = math.gcd(g, abs(c))
    return [c // g for c in cs] if g > 1 else cs


def _poly_gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    """Monic gcd by a primitive pseudo-remainder sequence (fallback path)."""
    pa, pb = _int_clear(a), _int_clear(b)
    if len(pa) < len(pb):
        pa, pb = pb, pa
    while pb:
        pa, pb = pb, _primitive(_pseudo_rem(pa, pb))
    lead = Fraction(pa[-1])
    return RationalPoly((Fraction(c) / lead for c in pa), a.var)


def _reduced_pair(num: RationalPoly, den: RationalPoly) -> tuple[RationalPoly, RationalPoly]:
    """gcd-reduce and content-normalize (den primitive integer, positive lead)."""
    if den.is_zero:
        raise ZeroDivisionError("rational function with zero denominator")
    var = den.var if num.is_zero else num.var
    if num.is_zero:
        return RationalPoly.zero(var), RationalPoly.one(var)
    if den.degree > 0:
        for r in _CANDIDATE_ROOTS:
            while den.degree > 0 and den(r) == 0 and num(r) == 0:
                num, _ = num.divmod_linear(r)
                den, _ = den.divmod_linear(r)
        if den.degree > 0 and not _certified_coprime(num, den):
            g = _poly_gcd(num, den)
            if g.degree > 0:
                num = _exact_div(num, g)
                den = _exact_div(den, g)
    if den.degree == 0:
        return num / den.coeffs[0], RationalPoly.one(var)
    scale = Fraction(math.lcm(*(c.denominator for c in den.coeffs)))
    ints = [c * scale for c in den.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(int(c)))
    scale /= g
    if ints[-1] < 0:
        scale = -scale
    return num * scale, den * scale


def _exact_div(p: RationalPoly, d: RationalPoly) -> RationalPoly:
    """Exact polynomial quotient (remainder must vanish)."""
    if d.is_zero:
        raise ZeroDivisionError
    out = [Fraction(0)] * (p.degree - d.degree + 1)
    rem = list(p.coeffs)
    dl = d.coeffs[-1]
    for i in range(len(out) - 1, -1, -1):
        q = rem[i + d.degree] / dl
        out[i] = q
        if q:
            for j, dc in enumerate(d.coeffs):
                rem[i + j] -= q * dc
    if any(rem[: d.degree]):
        raise ArithmeticError("division was not exact")
    return RationalPoly(out, p.var)


class RationalFn:
    """Quotient of RationalPoly values, stored gcd-reduced and normalized."""

    __slots__ = ("num", "den")

    def __init__(
        self,
        num: Union[RationalPoly, CoefLike],
        den: Union[RationalPoly, CoefLike, None] = None,
    ) -> None:
        if not isinstance(num, RationalPoly):
            num = RationalPoly((num,))
        if den is None:
            den = RationalPoly.one(num.var)
        elif not isinstance(den, RationalPoly):
            den = RationalPoly((den,), num.var)
        if num.degree > 0 and den.degree > 0 and num.var != den.var:
            raise ValueError(f"mixed variables {num.var!r} and {den.var!r}")
        num, den = _reduced_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, RationalPoly)):
            other = RationalFn(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    @staticmethod
    def _coerce(v) -> "RationalFn":
        if isinstance(v, RationalFn):
            return v
        if isinstance(v, (int, Fraction, RationalPoly)):
            return RationalFn(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to RationalFn")

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFn(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def derivative(self) -> "RationalFn":
        return RationalFn(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, v):
        dv = self.den(v)
        if dv == 0:
            raise ZeroDivisionError(f"evaluation at a pole ({v})")
        return self.num(v) / dv

    def compose_mobius(self, a: CoefLike, b: CoefLike, c: CoefLike, d: CoefLike) -> "RationalFn":
        """Substitute X -> (a*X + b)/(c*X + d)."""
        if Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c) == 0:
            raise ValueError("degenerate substitution")
        num_c, den_n = _poly_compose_mobius(self.num, a, b, c, d)
        den_c, den_d = _poly_compose_mobius(self.den, a, b, c, d)
        return RationalFn(num_c * den_d, den_c * den_n)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFn":
        return cls(RationalPoly.from_json(data["num"]), RationalPoly.from_json(data["den"]))

    def __repr__(self) -> str:
        if self.is_polynomial:
            return f"RationalFn({self.num!r})"
        return f"RationalFn({self.num!r} / {self.den!r})"


def _poly_compose_mobius(
    p: RationalPoly, a: CoefLike, b: CoefLike, c: CoefLike, d: CoefLike
) -> tuple[RationalPoly, RationalPoly]:
    """p((a*X+b)/(c*X+d)) as numerator and (c*X+d)^deg denominator."""
    if p.is_zero:
        return RationalPoly.zero("x"), RationalPoly.one("x")
    lin_num = RationalPoly((b, a), "x")
    lin_den = RationalPoly((d, c), "x")
    deg = p.degree
    # Horner with a denominator ladder: acc_k = acc_{k+1} * lin_num + c_k * lin_den^(deg-k)
    acc = RationalPoly.zero("x")
    power = RationalPoly.one("x")
    for i, c_i in enumerate(reversed(p.coeffs)):
        if i == 0:
            acc = RationalPoly((c_i,), "x")
        else:
            power = power * lin_den
            acc = acc * lin_num + c_i * power
    return acc, power if deg > 0 else RationalPoly.one("x")


def poly_on_rational(p: RationalPoly, f: RationalFn) -> RationalFn:
    """Compose a polynomial with a rational function, p(f(X))."""
    acc = RationalFn(RationalPoly.zero("x"))
    for c in reversed(p.coeffs):
        acc = acc * f + RationalFn(RationalPoly((c,), "x"))
    return acc


# ---------------------------------------------------------------------------
# Squared-basis sums in exact form
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def f_poly_direct(n: int) -> RationalPoly:
    """Squared Bernstein-basis sum as an exact polynomial in x (degree 2n).

    Expands sum_k (C(n,k) x^k (1-x)^(n-k))^2 in the monomial basis.  The
    index 0 case is the constant 1.
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    out = [0] * (2 * n + 1)
    for k in range(n + 1):
        b = math.comb(n, k) ** 2
        m = 2 * (n - k)
        for j in range(m + 1):
            out[2 * k + j] += b * math.comb(m, j) * (-1 if j & 1 else 1)
    return RationalPoly(out, "x")


@lru_cache(maxsize=None)
def f_poly_parseval(n: int) -> RationalPoly:
    """The same sum in the centered variable s = x - 1/2.

    Only even powers appear and every coefficient is a positive rational,
    which makes symmetry about 1/2 and convexity immediate.
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    pref = Fraction(math.comb(2 * n, n), 4 ** n)
    out = [Fraction(0)] * (2 * n + 1)
    for k in range(n + 1):
        out[2 * k] = pref * 4 ** k * math.comb(n, k) ** 2 / math.comb(2 * n, 2 * k)
    return RationalPoly(out, "s")


def f_value(n: int, x):
    """Evaluate F_n through its positive centered coefficients.

    Exact on Fraction input; on floats the all-positive Horner sum keeps the
    relative error at rounding level.
    """
    cs = f_poly_parseval(n).coeffs[::2]
    if isinstance(x, Fraction):
        s2 = (x - Fraction(1, 2)) ** 2
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * s2 + c
        return acc
    s2 = (float(x) - 0.5) ** 2
    acc = 0.0
    for c in reversed(cs):
        acc = acc * s2 + float(c)
    return acc


@lru_cache(maxsize=None)
def g_series_coeffs(n: int) -> RationalPoly:
    """Squared Baskakov-basis sum as an odd polynomial in u = 1/(1+2x).

    The factorial weight carries the square of (n-k-1)!; the unsquared
    variant fails the exact cross-check against the Meyer-Konig-Zeller
    series under the u <-> w substitution (first at n = 3).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [Fraction(0)] * (2 * n)
    for k in range(n):
        out[2 * k + 1] = Fraction(
            math.factorial(2 * k) * math.factorial(2 * n - 2 * k - 2),
            math.factorial(k) ** 2 * math.factorial(n - k - 1) ** 2 * 4 ** (n - 1),
        )
    return RationalPoly(out, "u")


@lru_cache(maxsize=None)
def g_rational(n: int) -> RationalFn:
    """G_n as a rational function of x (u-series with u = 1/(1+2x))."""
    p = g_series_coeffs(n)
    num, den = _poly_compose_mobius(p, 0, 1, 2, 1)
    return RationalFn(num, den)


def g_value(n: int, x):
    """Evaluate G_n through its positive odd u-coefficients."""
    cs = g_series_coeffs(n).coeffs[1::2]
    if isinstance(x, Fraction):
        u = Fraction(1) / (1 + 2 * x)
        u2 = u * u
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * u2 + c
        return acc * u
    u = 1.0 / (1.0 + 2.0 * float(x))
    u2 = u * u
    acc = 0.0
    for c in reversed(cs):
        acc = acc * u2 + float(c)
    return acc * u


@lru_cache(maxsize=None)
def j_series_coeffs(n: int) -> RationalPoly:
    """Squared Meyer-Konig-Zeller sum as an odd polynomial in w = (1-x)/(1+x)."""
    if n < 0:
        raise ValueError("n must be a natural number")
    out = [Fraction(0)] * (2 * n + 2)
    for k in range(n + 1):
        out[2 * k + 1] = Fraction(
            math.factorial(2 * k) * math.factorial(2 * n - 2 * k),
            math.factorial(k) ** 2 * math.factorial(n - k) ** 2 * 4 ** n,
        )
    return RationalPoly(out, "w")


@lru_cache(maxsize=None)
def j_rational(n: int) -> RationalFn:
    """J_n as a rational function of x (w-series with w = (1-x)/(1+x))."""
    p = j_series_coeffs(n)
    num, den = _poly_compose_mobius(p, -1, 1, 1, 1)
    return RationalFn(num, den)


def j_value(n: int, x):
    """Evaluate J_n through its positive odd w-coefficients."""
    cs = j_series_coeffs(n).coeffs[1::2]
    if isinstance(x, Fraction):
        w = (1 - x) / (1 + x)
        w2 = w * w
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * w2 + c
        return acc * w
    xf = float(x)
    w = (1.0 - xf) / (1.0 + xf)
    w2 = w * w
    acc = 0.0
    for c in reversed(cs):
        acc = acc * w2 + float(c)
    return acc * w


@lru_cache(maxsize=None)
def u_rational(n: int) -> RationalFn:
    """U_n as a rational function of x, built twice and cross-checked.

    Route one expands the even series in v = (x-1)/(x+1); route two
    substitutes s = (x-1)/(2(x+1)) into the centered Bernstein coefficients.
    The two constructions must agree exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pref = Fraction(math.comb(2 * n, n), 4 ** n)
    series = [Fraction(0)] * (2 * n + 1)
    for k in range(n + 1):
        series[2 * k] = pref * math.comb(n, k) ** 2 / math.comb(2 * n, 2 * k)
    vnum, vden = _poly_compose_mobius(RationalPoly(series, "v"), 1, -1, 1, 1)
    route_one = RationalFn(vnum, vden)
    route_two = RationalFn(f_poly_parseval(n)).compose_mobius(1, -1, 2, 2)
    if route_one != route_two:
        raise ArithmeticError(f"the two constructions of U_{n} disagree")
    return route_one


def u_value(n: int, x):
    """Evaluate U_n as F_n at x/(1+x)."""
    if isinstance(x, Fraction):
        return f_value(n, x / (1 + x))
    xf = float(x)
    return f_value(n, xf / (1.0 + xf))


# ---------------------------------------------------------------------------
# Recurrences
# ---------------------------------------------------------------------------


def _poly(coeffs: Sequence[CoefLike]) -> RationalPoly:
    return RationalPoly(coeffs, "x")


def recurrence_residuals(
    f_prev: RationalPoly, f_n: RationalPoly, f_next: RationalPoly, n: int
) -> tuple[RationalPoly, RationalPoly, RationalPoly]:
    """Exact residual polynomials of the three F-family relations.

    All three reduce to the zero polynomial when the inputs are the genuine
    consecutive squared-Bernstein sums of index n-1, n, n+1.
    """
    one_m2x = _poly((1, -2))
    sq = one_m2x * one_m2x
    r1 = 2 * (n + 1) * f_next - (2 * n + 1) * (1 + sq) * f_n + 2 * n * sq * f_prev
    w = _poly((1, -2, 2))  # 1 - 2x(1-x)
    r2 = one_m2x * (f_next.derivative() - w * f_n.derivative()) - (
        2 * _poly((n, 2, -2)) * f_n - 2 * (n + 1) * f_next
    )
    r3 = f_next.derivative() - sq * f_prev.derivative() - 2 * one_m2x * (
        (2 * n - 1) * f_prev - (2 * n + 1) * f_n
    )
    return r1, r2, r3


def recurrence_check(n: int) -> bool:
    """True iff the three-term and both derivative relations hold exactly at n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rs = recurrence_residuals(f_poly_direct(n - 1), f_poly_direct(n), f_poly_direct(n + 1), n)
    return all(r.is_zero for r in rs)


# ---------------------------------------------------------------------------
# Differential equations and Heun forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OdeSpec:
    """Second-order linear operator a2*y'' + a1*y' + a0*y."""

    label: str
    a2: RationalPoly
    a1: RationalPoly
    a0: RationalPoly


def eq_s(params: Params) -> OdeSpec:
    """The general-family equation, exactly representable only for c = +-1."""
    if params.c not in (Fraction(-1), Fraction(1)):
        raise UnsupportedFamilyError(
            f"exact residuals support c in {{-1, 1}}, got c={params.c}"
        )
    n, c = params.n, params.c
    a2 = _poly((0, 1)) * _poly((1, c)) * _poly((1, 2 * c))
    a1 = 4 * (n + c) * _poly((0, 1)) * _poly((1, c)) + _poly((1,))
    a0 = 2 * n * _poly((1, 2 * c))
    return OdeSpec(f"S(n={n}, c={c})", a2, a1, a0)


def eq_f(n: int) -> OdeSpec:
    a2 = _poly((0, 1)) * _poly((1, -1)) * _poly((1, -2))
    a1 = _poly((1,)) + 4 * (n - 1) * _poly((0, 1)) * _poly((1, -1))
    a0 = 2 * n * _poly((1, -2))
    return OdeSpec(f"F_{n}", a2, a1, a0)


def eq_g(n: int) -> OdeSpec:
    a2 = _poly((0, 1)) * _poly((1, 1)) * _poly((1, 2))
    a1 = 4 * (n + 1) * _poly((0, 1)) * _poly((1, 1)) + _poly((1,))
    a0 = 2 * n * _poly((1, 2))
    return OdeSpec(f"G_{n}", a2, a1, a0)


def eq_j(n: int) -> OdeSpec:
    a2 = _poly((0, 1)) * _poly((1, 1)) * _poly((1, -1)) ** 2
    a1 = -1 * _poly((1, -1)) * _poly((-1, -4 * (n + 1), 1))
    a0 = 2 * (n + 1) * _poly((1, 1))
    return OdeSpec(f"J_{n}", a2, a1, a0)


def eq_u(n: int) -> OdeSpec:
    a2 = _poly((0, 1)) * _poly((1, -1)) * _poly((1, 1)) ** 2
    a1 = _poly((1, 1)) * _poly((1, 4 * n, -1))
    a0 = 2 * n * _poly((1, -1))
    return OdeSpec(f"U_{n}", a2, a1, a0)


def ode_residual_poly(y: Union[RationalPoly, RationalFn], ode: OdeSpec) -> RationalFn:
    """Exact residual of the named equation applied to y; zero iff y solves it."""
    f = y if isinstance(y, RationalFn) else RationalFn(y)
    d1 = f.derivative()
    d2 = d1.derivative()
    return d2 * RationalFn(ode.a2) + d1 * RationalFn(ode.a1) + f * RationalFn(ode.a0)


@dataclass(frozen=True)
class HeunParams:
    """The six constants of the Heun equation with singular points 0, 1/2, 1.

    The accessory parameter is ``q``.  Well-formed sets satisfy
    gamma + delta + epsilon = alpha + beta + 1.
    """

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    epsilon: Fraction
    q: Fraction

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta", "epsilon", "q"):
            value = getattr(self, name)
            try:
                object.__setattr__(self, name, Fraction(value))
            except (TypeError, ValueError) as exc:
                raise ParameterError(f"Heun parameter {name} must be rational") from exc

    @classmethod
    def for_s_family(cls, n: RationalLike, c: RationalLike) -> "HeunParams":
        """Parameter set solved by the reflected sum S(-x/c)."""
        n, c = Fraction(n), Fraction(c)
        if c == 0:
            raise ParameterError("the Heun form needs c != 0")
        return cls(Fraction(1), 2 * n / c, Fraction(1), Fraction(1), 2 * n / c, n / c)

    @classmethod
    def polynomial_case(cls, n: int) -> "HeunParams":
        """Parameters for which the degree-2n polynomial F_n is a solution."""
        return cls.for_s_family(n, -1)

    @classmethod
    def rational_case(cls, n: int) -> "HeunParams":
        """Parameters for which the reflected rational G_n(-x) is a solution."""
        return cls.for_s_family(n, 1)


_TRANSFORMS = ("none", "negate")


def heun_residual(
    y: Union[RationalPoly, RationalFn],
    hp: HeunParams,
    transform: str = "none",
) -> RationalFn:
    """Exact residual of the Heun operator applied to y (after the transform).

    ``transform='negate'`` first substitutes X -> -X into y, matching the
    reflected-argument solutions of the positive-c families.  The residual
    is an exact rational function; it is the zero function iff y solves the
    equation identically.
    """
    if transform not in _TRANSFORMS:
        raise ValueError(f"transform must be one of {_TRANSFORMS}, got {transform!r}")
    f = y if isinstance(y, RationalFn) else RationalFn(y)
    if transform == "negate":
        f = f.compose_mobius(-1, 0, 0, 1)
    x = RationalPoly.x()
    sing = RationalFn(x) * RationalFn(x - 1) * RationalFn(x - Fraction(1, 2))
    p = (
        RationalFn(RationalPoly((hp.gamma,))) / RationalFn(x)
        + RationalFn(RationalPoly((hp.delta,))) / RationalFn(x - 1)
        + RationalFn(RationalPoly((hp.epsilon,))) / RationalFn(x - Fraction(1, 2))
    )
    qq = RationalFn(hp.alpha * hp.beta * x - hp.q) / sing
    d1 = f.derivative()
    return d1.derivative() + p * d1 + qq * f
