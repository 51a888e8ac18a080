"""Operator-family parameters and fundamental basis functions.

The discrete families handled here are indexed by a real parameter ``c``:
negative ``c`` gives finitely supported polynomial bases on ``[0, -1/c]``
(Bernstein for ``c = -1``), ``c = 0`` the Poisson-weight basis on
``[0, inf)`` (Szasz-Mirakjan), and positive ``c`` the negative-binomial
bases on ``[0, inf)`` (Baskakov for ``c = 1``).  Every basis is a partition
of unity: the functions are nonnegative and sum to 1 pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

__all__ = [
    "DomainError",
    "FamilyId",
    "ParameterError",
    "Params",
    "RationalLike",
    "basis",
    "basis_sum",
    "gen_binom",
]

RationalLike = Union[int, float, str, Fraction]

# Above this many natural-log units the direct product form of a basis
# function would overflow or underflow double precision.
LOG_SPACE_THRESHOLD = 700.0


class ParameterError(ValueError):
    """An (n, c, l) triple violates the structural hypotheses."""


class DomainError(ValueError):
    """An evaluation point lies outside the family domain I_c."""


def _as_fraction(value: RationalLike, name: str) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"{name} must be rational, got {value!r}") from exc


@dataclass(frozen=True)
class Params:
    """Validated operator parameters.

    ``n`` is the (positive) operator index and ``c`` the family parameter.
    For ``c < 0`` the index must satisfy ``n = -c*l`` for a natural ``l``,
    checked exactly on rationals (``l`` may be supplied or is inferred); for
    ``c >= 0`` any positive rational index is admissible.  Floats are
    converted to their exact binary rational, so dyadic inputs like
    ``c = -0.5`` validate exactly.
    """

    n: Fraction
    c: Fraction
    l: Optional[int] = None

    def __post_init__(self) -> None:
        n = _as_fraction(self.n, "n")
        c = _as_fraction(self.c, "c")
        if n <= 0:
            raise ParameterError(f"operator index must be positive, got n={n}")
        if c >= 0:
            if self.l is not None:
                raise ParameterError("l is only meaningful for c < 0")
            l = None
        else:
            ratio = -n / c
            if ratio.denominator != 1 or ratio < 1:
                raise ParameterError(
                    f"need n = -c*l with natural l, got n={n}, c={c} (l would be {ratio})"
                )
            l = int(ratio)
            if self.l is not None and self.l != l:
                raise ParameterError(
                    f"supplied l={self.l} inconsistent with n = -c*l (expected l={l})"
                )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "l", l)

    @property
    def n_float(self) -> float:
        return float(self.n)

    @property
    def c_float(self) -> float:
        return float(self.c)

    @property
    def domain_sup(self) -> Optional[Fraction]:
        """Right endpoint of I_c (None for unbounded families)."""
        return -1 / self.c if self.c < 0 else None

    def domain_str(self) -> str:
        sup = self.domain_sup
        return f"[0, {sup}]" if sup is not None else "[0, +inf)"

    def in_domain(self, x: Union[float, Fraction]) -> bool:
        if x < 0:
            return False
        sup = self.domain_sup
        return sup is None or x <= sup

    def require_in_domain(self, x: Union[float, Fraction]) -> None:
        if not self.in_domain(x):
            raise DomainError(f"x={x} outside the domain I_c = {self.domain_str()}")


_NAMED_C = {
    "bernstein": Fraction(-1),
    "szasz": Fraction(0),
    "baskakov": Fraction(1),
}
_FAMILY_NAMES = ("bernstein", "szasz", "baskakov", "bbh", "mkz", "general")


@dataclass(frozen=True)
class FamilyId:
    """Tag for an operator family.

    ``bernstein``/``szasz``/``baskakov`` are the canonical names of the
    ``c = -1, 0, 1`` families; ``general`` carries an explicit ``c``.
    ``bbh`` and ``mkz`` are substitution families: their squared-basis sums
    are the Bernstein sum composed with ``x/(1+x)`` and the Baskakov sum of
    index ``n+1`` composed with ``x/(1-x)`` respectively.
    """

    name: str
    c: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.name not in _FAMILY_NAMES:
            raise ParameterError(f"unknown family {self.name!r}")
        if self.name == "general":
            if self.c is None:
                raise ParameterError("general family requires an explicit c")
            object.__setattr__(self, "c", _as_fraction(self.c, "c"))
        elif self.c is not None:
            raise ParameterError(f"family {self.name!r} does not take a c parameter")

    @classmethod
    def from_c(cls, c: RationalLike) -> "FamilyId":
        c = _as_fraction(c, "c")
        for name, cval in _NAMED_C.items():
            if c == cval:
                return cls(name)
        return cls("general", c)

    @property
    def base_c(self) -> Fraction:
        """Family parameter of the underlying (n, c) family."""
        if self.name in _NAMED_C:
            return _NAMED_C[self.name]
        if self.name == "bbh":
            return Fraction(-1)
        if self.name == "mkz":
            return Fraction(1)
        return self.c  # general

    def base_params(self, n: RationalLike) -> Params:
        """Params of the underlying family (index shift n -> n+1 for mkz)."""
        n = _as_fraction(n, "n")
        if self.name in ("bernstein", "bbh", "mkz"):
            if n.denominator != 1 or (self.name != "mkz" and n < 1) or (self.name == "mkz" and n < 0):
                raise ParameterError(f"family {self.name!r} needs a natural index, got n={n}")
        if self.name == "mkz":
            return Params(n + 1, Fraction(1))
        return Params(n, self.base_c)

    def substitution(self, x: float) -> float:
        """Map a point of this family's domain into the base family's domain."""
        if self.name == "bbh":
            return x / (1.0 + x)
        if self.name == "mkz":
            if x >= 1.0:
                raise DomainError(f"x={x} outside the domain [0, 1) of family 'mkz'")
            return x / (1.0 - x)
        return x

    @property
    def domain_sup(self) -> Optional[Fraction]:
        """Right endpoint of the family domain (None when unbounded)."""
        if self.name == "mkz" or self.name == "bernstein":
            return Fraction(1)
        if self.name in ("bbh", "szasz", "baskakov"):
            return None
        return -1 / self.c if self.c < 0 else None

    def domain_str(self) -> str:
        if self.name == "mkz":
            return "[0, 1)"
        sup = self.domain_sup
        return f"[0, {sup}]" if sup is not None else "[0, +inf)"

    def in_domain(self, x: Union[float, Fraction]) -> bool:
        if x < 0:
            return False
        if self.name == "mkz":
            return x < 1
        sup = self.domain_sup
        return sup is None or x <= sup

    def require_in_domain(self, x: Union[float, Fraction]) -> None:
        if not self.in_domain(x):
            raise DomainError(f"x={x} outside the domain {self.domain_str()} of family {self.name!r}")


def gen_binom(alpha, k: int):
    """Generalized binomial coefficient alpha*(alpha-1)*...*(alpha-k+1)/k!.

    Returns 1 for k = 0 and 0 when alpha is a natural number with k > alpha.
    Exact (Fraction) when alpha is an int or Fraction, float otherwise.
    """
    if k < 0:
        raise ValueError(f"k must be a natural number, got {k}")
    if isinstance(alpha, (int, Fraction)):
        acc = Fraction(1)
        a = Fraction(alpha)
        for i in range(k):
            acc = acc * (a - i) / (i + 1)
            if not acc:
                break
        return acc
    acc = 1.0
    a = float(alpha)
    for i in range(k):
        acc *= (a - i) / (i + 1.0)
        if acc == 0.0:
            break
    return acc


def _log_rising_over_fact(a: float, k: int) -> float:
    """log of (a)_k / k! for a > 0 (the magnitude of C(-a, k))."""
    if k == 0:
        return 0.0
    return math.lgamma(a + k) - math.lgamma(a) - math.lgamma(k + 1)


def basis(params: Params, k: int, x: float) -> float:
    """Fundamental function value p_k(x); nonnegative, at most 1.

    The binomial-type products are rearranged into positive factors and
    evaluated directly while the intermediate magnitudes stay well inside
    the double exponent range; past half of LOG_SPACE_THRESHOLD everything
    moves to log space, where the result (itself in [0, 1]) is safe to
    exponentiate.
    """
    if k < 0:
        raise ValueError(f"k must be a natural number, got {k}")
    params.require_in_domain(x)
    n = params.n_float
    c = params.c_float
    xf = float(x)
    guard = LOG_SPACE_THRESHOLD / 2
    if c < 0 and k > params.l:
        return 0.0
    if xf == 0.0:
        return 1.0 if k == 0 else 0.0

    if c == 0.0:
        mu = n * xf
        if k <= 30 and mu < guard:
            return (mu ** k) / math.factorial(k) * math.exp(-mu)
        return math.exp(k * math.log(mu) - mu - math.lgamma(k + 1))

    u = c * xf
    if c < 0 and 1.0 + u == 0.0:  # right endpoint, only k = l survives
        return 1.0 if k == params.l else 0.0
    lp1 = math.log1p(u)
    if c > 0:
        a = n / c
        r = u / (1.0 + u)  # cx/(1+cx) in [0, 1)
        if k == 0:
            return math.exp(-a * lp1)
        logp = _log_rising_over_fact(a, k) + k * math.log(r) - a * lp1
        if k <= 30 and abs(a * lp1) < guard and logp > -guard:
            coef = 1.0
            for i in range(k):
                coef *= (a + i) / (i + 1.0)
            return coef * r ** k * math.exp(-a * lp1)
        return math.exp(logp)

    # c < 0: p_k = C(l, k) * (|c|x)^k * (1+cx)^(l-k), finitely supported
    l = params.l
    v = -u  # |c| x > 0
    if l <= 60 and abs((l - k) * lp1) < guard and abs(k * math.log(v)) < guard:
        return math.comb(l, k) * v ** k * (1.0 + u) ** (l - k)
    logp = (
        math.lgamma(l + 1) - math.lgamma(k + 1) - math.lgamma(l - k + 1)
        + k * math.log(v) + (l - k) * lp1
    )
    return math.exp(logp)


def _sum_unimodal_scaled(
    ratio_up: Callable[[int], float],
    ratio_down: Callable[[int], float],
    k0: int,
    tol: float,
    up_sup: float = 0.0,
    max_terms: int = 10 ** 7,
) -> tuple[float, int]:
    """Sum a positive unimodal sequence scaled so term k0 equals 1.

    ``ratio_up(k)`` is t_{k+1}/t_k and ``ratio_down(k)`` is t_{k-1}/t_k.
    The geometric tail certificate needs an upper bound on all remaining
    ratios: the larger of the next ratio and ``up_sup`` (the limit of the
    ratio stream, for streams that increase toward it).  Downward ratios
    must be nonincreasing in the direction of travel, which holds for every
    family here because the downward walk only runs when the peak is
    interior.  Returns (scaled sum, number of terms).
    """
    acc = 1.0
    terms = 1
    t = 1.0
    k = k0
    while terms < max_terms:
        r = ratio_up(k)
        t *= r
        k += 1
        acc += t
        terms += 1
        r_next = max(ratio_up(k), up_sup)
        if r_next < 1.0 and t * r_next / (1.0 - r_next) <= tol * acc:
            break
    t = 1.0
    k = k0
    while k > 0 and terms < max_terms:
        r = ratio_down(k)
        t *= r
        k -= 1
        acc += t
        terms += 1
        if k == 0:
            break
        r_next = ratio_down(k)
        if r_next < 1.0 and t * r_next / (1.0 - r_next) <= tol * acc:
            break
    return acc, terms


def basis_sum(params: Params, x: float, tol: float = 1e-15) -> tuple[float, int]:
    """Certified truncation of sum_k p_k(x).

    Stops once the next term and its geometric tail bound drop below
    ``tol`` times the partial sum; the result should be 1 up to rounding.
    Returns (sum, number of terms).
    """
    params.require_in_domain(x)
    n = params.n_float
    c = params.c_float
    xf = float(x)
    if xf == 0.0:
        return 1.0, 1

    if c < 0:
        l = params.l
        total = math.fsum(basis(params, k, xf) for k in range(l + 1))
        return total, l + 1

    if c == 0.0:
        mu = n * xf
        k0 = int(mu)
        log_anchor = k0 * math.log(mu) - mu - math.lgamma(k0 + 1)
        scaled, terms = _sum_unimodal_scaled(
            lambda k: mu / (k + 1.0), lambda k: k / mu, k0, tol
        )
        return math.exp(log_anchor + math.log(scaled)), terms

    a = n / c
    u = c * xf
    r = u / (1.0 + u)
    lp1 = math.log1p(u)
    k0 = max(0, int((a * r - 1.0) / (1.0 - r)))
    log_anchor = _log_rising_over_fact(a, k0) + k0 * math.log(r) - a * lp1
    scaled, terms = _sum_unimodal_scaled(
        lambda k: (a + k) / (k + 1.0) * r,
        lambda k: k / ((a + k - 1.0) * r),
        k0,
        tol,
        up_sup=r,
    )
    return math.exp(log_anchor + math.log(scaled)), terms
