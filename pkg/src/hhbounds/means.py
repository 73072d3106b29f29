"""Special means of two positive numbers and the mean inequalities derived
from the midpoint / trapezoid / Simpson bounds applied to 1/x, ln x and x**n."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from .errors import DomainError, ParameterError, UnsupportedError

MEAN_KINDS = ("A", "G", "H", "L", "I", "Lp")
FAMILIES = ("recip", "log", "pow_n")
VARIANTS = ("midpoint", "trapezoid", "simpson")


@dataclass(frozen=True)
class MeanValue:
    kind: str
    a: float
    b: float
    value: float
    order: Optional[float] = None


@dataclass(frozen=True)
class MeansReport:
    family: str
    variant: str
    a: float
    b: float
    q: float
    n: Optional[int]
    lhs: float
    rhs: float
    slack: float

    def to_dict(self) -> dict:
        return asdict(self)


def _positive(a: float, b: float) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"means need positive finite arguments, got ({a}, {b})")
    return a, b


def arithmetic(a: float, b: float) -> float:
    a, b = _positive(a, b)
    return 0.5 * (a + b)


def geometric(a: float, b: float) -> float:
    a, b = _positive(a, b)
    return math.sqrt(a * b)


def harmonic(a: float, b: float) -> float:
    a, b = _positive(a, b)
    return 2.0 * a * b / (a + b)


def logarithmic(a: float, b: float) -> float:
    a, b = _positive(a, b)
    if a == b:
        return a
    lo, hi = min(a, b), max(a, b)
    d = hi - lo
    return d / math.log1p(d / lo)


def identric(a: float, b: float) -> float:
    """exp((b ln b - a ln a)/(b - a) - 1), rearranged to avoid both overflow and cancellation."""
    a, b = _positive(a, b)
    if a == b:
        return a
    lo, hi = min(a, b), max(a, b)
    d = hi - lo
    return math.exp(math.log(hi) + lo * math.log1p(d / lo) / d - 1.0)


def p_logarithmic(a: float, b: float, order: float) -> float:
    """[(b**(r+1) - a**(r+1)) / ((r+1)(b-a))]**(1/r) for order r not in {-1, 0}."""
    a, b = _positive(a, b)
    r = float(order)
    if r in (-1.0, 0.0):
        raise ParameterError(f"p-logarithmic mean undefined for order {order}")
    if a == b:
        return a
    lo, hi = min(a, b), max(a, b)
    d = hi - lo
    x = (r + 1.0) * math.log1p(d / lo)
    # b**(r+1) - a**(r+1) = a**(r+1) * expm1((r+1) log(b/a))
    ratio = math.expm1(x) / ((r + 1.0) * (d / lo))
    return lo * ratio ** (1.0 / r)


def special_mean(kind: str, a: float, b: float, order: Optional[float] = None) -> MeanValue:
    if kind == "A":
        value = arithmetic(a, b)
    elif kind == "G":
        value = geometric(a, b)
    elif kind == "H":
        value = harmonic(a, b)
    elif kind == "L":
        value = logarithmic(a, b)
    elif kind == "I":
        value = identric(a, b)
    elif kind == "Lp":
        if order is None:
            raise ParameterError("Lp needs an order")
        value = p_logarithmic(a, b, order)
    else:
        raise ParameterError(f"unknown mean {kind!r}; expected one of {MEAN_KINDS}")
    return MeanValue(kind, float(a), float(b), value, None if order is None else float(order))


def mean_chain_check(a: float, b: float, strict: Optional[bool] = None) -> bool:
    """H < G < L < I < A (non-strict when a and b nearly coincide).

    With ``strict=None`` the mode is picked automatically: strict unless
    (b - a)/a < 1e-6, where rounding can tie neighbouring means.
    """
    a, b = _positive(a, b)
    if not a < b:
        raise ParameterError("mean_chain_check needs 0 < a < b")
    chain = [harmonic(a, b), geometric(a, b), logarithmic(a, b), identric(a, b), arithmetic(a, b)]
    if strict is None:
        strict = (b - a) / a >= 1e-6
    if strict:
        return all(x < y for x, y in zip(chain, chain[1:]))
    slack = 4 * math.ulp(b)
    return all(x <= y + slack for x, y in zip(chain, chain[1:]))


# --- inequalities ----------------------------------------------------------

# Variant constants: (denominator of (b-a)**2, base raised to 1/p as a function of p)
_VARIANT = {
    "midpoint": (8.0, lambda p: 1.0 / (p + 1.0)),
    "trapezoid": (8.0, lambda p: (2.0 ** (p + 1.0) - 1.0) / (p + 1.0)),
    "simpson": (24.0, lambda p: (2.0 ** (p + 1.0) - 1.0) / (3.0 * (p + 1.0))),
}


def _lhs(family: str, variant: str, a: float, b: float, n: Optional[int]) -> float:
    if family == "recip":
        inv_a, inv_h, inv_l = 1.0 / arithmetic(a, b), 1.0 / harmonic(a, b), 1.0 / logarithmic(a, b)
        rule = {"midpoint": inv_a, "trapezoid": inv_h, "simpson": inv_h / 3.0 + 2.0 * inv_a / 3.0}[variant]
        return abs(rule - inv_l)
    if family == "log":
        ln_a, ln_g, ln_i = math.log(arithmetic(a, b)), math.log(geometric(a, b)), math.log(identric(a, b))
        rule = {"midpoint": ln_a, "trapezoid": ln_g, "simpson": ln_g / 3.0 + 2.0 * ln_a / 3.0}[variant]
        return abs(rule - ln_i)
    # pow_n
    a_n = arithmetic(a, b) ** n
    a_of_powers = arithmetic(a**n, b**n)
    rule = {"midpoint": a_n, "trapezoid": a_of_powers, "simpson": a_of_powers / 3.0 + 2.0 * a_n / 3.0}[variant]
    return abs(rule - p_logarithmic(a, b, n) ** n)


def _rhs(family: str, variant: str, a: float, b: float, q: float, n: Optional[int]) -> float:
    p = q / (q - 1.0)
    denom, base = _VARIANT[variant]
    if family == "recip":
        lead, ea, eb = 1.0, a ** (-3.0 * q), b ** (-3.0 * q)
    elif family == "log":
        lead, ea, eb = 0.5, a ** (-2.0 * q), b ** (-2.0 * q)
        # log rows print (b-a)**2/16 and /48: half the recip prefactor
    else:
        lead, ea, eb = n * (n - 1) / 2.0, a ** ((n - 2.0) * q), b ** ((n - 2.0) * q)
    r = (q + 3.0) / (q + 1.0)
    total = sum((r ** (i - 1) * eb + r ** (2 - i) * ea) ** (1.0 / q) for i in (1, 2))
    return lead * (b - a) ** 2 / denom * base(p) ** (1.0 / p) * (1.0 / (2.0 * (q + 2.0))) ** (1.0 / q) * total


def mean_inequality(
    family: str, variant: str, a: float, b: float, q: float, n: Optional[int] = None
) -> MeansReport:
    """Left and right sides of one of the nine mean inequalities.

    family: recip (1/A, 1/H, 1/L), log (ln A, ln G, ln I) or pow_n (A**n,
    A(a**n, b**n), L_n**n). Constants are the printed ones, including the
    Simpson base (2**(p+1) - 1)/(3(p+1)).
    """
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    a, b = _positive(a, b)
    if not a < b:
        raise ParameterError("mean inequalities need 0 < a < b")
    q = float(q)
    if q <= 1:
        raise UnsupportedError(f"mean inequalities need q > 1 (Hoelder conjugate), got {q}")
    if family == "pow_n":
        if n is None or int(n) != n or n <= 2:
            raise ParameterError(f"pow_n family needs an integer n > 2, got {n!r}")
        n = int(n)
    else:
        n = None
    lhs = _lhs(family, variant, a, b, n)
    rhs = _rhs(family, variant, a, b, q, n)
    return MeansReport(family, variant, a, b, q, n, lhs, rhs, rhs - lhs)
