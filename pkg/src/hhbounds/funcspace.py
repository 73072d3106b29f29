"""Twice-differentiable test functions, the catalog, and sampled convexity checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, LookupFailure, ParameterError

RealFn = Callable[[float], float]

# recip/log are singular at 0; catalog intervals must stay at least this far away
POSITIVE_FLOOR = 1e-8
CONVEXITY_RTOL = 1e-12


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ParameterError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not a < b:
            raise ParameterError(f"interval needs a < b, got [{self.a}, {self.b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a

    def point(self, t):
        """Map t in [0, 1] to t*b + (1 - t)*a."""
        return t * self.b + (1.0 - t) * self.a

    def split(self, n: int) -> list["Interval"]:
        edges = np.linspace(self.a, self.b, n + 1)
        edges[-1] = self.b
        return [Interval(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]


@dataclass(frozen=True)
class TestFunction:
    """A function together with exact first and second derivatives.

    Evaluators accept floats or numpy arrays. ``domain`` is the open interval
    on which the evaluators are valid; ``min_endpoint`` is a stricter lower
    limit for interval endpoints (used to keep recip/log off their pole).
    """

    __test__ = False  # keep pytest from collecting this as a test class

    name: str
    f: RealFn
    f1: RealFn
    f2: RealFn
    antiderivative: Optional[RealFn] = None
    domain: tuple[float, float] = (-math.inf, math.inf)
    min_endpoint: float = -math.inf

    def contains(self, iv: Interval) -> bool:
        lo, hi = self.domain
        return lo < iv.a and iv.b < hi and iv.a >= self.min_endpoint

    def require(self, iv: Interval) -> None:
        if not self.contains(iv):
            raise DomainError(
                f"interval [{iv.a}, {iv.b}] is not inside the domain of {self.name} "
                f"{self.domain} (lower endpoint floor {self.min_endpoint})"
            )

    def abs_f2_endpoints(self, iv: Interval) -> tuple[float, float]:
        """|f''(a)|, |f''(b)| from the exact second-derivative evaluator."""
        fa = abs(float(self.f2(iv.a)))
        fb = abs(float(self.f2(iv.b)))
        if not (math.isfinite(fa) and math.isfinite(fb)):
            raise DomainError(f"f'' of {self.name} not finite at the endpoints of [{iv.a}, {iv.b}]")
        return fa, fb


@dataclass(frozen=True)
class ConvexityVerdict:
    convex_abs_f2: bool
    convex_abs_f2_pow_q: bool
    q: float
    worst_violation: float
    samples: int

    @property
    def ok(self) -> bool:
        return self.convex_abs_f2_pow_q


# --- catalog -----------------------------------------------------------------

def _square() -> TestFunction:
    return TestFunction(
        "square",
        f=lambda x: x * x,
        f1=lambda x: 2.0 * x,
        f2=lambda x: 2.0 + 0.0 * x,
        antiderivative=lambda x: x**3 / 3.0,
    )


def _cubic() -> TestFunction:
    return TestFunction(
        "cubic",
        f=lambda x: x**3,
        f1=lambda x: 3.0 * x**2,
        f2=lambda x: 6.0 * x,
        antiderivative=lambda x: x**4 / 4.0,
    )


def _exp() -> TestFunction:
    return TestFunction("exp", f=np.exp, f1=np.exp, f2=np.exp, antiderivative=np.exp)


def _recip() -> TestFunction:
    return TestFunction(
        "recip",
        f=lambda x: 1.0 / x,
        f1=lambda x: -1.0 / x**2,
        f2=lambda x: 2.0 / x**3,
        antiderivative=np.log,
        domain=(0.0, math.inf),
        min_endpoint=POSITIVE_FLOOR,
    )


def _log() -> TestFunction:
    return TestFunction(
        "log",
        f=np.log,
        f1=lambda x: 1.0 / x,
        f2=lambda x: -1.0 / x**2,
        antiderivative=lambda x: x * np.log(x) - x,
        domain=(0.0, math.inf),
        min_endpoint=POSITIVE_FLOOR,
    )


def _sin() -> TestFunction:
    return TestFunction(
        "sin",
        f=np.sin,
        f1=np.cos,
        f2=lambda x: -np.sin(x),
        antiderivative=lambda x: -np.cos(x),
    )


def _affine() -> TestFunction:
    return TestFunction(
        "affine",
        f=lambda x: 3.0 * x + 1.0,
        f1=lambda x: 3.0 + 0.0 * x,
        f2=lambda x: 0.0 * x,
        antiderivative=lambda x: 1.5 * x * x + x,
    )


def pow_n(n: int) -> TestFunction:
    """f(x) = x**n for integer n >= 0 on the positive half-line."""
    if int(n) != n or n < 0:
        raise ParameterError(f"pow_n needs a non-negative integer exponent, got {n!r}")
    n = int(n)
    return TestFunction(
        f"pow_n:{n}",
        f=lambda x: x**n,
        f1=lambda x: n * x ** (n - 1) if n >= 1 else 0.0 * x,
        f2=lambda x: n * (n - 1) * x ** (n - 2) if n >= 2 else 0.0 * x,
        antiderivative=lambda x: x ** (n + 1) / (n + 1),
        domain=(0.0, math.inf),
    )


_BUILTIN: dict[str, Callable[[], TestFunction]] = {
    "square": _square,
    "cubic": _cubic,
    "exp": _exp,
    "recip": _recip,
    "log": _log,
    "sin": _sin,
    "affine": _affine,
}
_REGISTERED: dict[str, TestFunction] = {}


def register(fn: TestFunction) -> None:
    """Add a user function to the catalog. f'' must be supplied explicitly."""
    if fn.name in _BUILTIN or fn.name.startswith("pow_n"):
        raise ParameterError(f"{fn.name!r} shadows a built-in catalog entry")
    _REGISTERED[fn.name] = fn


def unregister(name: str) -> None:
    _REGISTERED.pop(name, None)


def catalog_names() -> list[str]:
    return sorted(_BUILTIN) + ["pow_n:<n>"] + sorted(_REGISTERED)


def catalog_lookup(name: str) -> TestFunction:
    """Resolve a catalog name such as ``recip``, ``log`` or ``pow_n:4``."""
    name = name.strip()
    if name in _BUILTIN:
        return _BUILTIN[name]()
    if name in _REGISTERED:
        return _REGISTERED[name]
    if name.startswith("pow_n"):
        rest = name[len("pow_n"):].strip("():")
        try:
            n = int(rest)
        except ValueError:
            raise LookupFailure(f"pow_n needs an integer exponent, e.g. pow_n:4 (got {name!r})") from None
        return pow_n(n)
    raise LookupFailure(f"unknown catalog function {name!r}; known: {', '.join(catalog_names())}")


# --- checks ------------------------------------------------------------------

def _sample(g: RealFn, x: np.ndarray, what: str) -> np.ndarray:
    with np.errstate(all="ignore"):
        try:
            y = np.asarray(g(x), dtype=float)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"evaluation of {what} failed: {exc}") from exc
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        raise DomainError(f"{what} is not finite at x={x[~np.isfinite(y)][0]!r}")
    return y


def _midpoint_excess(g_grid: np.ndarray, g_half: np.ndarray) -> tuple[float, float]:
    """Max of g((x_i+x_j)/2) - (g(x_i)+g(x_j))/2 over all pairs, and the tolerance."""
    n = g_grid.size
    idx = np.arange(n)
    chords = 0.5 * (g_grid[:, None] + g_grid[None, :])
    mids = g_half[idx[:, None] + idx[None, :]]
    excess = float(np.max(mids - chords))
    scale = max(float(np.max(np.abs(g_half))), np.finfo(float).tiny)
    return excess, CONVEXITY_RTOL * scale


def check_abs_f2_convex(f: TestFunction, iv: Interval, q: float = 1.0, n: int = 201) -> ConvexityVerdict:
    """Sampled midpoint-convexity test for |f''| and |f''|**q on ``iv``.

    Grid midpoints of a uniform n-point grid are exactly the odd points of
    the (2n-1)-point half-step grid, so every pair is tested with 2n-1
    evaluations.
    """
    if n < 3:
        raise ParameterError("need at least 3 sample points")
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    f.require(iv)
    half = np.linspace(iv.a, iv.b, 2 * n - 1)
    abs_f2 = np.abs(_sample(f.f2, half, f"f'' of {f.name}"))
    grid = abs_f2[::2]

    excess1, tol1 = _midpoint_excess(grid, abs_f2)
    ok1 = excess1 <= tol1
    if q == 1:
        excess_q, tol_q, ok_q = excess1, tol1, ok1
    else:
        powered = abs_f2**q
        excess_q, tol_q = _midpoint_excess(powered[::2], powered)
        ok_q = excess_q <= tol_q

    worst = 0.0
    if not ok1:
        worst = max(worst, excess1)
    if not ok_q:
        worst = max(worst, excess_q)
    return ConvexityVerdict(ok1, ok_q, float(q), worst, n)


def derivative_mismatch(f: TestFunction, iv: Interval, h: float, points: int = 9) -> dict[str, float]:
    """Largest central-difference mismatch of f', f'' (and F' = f) at interior points."""
    x = np.linspace(iv.a, iv.b, points + 2)[1:-1]
    if x[0] - h <= f.domain[0] or x[-1] + h >= f.domain[1]:
        raise DomainError("finite-difference stencil leaves the domain")
    out = {
        "f1": float(np.max(np.abs((f.f(x + h) - f.f(x - h)) / (2 * h) - f.f1(x)))),
        "f2": float(np.max(np.abs((f.f1(x + h) - f.f1(x - h)) / (2 * h) - f.f2(x)))),
    }
    if f.antiderivative is not None:
        F = f.antiderivative
        out["antiderivative"] = float(np.max(np.abs((F(x + h) - F(x - h)) / (2 * h) - f.f(x))))
    return out
