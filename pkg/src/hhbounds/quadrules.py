"""The (alpha, lambda) rule family, the named midpoint/trapezoid/Simpson bounds,
and a composite integrator whose error is certified cell by cell."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .bounds import THEOREMS, bound_t4, theorem_bound
from .coeffs import Params, _unit, conjugate, incomplete_beta
from .errors import ConsistencyError, HypothesisError, ParameterError, UnsupportedError
from .funcspace import Interval, TestFunction, check_abs_f2_convex
from .identity import rule_value
from .numint import DEFAULT_TOL, integrate

NAMED_RULES = {
    "midpoint": (0.5, 0.0),
    "trapezoid": (0.5, 1.0),
    "simpson": (0.5, 1.0 / 3.0),
}
MATCH_TOL = 1e-12


@dataclass(frozen=True)
class RuleSpec:
    alpha: float
    lam: float
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _unit("alpha", self.alpha))
        object.__setattr__(self, "lam", _unit("lambda", self.lam))

    @property
    def uses_derivative(self) -> bool:
        return self.alpha != 0.5

    @classmethod
    def named(cls, kind: str) -> "RuleSpec":
        try:
            alpha, lam = NAMED_RULES[kind]
        except KeyError:
            raise ParameterError(f"unknown rule {kind!r}; expected one of {sorted(NAMED_RULES)}") from None
        return cls(alpha, lam, kind)

    @classmethod
    def parse(cls, text: str) -> "RuleSpec":
        """``midpoint`` | ``trapezoid`` | ``simpson`` | ``custom:alpha,lambda``."""
        text = text.strip()
        if text.startswith("custom:"):
            try:
                alpha, lam = (float(v) for v in text[len("custom:"):].split(","))
            except ValueError:
                raise ParameterError(f"expected custom:alpha,lambda, got {text!r}") from None
            return cls(alpha, lam)
        return cls.named(text)


@dataclass(frozen=True)
class CertifiedResult:
    value: float
    error_bound: float
    cells: int
    theorem_used: str
    q: float
    true_error: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def generalized_rule(f: TestFunction, iv: Interval, rule: RuleSpec) -> float:
    """Approximation of the mean (1/(b-a)) * integral of f produced by ``rule``."""
    f.require(iv)
    return rule_value(f, iv, rule.alpha, rule.lam)


# The printed propositions differ only in the constant raised to 1/p.
def _printed_constant(kind: str, p: float) -> float:
    if kind == "midpoint":
        return 1.0 / (2.0 ** (2 * p + 1) * (p + 1))
    if kind == "trapezoid":
        return (2.0 ** (p + 1) - 1) / (2.0 ** (2 * p + 1) * (p + 1))
    if kind == "simpson":
        return (2.0 ** (p + 1) - 1) / (2.0 ** (2 * p + 1) * 3.0 ** (p + 1) * (p + 1))
    raise ParameterError(f"unknown proposition {kind!r}")


def _specialised_constant(kind: str, p: float) -> float:
    # (1/2) * phi at alpha = 1/2, raised to the power p; differs from the
    # printed constant only for Simpson, where the sum of the two pieces
    # (1/3)**(p+1) + (1/6)**(p+1) gives 2**(p+1) + 1, not 2**(p+1) - 1.
    if kind == "simpson":
        return (2.0 ** (p + 1) + 1) / (2.0 ** (2 * p + 1) * 3.0 ** (p + 1) * (p + 1))
    return _printed_constant(kind, p)


def proposition_bound(
    kind: str,
    f2_abs_a: float,
    f2_abs_b: float,
    iv: Interval,
    q: float,
    printed: bool = True,
) -> float:
    """Midpoint / trapezoid / Simpson error bound on the mean, q > 1.

    ``printed=True`` evaluates the constants exactly as the propositions state
    them. ``printed=False`` uses the constant obtained by specialising the
    Hoelder bound at alpha = 1/2, which differs for Simpson only.
    """
    if q <= 1:
        raise UnsupportedError(f"the proposition bounds need q > 1, got {q}")
    if kind not in NAMED_RULES:
        raise ParameterError(f"unknown proposition {kind!r}")
    p = conjugate(q)
    const = _printed_constant(kind, p) if printed else _specialised_constant(kind, p)
    edge = 1.0 / (2.0 ** (q + 2) * (q + 2))
    inner = incomplete_beta(0.5, q + 1.0, 2.0)
    fa, fb = f2_abs_a**q, f2_abs_b**q
    brackets = (edge * fb + inner * fa) ** (1.0 / q) + (inner * fb + edge * fa) ** (1.0 / q)
    return iv.width**2 * const ** (1.0 / p) * brackets


def match_general(kind: str, f2_abs_a: float, f2_abs_b: float, iv: Interval, q: float, printed: bool = True) -> float:
    """bound_t4 at the named rule's (alpha, lambda), checked against proposition_bound.

    Raises ConsistencyError when the two disagree by more than 1e-12 (relative
    to the larger value once it exceeds 1).
    """
    alpha, lam = NAMED_RULES[kind] if kind in NAMED_RULES else (None, None)
    if alpha is None:
        raise ParameterError(f"unknown proposition {kind!r}")
    general = bound_t4(f2_abs_a, f2_abs_b, iv, alpha, lam, q)
    special = proposition_bound(kind, f2_abs_a, f2_abs_b, iv, q, printed=printed)
    scale = max(1.0, abs(general), abs(special))
    if abs(general - special) > MATCH_TOL * scale:
        raise ConsistencyError(
            f"{kind}: general bound {general!r} != proposition {special!r} "
            f"(q={q}, diff={general - special:.3e})"
        )
    return general


def composite_certified(
    f: TestFunction,
    iv: Interval,
    n_cells: int,
    rule: RuleSpec,
    q: float = 2.0,
    theorem: str = "T4",
    oracle: bool = False,
    tol: float = DEFAULT_TOL,
    convexity_samples: int = 33,
) -> CertifiedResult:
    """Composite rule on a uniform partition, with a summed a-priori error bound.

    Each cell of width h contributes h * rule_value to the integral and
    h * (cell bound on |rule - mean|) to the error bound. The convexity
    hypothesis is sampled on every cell; a failure raises HypothesisError.
    """
    if n_cells < 1:
        raise ParameterError("n_cells must be >= 1")
    if theorem not in THEOREMS:
        raise ParameterError(f"unknown theorem {theorem!r}")
    f.require(iv)
    params = Params(rule.alpha, rule.lam, q)
    q_hyp = 1.0 if theorem == "T2" else q
    value = 0.0
    bound = 0.0
    for i, cell in enumerate(iv.split(n_cells)):
        verdict = check_abs_f2_convex(f, cell, q_hyp, convexity_samples)
        if not verdict.ok:
            raise HypothesisError(
                f"|f''|^{q_hyp:g} of {f.name} is not convex on cell {i} [{cell.a}, {cell.b}] "
                f"(violation {verdict.worst_violation:.3g})"
            )
        h = cell.width
        fa, fb = f.abs_f2_endpoints(cell)
        value += h * rule_value(f, cell, rule.alpha, rule.lam)
        bound += h * theorem_bound(theorem, fa, fb, cell, params)
    true_error = None
    if oracle:
        exact = integrate(f.f, iv.a, iv.b, tol).value
        true_error = abs(value - exact)
    return CertifiedResult(value, bound, n_cells, theorem, float(q), true_error)
