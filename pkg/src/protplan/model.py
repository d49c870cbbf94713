"""Problem definition, protection plans and their metrics.

Quantities are exact :class:`fractions.Fraction` values expressed in data
units; with the default ``data_size = 1`` everything is normalized by the
size of the original data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Union

Rational = Union[int, Fraction]

STRATEGY_TAGS = ("OP", "MS", "MRB", "custom")
PLAN_FORMAT_VERSION = "1"


class SpecError(ValueError):
    """Raised for an invalid ``(n, k, M)`` triple."""


class PlanFormatError(ValueError):
    """Raised when a serialized plan cannot be parsed."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: planning is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PlanFormatError(f"not a rational: {value!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(x: Fraction) -> str:
    """Render ``x`` as ``"p/q"`` in lowest terms (integers get ``/1``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, places: int = 12) -> str:
    """Exact rational rounded half-even to ``places`` decimals."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 60
        value = Decimal(x.numerator) / Decimal(x.denominator)
        return format(value.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN), "f")


@dataclass(frozen=True)
class ProblemSpec:
    n: int
    k: int
    data_size: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "data_size", as_fraction(self.data_size))

    @property
    def M(self) -> Fraction:
        return self.data_size

    @property
    def stages(self) -> range:
        """Stages ``m`` at which cuts are checked: ``k .. n-1``."""
        return range(self.k, self.n)

    @property
    def senders(self) -> range:
        """Repair stages ``s`` (nodes involved): ``k+1 .. n``."""
        return range(self.k + 1, self.n + 1)


def validate_spec(n: int, k: int, data_size: Rational = 1) -> ProblemSpec:
    if isinstance(n, bool) or not isinstance(n, int):
        raise SpecError(f"n must be an integer, got {n!r}")
    if isinstance(k, bool) or not isinstance(k, int):
        raise SpecError(f"k must be an integer, got {k!r}")
    if n < 2:
        raise SpecError(f"n must be >= 2 (got n={n})")
    if k < 1:
        raise SpecError(f"k must be >= 1 (got k={k})")
    if k >= n:
        raise SpecError(f"k must be < n (got k={k}, n={n})")
    M = as_fraction(data_size)
    if M <= 0:
        raise SpecError(f"data size must be > 0 (got {M})")
    return ProblemSpec(n, k, M)


@dataclass(frozen=True)
class ProtectionPlan:
    """Storage profile ``alpha[m]`` (m = k..n) and per-link transmission
    sizes ``beta[s]`` (s = k+1..n) for one protection problem.

    Construction checks the structural invariants (index ranges,
    nonnegativity, ``alpha[n] = M/n``).  The relational constraints
    (``beta[s] <= alpha[s]``, storage transitions, cuts) are left to
    :func:`check_feasible` so that a corrupted plan can still be loaded
    and reported on.
    """

    spec: ProblemSpec
    alpha: Mapping[int, Fraction]
    beta: Mapping[int, Fraction]
    strategy_tag: str = "custom"

    def __post_init__(self) -> None:
        spec = self.spec
        alpha = {int(m): as_fraction(v) for m, v in self.alpha.items()}
        beta = {int(s): as_fraction(v) for s, v in self.beta.items()}
        if set(alpha) != set(range(spec.k, spec.n + 1)):
            raise ValueError(
                f"alpha must be indexed by {spec.k}..{spec.n}, got {sorted(alpha)}"
            )
        if set(beta) != set(spec.senders):
            raise ValueError(
                f"beta must be indexed by {spec.k + 1}..{spec.n}, got {sorted(beta)}"
            )
        if any(v < 0 for v in alpha.values()) or any(v < 0 for v in beta.values()):
            raise ValueError("alpha and beta must be nonnegative")
        if alpha[spec.n] != spec.M / spec.n:
            raise ValueError(
                f"alpha[{spec.n}] must equal M/n = {spec.M / spec.n}, got {alpha[spec.n]}"
            )
        if self.strategy_tag not in STRATEGY_TAGS:
            raise ValueError(f"unknown strategy tag {self.strategy_tag!r}")
        object.__setattr__(self, "alpha", MappingProxyType(dict(sorted(alpha.items()))))
        object.__setattr__(self, "beta", MappingProxyType(dict(sorted(beta.items()))))

    def to_dict(self) -> dict:
        spec = self.spec
        return {
            "n": spec.n,
            "k": spec.k,
            "M": format_fraction(spec.M),
            "strategy": self.strategy_tag,
            "alpha": {str(m): format_fraction(v) for m, v in sorted(self.alpha.items(), reverse=True)},
            "beta": {str(s): format_fraction(v) for s, v in sorted(self.beta.items(), reverse=True)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "ProtectionPlan":
        try:
            spec = validate_spec(int(data["n"]), int(data["k"]), as_fraction(str(data.get("M", "1"))))
            alpha = {int(m): as_fraction(str(v)) for m, v in data["alpha"].items()}
            beta = {int(s): as_fraction(str(v)) for s, v in data["beta"].items()}
            return cls(spec, alpha, beta, data.get("strategy", "custom"))
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            if isinstance(exc, PlanFormatError):
                raise
            raise PlanFormatError(f"malformed plan: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ProtectionPlan":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PlanFormatError(f"not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise PlanFormatError("plan JSON must be an object")
        return cls.from_dict(data)


def uniform_plan(spec: ProblemSpec, storage: Rational, transmission: Rational = 0,
                 strategy_tag: str = "custom") -> ProtectionPlan:
    """Plan with every ``alpha[m] = storage`` (m < n) and every ``beta = transmission``.

    ``uniform_plan(spec, spec.M / spec.n)`` is the zero-redundancy control.
    """
    alpha = {m: as_fraction(storage) for m in spec.stages}
    alpha[spec.n] = spec.M / spec.n
    beta = {s: as_fraction(transmission) for s in spec.senders}
    return ProtectionPlan(spec, alpha, beta, strategy_tag)


def full_replication_plan(spec: ProblemSpec) -> ProtectionPlan:
    """Every node ships its whole share in the first stage and keeps all of it."""
    alpha = {m: spec.M for m in spec.stages}
    alpha[spec.n] = spec.M / spec.n
    beta = {s: Fraction(0) for s in spec.senders}
    beta[spec.n] = spec.M / spec.n
    return ProtectionPlan(spec, alpha, beta)


@dataclass(frozen=True)
class PlanMetrics:
    delta: Fraction
    sigma: Fraction
    gamma: Mapping[int, Fraction]
    rho: Fraction
    final_alpha: Fraction


def compute_metrics(plan: ProtectionPlan) -> PlanMetrics:
    gamma = {s: s * (s - 1) * b for s, b in plan.beta.items()}
    return PlanMetrics(
        delta=sum(gamma.values(), Fraction(0)),
        sigma=sum((i * a for i, a in plan.alpha.items()), Fraction(0)),
        gamma=MappingProxyType(gamma),
        rho=max(plan.alpha.values()),
        final_alpha=plan.alpha[plan.spec.k],
    )


@dataclass(frozen=True)
class Violation:
    label: str
    slack: Fraction
    cut: object = None


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple = field(default_factory=tuple)
    checked: int = 0

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.feasible


def check_feasible(plan: ProtectionPlan) -> FeasibilityReport:
    """Evaluate every cut, storage-transition and bound constraint.

    Each violation carries its (negative) slack ``lhs - rhs``.
    """
    from .cuts import cut_capacity, enumerate_all_cuts

    spec, a, b = plan.spec, plan.alpha, plan.beta
    violations: list[Violation] = []
    checked = 0
    for cut in enumerate_all_cuts(spec):
        checked += 1
        slack = cut_capacity(cut, plan) - spec.M
        if slack < 0:
            violations.append(Violation(cut.label(), slack, cut))
    for m in spec.stages:
        checked += 1
        slack = a[m + 1] + m * b[m + 1] - a[m]
        if slack < 0:
            violations.append(Violation(f"storage[{m}]: alpha_{m + 1} + {m}*beta_{m + 1} >= alpha_{m}", slack))
    for s in spec.senders:
        checked += 1
        slack = a[s] - b[s]
        if slack < 0:
            violations.append(Violation(f"bound[{s}]: beta_{s} <= alpha_{s}", slack))
    return FeasibilityReport(tuple(violations), checked)
