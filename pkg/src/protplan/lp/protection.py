"""Assembly and solution of the protection-bandwidth linear program."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from ..cuts import enumerate_all_cuts
from ..model import ProblemSpec, ProtectionPlan
from .simplex import LinearProgram, LpSolution, Relation, SolverError, Status, solve

DEFAULT_EPSILON = Fraction(1, 10**6)


def alpha_name(m: int) -> str:
    return f"alpha_{m}"


def beta_name(s: int) -> str:
    return f"beta_{s}"


def protection_variables(spec: ProblemSpec) -> list[str]:
    """``alpha_{n-1} .. alpha_k`` then ``beta_n .. beta_{k+1}``."""
    return ([alpha_name(m) for m in range(spec.n - 1, spec.k - 1, -1)]
            + [beta_name(s) for s in range(spec.n, spec.k, -1)])


def _linear_rows(spec: ProblemSpec, fixed: Mapping[str, Fraction]):
    """All constraint rows with the symbols in ``fixed`` substituted.

    Yields ``(coeffs, relation, rhs, label)`` where ``coeffs`` only mentions
    free symbols.
    """

    def row(terms: dict[str, Fraction], rel: Relation, rhs: Fraction, label: str):
        free: dict[str, Fraction] = {}
        for name, c in terms.items():
            if not c:
                continue
            if name in fixed:
                rhs -= c * fixed[name]
            else:
                free[name] = free.get(name, Fraction(0)) + c
        return free, rel, rhs, label

    n, M = spec.n, spec.M
    for cut in enumerate_all_cuts(spec):
        terms = {}
        for p in range(n, cut.stage_m - 1, -1):
            terms[alpha_name(p)] = Fraction(cut.j_at(p))
        for q in range(n, cut.stage_m, -1):
            terms[beta_name(q)] = Fraction(cut.l_at(q))
        yield row(terms, Relation.GE, M, cut.label())
    for m in range(n - 1, spec.k - 1, -1):
        terms = {alpha_name(m + 1): Fraction(1), beta_name(m + 1): Fraction(m), alpha_name(m): Fraction(-1)}
        yield row(terms, Relation.GE, Fraction(0), f"storage[{m}]")
    for s in range(n, spec.k, -1):
        yield row({beta_name(s): Fraction(1)}, Relation.GE, Fraction(0), f"lower[{s}]")
        yield row({beta_name(s): Fraction(1), alpha_name(s): Fraction(-1)}, Relation.LE, Fraction(0), f"upper[{s}]")


def _delta_terms(spec: ProblemSpec) -> dict[str, Fraction]:
    return {beta_name(s): Fraction(s * (s - 1)) for s in spec.senders}


def _sigma_terms(spec: ProblemSpec) -> dict[str, Fraction]:
    return {alpha_name(i): Fraction(i) for i in range(spec.k, spec.n + 1)}


def _assemble(spec: ProblemSpec, objective_terms: dict[str, Fraction],
              fixed: Mapping[str, Fraction], extra_rows=()) -> LinearProgram:
    variables = [v for v in protection_variables(spec) if v not in fixed]
    constant = Fraction(0)
    objective: dict[str, Fraction] = {}
    for name, c in objective_terms.items():
        if name in fixed:
            constant += c * fixed[name]
        else:
            objective[name] = objective.get(name, Fraction(0)) + c
    rows = list(_linear_rows(spec, fixed)) + list(extra_rows)
    return LinearProgram.from_rows(variables, objective, rows, constant)


def build_protection_lp(spec: ProblemSpec, epsilon: Optional[Fraction] = DEFAULT_EPSILON,
                        phase: Optional[int] = None,
                        delta_pin: Optional[Fraction] = None) -> LinearProgram:
    """The protection LP with ``alpha_n = M/n`` substituted.

    Without ``phase`` the objective is ``delta + epsilon * sigma``.
    ``phase=1`` minimizes ``delta`` alone; ``phase=2`` minimizes ``sigma``
    subject to the extra row ``delta = delta_pin``.
    """
    fixed = {alpha_name(spec.n): spec.M / spec.n}
    if phase is None:
        eps = Fraction(epsilon)
        terms = dict(_delta_terms(spec))
        for name, c in _sigma_terms(spec).items():
            terms[name] = terms.get(name, Fraction(0)) + eps * c
        return _assemble(spec, terms, fixed)
    if phase == 1:
        return _assemble(spec, _delta_terms(spec), fixed)
    if phase == 2:
        if delta_pin is None:
            raise ValueError("phase 2 needs the phase-1 optimum as delta_pin")
        pin = (_delta_terms(spec), Relation.EQ, Fraction(delta_pin), "delta_pin")
        return _assemble(spec, _sigma_terms(spec), fixed, [pin])
    raise ValueError(f"phase must be None, 1 or 2 (got {phase!r})")


def build_restricted_lp(spec: ProblemSpec, alpha: Mapping[int, Fraction]) -> LinearProgram:
    """Minimize ``delta`` over the transmissions alone, storage pinned to ``alpha``."""
    fixed = {alpha_name(m): Fraction(v) for m, v in alpha.items()}
    return _assemble(spec, _delta_terms(spec), fixed)


def delta_of(spec: ProblemSpec, assignment: Mapping[str, object]):
    return sum(s * (s - 1) * assignment[beta_name(s)] for s in spec.senders)


def sigma_of(spec: ProblemSpec, assignment: Mapping[str, object]):
    a_n = spec.M / spec.n
    if not isinstance(next(iter(assignment.values()), a_n), Fraction):
        a_n = float(a_n)
    total = spec.n * a_n
    return total + sum(i * assignment[alpha_name(i)] for i in spec.stages)


def solve_epsilon(spec: ProblemSpec, epsilon: Fraction = DEFAULT_EPSILON,
                  arithmetic: str = "exact") -> LpSolution:
    return solve(build_protection_lp(spec, epsilon=epsilon), arithmetic)


def solve_lexicographic(spec: ProblemSpec, arithmetic: str = "exact") -> LpSolution:
    """Minimize delta, then the storage overhead among delta-optimal plans.

    The returned solution carries the phase-2 assignment; its objective
    value is the storage overhead sigma and ``iteration_count`` covers both
    phases.
    """
    first = solve(build_protection_lp(spec, phase=1), arithmetic)
    if first.status is not Status.OPTIMAL:
        return first
    delta_min = first.objective_value
    if arithmetic == "float":
        # float pin is relaxed to a ceiling so rounding cannot make phase 2 infeasible
        lp = build_protection_lp(spec, phase=2, delta_pin=Fraction(delta_min))
        rows = tuple(
            r if r.label != "delta_pin" else type(r)(r.coeffs, Relation.LE, Fraction(delta_min * (1 + 1e-12)), r.label)
            for r in lp.constraints
        )
        lp = LinearProgram(lp.variables, lp.objective, rows, lp.objective_constant)
    else:
        lp = build_protection_lp(spec, phase=2, delta_pin=delta_min)
    second = solve(lp, arithmetic)
    second.iteration_count += first.iteration_count
    if second.status is not Status.OPTIMAL:
        raise SolverError(f"phase 2 returned {second.status.value} after an optimal phase 1")
    return second


def plan_from_assignment(spec: ProblemSpec, assignment: Mapping[str, object],
                         strategy_tag: str = "custom") -> ProtectionPlan:
    def exact(v) -> Fraction:
        if isinstance(v, Fraction):
            return v
        return Fraction(max(float(v), 0.0)).limit_denominator(10**12)

    alpha = {spec.n: spec.M / spec.n}
    alpha.update({m: exact(assignment[alpha_name(m)]) for m in spec.stages})
    beta = {s: exact(assignment[beta_name(s)]) for s in spec.senders}
    return ProtectionPlan(spec, alpha, beta, strategy_tag)
