"""The optimal plan and the two baselines it is compared against.

OP
    lexicographic optimum of the protection LP (least bandwidth, then
    least storage overhead among the bandwidth-optimal plans).
MS
    minimum storage: ``alpha_m = M/m`` at every stage, transmissions from
    the LP restricted to the betas.
MRB
    myopic minimum repair bandwidth: stage by stage, keep everything
    received and send the least that makes the next stage's cuts hold.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .cuts import enumerate_stage_cuts
from .lp import (
    DEFAULT_EPSILON,
    SolverError,
    Status,
    beta_name,
    build_restricted_lp,
    plan_from_assignment,
    solve,
    solve_epsilon,
    solve_lexicographic,
)
from .model import (
    ProblemSpec,
    ProtectionPlan,
    compute_metrics,
    format_decimal,
    format_fraction,
)

STRATEGIES = ("op", "ms", "mrb")


class PlanningError(RuntimeError):
    """A planner could not produce a plan (solver failure)."""


def plan_op(spec: ProblemSpec, method: str = "lexicographic",
            epsilon: Fraction = DEFAULT_EPSILON, arithmetic: str = "exact") -> ProtectionPlan:
    if method == "lexicographic":
        sol = solve_lexicographic(spec, arithmetic)
    elif method == "epsilon":
        sol = solve_epsilon(spec, epsilon, arithmetic)
    else:
        raise ValueError(f"unknown method {method!r}")
    if sol.status is not Status.OPTIMAL:
        raise PlanningError(f"protection LP for (n={spec.n}, k={spec.k}) is {sol.status.value}")
    return plan_from_assignment(spec, sol.assignment, "OP")


def plan_ms(spec: ProblemSpec) -> ProtectionPlan:
    alpha = {m: spec.M / m for m in range(spec.k, spec.n + 1)}
    sol = solve(build_restricted_lp(spec, alpha))
    if sol.status is not Status.OPTIMAL:
        raise PlanningError(f"MS restricted LP is {sol.status.value}")
    beta = {s: sol.assignment[beta_name(s)] for s in spec.senders}
    for s, b in beta.items():
        if b != spec.M / (s * (s - 1)):
            raise SolverError(f"MS beta_{s} = {b} departs from M/(s(s-1))")
    return ProtectionPlan(spec, alpha, beta, "MS")


def plan_mrb(spec: ProblemSpec) -> ProtectionPlan:
    n, M = spec.n, spec.M
    alpha = {n: M / n}
    beta: dict[int, Fraction] = {}
    for s in range(n, spec.k, -1):
        m = s - 1
        need = Fraction(0)
        for cut, const, coef in _stage_in_beta(spec, m, alpha, beta):
            # coef >= 1 for every cut (see _stage_in_beta)
            need = max(need, (M - const) / coef)
        beta[s] = need
        alpha[m] = alpha[s] + m * need
    return ProtectionPlan(spec, alpha, beta, "MRB")


def _stage_in_beta(spec: ProblemSpec, m: int, alpha, beta):
    """Stage-m cut capacities written as ``const + coef * beta_{m+1}``, with
    ``alpha_m = alpha_{m+1} + m * beta_{m+1}`` (full retention) substituted.

    ``coef = l_{m+1} + m * j_m = (m - j_m) + m * j_m`` is never zero.
    """
    s = m + 1
    for cut in enumerate_stage_cuts(spec, m):
        const = Fraction(0)
        for p in range(spec.n, m, -1):
            const += cut.j_at(p) * alpha[p]
        for q in range(spec.n, s, -1):
            const += cut.l_at(q) * beta[q]
        jm = cut.j_at(m)
        const += jm * alpha[s]
        yield cut, const, cut.l_at(s) + m * jm


def mrb_binding_slack(plan: ProtectionPlan, s: int) -> Fraction:
    """Smallest stage-(s-1) cut slack of an MRB plan (zero when beta_s binds)."""
    spec, M = plan.spec, plan.spec.M
    worst = None
    for cut, const, coef in _stage_in_beta(spec, s - 1, plan.alpha, plan.beta):
        slack = const + coef * plan.beta[s] - M
        worst = slack if worst is None else min(worst, slack)
    return worst


PLANNERS = {"op": plan_op, "ms": plan_ms, "mrb": plan_mrb}


@lru_cache(maxsize=None)
def cached_plan(spec: ProblemSpec, strategy: str) -> ProtectionPlan:
    return PLANNERS[strategy](spec)


def make_plan(spec: ProblemSpec, strategy: str = "op", arithmetic: str = "exact",
              epsilon: Optional[Fraction] = None) -> ProtectionPlan:
    strategy = strategy.lower()
    if strategy not in PLANNERS:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "op" and (arithmetic != "exact" or epsilon is not None):
        if epsilon is None:
            return plan_op(spec, arithmetic=arithmetic)
        return plan_op(spec, method="epsilon", epsilon=epsilon, arithmetic=arithmetic)
    return cached_plan(spec, strategy)


@dataclass(frozen=True)
class ComparisonRow:
    spec: ProblemSpec
    strategy: str
    delta: Fraction
    sigma: Fraction
    rho: Fraction
    final_alpha: Fraction
    gamma: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_plan(cls, plan: ProtectionPlan) -> "ComparisonRow":
        met = compute_metrics(plan)
        return cls(plan.spec, plan.strategy_tag, met.delta, met.sigma, met.rho,
                   met.final_alpha, tuple(sorted(met.gamma.items())))


def compare(spec: ProblemSpec, strategies: Sequence[str] = STRATEGIES) -> list[ComparisonRow]:
    return [ComparisonRow.from_plan(make_plan(spec, s)) for s in strategies]


def _sweep_cell(args) -> ComparisonRow:
    spec, strategy, arithmetic, epsilon = args
    return ComparisonRow.from_plan(make_plan(spec, strategy, arithmetic, epsilon))


def sweep(specs: Iterable[ProblemSpec], strategies: Sequence[str] = STRATEGIES,
          arithmetic: str = "exact", epsilon: Optional[Fraction] = None,
          jobs: int = 1) -> list[ComparisonRow]:
    """Rows for every (spec, strategy) pair, in input order whatever ``jobs`` is."""
    cells = [(spec, s.lower(), arithmetic, epsilon) for spec in specs for s in strategies]
    if jobs <= 1:
        return [_sweep_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_cell, cells))


def rows_to_csv(rows: Sequence[ComparisonRow]) -> str:
    stages = sorted({s for r in rows for s, _ in r.gamma})
    header = ["n", "k", "strategy"]
    for name in ("delta", "sigma", "rho", "alpha_k"):
        header += [name, f"{name}_decimal"]
    for s in stages:
        header += [f"gamma_{s}", f"gamma_{s}_decimal"]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        line = [r.spec.n, r.spec.k, r.strategy]
        for v in (r.delta, r.sigma, r.rho, r.final_alpha):
            line += [format_fraction(v), format_decimal(v)]
        gamma = dict(r.gamma)
        for s in stages:
            line += [format_fraction(gamma[s]), format_decimal(gamma[s])] if s in gamma else ["", ""]
        writer.writerow(line)
    return out.getvalue()
