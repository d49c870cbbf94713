"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Lines are collected by ``conftest.record_acceptance`` and printed in the
terminal summary. Exact solves are shared through the planner cache.
"""

import random
from fractions import Fraction as F
from functools import lru_cache
from math import comb

import pytest

from conftest import record_acceptance
from protplan.cuts import cut_capacity, enumerate_all_cuts, enumerate_stage_cuts
from protplan.flowgraph import build_flow_network, min_cut, stage_min_cuts
from protplan.lp import delta_of, solve_epsilon, solve_lexicographic
from protplan.model import ProtectionPlan, check_feasible, compute_metrics, uniform_plan, validate_spec
from protplan.rlnc import packetize, predicted_uncoded_ranks, run_batch, run_trial
from protplan.strategies import STRATEGIES, make_plan

ALL_SPECS = [(n, k) for n in range(2, 11) for k in range(1, n)]


def report(number: int, title: str, ok: bool, detail: str) -> None:
    record_acceptance(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}: {detail}")
    assert ok, detail


@lru_cache(maxsize=None)
def metrics(n: int, k: int, strategy: str):
    return compute_metrics(make_plan(validate_spec(n, k), strategy))


def delta(n, k, s):
    return metrics(n, k, s).delta


def rho(n, k, s):
    return metrics(n, k, s).rho


def test_criterion_01_exact_fixture():
    plan = make_plan(validate_spec(6, 4), "op")
    met = compute_metrics(plan)
    values_ok = (met.delta == F(5, 4) and met.sigma == F(13, 4)
                 and (plan.beta[6], plan.beta[5]) == (F(1, 24), 0))
    cuts = stage_min_cuts(plan)
    enum = {m: min(cut_capacity(c, plan) for c in enumerate_stage_cuts(plan.spec, m)) for m in plan.spec.stages}
    oracle_ok = all(v == 1 for v in cuts.values()) and cuts == enum
    report(1, "OP(6,4) exact fixture", values_ok and oracle_ok,
           f"delta={met.delta} sigma={met.sigma} beta=({plan.beta[6]}, {plan.beta[5]}); "
           f"min-cut by stage {{5: {cuts[5]}, 4: {cuts[4]}}} (required 1 at both), enumerated {enum == cuts}")


def test_criterion_02_single_failure_law():
    bad = [n for n in range(3, 13) if delta(n, n - 1, "op") != 1]
    report(2, "delta_OP(n, n-1) = M for n in [3,12]", not bad, f"mismatches at n={bad}")


def test_criterion_03_ms_law():
    bad = []
    for k in range(1, 10):
        met = metrics(10, k, "ms")
        if met.delta != 10 - k or any(g != 1 for g in met.gamma.values()):
            bad.append(k)
    report(3, "delta_MS(10,k) = (10-k)M, gamma_s = M", not bad, f"mismatches at k={bad}")


def test_criterion_04_mrb_coincidences():
    pairs = {"(10,1)": (delta(10, 1, "mrb"), delta(10, 1, "op")),
             "(10,2)": (delta(10, 2, "mrb"), delta(10, 2, "op")),
             "(3,1)": (delta(3, 1, "mrb"), delta(3, 1, "op"))}
    ok = all(a == b for a, b in pairs.values()) and pairs["(3,1)"][1] == F(5, 3)
    report(4, "MRB = OP on delta at k in {1,2}, and (3,1) = 5/3", ok,
           ", ".join(f"{key}: {a} vs {b}" for key, (a, b) in pairs.items()))


def test_criterion_05_bandwidth_gap():
    gaps = [delta(10, k, "mrb") - delta(10, k, "op") for k in range(3, 9)]
    mx, mean = max(gaps), sum(gaps) / len(gaps)
    ok = F(14, 100) <= mx <= F(20, 100) and mean >= F(11, 100)
    report(5, "n=10 MRB-OP delta gap", ok, f"max={float(mx):.4f} (in [0.14,0.20]), mean={float(mean):.4f} (>= 0.11)")


def test_criterion_06_relative_saving():
    best = max(1 - delta(10, k, "op") / delta(10, k, "mrb") for k in range(1, 10))
    ok = abs(float(best) - 0.103) <= 0.025
    report(6, "max relative bandwidth saving at n=10", ok, f"{100 * float(best):.2f}% (target 10.3 +- 2.5 pp)")


def test_criterion_07_storage_gap():
    ks = range(2, 10)
    gaps = [rho(10, k, "mrb") - rho(10, k, "op") for k in ks]
    mx, mean = max(gaps), sum(gaps) / len(gaps)
    ms_close = max(abs(rho(10, k, "op") - rho(10, k, "ms")) for k in range(1, 10))
    saving = max(1 - rho(10, k, "op") / rho(10, k, "mrb") for k in ks)
    ok = (F(13, 100) <= mx <= F(20, 100) and mean >= F(9, 100)
          and ms_close <= F(5, 100) and abs(float(saving) - 0.44) <= 0.08)
    report(7, "n=10 device storage gap", ok,
           f"max={float(mx):.4f} (in [0.13,0.20]), mean={float(mean):.4f} (>= 0.09), "
           f"|rho_OP - rho_MS| <= {float(ms_close):.4f} (<= 0.05), saving={100 * float(saving):.1f}% (44 +- 8)")


def test_criterion_08_monotone_in_n():
    bad = []
    for c in (1, 2, 3, 4):
        seq = [delta(n, n - c, "op") for n in range(c + 2, 13)]
        if not all(a > b for a, b in zip(seq, seq[1:])):
            bad.append(f"c={c}: {[str(x) for x in seq]}")
    report(8, "delta_OP(n, n-c) strictly decreasing in n", not bad,
           "; ".join(bad) if bad else "c=1..4 strictly decreasing")


def test_criterion_09_cut_count():
    bad = [(n, k) for n in range(2, 11) for k in range(1, n)
           if len(enumerate_all_cuts(validate_spec(n, k))) != sum(comb(n, t) for t in range(1, n - k + 1))]
    report(9, "cut count = sum_t C(n,t)", not bad, f"mismatches {bad}")


def test_criterion_10_oracle_equivalence():
    rng = random.Random(2024)
    bad = []
    for trial in range(200):
        n = rng.randint(2, 8)
        spec = validate_spec(n, rng.randint(1, n - 1))
        m = rng.choice(spec.stages)
        alpha = {n: F(1, n)}
        alpha.update({i: F(rng.randint(0, 30), rng.randint(1, 30)) for i in spec.stages})
        beta = {s: F(rng.randint(0, 10), rng.randint(1, 40)) for s in spec.senders}
        plan = ProtectionPlan(spec, alpha, beta)
        flow = min_cut(build_flow_network(plan, m))
        enum = min(cut_capacity(c, plan) for c in enumerate_stage_cuts(spec, m))
        if flow != enum:
            bad.append((trial, n, spec.k, m))
    report(10, "max-flow min-cut = min enumerated cut (200 random plans)", not bad, f"{200 - len(bad)}/200 equal")


def test_criterion_11_epsilon_vs_lexicographic():
    bad = []
    for n, k in ALL_SPECS:
        spec = validate_spec(n, k)
        d_eps = delta_of(spec, solve_epsilon(spec).assignment)
        if d_eps != delta(n, k, "op"):
            bad.append((n, k))
    report(11, "epsilon and lexicographic delta identical, n <= 10", not bad, f"{len(ALL_SPECS) - len(bad)}/{len(ALL_SPECS)} agree")


def test_criterion_12_dominance():
    bad = []
    for n, k in ALL_SPECS:
        spec = validate_spec(n, k)
        if not (delta(n, k, "op") <= delta(n, k, "mrb") and delta(n, k, "op") <= delta(n, k, "ms")):
            bad.append(("order", n, k))
        for s in STRATEGIES:
            plan = make_plan(spec, s)
            if not check_feasible(plan).feasible or min(stage_min_cuts(plan).values()) < spec.M:
                bad.append((s, n, k))
    report(12, "OP dominates, every plan feasible and oracle-clean", not bad, f"problems: {bad}")


def test_criterion_13_rlnc():
    spec = validate_spec(10, 5)
    pp = packetize(make_plan(spec, "op"))
    summary = run_batch(pp, 100, base_seed=0, field_order=256)
    control = packetize(uniform_plan(spec, spec.M / 10))
    predicted = predicted_uncoded_ranks(control)
    control_ok = all(
        not rep.success and dict(rep.ranks) == predicted
        for rep in (run_trial(control, seed) for seed in range(100))
    )
    ok = summary.successes >= 99 and control_ok
    report(13, "RLNC on OP(10,5)", ok,
           f"{summary.successes}/100 full rank at G={pp.G}; zero-beta control failed 100/100 "
           f"with predicted ranks: {control_ok}")


def test_criterion_14_float_vs_exact():
    worst = 0.0
    for n, k in ALL_SPECS:
        spec = validate_spec(n, k)
        d_flt = delta_of(spec, solve_lexicographic(spec, "float").assignment)
        d_ex = float(delta(n, k, "op"))
        worst = max(worst, abs(d_flt - d_ex) / d_ex)
    report(14, "float delta within 1e-9 relative of exact", worst <= 1e-9, f"worst relative error {worst:.2e}")


def test_criterion_15_front_loading():
    op, ms = metrics(10, 5, "op").gamma, metrics(10, 5, "ms").gamma
    early_op, early_ms = op[10] + op[9], ms[10] + ms[9]
    total_op, total_ms = sum(op.values()), sum(ms.values())
    ok = early_op > early_ms and total_op < total_ms
    report(15, "OP gamma front-loaded at (10,5)", ok,
           f"gamma_10+gamma_9: OP {early_op} vs MS {early_ms}; total: OP {total_op} vs MS {total_ms}")
