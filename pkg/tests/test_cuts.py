import itertools
import warnings
from fractions import Fraction as F
from math import comb

import pytest

from protplan.cuts import (
    CutConstraint,
    CutCountWarning,
    compositions,
    cut_capacity,
    enumerate_all_cuts,
    enumerate_stage_cuts,
    induced_transmissions,
)
from protplan.model import uniform_plan, validate_spec


def brute_compositions(total, parts):
    """Independent oracle: filter the full product, sort descending."""
    out = [c for c in itertools.product(range(total + 1), repeat=parts) if sum(c) == total]
    return sorted(out, reverse=True)


@pytest.mark.parametrize("total, parts", [(0, 1), (3, 1), (2, 3), (4, 3), (5, 4), (6, 2), (3, 5)])
def test_compositions_match_brute_force(total, parts):
    assert list(compositions(total, parts)) == brute_compositions(total, parts)


def test_stage_65_reproduces_the_six_line_example(spec64):
    spec = validate_spec(6, 5)
    cuts = enumerate_stage_cuts(spec, 5)
    assert [c.j for c in cuts] == [(5, 0), (4, 1), (3, 2), (2, 3), (1, 4), (0, 5)]
    # (6-5)*j_6 beta_6 in every line
    assert [c.l for c in cuts] == [(5,), (4,), (3,), (2,), (1,), (0,)]
    assert cuts[0].expression() == "5*alpha_6 + 5*beta_6"


def test_stage_64(spec64):
    cuts = enumerate_stage_cuts(spec64, 4)
    assert len(cuts) == 15
    first = cuts[0]
    assert first.j == (4, 0, 0) and first.l == (8, 4)
    assert first.expression() == "4*alpha_6 + 8*beta_6 + 4*beta_5"


def test_stage_32():
    cuts = enumerate_stage_cuts(validate_spec(3, 2), 2)
    assert [c.j for c in cuts] == [(2, 0), (1, 1), (0, 2)]


def test_stage_out_of_range(spec64):
    with pytest.raises(ValueError):
        enumerate_stage_cuts(spec64, 6)
    with pytest.raises(ValueError):
        enumerate_stage_cuts(spec64, 3)


@pytest.mark.parametrize("n", range(2, 13))
def test_stage_counts_are_binomial(n):
    spec = validate_spec(n, 1)
    for m in spec.stages:
        cuts = enumerate_stage_cuts(spec, m)
        assert len(cuts) == comb(n, n - m)
        for c in cuts:
            assert sum(c.j) == m and all(0 <= x <= m for x in c.j)
            # re-derive l independently of induced_transmissions
            for q in range(n, m, -1):
                assert c.l_at(q) == (q - m) * sum(c.j_at(p) for p in range(q, n + 1))


@pytest.mark.parametrize("n, k, expected", [(6, 4, 21), (10, 1, 1022), (7, 6, 7), (12, 11, 12)])
def test_total_counts(n, k, expected):
    assert len(enumerate_all_cuts(validate_spec(n, k))) == expected


def test_count_warning():
    with pytest.warns(CutCountWarning):
        enumerate_all_cuts(validate_spec(6, 4), limit=20)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        enumerate_all_cuts(validate_spec(6, 4), limit=21)


def test_cut_constraint_rejects_inconsistent_vectors():
    with pytest.raises(ValueError):
        CutConstraint(6, 4, (4, 0, 0), (8, 3))
    with pytest.raises(ValueError):
        CutConstraint(6, 4, (3, 0, 0), induced_transmissions(6, 4, (3, 0, 0)))


def test_cut_capacity_examples(spec64, op64, ms64):
    by_j = {c.j: c for c in enumerate_stage_cuts(spec64, 4)}
    assert cut_capacity(by_j[(2, 2, 0)], ms64) == F(16, 15)
    assert cut_capacity(by_j[(0, 0, 4)], op64) == 1
    for n in range(2, 9):
        spec = validate_spec(n, n - 1)
        zero = uniform_plan(spec, spec.M / n)
        top = enumerate_stage_cuts(spec, n - 1)[0]
        assert top.j == (n - 1, 0)
        assert cut_capacity(top, zero) == F(n - 1, n)


def test_cut_capacity_rejects_foreign_cut(op64):
    other = enumerate_stage_cuts(validate_spec(7, 4), 4)[0]
    with pytest.raises(ValueError):
        cut_capacity(other, op64)
