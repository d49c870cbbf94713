from fractions import Fraction as F

import pytest

from protplan.model import full_replication_plan, uniform_plan, validate_spec
from protplan.rlnc import packetize, predicted_uncoded_ranks, run_batch, run_trial
from protplan.strategies import make_plan


def test_packetize_examples():
    spec = validate_spec(6, 4)
    pp = packetize(make_plan(spec, "op"))
    assert (pp.G, dict(pp.a), dict(pp.b), pp.exact) == (24, {6: 4, 5: 6, 4: 6}, {6: 1, 5: 0}, True)
    pp = packetize(make_plan(spec, "ms"))
    assert (pp.G, dict(pp.a), dict(pp.b)) == (60, {6: 10, 5: 12, 4: 15}, {6: 2, 5: 3})
    pp = packetize(make_plan(validate_spec(10, 5), "op"))
    assert pp.G == 90
    assert dict(pp.a) == {10: 9, 9: 14, 8: 18, 7: 18, 6: 18, 5: 18}
    assert pp.b[10] == pp.b[9] == 1


def test_packetize_rounds_up_when_grid_too_large():
    pp = packetize(make_plan(validate_spec(6, 4), "ms"), max_G=24)
    assert pp.G == 24 and not pp.exact
    assert pp.a[5] == 5 and pp.b[6] == 1   # ceil(24/5), ceil(24/30)


def test_packetize_rejects_too_small_grid():
    with pytest.raises(ValueError):
        packetize(make_plan(validate_spec(6, 4), "op"), max_G=5)


def test_trial_is_deterministic():
    pp = packetize(make_plan(validate_spec(6, 3), "op"))
    assert run_trial(pp, 11) == run_trial(pp, 11)


def test_traffic_accounting():
    pp = packetize(make_plan(validate_spec(7, 3), "mrb"))
    rep = run_trial(pp, 4)
    expected = sum(s * (s - 1) * pp.b[s] for s in pp.b) * pp.data_size / pp.G
    assert rep.traffic == expected == pp.traffic()


def test_zero_transmission_control():
    spec = validate_spec(10, 5)
    pp = packetize(uniform_plan(spec, spec.M / 10))
    predicted = predicted_uncoded_ranks(pp)
    for seed in range(5):
        rep = run_trial(pp, seed)
        assert dict(rep.ranks) == predicted
        assert not rep.success


def test_full_replication_always_succeeds():
    pp = packetize(full_replication_plan(validate_spec(6, 2)))
    summary = run_batch(pp, 10)
    assert summary.successes == 10
    assert all(r == pp.G for r in summary.per_epoch_min_rank.values())


def test_large_field():
    pp = packetize(make_plan(validate_spec(5, 3), "op"))
    summary = run_batch(pp, 5, field_order=65536)
    assert summary.successes == 5


def test_rank_never_exceeds_grid_or_storage():
    pp = packetize(make_plan(validate_spec(8, 4), "ms"))
    rep = run_trial(pp, 0)
    for m, r in rep.ranks.items():
        assert r <= min(pp.G, m * pp.a[m])
    assert len(rep.failed_order) == 4 and len(set(rep.failed_order)) == 4


def test_summary_dict():
    summary = run_batch(packetize(make_plan(validate_spec(4, 2), "op")), 3, base_seed=9)
    d = summary.to_dict()
    assert d["trials"] == 3 and list(d["per_epoch_min_rank"]) == ["3", "2"]
    assert summary.success_rate == d["successes"] / 3
