import json
import math

import pytest

import gtdesign as gt


def test_optimal_size_sterrett():
    r = gt.optimal_size(gt.ProcedureKind.Sterrett, 0.05)
    assert r.k_star == 7
    assert r.cost_per_person == pytest.approx(0.35977, abs=5e-6)


def test_cutoffs():
    c = gt.cutoffs()
    assert c.p_U == pytest.approx((3 - math.sqrt(5)) / 2)
    assert gt.individual_testing_optimal(0.5)
    assert not gt.individual_testing_optimal(0.38)


def test_partition_dp_and_direct_agree():
    dp = gt.optimal_partition_dp(gt.ProcedureKind.Sterrett, 100, 0.05)
    direct = gt.optimal_partition_direct(gt.ProcedureKind.Sterrett, 100, 0.05)
    assert direct.best().group_counts() == "5×6, 10×7"
    assert dp.total_expected_tests == pytest.approx(direct.best().total_expected_tests, rel=1e-9)


def test_partition_json_round_trip():
    part = gt.optimal_partition_dp(gt.ProcedureKind.D, 13, 0.05)
    again = gt.Partition.from_json(part.to_json())
    assert again.sizes == part.sizes == [5, 4, 4]
    assert again.total_expected_tests == pytest.approx(5.615, abs=5e-4)


def test_nested_policy():
    policy = gt.solve_nested(13, 0.05)
    assert policy.H1[13] == pytest.approx(3.878, abs=5e-4)
    assert policy.x_H[2:] == list(range(2, 14))
    back = gt.NestedPolicy.from_json(policy.to_json())
    assert back.x_G == policy.x_G


def test_bad_policy_raises_schema_error():
    doc = json.loads(gt.solve_nested(4, 0.1).to_json())
    doc["x_H"] = doc["x_H"][:-1]
    with pytest.raises(gt.SchemaError):
        gt.NestedPolicy.from_json(json.dumps(doc))


def test_mismatch_and_exact():
    policy = gt.solve_nested(100, 0.05)
    assert gt.evaluate_policy_mismatch(policy, 0.001) == pytest.approx(7.468, abs=5e-4)
    small = gt.solve_nested(8, 0.2)
    exact = gt.exact_expected_tests(gt.ProcedureKind.NestedR1, small, 0.2)
    assert exact.expected_tests == pytest.approx(small.H1[8], rel=1e-10)


def test_monte_carlo_deterministic():
    part = gt.optimal_partition_dp(gt.ProcedureKind.Sterrett, 13, 0.05)
    a = gt.monte_carlo_expected_tests(gt.ProcedureKind.Sterrett, part, 0.05, 20000, 7)
    b = gt.monte_carlo_expected_tests(gt.ProcedureKind.Sterrett, part, 0.05, 20000, 7)
    assert a.expected_tests == b.expected_tests
    assert abs(a.expected_tests - part.total_expected_tests) < 4 * a.std_error


def test_bounds():
    assert gt.entropy_bound(100, 0.05) == pytest.approx(28.640, abs=1e-3)
    h = gt.huffman_lower_bound(6, 0.1)
    assert gt.entropy_bound(6, 0.1) <= h <= gt.entropy_bound(6, 0.1) + 1
    with pytest.raises(gt.CapacityExceeded):
        gt.huffman_lower_bound(25, 0.1)


def test_rejects_bad_prevalence():
    with pytest.raises(ValueError):
        gt.optimal_size(gt.ProcedureKind.D, 1.5)


def test_unsupported_procedure():
    with pytest.raises(gt.UnsupportedProcedure):
        gt.group_cost(gt.ProcedureKind.NestedR1, 3, 0.1)


def test_minimax_and_table():
    r = gt.minimax_group_size(gt.ProcedureKind.D, 0.2, 1e-3)
    assert r.k_star_star == 8
    text = gt.table(1)
    assert "67.483" in text
