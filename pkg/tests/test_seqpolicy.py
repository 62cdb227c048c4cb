"""Sequential policies: enumeration, obedience values, serialization."""

import itertools

import numpy as np
import pytest

from robustcoord import (
    CapacityError,
    SequentialPolicy,
    check_policy,
    count_sequences,
    enumerate_sequences,
    expected_welfare,
    policy_from_dict,
    policy_from_json,
    policy_to_dict,
    policy_to_json,
    so_c_value,
    so_n_value,
)
from robustcoord.seqpolicy import (
    check_feasibility,
    expand_uniform_full,
    predecessors,
)


def test_count_sequences():
    assert count_sequences(1) == 2
    assert count_sequences(2) == 5
    assert count_sequences(3) == 16
    assert count_sequences(4) == 65
    assert count_sequences(8) == 109601
    assert count_sequences(9) == 986410
    assert count_sequences(10) == 9864101


def test_enumerate_sequences_canonical_order():
    seqs = enumerate_sequences(2)
    assert seqs == [(), (0,), (1,), (0, 1), (1, 0)]
    assert len(enumerate_sequences(3)) == 16


def test_enumeration_guard():
    with pytest.raises(CapacityError, match="sequences"):
        enumerate_sequences(10)


def test_predecessors():
    assert predecessors((2, 0, 1), 0) == 1
    assert predecessors((2, 0, 1), 2) == 0
    # agents outside the sequence would join after everyone listed
    assert predecessors((2, 0), 1) == 2


class TestPolicyConstruction:
    def test_drops_zero_mass_and_merges_duplicates(self):
        pol = SequentialPolicy(
            3, 2, [((0, (0,)), 0.3), ((0, (0,)), 0.2), ((1, ()), 0.0)], {}
        )
        assert pol.entries == {(0, (0,)): 0.5}

    def test_rejects_bad_state(self):
        with pytest.raises(ValueError, match="state"):
            SequentialPolicy(3, 2, {(2, ()): 1.0}, {})

    def test_rejects_repeated_agent(self):
        with pytest.raises(ValueError, match="repeats"):
            SequentialPolicy(3, 1, {(0, (1, 1)): 1.0}, {})

    def test_rejects_agent_out_of_range(self):
        with pytest.raises(ValueError, match="agent"):
            SequentialPolicy(3, 1, {(0, (3,)): 1.0}, {})

    def test_rejects_excess_mass(self):
        with pytest.raises(ValueError, match="mass above 1"):
            SequentialPolicy(3, 1, {(0, ()): 0.7}, {0: 0.5})

    def test_state_mass_and_feasibility(self, case1):
        env, _ = case1
        pol = SequentialPolicy(3, 2, {(0, ()): 0.4, (1, ()): 1.0}, {0: 0.6})
        assert pol.state_mass(0) == pytest.approx(1.0, abs=1e-12)
        ok, mass = check_feasibility(pol, 1e-9)
        assert ok and mass == pytest.approx((1.0, 1.0), abs=1e-12)
        short = SequentialPolicy(3, 2, {(0, ()): 0.4, (1, ()): 1.0}, {})
        ok, _ = check_feasibility(short, 1e-9)
        assert not ok


def test_worked_example_obedience_values(case1):
    # invite 1-then-3 or 2-then-3 in the weak state, 3-1-2 in the strong one
    env, _ = case1
    pol = SequentialPolicy(
        3, 2, {(0, (0, 2)): 0.6, (0, (1, 2)): 0.4, (1, (2, 0, 1)): 1.0}, {}
    )
    so_c = [so_c_value(pol, env, i) for i in range(3)]
    assert so_c[0] == pytest.approx(0.025, abs=1e-12)
    assert so_c[1] == pytest.approx(0.25, abs=1e-12)
    assert so_c[2] == pytest.approx(-0.275, abs=1e-12)  # third agent balks
    so_n = [so_n_value(pol, env, i) for i in range(3)]
    assert so_n[0] == pytest.approx(-0.18, abs=1e-12)
    assert so_n[1] == pytest.approx(-0.27, abs=1e-12)
    assert so_n[2] == 0.0
    report = check_policy(pol, env)
    assert not report.passed
    assert report.feasible


def test_uniform_full_closed_form_matches_expansion(case1):
    env, _ = case1
    rng = np.random.default_rng(3)
    for _ in range(10):
        p0, p1 = rng.uniform(0.1, 1.0, 2)
        pol = SequentialPolicy(
            3, 2, {(0, ()): 1.0 - p0, (1, ()): 1.0 - p1}, {0: p0, 1: p1}
        )
        expanded = expand_uniform_full(pol)
        assert not expanded.uniform_full
        assert len(expanded.entries) == 2 + 2 * 6
        for i in range(3):
            assert so_c_value(pol, env, i) == pytest.approx(
                so_c_value(expanded, env, i), abs=1e-12
            )
            assert so_n_value(pol, env, i) == pytest.approx(
                so_n_value(expanded, env, i), abs=1e-12
            )


def test_uniform_full_so_c_is_potential_average(case1):
    env, _ = case1
    pol = SequentialPolicy(3, 2, {}, {0: 1.0, 1: 1.0})
    # every agent pools ranks uniformly, so the gain telescopes to F(N)/N
    want = 0.5 * (-2.85) / 3 + 0.5 * 1.9499999999999997 / 3
    for i in range(3):
        assert so_c_value(pol, env, i) == pytest.approx(want, abs=1e-12)


def test_expected_welfare(case1):
    env, wf = case1
    pol = SequentialPolicy(3, 2, {(0, ()): 1.0}, {1: 1.0})
    assert expected_welfare(pol, env, wf) == pytest.approx(6.0, abs=1e-12)


def test_expand_guard():
    pol = SequentialPolicy(10, 1, {}, {0: 1.0})
    with pytest.raises(CapacityError):
        expand_uniform_full(pol)


def test_report_to_dict_keys(case1):
    env, _ = case1
    pol = SequentialPolicy(3, 2, {(0, ()): 1.0, (1, ()): 1.0}, {})
    d = check_policy(pol, env).to_dict()
    assert set(d) == {"so_c", "so_n", "state_mass", "feasible", "pass", "tol"}
    assert d["pass"] is True  # silence is always obedient


def test_serialization_round_trip():
    pol = SequentialPolicy(
        4, 2, {(0, (2, 0)): 0.25, (1, ()): 1.0}, {0: 0.75}
    )
    again = policy_from_dict(policy_to_dict(pol, labels=("lo", "hi")))
    assert again.entries == pol.entries
    assert again.uniform_full == pol.uniform_full
    assert again.n_agents == 4 and again.n_states == 2

    text = policy_to_json(pol)
    assert policy_from_json(text).entries == pol.entries
    assert '"states"' not in text  # labels only when provided
    assert '"states"' in policy_to_json(pol, labels=("lo", "hi"))


def test_canonical_items_sorted():
    pol = SequentialPolicy(
        3, 2, {(1, (0,)): 0.5, (0, (1, 0)): 0.2, (0, ()): 0.8, (1, (2,)): 0.5}, {}
    )
    keys = [k for k, _ in pol.canonical_items()]
    assert keys == sorted(keys, key=lambda k: (k[0], len(k[1]), k[1]))


def test_sequence_orderings_matter(case1):
    # putting the strong state's holdout first flips the sign structure
    env, _ = case1
    fwd = SequentialPolicy(3, 2, {(1, (0, 1, 2)): 1.0, (0, ()): 1.0}, {})
    rev = SequentialPolicy(3, 2, {(1, (2, 1, 0)): 1.0, (0, ()): 1.0}, {})
    vals_fwd = sorted(so_c_value(fwd, env, i) for i in range(3))
    vals_rev = sorted(so_c_value(rev, env, i) for i in range(3))
    assert vals_fwd == pytest.approx(vals_rev, abs=1e-12)
    assert so_c_value(fwd, env, 0) != so_c_value(rev, env, 0)


def test_all_permutation_mixture_equivalent_to_uniform_block(case1):
    env, _ = case1
    explicit = {
        (s, g): 0.5 / 6.0
        for s in range(2)
        for g in itertools.permutations(range(3))
    }
    explicit[(0, ())] = 0.5
    explicit[(1, ())] = 0.5
    expl = SequentialPolicy(3, 2, explicit, {})
    blocked = SequentialPolicy(
        3, 2, {(0, ()): 0.5, (1, ()): 0.5}, {0: 0.5, 1: 0.5}
    )
    for i in range(3):
        assert so_c_value(expl, env, i) == pytest.approx(
            so_c_value(blocked, env, i), abs=1e-12
        )
