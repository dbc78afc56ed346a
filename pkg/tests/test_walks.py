"""Entropy ladders, trajectory enumeration, partition views, coarse records."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from walklab import groups, measures, walks
from walklab.exact_entropy import LogLinear
from walklab.groups import DINF, IntegerLattice
from walklab.measures import (
    MeasureError,
    convolution_power,
    dinf_family,
    point_mass,
    product_measure,
    uniform_measure,
)
from walklab.walks import (
    EntropyLadder,
    TrajectoryEnumeration,
    coarse_entropy,
    coarse_entropy_form,
    coarse_trajectory,
    coarse_view,
    conditional_entropy,
    conditional_entropy_form,
    endpoint_view,
    entropy_ladder,
    free_group_distance_distribution,
    free_group_srw_ladder,
    increment_view,
    joint_view,
    position_view,
    sample_walk,
    sphere_size,
    view_entropy,
    view_entropy_form,
)

F = Fraction
Z = IntegerLattice(1)
LOG2 = LogLinear.of_log(2)


def uniform_pm1():
    return uniform_measure(Z, [(1,), (-1,)])


# ---------------------------------------------------------------------------
# entropy ladders


def test_point_mass_ladder_is_zero():
    ladder = entropy_ladder(point_mass(Z, (3,)), 6)
    assert ladder.values == [0.0] * 7
    assert all(f.is_zero() for f in ladder.forms)
    assert all(c.ok for c in ladder.verify())


def test_uniform_walk_second_step_entropy():
    ladder = entropy_ladder(uniform_pm1(), 4)
    assert ladder.forms[1] == LOG2
    assert ladder.forms[2] == LOG2.scale(F(3, 2))
    assert abs(ladder.values[2] - 1.5 * math.log(2)) < 1e-12


def test_ladder_invariants_on_family_measure():
    ladder = entropy_ladder(dinf_family(F(3, 4), 3), 8)
    checks = ladder.verify()
    assert checks and all(c.ok for c in checks)


def test_ladder_diff_form():
    ladder = entropy_ladder(uniform_pm1(), 3)
    assert ladder.diff_form(0) == LOG2
    assert ladder.diff_form(1) == LOG2.scale(F(1, 2))


def test_ladder_requires_positive_length():
    with pytest.raises(MeasureError):
        entropy_ladder(uniform_pm1(), 0)


def test_ladder_sum_matches_product_measure():
    eta = uniform_pm1()
    mu = dinf_family(F(3, 4), 3)
    product = product_measure(eta, mu)
    direct = entropy_ladder(product, 4)
    summed = EntropyLadder.sum_of(entropy_ladder(eta, 4),
                                  entropy_ladder(mu, 4), "sum")
    for n in range(5):
        assert (direct.forms[n] - summed.forms[n]).is_zero()


def test_ladder_truncation_annotates_cap():
    mu = uniform_measure(IntegerLattice(2),
                         [(1, 0), (-1, 0), (0, 1), (0, -1)])
    with pytest.raises(measures.SupportCapError):
        entropy_ladder(mu, 8, cap=20)
    ladder = entropy_ladder(mu, 8, cap=20, allow_truncation=True)
    assert ladder.truncated
    assert ladder.n_max < 8


def test_ladder_rows_and_ratios():
    ladder = entropy_ladder(uniform_pm1(), 3)
    rows = ladder.to_rows()
    assert [r["n"] for r in rows] == [0, 1, 2, 3]
    assert math.isnan(rows[0]["ratio"])
    assert rows[1]["ratio"] == ladder.values[1]
    assert ladder.ratios()[0] == ladder.values[1]
    assert ladder.diffs()[0] == ladder.values[1]


# ---------------------------------------------------------------------------
# the radial free-group ladder


def test_radial_first_step():
    ladder = free_group_srw_ladder(2, 3, exact=True)
    assert ladder.forms[1] == LogLinear.of_log(4)


def test_radial_distance_law_small_n():
    dist = free_group_distance_distribution(2, 2, exact=True)
    assert dist[0] == F(1, 4)
    assert dist[2] == F(3, 4)
    assert sum(dist) == 1


def test_sphere_sizes():
    assert [sphere_size(2, k) for k in range(4)] == [1, 4, 12, 36]


def test_radial_ladder_matches_direct_convolution():
    # The radial chain and the honest free-group convolution must agree.
    eta = measures.uniform_measure(groups.FreeGroup(2),
                                   [(1,), (-1,), (2,), (-2,)])
    direct = entropy_ladder(eta, 5)
    radial = free_group_srw_ladder(2, 5, exact=True)
    for n in range(6):
        assert (direct.forms[n] - radial.forms[n]).is_zero()


def test_radial_increments_nonincreasing_to_plateau():
    ladder = free_group_srw_ladder(2, 400)
    diffs = ladder.diffs()
    assert all(diffs[i + 1] <= diffs[i] + 1e-9 for i in range(len(diffs) - 1))
    assert abs(diffs[-1] - 0.5 * math.log(3)) < 0.03


# ---------------------------------------------------------------------------
# trajectories


def test_sampled_positions_recompute_from_increments():
    mu = dinf_family(F(3, 4), 3)
    traj = sample_walk(mu, 50, seed=5)
    pos = groups.identity(DINF)
    assert traj.positions[0] == pos
    for i, g in enumerate(traj.increments):
        pos = groups.multiply(DINF, pos, g)
        assert traj.positions[i + 1] == pos


def test_sampling_is_deterministic_per_seed_and_index():
    mu = uniform_pm1()
    a = sample_walk(mu, 100, seed=9, index=3)
    b = sample_walk(mu, 100, seed=9, index=3)
    c = sample_walk(mu, 100, seed=9, index=4)
    assert a.increments == b.increments
    assert a.increments != c.increments


def test_coarse_trajectory_picks_multiples():
    mu = uniform_pm1()
    traj = sample_walk(mu, 7, seed=1)
    coarse = coarse_trajectory(traj, 3)
    assert coarse.t0 == 3
    assert coarse.positions == (traj.positions[3], traj.positions[6])
    assert len(coarse.positions) == 7 // 3


def test_enumeration_exhausts_sequences():
    mu = uniform_pm1()
    enum = TrajectoryEnumeration(mu, 2)
    assert len(enum.seqs) == 4
    assert all(w == F(1, 4) for w in enum.weights)
    assert enum.total() == 1


def test_enumeration_zero_steps_is_single_empty_path():
    enum = TrajectoryEnumeration(uniform_pm1(), 0)
    assert enum.seqs == [()]
    assert enum.weights == [F(1)]
    assert enum.positions == [()]
    assert enum.total() == 1


def test_enumeration_rejects_negative_length():
    with pytest.raises(MeasureError):
        TrajectoryEnumeration(uniform_pm1(), -1)


def test_enumeration_respects_cap():
    mu = dinf_family(F(3, 4), 3)
    with pytest.raises(measures.SupportCapError):
        TrajectoryEnumeration(mu, 10, cap=100)


def test_enumeration_weights_multiply():
    mu = measures.FiniteMeasure.from_pairs(
        Z, [((1,), F(3, 4)), ((-1,), F(1, 4))])
    enum = TrajectoryEnumeration(mu, 3)
    assert enum.total() == 1
    for seq, w in zip(enum.seqs, enum.weights):
        expected = F(1)
        for idx in seq:
            expected *= enum.atom_weights[idx]
        assert w == expected


# ---------------------------------------------------------------------------
# partition views and conditional entropy


def _enum_pm1(n):
    return TrajectoryEnumeration(uniform_pm1(), n)


def test_view_entropy_of_first_position():
    enum = _enum_pm1(3)
    assert view_entropy_form(enum, position_view(1)) == LOG2
    assert abs(view_entropy(enum, position_view(1)) - math.log(2)) < 1e-12


def test_conditional_entropy_of_view_on_itself():
    enum = _enum_pm1(3)
    w2 = position_view(2)
    assert conditional_entropy_form(enum, w2, w2).is_zero()
    assert abs(conditional_entropy(enum, w2, w2)) < 1e-12


def _triples(n):
    return [
        (position_view(1), position_view(2), position_view(n)),
        (increment_view(2), endpoint_view(), position_view(1)),
        (coarse_view(2), increment_view(1), endpoint_view()),
    ]


@pytest.mark.parametrize("make_mu", [uniform_pm1,
                                     lambda: dinf_family(F(3, 4), 3)],
                         ids=["uniform-z", "dinf-family"])
def test_conditional_entropy_identities_exact(make_mu):
    # Chain rule and the two monotonicity inequalities, decided exactly.
    enum = TrajectoryEnumeration(make_mu(), 3)
    for rho, gamma, delta in _triples(3):
        chain_lhs = conditional_entropy_form(enum, joint_view(rho, gamma),
                                             delta)
        chain_rhs = (conditional_entropy_form(enum, rho,
                                              joint_view(gamma, delta))
                     + conditional_entropy_form(enum, gamma, delta))
        assert (chain_lhs - chain_rhs).is_zero()
        refine = (conditional_entropy_form(enum, joint_view(rho, delta),
                                           gamma)
                  - conditional_entropy_form(enum, rho, gamma))
        assert refine.sign() >= 0
        condition = (conditional_entropy_form(enum, rho, gamma)
                     - conditional_entropy_form(enum, rho,
                                                joint_view(gamma, delta)))
        assert condition.sign() >= 0


def test_joint_view_symmetry():
    enum = _enum_pm1(3)
    a, b = position_view(1), position_view(3)
    ab = view_entropy_form(enum, joint_view(a, b))
    ba = view_entropy_form(enum, joint_view(b, a))
    assert (ab - ba).is_zero()


def test_view_index_validation():
    with pytest.raises(MeasureError):
        position_view(0)
    with pytest.raises(MeasureError):
        increment_view(0)
    with pytest.raises(MeasureError):
        coarse_view(0)


# ---------------------------------------------------------------------------
# coarse entropy


def test_coarse_entropy_single_block():
    mu = uniform_pm1()
    for n in (2, 3, 4):
        block = measures.exact_entropy(convolution_power(mu, n))
        assert (coarse_entropy_form(mu, n, n) - block).is_zero()


def test_coarse_entropy_fair_walk_values():
    mu = uniform_pm1()
    form = coarse_entropy_form(mu, 4, 2)
    assert form == LOG2.scale(3)
    assert abs(coarse_entropy(mu, 4, 2) - 3 * math.log(2)) < 1e-12


@pytest.mark.parametrize("n,t0", [(4, 2), (6, 2), (6, 3)])
def test_coarse_entropy_matches_enumerated_view(n, t0):
    mu = uniform_pm1()
    enum = TrajectoryEnumeration(mu, n)
    via_view = view_entropy_form(enum, coarse_view(t0))
    assert (coarse_entropy_form(mu, n, t0) - via_view).is_zero()


def test_determined_views_have_zero_conditional_entropy():
    # The first increment and the first position determine each other.
    enum = _enum_pm1(4)
    g1, w1 = increment_view(1), position_view(1)
    assert conditional_entropy_form(enum, g1, w1).is_zero()
    assert conditional_entropy_form(enum, w1, g1).is_zero()
    # The coarse t0=2 record is a function of the full position record.
    full = joint_view(*(position_view(i) for i in range(1, 5)))
    assert conditional_entropy_form(enum, coarse_view(2), full).is_zero()


def test_coarse_entropy_argument_validation():
    mu = uniform_pm1()
    with pytest.raises(MeasureError):
        coarse_entropy(mu, 3, 0)
    with pytest.raises(MeasureError):
        coarse_entropy(mu, 2, 3)
