import numpy as np
import pytest

from setwise_kemeny import ConstraintSet, InputError, Profile, Ranking
from setwise_kemeny.reduction import mot3_iterated
from setwise_kemeny.solver import (
    brute_force_medians,
    constrained_medians,
    validate_median_candidate,
)
from setwise_kemeny.stats import compute_statistics
from conftest import random_complete_profile, random_incomplete_profile
from oracles import exhaustive_medians

X, Y, Z, T = 0, 1, 2, 3


def test_fixture_a_3wise_median(profile_a):
    result = brute_force_medians(profile_a, k=3)
    assert result.optimal_value == 48
    assert [r.order for r in result.medians] == [(Z, T, X, Y)]


def test_fixture_a_2wise_median_is_the_condorcet_order(profile_a):
    # Every pairwise duel is strict and they are transitive, so the 2-wise
    # median is the unique Condorcet ranking t > x > y > z.
    result = brute_force_medians(profile_a, k=2)
    assert result.optimal_value == 23
    assert [r.order for r in result.medians] == [(T, X, Y, Z)]


def test_fixture_b_3wise_medians(profile_b):
    x, y, z, t, u, v = range(6)
    result = brute_force_medians(profile_b, k=3)
    assert result.optimal_value == 350
    assert {r.order for r in result.medians} == {
        (x, y, z, t, u, v),
        (u, x, y, z, t, v),
    }


def test_fixture_c_3wise_median(profile_c):
    result = brute_force_medians(profile_c, k=3)
    assert [r.order for r in result.medians] == [(0, 1, 3, 2, 4, 5)]


@pytest.mark.parametrize("seed", range(25))
def test_brute_force_matches_exhaustive_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    m = int(rng.integers(1, 10))
    prof = (
        random_complete_profile(rng, n, m)
        if seed % 2
        else random_incomplete_profile(rng, n, m)
    )
    for k in (2, 3):
        result = brute_force_medians(prof, k=k)
        value, orders = exhaustive_medians(prof, k)
        assert result.optimal_value == value
        assert [r.order for r in result.medians] == sorted(orders)


@pytest.mark.parametrize("seed", range(15))
def test_constrained_without_constraints_equals_brute_force(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 6))
    prof = random_complete_profile(rng, n, int(rng.integers(1, 8)))
    for k in (2, 3):
        brute = brute_force_medians(prof, k=k)
        free = constrained_medians(prof, k=k)
        assert free.optimal_value == brute.optimal_value
        assert free.medians == brute.medians


@pytest.mark.parametrize("seed", range(15))
def test_sound_constraints_preserve_the_median_set(seed):
    rng = np.random.default_rng(200 + seed)
    n = int(rng.integers(3, 7))
    prof = random_complete_profile(rng, n, int(rng.integers(1, 10)))
    stats = compute_statistics(prof)
    report = mot3_iterated(stats)
    brute = brute_force_medians(prof, k=3)
    constrained = constrained_medians(prof, k=3, constraints=report.constraints)
    assert constrained.optimal_value == brute.optimal_value
    assert constrained.medians == brute.medians
    assert constrained.nodes_explored <= brute.nodes_explored


def test_fixture_a_constrained_search_explores_four_rankings(profile_a):
    stats = compute_statistics(profile_a)
    report = mot3_iterated(stats)
    result = constrained_medians(profile_a, k=3, constraints=report.constraints)
    assert result.nodes_explored == 4
    assert [r.order for r in result.medians] == [(Z, T, X, Y)]


def test_pruned_search_agrees_on_value_and_medians(profile_b):
    full = constrained_medians(profile_b, k=3)
    pruned = constrained_medians(profile_b, k=3, prune=True)
    assert pruned.optimal_value == full.optimal_value
    assert pruned.medians == full.medians
    assert pruned.nodes_explored <= full.nodes_explored


def test_caps_and_validation(profile_a):
    with pytest.raises(InputError):
        brute_force_medians(profile_a, k=4)
    big = Profile.from_rankings([tuple(range(9))])
    with pytest.raises(InputError):
        brute_force_medians(big, k=3)
    with pytest.raises(InputError):
        constrained_medians(
            profile_a, k=3, constraints=ConstraintSet.from_pairs(5, [(0, 1)])
        )


def test_validate_median_candidate(profile_a):
    assert validate_median_candidate(profile_a, Ranking((Z, T, X, Y))) == []
    assert validate_median_candidate(profile_a, Ranking((Z, X, T, Y))) == [1]
    with pytest.raises(InputError):
        validate_median_candidate(profile_a, Ranking((0, 1, 2)))
