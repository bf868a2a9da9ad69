from fractions import Fraction

import numpy as np
import pytest

from setwise_kemeny import ConstraintSet, InputError, Ranking
from setwise_kemeny.reduction import (
    ALL_METHODS,
    EVERY_MEDIAN,
    EVERY_MEDIAN_METHODS,
    SOME_MEDIAN,
    at3_all,
    consecutive_pair_check,
    consensus_levels,
    mot2_iterated_improved,
    mot2_single,
    mot3_certify_pair,
    mot3_iterated,
    mot3_single,
    mote3_all,
    reduction_rate_bound,
    run_method,
)
from setwise_kemeny.stats import compute_statistics
from conftest import random_complete_profile
from oracles import exhaustive_medians

X, Y, Z, T = 0, 1, 2, 3


def test_fixture_a_3mot_pairs(stats_a):
    report = mot3_single(stats_a)
    assert set(report.certified) == {(T, X), (X, Y)}
    assert report.guarantee == EVERY_MEDIAN
    assert report.certified_fraction == Fraction(2, 6)


def test_fixture_a_consensus_levels(stats_a):
    single = mot3_single(stats_a)
    iterated = mot3_iterated(stats_a)
    levels = consensus_levels(single, iterated)
    assert levels == (Fraction(1, 3), Fraction(1, 3))


def test_fixture_a_2wise_mot_pairs(stats_a):
    report = mot2_single(stats_a)
    assert set(report.certified) == {(T, X), (T, Y), (T, Z), (X, Y)}
    assert report.rule == 2


def test_fixture_c_iterated_certifies_within_four_rounds(profile_c):
    stats = compute_statistics(profile_c)
    report = mot3_iterated(stats)
    # chain c1 > c2 > c4 > c5 > c6 plus the pairs c1 > c3 and c3 > c5
    chain = [(0, 1), (1, 3), (3, 4), (4, 5), (0, 2), (2, 4)]
    for x, y in chain:
        assert report.constraints.contains(x, y)
    assert report.solved_fraction >= Fraction(6, 15)
    assert all(round_no <= 3 for round_no in report.certified.values())


def test_iterated_certificates_are_superset_of_single_pass(stats_a):
    single = mot3_single(stats_a)
    iterated = mot3_iterated(stats_a)
    assert set(single.certified) <= set(iterated.certified)


def test_mote_contains_mot(stats_a):
    strict = mot3_single(stats_a)
    equality = mote3_all(stats_a)
    assert equality.guarantee == SOME_MEDIAN
    assert set(strict.certified) <= set(equality.certified)


def test_seed_constraints_feed_iteration(profile_a):
    stats = compute_statistics(profile_a)
    base = mot3_iterated(stats)
    seed = ConstraintSet.from_pairs(4, [(Z, T)])
    seeded = mot3_iterated(stats, seed=seed)
    assert seeded.constraints.contains(Z, T)
    assert base.constraints.edges() <= seeded.constraints.edges()


def test_seed_validation(stats_a):
    with pytest.raises(InputError):
        mot3_iterated(stats_a, seed=ConstraintSet.from_pairs(5, [(0, 1)]))


def test_run_method_unknown_name(stats_a):
    with pytest.raises(InputError):
        run_method("bogus", stats_a)


@pytest.mark.parametrize("seed", range(30))
def test_every_median_methods_are_sound_on_random_profiles(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 6))
    m = int(rng.integers(1, 9))
    prof = random_complete_profile(rng, n, m)
    stats = compute_statistics(prof)
    medians = {3: exhaustive_medians(prof, 3)[1], 2: exhaustive_medians(prof, 2)[1]}
    positions = {
        k: [Ranking(order).positions() for order in meds]
        for k, meds in medians.items()
    }
    for name in EVERY_MEDIAN_METHODS:
        report = run_method(name, stats)
        for x, y in report.constraints.edges():
            for pos in positions[report.rule]:
                assert pos[x] < pos[y], (name, (x, y), medians[report.rule])


@pytest.mark.parametrize("seed", range(30))
def test_mote_holds_in_some_median(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(3, 6))
    prof = random_complete_profile(rng, n, int(rng.integers(1, 9)))
    stats = compute_statistics(prof)
    report = mote3_all(stats)
    medians = [Ranking(o).positions() for o in exhaustive_medians(prof, 3)[1]]
    for x, y in report.certified:
        assert any(pos[x] < pos[y] for pos in medians)


@pytest.mark.parametrize("seed", range(20))
def test_containment_invariants(seed):
    rng = np.random.default_rng(2000 + seed)
    n = int(rng.integers(3, 8))
    prof = random_complete_profile(rng, n, int(rng.integers(1, 12)))
    stats = compute_statistics(prof)
    mot3 = mot3_single(stats)
    assert set(mot3.certified) <= set(mote3_all(stats).certified)
    assert set(mot3.certified) <= set(mot3_iterated(stats).certified)
    classic = mot2_iterated_improved(stats, variant="classic")
    improved = mot2_iterated_improved(stats, variant="improved")
    assert set(classic.certified) <= set(improved.certified)
    assert classic.constraints.edges() <= improved.constraints.edges()


@pytest.mark.parametrize("seed", range(20))
def test_at3_certificates_agree_with_majority_and_are_in_3mot_spirit(seed):
    rng = np.random.default_rng(3000 + seed)
    n = int(rng.integers(3, 7))
    prof = random_complete_profile(rng, n, int(rng.integers(1, 15)))
    stats = compute_statistics(prof)
    report = at3_all(stats)
    for x, y in report.certified:
        assert stats.delta[x, y] > 0
        med_positions = [
            Ranking(o).positions() for o in exhaustive_medians(prof, 3)[1]
        ]
        assert all(pos[x] < pos[y] for pos in med_positions)


def test_iteration_rounds_are_monotone(profile_c):
    stats = compute_statistics(profile_c)
    full = mot3_iterated(stats)
    prev_edges: set = set()
    for rounds in range(1, full.iterations_used + 1):
        partial = mot3_iterated(stats, max_iterations=rounds)
        edges = partial.constraints.edges()
        assert prev_edges <= edges
        prev_edges = edges
    assert prev_edges == full.constraints.edges()
    assert full.iterations_used <= stats.n * (stats.n - 1) // 2


def test_consecutive_pair_check(profile_a):
    stats = compute_statistics(profile_a)
    median = Ranking((Z, T, X, Y))
    assert not any(consecutive_pair_check(stats, median, i) for i in range(3))
    flawed = Ranking((Z, X, T, Y))  # x just before t, but t beats x strongly
    assert consecutive_pair_check(stats, flawed, 1)
    with pytest.raises(InputError):
        consecutive_pair_check(stats, median, 3)


def test_reduction_rate_bound_values():
    assert reduction_rate_bound(14, 84 / 91) == pytest.approx(2.10e8, rel=0.02)
    assert reduction_rate_bound(256, 0.6082) == pytest.approx(2.94e69, rel=0.05)
    with pytest.raises(InputError):
        reduction_rate_bound(5, 1.0)


def test_mot3_pair_validation(stats_a):
    with pytest.raises(InputError):
        mot3_certify_pair(stats_a, 1, 1)


def test_all_methods_registry():
    assert set(ALL_METHODS) == set(EVERY_MEDIAN_METHODS) | {"3MOTe"}
