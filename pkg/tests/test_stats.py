import numpy as np
import pytest

from setwise_kemeny import InputError, Ranking
from setwise_kemeny.distance import kwise_distance, profile_distance
from setwise_kemeny.stats import (
    compute_statistics,
    count_chain,
    delta_sum_evaluator,
    p_value,
    q_value,
    r_value,
    s_matrix,
    s_value,
)
from conftest import random_complete_profile

X, Y, Z, T = 0, 1, 2, 3


def test_fixture_a_regression_values(profile_a, stats_a):
    assert stats_a.delta[T, Z] == 1
    assert q_value(stats_a, T, Z, X) == -1
    assert q_value(stats_a, T, Z, Y) == -3
    assert p_value(stats_a, T, Z, X) == 4
    assert p_value(stats_a, T, Z, Y) == 0
    for path in ("identity", "direct"):
        assert s_value(stats_a, Z, T, Y, X, path=path) == -2
        assert s_value(stats_a, Z, T, X, Y, path=path) == -4


def test_count_chain_and_pairs(profile_a):
    # n_zt: votes ranking z before t = the 5 votes z>t>x>y.
    assert count_chain(profile_a, (Z, T)) == 5
    assert count_chain(profile_a, (T, Z)) == 6
    assert count_chain(profile_a, (Z, T, X)) == 5
    stats = compute_statistics(profile_a)
    assert stats.pair_counts[Z, T] == 5
    assert stats.m == 11


def test_repeated_indices_rejected():
    prof = random_complete_profile(np.random.default_rng(0), 4, 5)
    stats = compute_statistics(prof)
    with pytest.raises(InputError):
        q_value(stats, 0, 0, 1)
    with pytest.raises(InputError):
        s_value(stats, 0, 1, 1, 2)


@pytest.mark.parametrize("seed", range(10))
def test_tensors_match_scalar_counting(seed):
    rng = np.random.default_rng(seed)
    prof = random_complete_profile(rng, 5, 7)
    stats = compute_statistics(prof)
    for x in range(5):
        for y in range(5):
            for z in range(5):
                if len({x, y, z}) < 3:
                    continue
                q_direct = (
                    count_chain(prof, (x, y, z))
                    + count_chain(prof, (x, z, y))
                    - count_chain(prof, (y, x, z))
                    - count_chain(prof, (y, z, x))
                )
                assert stats.q_tensor[x, y, z] == q_direct
                # P = delta_xz + delta_zy + Q_{x,y,z} + Q_{z,y,x}
                p_direct = (
                    stats.delta[x, z]
                    + stats.delta[z, y]
                    + stats.q_tensor[x, y, z]
                    + stats.q_tensor[z, y, x]
                )
                assert stats.p_tensor[x, y, z] == p_direct


@pytest.mark.parametrize("seed", range(10))
def test_s_identity_vs_direct_on_complete_profiles(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 7))
    prof = random_complete_profile(rng, n, int(rng.integers(2, 12)))
    stats = compute_statistics(prof)
    for y in range(n):
        for x in range(n):
            if x == y:
                continue
            ident = s_matrix(stats, y, x, path="identity")
            direct = s_matrix(stats, y, x, path="direct")
            assert np.array_equal(ident, direct)


@pytest.mark.parametrize("seed", range(10))
def test_pairwise_delta_identity(seed):
    # 2(n_yzx - n_xzy) = delta_yz + delta_zx on complete profiles.
    rng = np.random.default_rng(seed)
    n = 5
    prof = random_complete_profile(rng, n, int(rng.integers(2, 12)))
    stats = compute_statistics(prof)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if len({x, y, z}) < 3:
                    continue
                lhs = 2 * (count_chain(prof, (y, z, x)) - count_chain(prof, (x, z, y)))
                assert lhs == stats.delta[y, z] + stats.delta[z, x]


def _swap_comparison_direct(profile, L, y, Zs, x, R):
    """[d3(pi) - d3(sigma1)] + [d3(pi) - d3(sigma2)] by direct distances."""
    pi = Ranking(tuple(L) + (y,) + tuple(Zs) + (x,) + tuple(R))
    sigma1 = Ranking(tuple(L) + tuple(Zs) + (x, y) + tuple(R))
    sigma2 = Ranking(tuple(L) + (x, y) + tuple(Zs) + tuple(R))
    d = lambda r: profile_distance(r, profile, 3)
    return 2 * d(pi) - d(sigma1) - d(sigma2)


@pytest.mark.parametrize("seed", range(20))
def test_swap_comparison_lemma_matches_direct_distances(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 8))
    prof = random_complete_profile(rng, n, int(rng.integers(1, 10)))
    stats = compute_statistics(prof)
    for _ in range(5):
        perm = [int(a) for a in rng.permutation(n)]
        i = int(rng.integers(0, n - 1))
        j = int(rng.integers(i + 1, n))
        L, y, Zs, x, R = perm[:i], perm[i], perm[i + 1 : j], perm[j], perm[j + 1 :]
        expected = _swap_comparison_direct(prof, L, y, Zs, x, R)
        assert delta_sum_evaluator(stats, x, y, Zs, R) == expected


def test_delta_sum_evaluator_rejects_overlap(stats_a):
    with pytest.raises(InputError):
        delta_sum_evaluator(stats_a, X, Y, [X], [])


def test_r_value_matches_chain_expansion(profile_a):
    val = r_value(profile_a, Z, T, Y, X)
    expected = (
        2 * count_chain(profile_a, (Z, Y, X, T))
        + 2 * count_chain(profile_a, (Z, Y, T, X))
        + count_chain(profile_a, (Z, X, Y, T))
        + count_chain(profile_a, (Z, X, T, Y))
    )
    assert val == expected
