"""Exact 2-wise and 3-wise median computation.

`brute_force_medians` scores every permutation with cached vectorized
tables and serves as the oracle.  `constrained_medians` enumerates only
the linear extensions of a constraint partial order by backtracking,
computing the distance incrementally as alternatives are placed.  Both
return the complete optimum set, lexicographically sorted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import InputError
from .model import ConstraintSet, Profile, Ranking
from .reduction import consecutive_pair_check
from .stats import OrderStatistics, compute_statistics

__all__ = [
    "MedianResult",
    "brute_force_medians",
    "constrained_medians",
    "validate_median_candidate",
    "BRUTE_FORCE_CAP",
    "CONSTRAINED_CAP",
]

BRUTE_FORCE_CAP = 8
CONSTRAINED_CAP = 16


@dataclass(frozen=True)
class MedianResult:
    rule: int
    optimal_value: int
    medians: tuple[Ranking, ...]
    nodes_explored: int


@lru_cache(maxsize=4)
def _perm_tables(n: int):
    """All n! permutations, their position tables, and the strict
    "placed-later" indicator after[p, a, u] = pos[p, u] > pos[p, a]."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    pos = np.empty_like(perms)
    rows = np.arange(perms.shape[0])[:, None]
    pos[rows, perms] = np.arange(n, dtype=np.int8)
    after = (pos[:, None, :] > pos[:, :, None]).astype(np.uint8)
    return perms, pos, after


def _vote_arrays(profile: Profile):
    keys = np.array([v.key_vector() for v, _ in profile.entries], dtype=np.int64)
    weights = np.array([c for _, c in profile.entries], dtype=np.int64)
    return keys, weights


def _choose2(a):
    return a * (a - 1) // 2


def brute_force_medians(
    profile: Profile, k: int, cap: int = BRUTE_FORCE_CAP
) -> MedianResult:
    """Score all n! rankings and return every optimum."""
    if k not in (2, 3):
        raise InputError(f"rule must be 2 or 3, got {k}")
    n = profile.registry.n
    if n > cap:
        raise InputError(
            f"brute force refused for n={n} alternatives (cap {cap}); "
            "raise the cap explicitly or use constrained_medians"
        )
    perms, pos, after = _perm_tables(n)
    keys, weights = _vote_arrays(profile)
    r = (n - 1 - pos).astype(np.int64)  # alternatives placed after a
    costs = np.zeros(perms.shape[0], dtype=np.int64)
    for key, w in zip(keys, weights):
        ge = (key[:, None] >= key[None, :]).astype(np.uint8)  # ge[u, a]
        g = np.einsum("pau,ua->pa", after, ge, dtype=np.int64)
        per_top = r - g
        if k == 3:
            per_top = per_top + _choose2(r) - _choose2(g)
        costs += w * per_top.sum(axis=1)
    best = int(costs.min())
    argmins = np.flatnonzero(costs == best)
    medians = tuple(
        Ranking(tuple(int(a) for a in perms[i])) for i in argmins
    )
    return MedianResult(
        rule=k,
        optimal_value=best,
        medians=medians,
        nodes_explored=perms.shape[0],
    )


def constrained_medians(
    profile: Profile,
    k: int,
    constraints: ConstraintSet | None = None,
    cap: int = CONSTRAINED_CAP,
    prune: bool = False,
) -> MedianResult:
    """Find every median among the linear extensions of ``constraints``.

    Sound, every-median constraints yield exactly the brute-force optimum
    set.  With ``prune`` the search discards prefixes whose fixed cost
    already exceeds the best complete ranking found (admissible: pending
    positions only add nonnegative cost).
    """
    if k not in (2, 3):
        raise InputError(f"rule must be 2 or 3, got {k}")
    n = profile.registry.n
    if n > cap:
        raise InputError(
            f"constrained search refused for n={n} alternatives (cap {cap})"
        )
    if constraints is None:
        constraints = ConstraintSet(n)
    if constraints.n != n:
        raise InputError("constraints built for a different number of alternatives")
    closure = constraints.matrix()
    keys, weights = _vote_arrays(profile)
    is_triple = k == 3

    best = None
    optima: list[tuple[int, ...]] = []
    explored = 0
    prefix: list[int] = []
    remaining = np.ones(n, dtype=bool)
    # pred_count[a] = unplaced predecessors of a; a is placeable at 0
    pred_count = closure.sum(axis=0).astype(np.int64)

    def place_cost(a: int) -> int:
        """Disagreements fixed by putting a next: subsets whose top
        becomes a, i.e. a paired with alternatives still remaining."""
        rem = remaining.copy()
        rem[a] = False
        r = int(rem.sum())
        if r == 0:
            return 0
        g = ((keys[:, rem] >= keys[:, a : a + 1]).sum(axis=1)).astype(np.int64)
        per_vote = r - g
        if is_triple:
            per_vote = per_vote + _choose2(r) - _choose2(g)
        return int(weights @ per_vote)

    def recurse(cost: int):
        nonlocal best, explored, pred_count
        if len(prefix) == n:
            explored += 1
            if best is None or cost < best:
                best = cost
                optima.clear()
            if cost == best:
                optima.append(tuple(prefix))
            return
        if prune and best is not None and cost > best:
            return
        for a in range(n):
            if not remaining[a] or pred_count[a] > 0:
                continue
            step = place_cost(a)
            prefix.append(a)
            remaining[a] = False
            pred_count -= closure[a]
            recurse(cost + step)
            pred_count += closure[a]
            remaining[a] = True
            prefix.pop()

    recurse(0)
    if best is None:
        raise InputError("constraint set admits no linear extension")
    medians = tuple(Ranking(order) for order in sorted(optima))
    return MedianResult(
        rule=k, optimal_value=best, medians=medians, nodes_explored=explored
    )


def validate_median_candidate(
    profile: Profile,
    pi: Ranking,
    stats: OrderStatistics | None = None,
) -> list[int]:
    """Adjacent positions i where swapping pi[i], pi[i+1] provably improves pi.

    An empty list is necessary, not sufficient, for pi to be a 3-wise
    median.
    """
    if stats is None:
        stats = compute_statistics(profile)
    if pi.n != profile.registry.n:
        raise InputError("ranking does not match the profile's alternatives")
    return [
        i for i in range(pi.n - 1) if consecutive_pair_check(stats, pi, i)
    ]
