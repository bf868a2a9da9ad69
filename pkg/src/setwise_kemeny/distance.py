"""Set-wise Kendall-tau distances for k in {2, 3}.

The k-wise distance between two rankings counts the subsets of size 2..k
whose top-ranked element differs.  Votes may be incomplete: unranked
alternatives are tied at the last position, and a subset whose members are
all unranked in a vote has an ambiguous top.  An ambiguous top never counts
as a disagreement, because the complete ranking's top is itself inside the
tied tail.  All results are exact integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .exceptions import InputError
from .model import Profile, Ranking, Vote

__all__ = [
    "AMBIGUOUS",
    "SubsetTop",
    "top_of_subset",
    "kwise_distance",
    "profile_distance",
    "max_kwise_distance",
    "kendall_tau_inversions",
]

#: Marker for a subset whose members are all unranked in a vote.
AMBIGUOUS = -1


@dataclass(frozen=True)
class SubsetTop:
    subset: frozenset[int]
    top: int  # alternative index, or AMBIGUOUS

    @property
    def is_ambiguous(self) -> bool:
        return self.top == AMBIGUOUS


def _as_vote(r) -> Vote:
    if isinstance(r, Ranking):
        return r.to_vote()
    return r


def top_of_subset(v: Vote | Ranking, subset) -> SubsetTop:
    """Highest-ranked member of the subset under v, or AMBIGUOUS."""
    v = _as_vote(v)
    members = tuple(subset)
    if len(members) not in (2, 3) or len(set(members)) != len(members):
        raise InputError(f"subset must have 2 or 3 distinct members, got {members}")
    for a in members:
        if not 0 <= a < v.n:
            raise InputError(f"alternative index {a} out of range 0..{v.n - 1}")
    key = v.key_vector()
    best = min(members, key=lambda a: key[a])
    if key[best] == v.n:  # every member unranked
        return SubsetTop(frozenset(members), AMBIGUOUS)
    return SubsetTop(frozenset(members), int(best))


def _check_same_size(pi: Ranking, v: Vote):
    if pi.n != v.n:
        raise InputError(
            f"registry mismatch: ranking over {pi.n} alternatives, vote over {v.n}"
        )


def kwise_distance(pi: Ranking, v: Vote | Ranking, k: int) -> int:
    """Number of subsets of size <= k whose top differs between pi and v.

    Reference implementation by direct subset enumeration; O(n^3) for k=3.
    """
    if k not in (2, 3):
        raise InputError(f"k must be 2 or 3, got {k}")
    v = _as_vote(v)
    _check_same_size(pi, v)
    n = pi.n
    pos = pi.positions()
    key = v.key_vector()
    total = 0
    sizes = (2,) if k == 2 else (2, 3)
    for size in sizes:
        for subset in itertools.combinations(range(n), size):
            pi_top = min(subset, key=lambda a: pos[a])
            v_top = min(subset, key=lambda a: key[a])
            if key[v_top] == n:
                continue  # ambiguous: pi's top is inside the tied tail
            if v_top != pi_top:
                total += 1
    return total


def profile_distance(pi: Ranking, profile: Profile, k: int) -> int:
    """Multiplicity-weighted sum of kwise_distance over the profile."""
    if pi.n != profile.n:
        raise InputError("registry mismatch between ranking and profile")
    return sum(c * kwise_distance(pi, v, k) for v, c in profile.entries)


def max_kwise_distance(n: int, k: int) -> int:
    """Upper bound C(n,2) [+ C(n,3)], attained by a ranking and its reversal."""
    pairs = n * (n - 1) // 2
    if k == 2:
        return pairs
    if k == 3:
        return pairs + n * (n - 1) * (n - 2) // 6
    raise InputError(f"k must be 2 or 3, got {k}")


def kendall_tau_inversions(pi: Ranking, sigma: Ranking) -> int:
    """Classical pairwise inversion count, as an independent 2-wise oracle."""
    _check_same_size(pi, sigma.to_vote())
    pos = sigma.positions()
    seq = [int(pos[a]) for a in pi.order]
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return inversions
