"""Ordered-pattern count statistics: delta matrix, triple tensor, Q, P, R, S.

All counts are multiplicity-weighted int64.  n_xy counts votes with x
strictly before y; the triple tensor entry (a, b, c) counts votes with
a before b before c.  For incomplete votes a pattern counts only when
every adjacency in the chain holds strictly (ties count for neither
direction), so n_xy + n_yx may fall short of m.

Derived quantities:

    Q_{x,y,z} = n_xyz + n_xzy - n_yxz - n_yzx
    P_{x,y,z} = 3 n_xzy + n_xyz + n_zxy + n_zyx - 4 n_yzx - 2 n_yxz
    R_{y,x,z,t} = 2 n_yztx + 2 n_yzxt + n_ytzx + n_ytxz
    S_{y,x,z,t} = R_{y,x,z,t} - R_{x,y,z,t}

On complete profiles S also equals -(Q_{z,y,t} + Q_{x,z,t}); that identity
path is the default because it needs only the O(n^3) triple tensor.  The
direct quadruple-pattern count is kept as a verification oracle and as the
authoritative path for incomplete profiles, where the identity fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import InputError
from .model import Profile

__all__ = [
    "OrderStatistics",
    "compute_statistics",
    "q_value",
    "p_value",
    "r_value",
    "s_value",
    "s_matrix",
    "count_chain",
    "delta_sum_evaluator",
]


@dataclass
class OrderStatistics:
    """Pair and triple pattern counts of a profile, with derived tensors."""

    n: int
    m: int
    complete: bool
    pair_counts: np.ndarray  # (n, n), entry (x, y) = n_xy
    triples: np.ndarray  # (n, n, n), entry (a, b, c) = n_abc
    profile: Profile = field(repr=False)

    @cached_property
    def delta(self) -> np.ndarray:
        """Antisymmetric majority-margin matrix, entry (x, y) = n_xy - n_yx."""
        return self.pair_counts - self.pair_counts.T

    @cached_property
    def q_tensor(self) -> np.ndarray:
        """Q[x, y, z]; entries with repeated indices are zeroed."""
        t = self.triples
        q = (
            t
            + t.transpose(0, 2, 1)  # n_xzy
            - t.transpose(1, 0, 2)  # n_yxz
            - np.einsum("yzx->xyz", t)  # n_yzx
        )
        _zero_repeated3(q)
        return q

    @cached_property
    def p_tensor(self) -> np.ndarray:
        """P[x, y, z]; entries with repeated indices are zeroed."""
        t = self.triples
        p = (
            3 * t.transpose(0, 2, 1)  # n_xzy
            + t  # n_xyz
            + np.einsum("zxy->xyz", t)  # n_zxy
            + np.einsum("zyx->xyz", t)  # n_zyx
            - 4 * np.einsum("yzx->xyz", t)  # n_yzx
            - 2 * t.transpose(1, 0, 2)  # n_yxz
        )
        _zero_repeated3(p)
        return p


def _zero_repeated3(tensor: np.ndarray):
    n = tensor.shape[0]
    idx = np.arange(n)
    tensor[idx, idx, :] = 0
    tensor[idx, :, idx] = 0
    tensor[:, idx, idx] = 0


def _key_matrix(profile: Profile) -> tuple[np.ndarray, np.ndarray]:
    """(keys, weights): keys[v, a] is vote v's sort key for alternative a."""
    keys = np.stack([v.key_vector() for v, _ in profile.entries])
    weights = np.array([c for _, c in profile.entries], dtype=np.int64)
    return keys, weights


def compute_statistics(profile: Profile) -> OrderStatistics:
    """Exact pair and triple counts, O(n^3) per distinct vote."""
    n = profile.n
    if n < 2:
        raise InputError("order statistics need at least two alternatives")
    keys, weights = _key_matrix(profile)
    pair_counts = np.zeros((n, n), dtype=np.int64)
    triples = np.zeros((n, n, n), dtype=np.int64)
    for key, w in zip(keys, weights):
        lt = key[:, None] < key[None, :]
        pair_counts += w * lt
        triples += w * (lt[:, :, None] & lt[None, :, :])
    return OrderStatistics(
        n=n,
        m=profile.m,
        complete=profile.is_complete,
        pair_counts=pair_counts,
        triples=triples,
        profile=profile,
    )


def _check_distinct(*indices):
    if len(set(indices)) != len(indices):
        raise InputError(f"alternatives must be distinct, got {indices}")


def q_value(stats: OrderStatistics, x: int, y: int, z: int) -> int:
    _check_distinct(x, y, z)
    t = stats.triples
    return int(t[x, y, z] + t[x, z, y] - t[y, x, z] - t[y, z, x])


def p_value(stats: OrderStatistics, x: int, y: int, z: int) -> int:
    _check_distinct(x, y, z)
    t = stats.triples
    return int(
        3 * t[x, z, y]
        + t[x, y, z]
        + t[z, x, y]
        + t[z, y, x]
        - 4 * t[y, z, x]
        - 2 * t[y, x, z]
    )


def count_chain(profile: Profile, chain) -> int:
    """n_{a1...ak}: weighted count of votes with the chain strictly in order."""
    chain = tuple(chain)
    _check_distinct(*chain)
    total = 0
    for v, c in profile.entries:
        key = v.key_vector()
        if all(key[a] < key[b] for a, b in zip(chain, chain[1:])):
            total += c
    return total


def r_value(profile: Profile, y: int, x: int, z: int, t: int) -> int:
    """R_{y,x,z,t} by direct quadruple-pattern counting."""
    _check_distinct(y, x, z, t)
    return (
        2 * count_chain(profile, (y, z, t, x))
        + 2 * count_chain(profile, (y, z, x, t))
        + count_chain(profile, (y, t, z, x))
        + count_chain(profile, (y, t, x, z))
    )


def s_value(
    stats: OrderStatistics, y: int, x: int, z: int, t: int, path: str = "auto"
) -> int:
    """S_{y,x,z,t}.

    path="identity" uses -(Q_{z,y,t} + Q_{x,z,t}) (valid on complete
    profiles); path="direct" counts quadruple patterns from the votes;
    "auto" picks the identity for complete profiles.
    """
    _check_distinct(y, x, z, t)
    if path == "auto":
        path = "identity" if stats.complete else "direct"
    if path == "identity":
        return -(q_value(stats, z, y, t) + q_value(stats, x, z, t))
    if path == "direct":
        return r_value(stats.profile, y, x, z, t) - r_value(stats.profile, x, y, z, t)
    raise InputError(f"unknown S path {path!r}")


def s_matrix(stats: OrderStatistics, y: int, x: int, path: str = "auto") -> np.ndarray:
    """S_{y,x,z,t} for all z, t at once; invalid index combinations are 0."""
    _check_distinct(y, x)
    if path == "auto":
        path = "identity" if stats.complete else "direct"
    n = stats.n
    if path == "identity":
        q = stats.q_tensor
        s = -(q[:, y, :] + q[x, :, :])  # [z, t]
    elif path == "direct":
        s = _r_matrix_direct(stats.profile, y, x) - _r_matrix_direct(
            stats.profile, x, y
        )
    else:
        raise InputError(f"unknown S path {path!r}")
    s[[x, y], :] = 0
    s[:, [x, y]] = 0
    np.fill_diagonal(s, 0)
    return s


def _r_matrix_direct(profile: Profile, y: int, x: int) -> np.ndarray:
    """R_{y,x,z,t} over all (z, t), counted per vote in O(n^2)."""
    n = profile.n
    out = np.zeros((n, n), dtype=np.int64)
    for v, c in profile.entries:
        key = v.key_vector()
        ky, kx = key[y], key[x]
        after_y = ky < key  # y strictly before the alternative
        before_x = key < kx
        after_x = kx < key
        lt = key[:, None] < key[None, :]
        n_yztx = after_y[:, None] & lt & before_x[None, :]
        n_yzxt = (after_y & before_x)[:, None] & after_x[None, :]
        n_ytzx = before_x[:, None] & lt.T & after_y[None, :]
        n_ytxz = after_x[:, None] & (after_y & before_x)[None, :]
        out += c * (
            2 * n_yztx.astype(np.int64) + 2 * n_yzxt + n_ytzx + n_ytxz
        )
    return out


def delta_sum_evaluator(stats: OrderStatistics, x: int, y: int, Z, R) -> int:
    """Right-hand side of the two-swap comparison lemma.

    For pi = L>y>Z>x>R the value equals [d(pi) - d(L>Z>x>y>R)] +
    [d(pi) - d(L>x>y>Z>R)] on complete profiles:

        2 sum_{t in R} Q_{x,y,t} + 2 delta_xy + sum_{z in Z} P_{x,y,z}
        - sum_{z in Z, t after z in Z.R} S_{y,x,z,t}
    """
    Z = list(Z)
    R = list(R)
    used = [x, y, *Z, *R]
    if len(set(used)) != len(used):
        raise InputError("x, y, Z, R must be pairwise disjoint")
    total = 2 * int(stats.delta[x, y])
    for t in R:
        total += 2 * q_value(stats, x, y, t)
    for z in Z:
        total += p_value(stats, x, y, z)
    for i, z in enumerate(Z):
        for t in Z[i + 1 :] + R:
            total -= s_value(stats, y, x, z, t)
    return total
