"""Pair-ordering theorems that shrink the median search space.

Every-median certificates:

* 3MOT: delta_xy > 0, Q_{x,y,z} >= 0 for all z, and
  2 delta_xy > sum_z max(0, -P_{x,y,z} + sum_t max(0, S_{y,x,z,t})).
* Iterated 3MOT: same conditions with z, t restricted by what previous
  rounds established (L_y and R_x of the running closure).
* 3AT: a supermajority n_xy > g(n) m with g(n) = 1 - 1/(n^2 - 3n + 4).
* MOT (2-wise): delta_xy > 0 and 2 delta_xy > sum_z max(0, delta_yz + delta_zx).
* Improved Iterated MOT, and its classic variant restricted through
  L_{x,y}/R_{x,y}.

Some-median certificate:

* 3MOTe: the non-strict variants of the 3MOT conditions.

All condition arithmetic is exact int64; certificates are collected into
:class:`ReductionReport` together with a transitively closed constraint set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import InputError
from .model import ConstraintSet, Profile, Ranking, transitive_closure
from .stats import OrderStatistics, s_matrix

__all__ = [
    "EVERY_MEDIAN",
    "SOME_MEDIAN",
    "ReductionReport",
    "mot3_certify_pair",
    "mot3_certify_all",
    "mot3_single",
    "mot3_iterated",
    "mot3_equality",
    "mote3_all",
    "always_3wise",
    "at3_all",
    "mot2_certify_pair",
    "mot2_certify_all",
    "mot2_single",
    "mot2_iterated_improved",
    "consecutive_pair_check",
    "consensus_levels",
    "reduction_rate_bound",
    "run_method",
    "EVERY_MEDIAN_METHODS",
    "ALL_METHODS",
]

EVERY_MEDIAN = "every-median"
SOME_MEDIAN = "some-median"

# Above this n the all-pairs S tensor would be too large; fall back to a
# per-pair loop.
_VECTOR_N_CAP = 48


@dataclass
class ReductionReport:
    """Outcome of a reduction method on one profile."""

    rule: int
    method: str
    guarantee: str
    n: int
    certified: dict[tuple[int, int], int]  # pair -> first iteration certified
    constraints: ConstraintSet
    iterations_used: int
    seed_edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @property
    def total_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def solved_fraction(self) -> Fraction:
        """Unordered pairs decided by the closed constraint set."""
        return Fraction(self.constraints.edge_count, self.total_pairs)

    @property
    def certified_fraction(self) -> Fraction:
        """Unordered pairs directly certified (no closure), the paper's M."""
        unordered = {frozenset(p) for p in self.certified}
        return Fraction(len(unordered), self.total_pairs)


def _pair_masks(n: int, closure: np.ndarray | None):
    """(x_mask, y_mask): admissible z / t per ordered pair (x, y).

    x_mask[x, y, z] is True when z is outside L_y, R_x and {x, y};
    y_mask drops only the R_x exclusion.
    """
    ident = np.eye(n, dtype=bool)
    not_self = ~ident
    base = not_self[None, :, :] & not_self[:, None, :]  # z != y, z != x
    if closure is None:
        return base, base
    l_y = closure.T  # l_y[y, z] = z before y
    r_x = closure  # r_x[x, z] = z after x
    y_mask = base & ~l_y[None, :, :]
    x_mask = y_mask & ~r_x[:, None, :]
    return x_mask, y_mask


def _s4_tensor(stats: OrderStatistics) -> np.ndarray:
    """S[x, y, z, t] = -(Q_{z,y,t} + Q_{x,z,t}) for complete profiles."""
    q = stats.q_tensor
    a = np.swapaxes(q, 0, 1)  # a[y, z, t] = Q[z, y, t]
    return -(a[None, :, :, :] + q[:, None, :, :])


def _mot3_condition_matrix(
    stats: OrderStatistics,
    closure: np.ndarray | None = None,
    strict: bool = True,
) -> np.ndarray:
    """Boolean matrix of ordered pairs passing the 3MOT(e) conditions."""
    n = stats.n
    delta = stats.delta
    x_mask, y_mask = _pair_masks(n, closure)
    if n <= _VECTOR_N_CAP and stats.complete:
        return _mot3_vectorized(stats, delta, x_mask, y_mask, strict)
    out = np.zeros((n, n), dtype=bool)
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            out[x, y] = _mot3_pair(stats, x, y, x_mask[x, y], y_mask[x, y], strict)
    return out


def _mot3_vectorized(stats, delta, x_mask, y_mask, strict):
    q = stats.q_tensor
    p = stats.p_tensor
    big = np.int64(1) << 60
    masked_q = np.where(y_mask, q, big)
    cond_i = masked_q.min(axis=2) >= 0
    s4 = np.maximum(_s4_tensor(stats), 0)
    n = stats.n
    idx = np.arange(n)
    s4[:, :, idx, idx] = 0
    inner = np.einsum("xyzt,xyt->xyz", s4, y_mask.astype(np.int64))
    terms = np.maximum(-p + inner, 0)
    cond_ii_sum = np.einsum("xyz,xyz->xy", terms, x_mask.astype(np.int64))
    if strict:
        major = delta > 0
        cond_ii = 2 * delta > cond_ii_sum
    else:
        major = delta >= 0
        cond_ii = 2 * delta >= cond_ii_sum
    out = major & cond_i & cond_ii
    np.fill_diagonal(out, False)
    return out


def _mot3_pair(stats, x, y, z_allowed, t_allowed, strict):
    delta_xy = int(stats.delta[x, y])
    if strict:
        if delta_xy <= 0:
            return False
    elif delta_xy < 0:
        return False
    q_slice = stats.q_tensor[x, y]
    if np.any(q_slice[t_allowed] < 0):
        return False
    s = np.maximum(s_matrix(stats, y, x), 0)
    np.fill_diagonal(s, 0)
    inner = s @ t_allowed.astype(np.int64)
    p_slice = stats.p_tensor[x, y]
    terms = np.maximum(-p_slice + inner, 0)
    total = int(terms[z_allowed].sum())
    return 2 * delta_xy > total if strict else 2 * delta_xy >= total


def mot3_certify_pair(stats: OrderStatistics, x: int, y: int) -> bool:
    """Single-pass 3MOT certificate for "x before y in every 3-wise median"."""
    if x == y:
        raise InputError("x and y must be distinct")
    n = stats.n
    allowed = np.ones(n, dtype=bool)
    allowed[[x, y]] = False
    return bool(_mot3_pair(stats, x, y, allowed, allowed, strict=True))


def mot3_certify_all(stats: OrderStatistics) -> set[tuple[int, int]]:
    m = _mot3_condition_matrix(stats)
    return {(int(x), int(y)) for x, y in np.argwhere(m)}


def mot3_equality(stats: OrderStatistics, x: int, y: int) -> bool:
    """3MOTe: "x before y in some 3-wise median" (non-strict conditions)."""
    if x == y:
        raise InputError("x and y must be distinct")
    n = stats.n
    allowed = np.ones(n, dtype=bool)
    allowed[[x, y]] = False
    return bool(_mot3_pair(stats, x, y, allowed, allowed, strict=False))


def mote3_all(stats: OrderStatistics) -> ReductionReport:
    """All 3MOTe certificates; both directions may appear when delta = 0."""
    m = _mot3_condition_matrix(stats, strict=False)
    certified = {(int(x), int(y)): 0 for x, y in np.argwhere(m)}
    return ReductionReport(
        rule=3,
        method="3MOTe",
        guarantee=SOME_MEDIAN,
        n=stats.n,
        certified=certified,
        constraints=ConstraintSet(stats.n),  # never merged into every-median sets
        iterations_used=1,
    )


def always_3wise(stats: OrderStatistics, x: int, y: int) -> bool:
    """3AT: n_xy/m > g(n) = 1 - 1/(n^2 - 3n + 4), by exact comparison."""
    if x == y:
        raise InputError("x and y must be distinct")
    n, m = stats.n, stats.m
    d = n * n - 3 * n + 4
    return int(stats.pair_counts[x, y]) * d > m * (d - 1)


def at3_all(stats: OrderStatistics) -> ReductionReport:
    n, m = stats.n, stats.m
    d = n * n - 3 * n + 4
    mat = stats.pair_counts * d > m * (d - 1)
    np.fill_diagonal(mat, False)
    certified = {(int(x), int(y)): 0 for x, y in np.argwhere(mat)}
    return _every_median_report(3, "3AT", stats.n, certified, iterations=1)


def _every_median_report(rule, method, n, certified, iterations, seed=None):
    pairs = set(certified)
    if seed is not None:
        pairs |= seed.edges()
    constraints = ConstraintSet.from_pairs(n, pairs)
    return ReductionReport(
        rule=rule,
        method=method,
        guarantee=EVERY_MEDIAN,
        n=n,
        certified=dict(certified),
        constraints=constraints,
        iterations_used=iterations,
        seed_edges=frozenset(seed.edges()) if seed is not None else frozenset(),
    )


def mot3_single(stats: OrderStatistics) -> ReductionReport:
    certified = {p: 0 for p in mot3_certify_all(stats)}
    return _every_median_report(3, "3MOT", stats.n, certified, iterations=1)


def _check_seed(stats, seed):
    if seed is None:
        return None
    if not isinstance(seed, ConstraintSet) or seed.n != stats.n:
        raise InputError("seed must be a ConstraintSet over the same alternatives")
    return seed


def mot3_iterated(
    stats: OrderStatistics,
    seed: ConstraintSet | None = None,
    max_iterations: int | None = None,
) -> ReductionReport:
    """Fixpoint of the iterated 3MOT recursion, seeded with trusted constraints."""
    return _iterate(
        stats,
        seed,
        max_iterations,
        method="Iterated3MOT",
        rule=3,
        certify=lambda closure: _mot3_condition_matrix(stats, closure),
    )


def _iterate(stats, seed, max_iterations, method, rule, certify):
    n = stats.n
    seed = _check_seed(stats, seed)
    seed_edges = seed.edges() if seed is not None else set()
    if max_iterations is None:
        max_iterations = n * (n - 1) // 2
    closure = (
        seed.matrix().copy() if seed is not None else np.zeros((n, n), dtype=bool)
    )
    certified: dict[tuple[int, int], int] = {}
    iterations = 0
    for k in range(max_iterations):
        found = certify(closure)
        pairs = {(int(x), int(y)) for x, y in np.argwhere(found)}
        for p in pairs:
            certified.setdefault(p, k)
        matrix = np.zeros((n, n), dtype=bool)
        for x, y in set(certified) | seed_edges:
            matrix[x, y] = True
        new_closure = transitive_closure(matrix)
        np.fill_diagonal(new_closure, False)
        if (new_closure & new_closure.T).any():
            raise InputError("certified constraints formed a cycle")
        iterations = k + 1
        if np.array_equal(new_closure, closure):
            break
        closure = new_closure
    report = ReductionReport(
        rule=rule,
        method=method,
        guarantee=EVERY_MEDIAN,
        n=n,
        certified=certified,
        constraints=ConstraintSet(n, closure),
        iterations_used=iterations,
        seed_edges=frozenset(seed_edges),
    )
    return report


def mot2_certify_pair(stats: OrderStatistics, x: int, y: int) -> bool:
    """Classical MOT: delta_xy > 0 and 2 delta_xy > sum_z max(0, d_yz + d_zx)."""
    if x == y:
        raise InputError("x and y must be distinct")
    delta = stats.delta
    if delta[x, y] <= 0:
        return False
    interference = np.maximum(delta[y, :] + delta[:, x], 0)
    interference[[x, y]] = 0
    return 2 * int(delta[x, y]) > int(interference.sum())


def _mot2_condition_matrix(stats, x_mask):
    delta = stats.delta
    # e[x, y, z] = max(0, delta_yz + delta_zx)
    e = np.maximum(delta[None, :, :] + delta.T[:, None, :], 0)
    sums = np.einsum("xyz,xyz->xy", e, x_mask.astype(np.int64))
    out = (delta > 0) & (2 * delta > sums)
    np.fill_diagonal(out, False)
    return out


def mot2_certify_all(stats: OrderStatistics) -> set[tuple[int, int]]:
    n = stats.n
    x_mask, _ = _pair_masks(n, None)
    m = _mot2_condition_matrix(stats, x_mask)
    return {(int(x), int(y)) for x, y in np.argwhere(m)}


def mot2_single(stats: OrderStatistics) -> ReductionReport:
    certified = {p: 0 for p in mot2_certify_all(stats)}
    return _every_median_report(2, "MOT", stats.n, certified, iterations=1)


def mot2_iterated_improved(
    stats: OrderStatistics,
    seed: ConstraintSet | None = None,
    max_iterations: int | None = None,
    variant: str = "improved",
) -> ReductionReport:
    """Iterated 2-wise MOT.

    variant="improved" restricts z through L_y and R_x of the closure;
    variant="classic" uses the weaker L_{x,y} / R_{x,y} restriction and is
    equivalent to the original iterated MOT.
    """
    if variant not in ("improved", "classic"):
        raise InputError(f"unknown variant {variant!r}")
    n = stats.n

    def certify(closure):
        if variant == "improved":
            x_mask, _ = _pair_masks(n, closure)
        else:
            ident = np.eye(n, dtype=bool)
            base = ~ident[None, :, :] & ~ident[:, None, :]
            l_xy = closure.T[:, None, :] & closure.T[None, :, :]  # [x, y, z]
            r_xy = closure[:, None, :] & closure[None, :, :]
            x_mask = base & ~l_xy & ~r_xy
        return _mot2_condition_matrix(stats, x_mask)

    method = "ImprovedIteratedMOT" if variant == "improved" else "IteratedMOT"
    return _iterate(stats, seed, max_iterations, method, rule=2, certify=certify)


def consecutive_pair_check(stats: OrderStatistics, pi: Ranking, i: int) -> bool:
    """True iff swapping positions i, i+1 of pi provably improves it.

    With y = pi[i] and x = pi[i+1], the criterion is
    delta_xy > sum_z max(0, Q_{y,x,z}): no 3-wise median ranks y just
    before x then.
    """
    if not 0 <= i < pi.n - 1:
        raise InputError(f"position {i} out of range 0..{pi.n - 2}")
    if pi.n != stats.n:
        raise InputError("ranking does not match the statistics' registry")
    y, x = pi.order[i], pi.order[i + 1]
    q_yx = stats.q_tensor[y, x].copy()
    q_yx[[x, y]] = 0
    return int(stats.delta[x, y]) > int(np.maximum(q_yx, 0).sum())


def consensus_levels(
    single: ReductionReport, iterated: ReductionReport
) -> tuple[Fraction, Fraction]:
    """Consensus levels from the single-pass and iterated reports.

    Both are fractions of unordered pairs directly certified, the
    iterated level counting certificates from every round.
    """
    if single.n != iterated.n:
        raise InputError("reports come from different profiles")
    level_single = single.certified_fraction
    level_iterated = max(iterated.certified_fraction, level_single)
    return level_single, level_iterated


def reduction_rate_bound(n: int, p) -> float:
    """Lower bound on the search-space reduction factor for solved fraction p.

    max(n! (1 + 0.5 n (1 - p))^{-n}, e^{p^2 n / 32}), evaluated in log space.
    """
    if n < 1:
        raise InputError("n must be positive")
    p = float(p)
    if not 0 <= p < 1:
        raise InputError("p must lie in [0, 1)")
    log_first = math.lgamma(n + 1) - n * math.log1p(0.5 * n * (1 - p))
    log_second = p * p * n / 32
    return math.exp(max(log_first, log_second))


EVERY_MEDIAN_METHODS = {
    "3AT": lambda stats, seed=None: at3_all(stats),
    "3MOT": lambda stats, seed=None: mot3_single(stats),
    "Iterated3MOT": lambda stats, seed=None: mot3_iterated(stats, seed),
    "MOT": lambda stats, seed=None: mot2_single(stats),
    "IteratedMOT": lambda stats, seed=None: mot2_iterated_improved(
        stats, seed, variant="classic"
    ),
    "ImprovedIteratedMOT": lambda stats, seed=None: mot2_iterated_improved(
        stats, seed, variant="improved"
    ),
}

ALL_METHODS = dict(EVERY_MEDIAN_METHODS)
ALL_METHODS["3MOTe"] = lambda stats, seed=None: mote3_all(stats)


def run_method(
    name: str, stats: OrderStatistics, seed: ConstraintSet | None = None
) -> ReductionReport:
    try:
        runner = ALL_METHODS[name]
    except KeyError:
        raise InputError(f"unknown method {name!r}") from None
    return runner(stats, seed)
