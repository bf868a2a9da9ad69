"""Domain model: alternatives, rankings, votes, profiles and pair-order constraints.

Alternatives are dense 0-based integer indices with a label table.  A vote
stores only its ranked prefix; every alternative missing from the prefix is
treated as tied at the last position.  Constraint sets keep their transitive
closure as a dense boolean matrix so membership tests in the iterated
theorems are O(1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CycleError, InputError

__all__ = [
    "AlternativeRegistry",
    "Ranking",
    "Vote",
    "Profile",
    "ConstraintSet",
    "precedes",
    "transitive_closure",
]


@dataclass(frozen=True)
class AlternativeRegistry:
    """The fixed set of alternatives of an election, with display labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise InputError("need at least one alternative")
        if len(set(self.labels)) != len(self.labels):
            raise InputError("alternative labels must be unique")
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def of_size(cls, n: int) -> "AlternativeRegistry":
        if n < 1:
            raise InputError("need at least one alternative")
        return cls(tuple(f"Candidate {i + 1}" for i in range(n)))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown alternative label {label!r}") from None


@dataclass(frozen=True)
class Ranking:
    """A complete strict total order, as the sequence of alternative indices."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(a) for a in self.order)
        object.__setattr__(self, "order", order)
        n = len(order)
        if sorted(order) != list(range(n)):
            raise InputError(f"not a permutation of 0..{n - 1}: {order}")

    @property
    def n(self) -> int:
        return len(self.order)

    def positions(self) -> np.ndarray:
        """positions()[a] = rank of alternative a (0 = first)."""
        pos = np.empty(self.n, dtype=np.int64)
        pos[list(self.order)] = np.arange(self.n)
        return pos

    def reversed(self) -> "Ranking":
        return Ranking(self.order[::-1])

    def to_vote(self) -> "Vote":
        return Vote(self.order, self.n)

    def __iter__(self):
        return iter(self.order)


@dataclass(frozen=True)
class Vote:
    """A possibly incomplete vote: a ranked prefix over n alternatives.

    Alternatives absent from the prefix are tied at the last position.
    """

    ranked_prefix: tuple[int, ...]
    n: int

    def __post_init__(self):
        prefix = tuple(int(a) for a in self.ranked_prefix)
        object.__setattr__(self, "ranked_prefix", prefix)
        if self.n < 1:
            raise InputError("n must be positive")
        if len(set(prefix)) != len(prefix):
            raise InputError(f"duplicate alternative in vote prefix {prefix}")
        for a in prefix:
            if not 0 <= a < self.n:
                raise InputError(f"alternative index {a} out of range 0..{self.n - 1}")

    @property
    def is_complete(self) -> bool:
        return len(self.ranked_prefix) == self.n

    def key_vector(self) -> np.ndarray:
        """Per-alternative sort key: prefix position, or n for unranked.

        precedes(v, x, y) is exactly key[x] < key[y]: unranked alternatives
        share the key n and therefore never precede anything.
        """
        key = np.full(self.n, self.n, dtype=np.int64)
        for i, a in enumerate(self.ranked_prefix):
            key[a] = i
        return key

    def to_ranking(self) -> Ranking:
        if not self.is_complete:
            raise InputError("cannot convert an incomplete vote to a ranking")
        return Ranking(self.ranked_prefix)

    def unranked(self) -> tuple[int, ...]:
        ranked = set(self.ranked_prefix)
        return tuple(a for a in range(self.n) if a not in ranked)


def precedes(v: Vote, x: int, y: int) -> bool:
    """True iff x is ranked strictly before y in v.

    Two unranked alternatives are tied, so neither precedes the other.
    """
    if x == y:
        raise InputError("precedes needs two distinct alternatives")
    for a in (x, y):
        if not 0 <= a < v.n:
            raise InputError(f"alternative index {a} out of range 0..{v.n - 1}")
    prefix = v.ranked_prefix
    try:
        px = prefix.index(x)
    except ValueError:
        return False
    try:
        py = prefix.index(y)
    except ValueError:
        return True
    return px < py


@dataclass(frozen=True)
class Profile:
    """A multiset of votes over a common registry, with multiplicities."""

    registry: AlternativeRegistry
    entries: tuple[tuple[Vote, int], ...]

    def __post_init__(self):
        entries = tuple((v, int(c)) for v, c in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InputError("profile needs at least one vote")
        for v, c in entries:
            if c < 1:
                raise InputError("vote multiplicities must be positive")
            if v.n != self.registry.n:
                raise InputError("vote does not match the profile's registry")

    @property
    def n(self) -> int:
        return self.registry.n

    @property
    def m(self) -> int:
        return sum(c for _, c in self.entries)

    @property
    def is_complete(self) -> bool:
        return all(v.is_complete for v, _ in self.entries)

    def as_multiset(self) -> dict[tuple[int, ...], int]:
        counts: dict[tuple[int, ...], int] = {}
        for v, c in self.entries:
            counts[v.ranked_prefix] = counts.get(v.ranked_prefix, 0) + c
        return counts

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return (
            self.registry == other.registry
            and self.as_multiset() == other.as_multiset()
        )

    def __hash__(self):
        return hash((self.registry, frozenset(self.as_multiset().items())))

    def scaled(self, factor: int) -> "Profile":
        if factor < 1:
            raise InputError("scale factor must be positive")
        return Profile(self.registry, tuple((v, c * factor) for v, c in self.entries))

    @classmethod
    def from_rankings(
        cls, rankings, counts=None, labels=None
    ) -> "Profile":
        """Build a complete-vote profile from iterables of orders."""
        orders = [tuple(r.order if isinstance(r, Ranking) else r) for r in rankings]
        if not orders:
            raise InputError("profile needs at least one vote")
        n = len(orders[0])
        registry = (
            AlternativeRegistry(tuple(labels))
            if labels is not None
            else AlternativeRegistry.of_size(n)
        )
        if counts is None:
            counts = [1] * len(orders)
        entries = tuple(
            (Vote(order, registry.n), c) for order, c in zip(orders, counts)
        )
        return cls(registry, entries)


def transitive_closure(matrix: np.ndarray) -> np.ndarray:
    """Transitive closure of a boolean adjacency matrix (repeated squaring)."""
    closure = matrix.copy()
    while True:
        step = closure | (closure @ closure)
        if np.array_equal(step, closure):
            return closure
        closure = step


class ConstraintSet:
    """A transitively closed, acyclic set of pair orders "x before y".

    The closure is stored as a dense boolean matrix; all mutation happens
    through :meth:`insert`, which returns a new set.
    """

    def __init__(self, n: int, matrix: np.ndarray | None = None):
        if n < 1:
            raise InputError("n must be positive")
        self.n = n
        if matrix is None:
            matrix = np.zeros((n, n), dtype=bool)
        self._closure = matrix
        self.closed = True

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "ConstraintSet":
        matrix = np.zeros((n, n), dtype=bool)
        for x, y in pairs:
            if x == y or not (0 <= x < n and 0 <= y < n):
                raise InputError(f"invalid pair ({x}, {y})")
            matrix[x, y] = True
        closure = transitive_closure(matrix)
        np.fill_diagonal(closure, False)
        bad = closure & closure.T
        if bad.any():
            x, y = map(int, np.argwhere(bad)[0])
            raise CycleError((x, y, x))
        return cls(n, closure)

    def insert(self, x: int, y: int) -> "ConstraintSet":
        if x == y:
            raise InputError("cannot order an alternative against itself")
        for a in (x, y):
            if not 0 <= a < self.n:
                raise InputError(f"alternative index {a} out of range")
        if self._closure[x, y]:
            return self
        if self._closure[y, x]:
            raise CycleError((x, y, x))
        closure = self._closure.copy()
        before_x = closure[:, x].copy()
        before_x[x] = True
        after_y = closure[y, :].copy()
        after_y[y] = True
        closure |= np.outer(before_x, after_y)
        np.fill_diagonal(closure, False)
        return ConstraintSet(self.n, closure)

    def contains(self, x: int, y: int) -> bool:
        return bool(self._closure[x, y])

    def matrix(self) -> np.ndarray:
        """Read-only view of the closure matrix."""
        view = self._closure.view()
        view.flags.writeable = False
        return view

    def edges(self) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in np.argwhere(self._closure)}

    @property
    def edge_count(self) -> int:
        return int(self._closure.sum())

    def is_empty(self) -> bool:
        return not self._closure.any()

    def l_set(self, x: int) -> set[int]:
        """L_x: alternatives known to come before x."""
        return set(map(int, np.flatnonzero(self._closure[:, x])))

    def r_set(self, x: int) -> set[int]:
        """R_x: alternatives known to come after x."""
        return set(map(int, np.flatnonzero(self._closure[x, :])))

    def l_pair(self, x: int, y: int) -> set[int]:
        """L_{x,y}: alternatives known to come before both x and y."""
        return set(map(int, np.flatnonzero(self._closure[:, x] & self._closure[:, y])))

    def r_pair(self, x: int, y: int) -> set[int]:
        """R_{x,y}: alternatives known to come after both x and y."""
        return set(map(int, np.flatnonzero(self._closure[x, :] & self._closure[y, :])))

    def __eq__(self, other):
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._closure, other._closure)

    def __repr__(self):
        return f"ConstraintSet(n={self.n}, edges={sorted(self.edges())})"
