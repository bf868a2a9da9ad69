import numpy as np
import pytest

# Populated by tests/test_acceptance.py; printed after the run so every
# acceptance criterion gets exactly one pass/fail line.
acceptance_results: dict[str, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(acceptance_results, key=lambda k: (len(k), k)):
        status, detail = acceptance_results[key]
        suffix = f" — {detail}" if detail else ""
        terminalreporter.write_line(f"CRITERION {key}: {status}{suffix}")

from setwise_kemeny import Profile, Vote
from setwise_kemeny.model import AlternativeRegistry
from setwise_kemeny.stats import compute_statistics

A_LABELS = ("x", "y", "z", "t")
X, Y, Z, T = 0, 1, 2, 3

B_LABELS = ("x", "y", "z", "t", "u", "v")
C_LABELS = ("c1", "c2", "c3", "c4", "c5", "c6")


@pytest.fixture(scope="session")
def profile_a():
    return Profile.from_rankings(
        [(Z, T, X, Y), (Y, T, X, Z), (X, Y, T, Z), (T, X, Y, Z)],
        [5, 2, 2, 2],
        A_LABELS,
    )


@pytest.fixture(scope="session")
def stats_a(profile_a):
    return compute_statistics(profile_a)


@pytest.fixture(scope="session")
def profile_b():
    x, y, z, t, u, v = range(6)
    return Profile.from_rankings(
        [
            (x, y, z, t, u, v),
            (u, y, z, x, t, v),
            (v, z, y, x, t, u),
            (t, u, x, v, y, z),
        ],
        [5, 5, 5, 5],
        B_LABELS,
    )


@pytest.fixture(scope="session")
def profile_c():
    c1, c2, c3, c4, c5, c6 = range(6)
    return Profile.from_rankings(
        [
            (c1, c2, c4, c3, c5, c6),
            (c1, c3, c2, c4, c5, c6),
            (c6, c1, c2, c4, c3, c5),
            (c6, c1, c4, c3, c2, c5),
        ],
        [4, 4, 1, 1],
        C_LABELS,
    )


def random_complete_profile(rng: np.random.Generator, n: int, m: int) -> Profile:
    registry = AlternativeRegistry.of_size(n)
    entries: dict[tuple[int, ...], int] = {}
    for _ in range(m):
        order = tuple(int(a) for a in rng.permutation(n))
        entries[order] = entries.get(order, 0) + 1
    return Profile(
        registry,
        tuple((Vote(order, n=n), c) for order, c in sorted(entries.items())),
    )


def random_incomplete_profile(rng: np.random.Generator, n: int, m: int) -> Profile:
    registry = AlternativeRegistry.of_size(n)
    entries: dict[tuple[int, ...], int] = {}
    for _ in range(m):
        length = int(rng.integers(1, n + 1))
        prefix = tuple(int(a) for a in rng.permutation(n)[:length])
        entries[prefix] = entries.get(prefix, 0) + 1
    return Profile(
        registry,
        tuple((Vote(prefix, n=n), c) for prefix, c in sorted(entries.items())),
    )
