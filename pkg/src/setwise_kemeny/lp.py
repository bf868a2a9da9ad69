"""Exact-rational linear programs certifying the 3/4-majority results.

A small two-phase simplex with Bland's pivot rule runs over
arbitrary-precision rationals (gmpy2 when available, Fraction otherwise),
so feasibility and optimality statements such as "optimum = 0" or
"INFEASIBLE" are exact certificates rather than numeric suggestions.

Instances: the 24-variable pair-contribution LP over four alternatives,
the non-dirty/bad-ranking feasibility systems over S_n for n <= 6 (solved
with row generation on the ranking-comparison rows), and the second-best
contribution LPs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import InputError
from .model import Ranking
from .solver import _choose2, _perm_tables

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

__all__ = [
    "Rational",
    "LinearProgram",
    "LPOutcome",
    "simplex_solve",
    "build_lemma_lp1",
    "bad_rankings",
    "good_rankings",
    "system_star_feasible",
    "star_sweep",
    "verify_six_candidate_rule",
    "verify_second_best_bounds",
    "SecondBestReport",
]

OPTIMAL = "OPTIMAL"
INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"
FEASIBLE = "FEASIBLE"

_ZERO = Rational(0)
_ONE = Rational(1)
THREE_QUARTERS = Rational(3, 4)


def _rat(v):
    """Coerce to the exact rational type (handles numpy integers)."""
    try:
        return Rational(v)
    except TypeError:
        return Rational(int(v))


@dataclass
class LinearProgram:
    """max/feasibility over nonnegative variables; rows are
    (coefficients, relation, rhs) with relation in {"<=", ">=", "="}."""

    num_vars: int
    rows: list[tuple[list, str, object]]
    objective: list | None = None  # None: feasibility problem
    maximize: bool = True

    def add_row(self, coeffs, relation, rhs):
        if len(coeffs) != self.num_vars:
            raise InputError("row length does not match variable count")
        if relation not in ("<=", ">=", "="):
            raise InputError(f"unknown relation {relation!r}")
        self.rows.append(([_rat(c) for c in coeffs], relation, _rat(rhs)))


@dataclass
class LPOutcome:
    status: str
    optimum: object = None
    certificate: tuple = ()
    infeasibility_witness: object = None  # positive phase-1 optimum


def _pivot(rows, cost, basis, row_idx, col):
    """Pivot the tableau on (row_idx, col); rows carry rhs last."""
    piv = rows[row_idx][col]
    inv = _ONE / piv
    rows[row_idx] = [v * inv for v in rows[row_idx]]
    pivot_row = rows[row_idx]
    for i, r in enumerate(rows):
        if i != row_idx and r[col] != 0:
            f = r[col]
            rows[i] = [a - f * b for a, b in zip(r, pivot_row)]
    if cost[col] != 0:
        f = cost[col]
        for j in range(len(cost)):
            cost[j] -= f * pivot_row[j]
    basis[row_idx] = col


def _minimize(rows, cost, basis, ncols):
    """Bland's-rule simplex on a tableau in canonical form.

    cost has ncols reduced costs plus the negated objective value in the
    rhs slot. Returns "OPTIMAL" or "UNBOUNDED".
    """
    while True:
        enter = -1
        for j in range(ncols):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best = None
        for i, r in enumerate(rows):
            a = r[enter]
            if a > 0:
                ratio = r[-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(rows, cost, basis, leave, enter)


def simplex_solve(lp: LinearProgram) -> LPOutcome:
    """Exact two-phase simplex; certificates are re-checked before return."""
    n = lp.num_vars
    if lp.objective is not None and len(lp.objective) != n:
        raise InputError("objective length does not match variable count")
    rows = []
    relations = []
    for coeffs, rel, rhs in lp.rows:
        if len(coeffs) != n:
            raise InputError("row length does not match variable count")
        coeffs = [_rat(c) for c in coeffs]
        rhs = _rat(rhs)
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows.append((coeffs, rel, rhs))
        relations.append(rel)

    m = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel != "=")
    ncols = n + n_slack
    art_cols = []
    tableau = []
    basis = []
    slack_at = 0
    for i, (coeffs, rel, rhs) in enumerate(rows):
        row = [_rat(c) for c in coeffs] + [_ZERO] * n_slack
        if rel != "=":
            row[n + slack_at] = _ONE if rel == "<=" else -_ONE
            slack_at += 1
        tableau.append(row + [rhs])
        basis.append(None)
    # artificial columns where no slack can start basic
    for i, (coeffs, rel, rhs) in enumerate(rows):
        if rel == "<=":
            basis[i] = n + sum(
                1 for q in range(i) if relations[q] != "="
            )
        else:
            col = ncols + len(art_cols)
            art_cols.append(col)
            basis[i] = col
    total = ncols + len(art_cols)
    for i, row in enumerate(tableau):
        rhs = row.pop()
        row.extend([_ZERO] * len(art_cols))
        if basis[i] >= ncols:
            row[basis[i]] = _ONE
        row.append(rhs)

    # phase 1: minimize the artificial sum
    cost1 = [_ZERO] * total + [_ZERO]
    for c in art_cols:
        cost1[c] = _ONE
    for i, b in enumerate(basis):
        if b >= ncols:
            cost1 = [a - t for a, t in zip(cost1, tableau[i])]
    status = _minimize(tableau, cost1, basis, total)
    phase1_value = -cost1[-1]
    if status != OPTIMAL or phase1_value > 0:
        return LPOutcome(status=INFEASIBLE, infeasibility_witness=phase1_value)
    # drive any artificial out of the basis; drop redundant rows
    for i in range(len(tableau) - 1, -1, -1):
        if basis[i] >= ncols:
            col = next(
                (j for j in range(ncols) if tableau[i][j] != 0), None
            )
            if col is None:
                del tableau[i], basis[i]
            else:
                _pivot(tableau, cost1, basis, i, col)

    solution = [_ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            solution[b] = tableau[i][-1]
    if lp.objective is None:
        _check_certificate(lp, solution)
        return LPOutcome(status=FEASIBLE, certificate=tuple(solution))

    # phase 2; artificial columns are nonbasic and barred from entering
    sign = -1 if lp.maximize else 1
    cost2 = [sign * _rat(c) for c in lp.objective]
    cost2 += [_ZERO] * (total - n) + [_ZERO]
    for i, b in enumerate(basis):
        if cost2[b] != 0:
            f = cost2[b]
            cost2 = [a - f * t for a, t in zip(cost2, tableau[i])]
    status = _minimize(tableau, cost2, basis, ncols)
    if status == UNBOUNDED:
        return LPOutcome(status=UNBOUNDED)
    solution = [_ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            solution[b] = tableau[i][-1]
    _check_certificate(lp, solution)
    value = sum(
        (_rat(c) * s for c, s in zip(lp.objective, solution)), _ZERO
    )
    return LPOutcome(status=OPTIMAL, optimum=value, certificate=tuple(solution))


def _check_certificate(lp: LinearProgram, solution):
    for s in solution:
        if s < 0:
            raise AssertionError("negative variable in simplex certificate")
    for coeffs, rel, rhs in lp.rows:
        lhs = sum(
            (_rat(c) * s for c, s in zip(coeffs, solution)), _ZERO
        )
        rhs = _rat(rhs)
        ok = lhs <= rhs if rel == "<=" else lhs >= rhs if rel == ">=" else lhs == rhs
        if not ok:
            raise AssertionError("simplex certificate violates a constraint")


# ---------------------------------------------------------------------------
# ranking machinery over S_n, lexicographic column order


@lru_cache(maxsize=8)
def _positions(n: int) -> np.ndarray:
    """pos[r, a] = position of alternative a in the r-th ranking (lex)."""
    _, pos, _ = _perm_tables(n)
    return pos.astype(np.int64)


@lru_cache(maxsize=8)
def _distance3_matrix(n: int) -> np.ndarray:
    """d3[p, r]: 3-wise distance between complete rankings p and r."""
    _, pos, after = _perm_tables(n)
    pos = pos.astype(np.int64)
    fact = pos.shape[0]
    r_counts = n - 1 - pos
    out = np.empty((fact, fact), dtype=np.int64)
    for p in range(fact):
        ge = (pos[p][:, None] >= pos[p][None, :]).astype(np.uint8)
        g = np.einsum("rau,ua->ra", after, ge, dtype=np.int64)
        out[p] = (r_counts - g + _choose2(r_counts) - _choose2(g)).sum(axis=1)
    return out


def _top_indicator(n: int, subset: tuple[int, ...], winner: int) -> np.ndarray:
    """1 for rankings placing `winner` first within `subset`."""
    pos = _positions(n)
    others = [a for a in subset if a != winner]
    ind = np.ones(pos.shape[0], dtype=bool)
    for a in others:
        ind &= pos[:, winner] < pos[:, a]
    return ind.astype(np.int64)


def _majority_row(n: int, a: int, b: int) -> list:
    """Coefficients of the mass ranking a before b."""
    return list(_top_indicator(n, (a, b), a))


def build_lemma_lp1() -> LinearProgram:
    """The 24-variable pair-contribution LP over alternatives x, y, z, t.

    Objective: net disagreement gained on the subsets {x,y,t} and
    {y,z,t} when y overtakes x and z; constrained by the three
    3/4-majority rows and the distribution simplex.
    """
    x, y, z, t = 0, 1, 2, 3
    obj = (
        _top_indicator(4, (x, y, t), y)
        - _top_indicator(4, (x, y, t), x)
        + _top_indicator(4, (y, z, t), y)
        - _top_indicator(4, (y, z, t), z)
    )
    lp = LinearProgram(num_vars=24, rows=[], objective=list(obj), maximize=True)
    lp.add_row([1] * 24, "=", 1)
    for a, b in ((z, x), (x, y), (x, t)):
        lp.add_row(_majority_row(4, a, b), ">=", THREE_QUARTERS)
    return lp


def _ranking_positions(n: int, p: Ranking | tuple) -> np.ndarray:
    if isinstance(p, Ranking):
        if p.n != n:
            raise InputError("ranking size does not match n")
        return p.positions()
    return Ranking(tuple(p)).positions()


def _side_sign(i: int, k: int) -> int:
    return -1 if i < k else 1


def bad_rankings(n: int, k: int) -> list[tuple[int, ...]]:
    """Rankings misplacing some alternative relative to pivot k (0-based)."""
    return [r for r in itertools.permutations(range(n)) if _is_bad(n, k, r)]


def good_rankings(n: int, k: int) -> list[tuple[int, ...]]:
    """Rankings agreeing with the pivot on every side (complement of bad)."""
    return [
        r for r in itertools.permutations(range(n)) if not _is_bad(n, k, r)
    ]


def _is_bad(n: int, k: int, order: tuple[int, ...]) -> bool:
    pos = Ranking(order).positions()
    return any(
        _side_sign(i, k) * (int(pos[i]) - int(pos[k])) < 0
        for i in range(n)
        if i != k
    )


def _star_rows(n: int, k: int, threshold) -> list[tuple[list, str, object]]:
    """Simplex row plus the non-dirty majority rows for pivot k.

    The i = k majority row is identically zero and would be vacuously
    unsatisfiable, so only i != k rows are emitted.
    """
    pos = _positions(n)
    fact = pos.shape[0]
    rows: list[tuple[list, str, object]] = [
        ([_ONE] * fact, "=", _ONE)
    ]
    threshold = Rational(threshold)
    for i in range(n):
        if i == k:
            continue
        agree = _side_sign(i, k) * (pos[:, i] - pos[:, k]) > 0
        rows.append(([Rational(int(v)) for v in agree], ">=", threshold))
    return rows


def system_star_feasible(
    n: int,
    k: int,
    p: Ranking | tuple,
    threshold=THREE_QUARTERS,
) -> LPOutcome:
    """Feasibility of the non-dirty/bad-ranking system for pivot k.

    Variables are a distribution over S_n; besides the majority rows, one
    comparison row per good ranking q requires the bad ranking p to score
    no worse than q. Rows are generated lazily: a subsystem failure
    already proves infeasibility, and a feasible point is only accepted
    once it satisfies every comparison row.
    """
    if not 2 <= n <= 6:
        raise InputError("n must be between 2 and 6")
    if not 0 <= k < n:
        raise InputError(f"pivot {k} out of range for n={n}")
    p_order = p.order if isinstance(p, Ranking) else tuple(p)
    if not _is_bad(n, k, p_order):
        raise InputError("p must misplace some alternative relative to the pivot")
    perms = list(itertools.permutations(range(n)))
    index = {r: i for i, r in enumerate(perms)}
    fact = len(perms)
    d3 = _distance3_matrix(n)
    p_row = d3[index[p_order]]
    goods = good_rankings(n, k)
    beta = {q: p_row - d3[index[q]] for q in goods}
    base_rows = _star_rows(n, k, threshold)

    active: list[tuple[int, ...]] = []
    while True:
        lp = LinearProgram(num_vars=fact, rows=list(base_rows))
        for q in active:
            lp.add_row([int(v) for v in beta[q]], "<=", 0)
        outcome = simplex_solve(lp)
        if outcome.status == INFEASIBLE:
            return outcome
        violated = None
        for q in goods:
            if q not in active and _dot_positive(beta[q], outcome.certificate):
                violated = q
                break
        if violated is None:
            return outcome
        active.append(violated)


def _dot_positive(coeffs: np.ndarray, cert) -> bool:
    total = _ZERO
    for c, s in zip(coeffs, cert):
        if s != 0:
            total += int(c) * s
    return total > 0


def star_sweep(n: int, threshold=THREE_QUARTERS):
    """All (k, p) systems for n alternatives; yields (k, p, LPOutcome)."""
    for k in range(n):
        for p in bad_rankings(n, k):
            yield k, p, system_star_feasible(n, k, p, threshold)


def verify_six_candidate_rule(a_size: int) -> bool:
    """Weak 3/4 rule for 6 alternatives with at most two stronger ones.

    a_size is the number of alternatives beating the pivot; each system
    for a bad ranking must be infeasible. Slow: 720-variable LPs.
    """
    if not 0 <= a_size <= 2:
        raise InputError("the stronger side may hold at most 2 alternatives")
    k = a_size
    return all(
        outcome.status == INFEASIBLE
        for _, _, outcome in _sweep_one_pivot(6, k)
    )


def _sweep_one_pivot(n: int, k: int):
    for p in bad_rankings(n, k):
        yield k, p, system_star_feasible(n, k, p)


@dataclass
class SecondBestReport:
    xzt_optimum: object
    yzt_optimum: object
    pair_optimum: object
    certificates: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            self.xzt_optimum == Rational(-1, 4)
            and self.yzt_optimum == Rational(1, 4)
            and self.pair_optimum == 0
        )


def verify_second_best_bounds() -> SecondBestReport:
    """Exact optima of the three contribution LPs over four alternatives.

    With z the sole stronger alternative (z beats x by 3/4, x beats the
    rest by 3/4), moving z past x changes the subset {x,z,t} by at most
    -1/4 per vote and {y,z,t} by at most +1/4; the paired subsets of the
    24-variable LP contribute at most 0.
    """
    x, y, z, t = 0, 1, 2, 3
    certificates = {}

    obj_xzt = list(
        _top_indicator(4, (x, z, t), x) - _top_indicator(4, (x, z, t), z)
    )
    lp = LinearProgram(num_vars=24, rows=[], objective=obj_xzt, maximize=True)
    lp.add_row([1] * 24, "=", 1)
    for a, b in ((z, x), (x, t)):
        lp.add_row(_majority_row(4, a, b), ">=", THREE_QUARTERS)
    out = simplex_solve(lp)
    xzt = out.optimum
    certificates["xzt"] = out.certificate

    obj_yzt = list(
        _top_indicator(4, (y, z, t), y) - _top_indicator(4, (y, z, t), z)
    )
    lp = LinearProgram(num_vars=24, rows=[], objective=obj_yzt, maximize=True)
    lp.add_row([1] * 24, "=", 1)
    for a, b in ((z, x), (x, y), (x, t)):
        lp.add_row(_majority_row(4, a, b), ">=", THREE_QUARTERS)
    out = simplex_solve(lp)
    yzt = out.optimum
    certificates["yzt"] = out.certificate

    out = simplex_solve(build_lemma_lp1())
    certificates["pair"] = out.certificate
    return SecondBestReport(
        xzt_optimum=xzt,
        yzt_optimum=yzt,
        pair_optimum=out.optimum,
        certificates=certificates,
    )
