"""Monte-Carlo measurement of how much of the pair order each theorem solves.

Profiles are drawn uniformly (independent unbiased shuffles); every
instance gets its own deterministic generator derived from (seed, index),
so results do not depend on evaluation order. The per-instance score of a
method is the fraction of unordered pairs it certifies directly.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InputError
from .model import AlternativeRegistry, Profile, Vote
from .reduction import ALL_METHODS, run_method
from .stats import compute_statistics

__all__ = [
    "DEFAULT_SEED",
    "SimulationConfig",
    "MethodSummary",
    "SimulationResult",
    "generate_uniform_profile",
    "run_simulation",
]

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class SimulationConfig:
    n: int
    m: int
    instance_count: int
    seed: int = DEFAULT_SEED
    methods: tuple[str, ...] = ("3AT", "3MOT", "3MOTe", "Iterated3MOT")
    max_iterations: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise InputError("n must be at least 2")
        if self.m < 1:
            raise InputError("m must be at least 1")
        if self.instance_count < 1:
            raise InputError("instance_count must be at least 1")
        if not self.methods:
            raise InputError("at least one method is required")
        unknown = [name for name in self.methods if name not in ALL_METHODS]
        if unknown:
            raise InputError(f"unknown methods: {unknown}")


@dataclass(frozen=True)
class MethodSummary:
    method: str
    mean_solved_fraction: float
    stderr: float
    mean_iterations: float


@dataclass(frozen=True)
class SimulationResult:
    config: SimulationConfig
    summaries: tuple[MethodSummary, ...]
    wall_time: float
    fractions: dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["n", "m", "method", "mean_solved_fraction", "stderr", "instances", "seed"]
        )
        for s in self.summaries:
            writer.writerow(
                [
                    self.config.n,
                    self.config.m,
                    s.method,
                    f"{s.mean_solved_fraction:.6f}",
                    f"{s.stderr:.6f}",
                    self.config.instance_count,
                    self.config.seed,
                ]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": 1,
                "n": self.config.n,
                "m": self.config.m,
                "instances": self.config.instance_count,
                "seed": self.config.seed,
                "wall_time": self.wall_time,
                "methods": [
                    {
                        "method": s.method,
                        "mean_solved_fraction": s.mean_solved_fraction,
                        "stderr": s.stderr,
                        "mean_iterations": s.mean_iterations,
                    }
                    for s in self.summaries
                ],
            },
            indent=2,
        )


def generate_uniform_profile(rng: np.random.Generator, n: int, m: int) -> Profile:
    """m independent uniform rankings of n alternatives."""
    if n < 2 or m < 1:
        raise InputError("need n >= 2 and m >= 1")
    registry = AlternativeRegistry.of_size(n)
    counts: dict[tuple[int, ...], int] = {}
    for _ in range(m):
        order = tuple(int(a) for a in rng.permutation(n))
        counts[order] = counts.get(order, 0) + 1
    entries = tuple(
        (Vote(order, n=n), c) for order, c in sorted(counts.items())
    )
    return Profile(registry, entries)


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def run_simulation(cfg: SimulationConfig) -> SimulationResult:
    start = time.perf_counter()
    fractions = {name: np.empty(cfg.instance_count) for name in cfg.methods}
    iterations = {name: np.empty(cfg.instance_count) for name in cfg.methods}
    for idx in range(cfg.instance_count):
        rng = instance_rng(cfg.seed, idx)
        profile = generate_uniform_profile(rng, cfg.n, cfg.m)
        stats = compute_statistics(profile)
        for name in cfg.methods:
            report = run_method(name, stats)
            fractions[name][idx] = float(report.certified_fraction)
            iterations[name][idx] = report.iterations_used
    summaries = []
    for name in cfg.methods:
        f = fractions[name]
        mean = float(f.mean())
        stderr = (
            float(f.std(ddof=1) / math.sqrt(len(f))) if len(f) > 1 else 0.0
        )
        summaries.append(
            MethodSummary(
                method=name,
                mean_solved_fraction=mean,
                stderr=stderr,
                mean_iterations=float(iterations[name].mean()),
            )
        )
    return SimulationResult(
        config=cfg,
        summaries=tuple(summaries),
        wall_time=time.perf_counter() - start,
        fractions=fractions,
    )
