"""Seeded corpora of step functions.

Members are drawn one after another from a single generator, cycling through
the requested kinds, so a corpus of size ``2n`` starts with the corpus of size
``n``.  Doubling a corpus therefore only adds members.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from rispace.stepfunction import StepFunction

__all__ = ["KINDS", "Corpus", "gen_corpus"]

KINDS = ("indicator", "staircase", "power", "logspike", "random")


def _indicator(rng: np.random.Generator) -> StepFunction:
    r = 10.0 ** rng.uniform(-4.0, -0.05)
    shifted = rng.random() < 0.5
    a = rng.uniform(0.0, 1.0 - r) if shifted else 0.0
    height = 10.0 ** rng.uniform(-1.0, 1.0)
    return StepFunction.indicator(a, a + r, height)


def _staircase(rng: np.random.Generator) -> StepFunction:
    k = int(rng.integers(2, 9))
    bps = np.sort(10.0 ** rng.uniform(-4.0, -0.01, size=k - 1))
    bps = np.unique(bps)
    vals = rng.uniform(0.0, 3.0, size=bps.size + 1)
    return StepFunction._from_edges(np.concatenate(([0.0], bps, [1.0])), vals)


def _cell_means(edges: np.ndarray, antiderivative) -> np.ndarray:
    return np.diff(antiderivative(edges)) / np.diff(edges)


def _power(rng: np.random.Generator) -> StepFunction:
    gamma = rng.uniform(0.05, 0.9)
    floor = 10.0 ** rng.uniform(-5.0, -2.0)
    n = int(rng.integers(6, 25))
    inner = np.geomspace(floor, 1.0, n)
    means = _cell_means(inner, lambda x: x ** (1.0 - gamma) / (1.0 - gamma))
    # truncation: the piece (0, floor) carries the value at floor
    vals = np.concatenate(([floor**-gamma], means))
    return StepFunction._from_edges(np.concatenate(([0.0], inner)), vals)


def _logspike(rng: np.random.Generator) -> StepFunction:
    kappa = rng.uniform(0.5, 3.0)
    floor = 10.0 ** rng.uniform(-6.0, -2.0)
    n = int(rng.integers(6, 25))
    inner = np.geomspace(floor, 1.0, n)
    mids = np.sqrt(inner[:-1] * inner[1:])
    vals = np.concatenate(([(1.0 - np.log(floor)) ** kappa], (1.0 - np.log(mids)) ** kappa))
    if rng.random() < 0.5:
        order = rng.permutation(vals.size)
        lengths = np.diff(np.concatenate(([0.0], inner)))[order]
        edges = np.concatenate(([0.0], np.cumsum(lengths)))
        return StepFunction._from_edges(edges, vals[order])
    return StepFunction._from_edges(np.concatenate(([0.0], inner)), vals)


def _random(rng: np.random.Generator) -> StepFunction:
    n = int(rng.integers(1, 30))
    bps = np.unique(rng.uniform(0.0, 1.0, size=n))
    bps = bps[(bps > 0.0) & (bps < 1.0)]
    vals = rng.exponential(1.0, size=bps.size + 1)
    vals[rng.random(vals.size) < 0.2] = 0.0
    if not np.any(vals > 0):
        vals[0] = 1.0
    return StepFunction._from_edges(np.concatenate(([0.0], bps, [1.0])), vals)


_GENERATORS = {
    "indicator": _indicator,
    "staircase": _staircase,
    "power": _power,
    "logspike": _logspike,
    "random": _random,
}


@dataclass(frozen=True)
class Corpus:
    seed: int
    kinds: tuple[str, ...]
    members: tuple[StepFunction, ...]
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def head(self, n: int) -> "Corpus":
        return Corpus(self.seed, self.kinds, self.members[:n], self.labels[:n])


def gen_corpus(seed: int, size: int, kinds: Sequence[str] | None = None) -> Corpus:
    """Deterministic corpus of ``size`` canonical step functions."""
    if size < 1:
        raise ValueError("corpus size must be at least 1")
    kinds = tuple(KINDS if kinds is None else kinds)
    if not kinds:
        raise ValueError("at least one generator kind is required")
    unknown = [k for k in kinds if k not in _GENERATORS]
    if unknown:
        raise ValueError(f"unknown corpus kinds {unknown}; choose from {list(KINDS)}")
    rng = np.random.default_rng(seed)
    members, labels = [], []
    for i in range(size):
        kind = kinds[i % len(kinds)]
        f = _GENERATORS[kind](rng)
        members.append(f)
        labels.append(f"{kind}-{i}")
    return Corpus(seed, kinds, tuple(members), tuple(labels))
