"""Empirical two-sided comparison of functionals over a corpus."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from rispace.harness.corpus import Corpus

__all__ = ["EquivalenceReport", "compare_functionals", "compare_with_doubling"]

STABILITY_RTOL = 0.05


@dataclass(frozen=True)
class EquivalenceReport:
    a: str
    b: str
    ratios: tuple[float, ...]
    min_ratio: float
    max_ratio: float
    argmin: str | None
    argmax: str | None
    excluded: int
    failures: tuple[str, ...] = ()
    witnesses: dict = field(default_factory=dict)
    stable: bool | None = None
    half_constant: float | None = None

    @property
    def bounded(self) -> bool:
        return not self.failures and math.isfinite(self.max_ratio) and self.min_ratio > 0

    def bracket_constant(self) -> float:
        """Smallest ``C`` with all ratios in ``[1/C, C]``."""
        if not self.bounded:
            return math.inf
        return max(self.max_ratio, 1.0 / self.min_ratio)


def _ratio_table(A, B, corpus: Corpus):
    ratios, ids, excluded, failures = [], [], 0, []
    for f, label in zip(corpus.members, corpus.labels):
        a, b = float(A(f)), float(B(f))
        if a == 0.0 and b == 0.0:
            excluded += 1
            continue
        if math.isinf(a) and math.isinf(b):
            excluded += 1
            continue
        if math.isinf(a) or math.isinf(b) or b == 0.0:
            failures.append(label)
            ratios.append(math.inf if b == 0.0 or math.isinf(a) else 0.0)
            ids.append(label)
            continue
        ratios.append(a / b)
        ids.append(label)
    return ratios, ids, excluded, failures


def _report(name_a, name_b, ratios, ids, excluded, failures, corpus: Corpus) -> EquivalenceReport:
    if not ratios:
        return EquivalenceReport(name_a, name_b, (), math.nan, math.nan, None, None, excluded, tuple(failures))
    arr = np.asarray(ratios)
    i_min, i_max = int(np.argmin(arr)), int(np.argmax(arr))
    lookup = dict(zip(corpus.labels, corpus.members))
    wit_ids = {ids[i_min], ids[i_max], *failures}
    witnesses = {w: lookup[w].to_csv() for w in sorted(wit_ids)}
    return EquivalenceReport(
        name_a, name_b, tuple(ratios), float(arr[i_min]), float(arr[i_max]),
        ids[i_min], ids[i_max], excluded, tuple(failures), witnesses,
    )


def compare_functionals(
    A: Callable, B: Callable, corpus: Corpus, name_a: str = "A", name_b: str = "B"
) -> EquivalenceReport:
    """Ratios ``A(f)/B(f)`` over the corpus; 0/0 members are excluded and counted."""
    ratios, ids, excluded, failures = _ratio_table(A, B, corpus)
    return _report(name_a, name_b, ratios, ids, excluded, failures, corpus)


def compare_with_doubling(
    A: Callable, B: Callable, corpus: Corpus, name_a: str = "A", name_b: str = "B"
) -> tuple[EquivalenceReport, EquivalenceReport]:
    """Report on the first half of ``corpus`` and on all of it, with a stability flag.

    Ratios are read as a bracket ``[1/C, C]``; the report is stable when the
    constant ``C`` moves by less than 5% between the two.  The movement of
    each end separately stays visible through ``small`` and ``full``.
    """
    n_half = max(len(corpus) // 2, 1)
    half = corpus.head(n_half)
    rest = Corpus(corpus.seed, corpus.kinds, corpus.members[n_half:], corpus.labels[n_half:])
    r1, i1, x1, f1 = _ratio_table(A, B, half)
    r2, i2, x2, f2 = _ratio_table(A, B, rest)
    small = _report(name_a, name_b, r1, i1, x1, f1, half)
    full = _report(name_a, name_b, r1 + r2, i1 + i2, x1 + x2, f1 + f2, corpus)
    c_half, c_full = small.bracket_constant(), full.bracket_constant()
    stable = small.bounded and full.bounded and abs(c_full - c_half) <= STABILITY_RTOL * c_half
    full = EquivalenceReport(**{**full.__dict__, "stable": bool(stable), "half_constant": c_half})
    return small, full
