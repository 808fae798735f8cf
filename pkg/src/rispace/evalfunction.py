"""Derived functions on (0, 1): maximal functions, operator outputs, samples.

An :class:`EvalFunction` is a piecewise formula: an edge vector and a callable
``piece(t, k)`` giving the closed form on piece ``k``, valid on the closed
piece so that one-sided limits at breakpoints are available exactly.  Public
evaluation below ``MIN_EVAL`` returns NaN, since ``1/I(t)`` is meaningless
there in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from rispace.stepfunction import Rearranged, StepFunction, rearrange

__all__ = [
    "EvalFunction",
    "GridFunction",
    "MIN_EVAL",
    "maximal_fn",
    "oscillation",
    "from_step",
    "discretize",
    "piece_samples",
]

MIN_EVAL = 1e-9
NONINCREASING = "nonincreasing"
NONDECREASING = "nondecreasing"
NO_MONOTONICITY = "none"
_MONOTONE_SLACK = 1e-12
# relative offset used to resolve the first piece towards 0
_ZERO_DEPTH = 1e-15


PieceFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class EvalFunction:
    """Piecewise closed-form function on (0, 1).

    ``zero_limit`` is the limit at ``0+`` when it is known (possibly ``inf``).
    ``piece_trend`` optionally records, per piece, ``-1`` (nonincreasing),
    ``+1`` (nondecreasing) or ``0`` (unknown); it lets suprema be read off
    piece endpoints instead of being searched for.
    """

    edges: np.ndarray
    piece: PieceFn
    monotonicity: str = NO_MONOTONICITY
    provenance: str = "eval"
    zero_limit: float | None = None
    piece_trend: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.monotonicity not in (NONINCREASING, NONDECREASING, NO_MONOTONICITY):
            raise ValueError(f"unknown monotonicity flag {self.monotonicity!r}")

    @property
    def n_pieces(self) -> int:
        return self.edges.size - 1

    def piece_index(self, t: np.ndarray) -> np.ndarray:
        return np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, self.n_pieces - 1)

    def raw(self, t):
        """Evaluate without the small-``t`` guard."""
        t = np.asarray(t, dtype=float)
        tt = np.atleast_1d(t)
        out = self.piece(tt, self.piece_index(tt))
        return out if t.ndim else float(out[0])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        tt = np.atleast_1d(t)
        out = np.full(tt.shape, np.nan)
        ok = tt >= MIN_EVAL
        if np.any(ok):
            out[ok] = self.piece(tt[ok], self.piece_index(tt[ok]))
        return out if t.ndim else float(out[0])

    def left_limits(self) -> np.ndarray:
        """Value at the right end of every piece (limit from the left)."""
        k = np.arange(self.n_pieces)
        return self.piece(self.edges[1:].copy(), k)

    def right_starts(self) -> np.ndarray:
        """Value at the left end of every piece (limit from the right)."""
        k = np.arange(self.n_pieces)
        start = self.edges[:-1].copy()
        start[0] = self.edges[1] * _ZERO_DEPTH
        vals = self.piece(start, k)
        if self.zero_limit is not None:
            vals[0] = self.zero_limit
        return vals

    def sup(self) -> float:
        s, v, _ = piece_samples(self)
        return float(np.max(v))

    def check_monotone(self, t: np.ndarray) -> bool:
        """Whether the declared monotonicity holds on the points ``t``."""
        vals = self.raw(np.sort(np.asarray(t, dtype=float)))
        d = np.diff(vals)
        slack = _MONOTONE_SLACK * np.maximum(1.0, np.abs(vals[1:]))
        if self.monotonicity == NONINCREASING:
            return bool(np.all(d <= slack))
        if self.monotonicity == NONDECREASING:
            return bool(np.all(d >= -slack))
        return True

    def scaled(self, c: float) -> "EvalFunction":
        piece = self.piece
        zl = None if self.zero_limit is None else c * self.zero_limit
        return EvalFunction(
            self.edges,
            lambda t, k: c * piece(t, k),
            self.monotonicity,
            f"{c!r}*{self.provenance}",
            zl,
            self.piece_trend,
        )


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function on a sorted grid, refined by dyadic midpoints."""

    grid: np.ndarray
    samples: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.grid[0] <= 0 or self.grid[-1] > 1:
            raise ValueError("grid must lie in (0, 1]")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    @classmethod
    def sample(cls, fn: Callable[[np.ndarray], np.ndarray], grid: np.ndarray) -> "GridFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(fn(grid), dtype=float))

    def refined(self, fn: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Insert the geometric midpoint of every cell and sample ``fn`` there."""
        mids = np.sqrt(self.grid[:-1] * self.grid[1:])
        grid = np.empty(self.grid.size + mids.size)
        grid[0::2] = self.grid
        grid[1::2] = mids
        samples = np.empty_like(grid)
        samples[0::2] = self.samples
        samples[1::2] = fn(mids)
        return GridFunction(grid, samples)

    def __call__(self, t):
        """Interpolation linear in ``log t``; constant beyond the grid."""
        t = np.asarray(t, dtype=float)
        out = np.interp(np.log(np.maximum(t, 1e-300)), np.log(self.grid), self.samples)
        return out if t.ndim else float(out)


def from_step(f: StepFunction, provenance: str = "step") -> EvalFunction:
    vals = f.values
    mono = NONINCREASING if f.is_nonincreasing() else NO_MONOTONICITY
    return EvalFunction(
        f.edges,
        lambda t, k: vals[k] + 0.0 * t,
        mono,
        provenance,
        float(vals[0]),
        np.zeros(vals.size),
    )


def maximal_fn(f: StepFunction) -> EvalFunction:
    """``f**(t) = (1/t) int_0^t f*``; on each piece of ``f*`` it is ``v + d/t``."""
    fs = rearrange(f)
    e, v = fs.edges, fs.values
    prim = np.concatenate(([0.0], np.cumsum(v * fs.lengths)))
    d = prim[:-1] - v * e[:-1]

    def piece(t, k):
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(d[k] == 0.0, 0.0, d[k] / t)
        return v[k] + tail

    return EvalFunction(
        e, piece, NONINCREASING, "maximal", float(v[0]), np.where(d > 0, -1.0, 0.0),
        meta={"rearranged": fs, "offsets": d},
    )


def oscillation(f: StepFunction) -> EvalFunction:
    """``f**(t) - f*(t)``; equal to ``d/t`` on each piece of ``f*``."""
    fs = rearrange(f)
    e, v = fs.edges, fs.values
    prim = np.concatenate(([0.0], np.cumsum(v * fs.lengths)))
    d = prim[:-1] - v * e[:-1]

    def piece(t, k):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(d[k] == 0.0, 0.0, d[k] / t)

    return EvalFunction(
        e, piece, NO_MONOTONICITY, "oscillation", 0.0, np.where(d > 0, -1.0, 0.0),
        meta={"rearranged": fs, "offsets": d},
    )


def _piece_points(a: float, b: float, n: int) -> np.ndarray:
    if a <= 0.0:
        return np.geomspace(b * _ZERO_DEPTH, b, n)
    if b / a > 4.0:
        return np.geomspace(a, b, n)
    return np.linspace(a, b, n)


def piece_samples(
    g: EvalFunction, n: int = 65, use_trend: bool = True
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Points, values and piece ids of ``n`` closed-piece samples per piece.

    Pieces with a known trend are represented by their two endpoints when
    ``use_trend`` is set.  The first sample of piece 0 is replaced by
    ``zero_limit`` when known.
    """
    pts, ks = [], []
    for k in range(g.n_pieces):
        trend = 0 if (g.piece_trend is None or not use_trend) else g.piece_trend[k]
        m = 2 if trend != 0 else n
        p = _piece_points(g.edges[k], g.edges[k + 1], m)
        pts.append(p)
        ks.append(np.full(p.size, k))
    s = np.concatenate(pts)
    k = np.concatenate(ks)
    vals = g.piece(s, k)
    if g.zero_limit is not None:
        vals[0] = g.zero_limit
    return s, vals, k


def discretize(g: EvalFunction, cells_per_piece: int = 64) -> StepFunction:
    """Midpoint step approximation of ``g`` (geometric cells, deeper at 0)."""
    edges_list, vals_list = [], []
    for k in range(g.n_pieces):
        a, b = g.edges[k], g.edges[k + 1]
        if a <= 0.0:
            inner = np.geomspace(b * _ZERO_DEPTH, b, cells_per_piece + 1)
            cut = np.concatenate(([0.0], inner))
        else:
            cut = _piece_points(a, b, cells_per_piece + 1)
        mids = np.where(cut[:-1] > 0, np.sqrt(np.maximum(cut[:-1], 1e-300) * cut[1:]), cut[1:] * 0.5)
        vals = g.piece(mids, np.full(mids.size, k))
        edges_list.append(cut[:-1])
        vals_list.append(vals)
    edges = np.append(np.concatenate(edges_list), 1.0)
    vals = np.concatenate(vals_list)
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"cannot discretize {g.provenance}: non-finite values")
    return StepFunction._from_edges(edges, vals)


def rearranged_samples(g: EvalFunction, cells_per_piece: int = 64) -> Rearranged:
    return rearrange(discretize(g, cells_per_piece))
