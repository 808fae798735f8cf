"""Piecewise-constant nonnegative functions on (0, 1).

A :class:`StepFunction` is stored as the full edge vector ``0 = e_0 < e_1 <
... < e_K = 1`` together with one value per piece ``[e_k, e_{k+1})``.
Evaluation is right-continuous, which matches the infimum definition of the
nonincreasing rearrangement.  Everything in this module is computed from the
edges and values directly, so identities such as equimeasurability hold up to
floating-point summation error only.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "StepFunction",
    "Rearranged",
    "rearrange",
    "distribution",
    "dilate",
    "optimal_decomposition",
    "level_function",
    "integrate",
    "primitive",
    "hardy_littlewood_sides",
]


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _canonical(edges: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop empty pieces and merge neighbours carrying the same value."""
    keep = np.diff(edges) > 0
    lefts = edges[:-1][keep]
    vals = values[keep]
    if vals.size == 0:
        return np.array([0.0, 1.0]), np.array([0.0])
    change = np.ones(vals.size, dtype=bool)
    change[1:] = vals[1:] != vals[:-1]
    new_edges = np.append(lefts[change], 1.0)
    new_edges[0] = 0.0
    return new_edges, vals[change]


class StepFunction:
    """Exact piecewise-constant function in M_+(0, 1).

    Parameters
    ----------
    breakpoints : sequence of float
        Strictly increasing interior breakpoints in the open interval (0, 1).
    values : sequence of float
        Finite nonnegative values, one more than there are breakpoints.
    """

    __slots__ = ("_edges", "_values")

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        bp = np.asarray(breakpoints, dtype=float).ravel()
        vals = np.asarray(values, dtype=float).ravel()
        if vals.size != bp.size + 1:
            raise ValueError(
                f"need len(values) == len(breakpoints) + 1, got {vals.size} and {bp.size}"
            )
        if bp.size and (bp[0] <= 0.0 or bp[-1] >= 1.0):
            raise ValueError("breakpoints must lie in the open interval (0, 1)")
        if bp.size > 1 and np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("values must be finite and nonnegative")
        edges = np.concatenate(([0.0], bp, [1.0]))
        self._set(*_canonical(edges, vals))

    def _set(self, edges, values):
        self._edges = _readonly(edges)
        self._values = _readonly(values)

    @classmethod
    def _from_edges(cls, edges, values) -> "StepFunction":
        # trusted internal constructor: edges may contain empty pieces from float noise
        obj = cls.__new__(cls)
        e = np.asarray(edges, dtype=float).copy()
        v = np.asarray(values, dtype=float)
        e[0], e[-1] = 0.0, 1.0
        e = np.clip(e, 0.0, 1.0)
        e = np.maximum.accumulate(e)
        obj._set(*_canonical(e, np.maximum(v, 0.0)))
        return obj

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, c: float) -> "StepFunction":
        return cls([], [c])

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls([], [0.0])

    @classmethod
    def indicator(cls, a: float, b: float, height: float = 1.0) -> "StepFunction":
        """``height`` times the indicator of ``(a, b)``."""
        if not 0.0 <= a < b <= 1.0:
            raise ValueError("need 0 <= a < b <= 1")
        return cls._from_edges([0.0, a, b, 1.0], [0.0, height, 0.0])

    @classmethod
    def from_pieces(cls, edges: Sequence[float], values: Sequence[float]) -> "StepFunction":
        """Build from a full edge vector starting at 0 and ending at 1."""
        e = np.asarray(edges, dtype=float)
        if e.size != len(values) + 1 or e[0] != 0.0 or e[-1] != 1.0:
            raise ValueError("edges must run from 0 to 1 with one more entry than values")
        return cls(e[1:-1], values)

    # -- accessors -----------------------------------------------------------
    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def breakpoints(self) -> np.ndarray:
        return self._edges[1:-1]

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self._edges)

    @property
    def n_pieces(self) -> int:
        return self._values.size

    def is_zero(self) -> bool:
        return bool(np.all(self._values == 0.0))

    def is_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self._values) <= 0.0))

    def sup(self) -> float:
        return float(self._values.max())

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._edges, t, side="right") - 1
        idx = np.clip(idx, 0, self._values.size - 1)
        out = self._values[idx]
        return out if out.ndim else float(out)

    def __repr__(self) -> str:
        pieces = ", ".join(
            f"[{a:.6g},{b:.6g}):{v:.6g}"
            for a, b, v in zip(self._edges[:-1], self._edges[1:], self._values)
        )
        return f"{type(self).__name__}({pieces})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        return np.array_equal(self._edges, other._edges) and np.array_equal(
            self._values, other._values
        )

    def __hash__(self) -> int:
        return hash((self._edges.tobytes(), self._values.tobytes()))

    # -- algebra -------------------------------------------------------------
    def _binary(self, other: "StepFunction", op) -> "StepFunction":
        edges = np.union1d(self._edges, other._edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        return StepFunction._from_edges(edges, op(self(mids), other(mids)))

    def __add__(self, other: "StepFunction") -> "StepFunction":
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self._binary(other, np.add)

    def __mul__(self, c: float) -> "StepFunction":
        if isinstance(c, StepFunction):
            return self._binary(c, np.multiply)
        c = float(c)
        if c < 0:
            raise ValueError("scalar must be nonnegative")
        return StepFunction._from_edges(self._edges, self._values * c)

    __rmul__ = __mul__

    def minimum(self, other: "StepFunction") -> "StepFunction":
        return self._binary(other, np.minimum)

    def maximum(self, other: "StepFunction") -> "StepFunction":
        return self._binary(other, np.maximum)

    def dominated_by(self, other: "StepFunction") -> bool:
        edges = np.union1d(self._edges, other._edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        return bool(np.all(self(mids) <= other(mids)))

    # -- io ------------------------------------------------------------------
    def to_csv(self, path: str | Path | None = None) -> str:
        """Serialise as ``breakpoint,value`` rows (right endpoint of each piece)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["breakpoint", "value"])
        for b, v in zip(self._edges[1:], self._values):
            writer.writerow([repr(float(b)), repr(float(v))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source: str | Path) -> "StepFunction":
        """Parse the CSV produced by :meth:`to_csv` (path or literal text)."""
        if isinstance(source, Path) or ("\n" not in str(source) and Path(source).exists()):
            text = Path(source).read_text()
        else:
            text = str(source)
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["breakpoint", "value"]:
            raise ValueError("expected header 'breakpoint,value'")
        rights, vals = [], []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"line {lineno}: expected two columns")
            rights.append(float(row[0]))
            vals.append(float(row[1]))
        if not rights or rights[-1] != 1.0:
            raise ValueError("final row must have breakpoint 1.0")
        return cls(rights[:-1], vals)


class Rearranged(StepFunction):
    """A :class:`StepFunction` whose values are nonincreasing."""

    __slots__ = ()

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        super().__init__(breakpoints, values)
        if not self.is_nonincreasing():
            raise ValueError("values of a Rearranged function must be nonincreasing")

    @classmethod
    def _from_edges(cls, edges, values) -> "Rearranged":
        obj = super()._from_edges(edges, values)
        if not obj.is_nonincreasing():
            raise ValueError("values of a Rearranged function must be nonincreasing")
        return obj


def rearrange(f: StepFunction) -> Rearranged:
    """Nonincreasing rearrangement f*: pieces sorted by value, lengths kept."""
    if isinstance(f, Rearranged):
        return f
    order = np.argsort(-f.values, kind="stable")
    lengths = f.lengths[order]
    edges = np.concatenate(([0.0], np.cumsum(lengths)))
    return Rearranged._from_edges(edges, f.values[order])


def distribution(f: StepFunction, level: float) -> float:
    """Lebesgue measure of ``{f > level}``."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    return math.fsum(f.lengths[f.values > level])


def primitive(f: StepFunction, t):
    """``t -> int_0^t f``, exact on every piece; vectorised over ``t``."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    e = f.edges
    cum = np.concatenate(([0.0], np.cumsum(f.values * f.lengths)))
    idx = np.clip(np.searchsorted(e, t, side="right") - 1, 0, f.n_pieces - 1)
    out = cum[idx] + f.values[idx] * (t - e[idx])
    return out if out.ndim else float(out)


def integrate(f: StepFunction, a: float = 0.0, b: float = 1.0) -> float:
    """Exact ``int_a^b f``."""
    if a > b:
        raise ValueError("need a <= b")
    if not (0.0 <= a and b <= 1.0):
        raise ValueError("limits must lie in [0, 1]")
    lo = np.clip(f.edges[:-1], a, b)
    hi = np.clip(f.edges[1:], a, b)
    return math.fsum(f.values * (hi - lo))


def dilate(f: StepFunction, s: float) -> StepFunction:
    """Dilation ``(E_s f)(t) = f(t/s)`` on ``(0, min(s, 1))``, zero beyond."""
    if s <= 0:
        raise ValueError("scale must be positive")
    if s == 1.0:
        return f
    scaled = f.edges * s
    if s > 1.0:
        keep = scaled[:-1] < 1.0
        edges = np.append(scaled[:-1][keep], 1.0)
        return StepFunction._from_edges(edges, f.values[keep])
    edges = np.append(scaled, 1.0)
    return StepFunction._from_edges(edges, np.append(f.values, 0.0))


def optimal_decomposition(f: StepFunction, t: float) -> tuple[StepFunction, StepFunction]:
    """Split ``f = f0 + f1`` with ``f0 = min(f, f*(t))`` and ``f1 = f - f0``."""
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    level = rearrange(f)(t)
    f0 = StepFunction._from_edges(f.edges, np.minimum(f.values, level))
    f1 = StepFunction._from_edges(f.edges, np.maximum(f.values - level, 0.0))
    return f0, f1


def _upper_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def level_function(f: StepFunction) -> Rearranged:
    """Level function: slopes of the least concave majorant of ``int_0^t f``."""
    x = f.edges
    y = np.concatenate(([0.0], np.cumsum(f.values * f.lengths)))
    hull = _upper_hull(x, y)
    hx, hy = x[hull], y[hull]
    slopes = np.diff(hy) / np.diff(hx)
    # float noise can leave a slope a hair above its predecessor
    slopes = np.minimum.accumulate(np.maximum(slopes, 0.0))
    return Rearranged._from_edges(hx, slopes)


def hardy_littlewood_sides(f: StepFunction, g: StepFunction) -> tuple[float, float]:
    """Return ``(int f g, int f* g*)``."""
    lhs = integrate(f * g)
    rhs = integrate(rearrange(f) * rearrange(g))
    return lhs, rhs


def common_edges(functions: Iterable[StepFunction]) -> np.ndarray:
    edges = np.array([0.0, 1.0])
    for fn in functions:
        edges = np.union1d(edges, fn.edges)
    return edges
