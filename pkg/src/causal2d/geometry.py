"""Domain geometry: events, null coordinates, grids and sampled fields.

Two coordinate charts are used throughout.  The inertial chart carries
``(t, x)`` with the causal order "q is in the causal future of p iff
dt >= |dx|".  The null chart carries ``u = x + t`` and ``v = x - t``;
light rays are the coordinate lines.  The causal order is *defined* in
the inertial chart; the equivalent null-chart form (du >= 0 and dv <= 0)
is exercised by the test suite as a derived fact, not assumed here.

Fields are continuous functions on a rectangle represented by their
values on a uniform grid with bilinear interpolation in between.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np


def to_null(t: float, x: float) -> tuple[float, float]:
    """Inertial ``(t, x)`` to null coordinates ``(u, v) = (x + t, x - t)``."""
    return x + t, x - t


def from_null(u: float, v: float) -> tuple[float, float]:
    """Null ``(u, v)`` back to inertial ``(t, x)``; inverse of :func:`to_null`."""
    return (u - v) / 2.0, (u + v) / 2.0


@dataclass(frozen=True)
class Event:
    """A point of the plane, tagged with the chart its two numbers live in.

    ``a, b`` mean ``(t, x)`` when ``frame == "tx"`` and ``(u, v)`` when
    ``frame == "null"``.
    """

    a: float
    b: float
    frame: str = "tx"

    def __post_init__(self):
        if self.frame not in ("tx", "null"):
            raise ValueError(f"unknown frame {self.frame!r}")

    @staticmethod
    def tx(t: float, x: float) -> "Event":
        return Event(t, x, "tx")

    @staticmethod
    def null(u: float, v: float) -> "Event":
        return Event(u, v, "null")

    @property
    def t(self) -> float:
        return self.a if self.frame == "tx" else from_null(self.a, self.b)[0]

    @property
    def x(self) -> float:
        return self.b if self.frame == "tx" else from_null(self.a, self.b)[1]

    @property
    def u(self) -> float:
        return to_null(self.a, self.b)[0] if self.frame == "tx" else self.a

    @property
    def v(self) -> float:
        return to_null(self.a, self.b)[1] if self.frame == "tx" else self.b


def causal_leq_tx(tp, xp, tq, xq):
    """Vectorized causal order in the inertial chart: dt >= |dx|."""
    return (np.asarray(tq) - np.asarray(tp)) >= np.abs(np.asarray(xq) - np.asarray(xp))


def causal_leq_null(up, vp, uq, vq):
    """Null-chart form of the order (du >= 0 and dv <= 0).

    Derived once from u = x + t, v = x - t; the test suite asserts its
    agreement with :func:`causal_leq_tx` on random event pairs.
    """
    du = np.asarray(uq) - np.asarray(up)
    dv = np.asarray(vq) - np.asarray(vp)
    return (du >= 0.0) & (dv <= 0.0)


def causal_leq(p: Event, q: Event) -> bool:
    """True iff q lies in the causal future of p (dt >= |dx|)."""
    return bool(causal_leq_tx(p.t, p.x, q.t, q.x))


@dataclass(frozen=True)
class Rect:
    """Axis-aligned working rectangle in null coordinates."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError(
                f"degenerate rectangle: u [{self.u_min}, {self.u_max}], "
                f"v [{self.v_min}, {self.v_max}]"
            )

    @property
    def span_u(self) -> float:
        return self.u_max - self.u_min

    @property
    def span_v(self) -> float:
        return self.v_max - self.v_min

    def contains(self, u, v, slack: float = 0.0) -> bool:
        return bool(
            np.all(np.asarray(u) >= self.u_min - slack)
            and np.all(np.asarray(u) <= self.u_max + slack)
            and np.all(np.asarray(v) >= self.v_min - slack)
            and np.all(np.asarray(v) <= self.v_max + slack)
        )

    def contains_rect(self, other: "Rect", slack: float = 0.0) -> bool:
        return (
            other.u_min >= self.u_min - slack
            and other.u_max <= self.u_max + slack
            and other.v_min >= self.v_min - slack
            and other.v_max <= self.v_max + slack
        )

    def as_list(self) -> list[float]:
        return [self.u_min, self.u_max, self.v_min, self.v_max]


@dataclass(frozen=True)
class Grid2D:
    """Uniform tensor grid of ``nu x nv`` nodes over a rectangle."""

    rect: Rect
    nu: int
    nv: int

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    @cached_property
    def u_nodes(self) -> np.ndarray:
        return np.linspace(self.rect.u_min, self.rect.u_max, self.nu)

    @cached_property
    def v_nodes(self) -> np.ndarray:
        return np.linspace(self.rect.v_min, self.rect.v_max, self.nv)

    @property
    def hu(self) -> float:
        return self.rect.span_u / (self.nu - 1)

    @property
    def hv(self) -> float:
        return self.rect.span_v / (self.nv - 1)

    @cached_property
    def wu(self) -> np.ndarray:
        """Trapezoidal quadrature weights along u."""
        w = np.full(self.nu, self.hu)
        w[0] = w[-1] = self.hu / 2.0
        w.setflags(write=False)
        return w

    @cached_property
    def wv(self) -> np.ndarray:
        w = np.full(self.nv, self.hv)
        w[0] = w[-1] = self.hv / 2.0
        w.setflags(write=False)
        return w

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.u_nodes, self.v_nodes, indexing="ij")


@dataclass(frozen=True)
class SampledField2D:
    """Continuous field on a rectangle given by grid samples.

    ``values[i, j]`` is the field at ``(u_nodes[i], v_nodes[j])``;
    evaluation between nodes is bilinear, which preserves continuity
    without fabricating smoothness the data does not have.
    """

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.nu, self.grid.nv):
            raise ValueError(
                f"values shape {vals.shape} does not match grid "
                f"({self.grid.nu}, {self.grid.nv})"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @staticmethod
    def from_function(grid: Grid2D, fn: Callable) -> "SampledField2D":
        """Sample ``fn(U, V)`` (vectorized) on the grid nodes."""
        U, V = grid.meshgrid()
        return SampledField2D(grid, np.asarray(fn(U, V), dtype=float))

    @cached_property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def evaluate(self, u, v) -> np.ndarray:
        """Bilinear interpolation at points inside the rectangle."""
        g = self.grid
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        slack = 1e-12 * max(g.rect.span_u, g.rect.span_v)
        if not g.rect.contains(u, v, slack=slack):
            raise ValueError("evaluation point outside the field rectangle")
        def fractional_index(q, q_min, h, n):
            fq = (np.asarray(q) - q_min) / h
            snap = np.round(fq)  # exact node hits must not leak to neighbors
            fq = np.where(np.abs(fq - snap) < 1e-9, snap, fq)
            fq = np.clip(fq, 0.0, n - 1)
            iq = np.minimum(fq.astype(int), n - 2)
            return iq, fq - iq

        iu, su = fractional_index(u, g.rect.u_min, g.hu, g.nu)
        iv, sv = fractional_index(v, g.rect.v_min, g.hv, g.nv)
        z = self.values
        return (
            z[iu, iv] * (1 - su) * (1 - sv)
            + z[iu + 1, iv] * su * (1 - sv)
            + z[iu, iv + 1] * (1 - su) * sv
            + z[iu + 1, iv + 1] * su * sv
        )

    def transpose(self) -> "SampledField2D":
        """Swap the roles of u and v (used to reuse one-axis reductions)."""
        r = self.grid.rect
        grid = Grid2D(Rect(r.v_min, r.v_max, r.u_min, r.u_max), self.grid.nv, self.grid.nu)
        return SampledField2D(grid, self.values.T)


@dataclass(frozen=True)
class SampledFunction1D:
    """A continuous 1-D function given by samples on a uniform grid."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise ValueError("need matching 1-D sample arrays with >= 2 points")
        x = x.copy()
        y = y.copy()
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __call__(self, q) -> np.ndarray:
        return np.interp(np.asarray(q, dtype=float), self.x, self.y)

    @cached_property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.y)))
