"""One-dimensional smooth building blocks for test functions.

Everything here is a function of one variable that is constant outside a
finite interval ``[lo, hi]`` (zero for bumps, a plateau for their
antiderivatives).  The algebra is closed under differentiation,
antidifferentiation and linear combination, which is exactly what the
two-dimensional test-function constructions need.

The basic profile is ``exp(-1 / (1 - s^2))`` on ``|s| < 1``.  Its n-th
derivative is ``P_n(s) / (1 - s^2)^(2n) * exp(-1 / (1 - s^2))`` with
``P_n`` given by the recurrence

    P_0 = 1,
    P_{n+1} = P_n' (1 - s^2)^2 + (4 n s (1 - s^2) - 2 s) P_n,

so all derivatives are available in closed form.  The profile integral
has no closed form; the normalization constant is computed once by a
high-resolution composite quadrature and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.interpolate import CubicSpline


@lru_cache(maxsize=None)
def gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def integrate_smooth(fn: Callable, lo: float, hi: float, n: int = 128) -> float:
    """n-point Gauss-Legendre integral of a smooth function on [lo, hi]."""
    x, w = gl_rule(n)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return float(half * (w @ np.asarray(fn(mid + half * x), dtype=float)))


@lru_cache(maxsize=1)
def bump_norm_constant() -> float:
    """Integral of exp(-1/(1-s^2)) over [-1, 1].

    Computed once by a 10^6-point composite trapezoid rule; there is no
    closed form.  Approximately 0.443993816168.
    """
    s = np.linspace(-1.0, 1.0, 1_000_001)
    return float(np.trapezoid(_profile(s, 0), s))


@lru_cache(maxsize=32)
def _bump_poly(order: int) -> tuple[float, ...]:
    p = np.array([1.0])
    w = np.array([1.0, 0.0, -1.0])  # 1 - s^2, low-to-high coefficients
    for k in range(order):
        term1 = npoly.polymul(npoly.polyder(p), npoly.polymul(w, w))
        term2 = npoly.polymul(npoly.polymul(np.array([0.0, 4.0 * k]), w), p)
        term3 = npoly.polymul(np.array([0.0, -2.0]), p)
        p = npoly.polyadd(npoly.polyadd(term1, term2), term3)
    return tuple(p)


def _profile(s: np.ndarray, order: int) -> np.ndarray:
    """order-th derivative of exp(-1/(1-s^2)) at s (zero outside |s|<1)."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    if not np.any(inside):
        return out
    si = s[inside]
    w = 1.0 - si * si
    core = np.exp(-1.0 / w)
    if order == 0:
        out[inside] = core
    else:
        poly = npoly.polyval(si, np.asarray(_bump_poly(order)))
        out[inside] = poly * core / w ** (2 * order)
    return out


@dataclass(frozen=True)
class Bump1D:
    """Scaled bump profile (or one of its derivatives) with compact support.

    Value at x:  amplitude * d^order/ds^order [exp(-1/(1-s^2))] / radius^order
    with s = (x - center) / radius; identically zero for |x - center| >= radius.
    """

    center: float
    radius: float
    amplitude: float = 1.0
    order: int = 0

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("bump radius must be positive")
        if self.order < 0:
            raise ValueError("derivative order must be >= 0")

    # constant-tail protocol -------------------------------------------------
    @property
    def lo(self) -> float:
        return self.center - self.radius

    @property
    def hi(self) -> float:
        return self.center + self.radius

    @property
    def left_tail(self) -> float:
        return 0.0

    @property
    def right_tail(self) -> float:
        return 0.0

    def value(self, x) -> np.ndarray:
        s = (np.asarray(x, dtype=float) - self.center) / self.radius
        return self.amplitude * _profile(s, self.order) / self.radius ** self.order

    def __call__(self, x) -> np.ndarray:
        return self.value(x)

    def derivative(self) -> "Bump1D":
        return Bump1D(self.center, self.radius, self.amplitude, self.order + 1)

    def antiderivative(self):
        """Cumulative integral from the left; exact for order >= 1."""
        if self.order >= 1:
            return Bump1D(self.center, self.radius, self.amplitude, self.order - 1)
        return _cumulative_bump(self)

    @property
    def total_integral(self) -> float:
        if self.order >= 1:
            return 0.0
        return self.amplitude * self.radius * bump_norm_constant()


def mollifier(center: float, radius: float) -> Bump1D:
    """Unit-mass bump: amplitude fixed so the integral over R equals 1."""
    if radius <= 0.0:
        raise ValueError("mollifier radius must be positive")
    return Bump1D(center, radius, 1.0 / (radius * bump_norm_constant()))


@dataclass(frozen=True, eq=False)
class SplineFn:
    """Cubic-spline-backed smooth function with constant tails."""

    spline: CubicSpline
    lo: float
    hi: float
    left_tail: float
    right_tail: float
    exact_derivative: object = None  # Smooth1D known to be the exact derivative

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inner = self.spline(np.clip(x, self.lo, self.hi))
        return np.where(x < self.lo, self.left_tail, np.where(x > self.hi, self.right_tail, inner))

    def __call__(self, x) -> np.ndarray:
        return self.value(x)

    def derivative(self):
        if self.exact_derivative is not None:
            return self.exact_derivative
        return SplineFn(self.spline.derivative(), self.lo, self.hi, 0.0, 0.0)

    def antiderivative(self):
        if self.left_tail != 0.0 or self.right_tail != 0.0:
            raise ValueError("antiderivative of a function with nonzero tails is unbounded")
        anti = self.spline.antiderivative()
        return SplineFn(anti, self.lo, self.hi, 0.0, float(anti(self.hi)), exact_derivative=self)

    @property
    def total_integral(self) -> float:
        if self.left_tail != 0.0 or self.right_tail != 0.0:
            raise ValueError("total integral undefined for nonzero tails")
        anti = self.spline.antiderivative()
        return float(anti(self.hi))


_CUMULATIVE_CELLS = 2048


@lru_cache(maxsize=256)
def _cumulative_bump(bump: Bump1D) -> SplineFn:
    """Spline representation of the bump's cumulative integral.

    Per-cell Gauss-Legendre integrals are accumulated over a dense
    subdivision of the support, then interpolated with a clamped cubic
    spline (the endpoint slopes are the bump values, zero).
    """
    edges = np.linspace(bump.lo, bump.hi, _CUMULATIVE_CELLS + 1)
    xg, wg = gl_rule(8)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halves = 0.5 * np.diff(edges)
    nodes = mids[:, None] + halves[:, None] * xg[None, :]
    cell_integrals = halves * (bump.value(nodes) @ wg)
    cumulative = np.concatenate(([0.0], np.cumsum(cell_integrals)))
    spline = CubicSpline(edges, cumulative, bc_type=((1, 0.0), (1, 0.0)))
    return SplineFn(
        spline, bump.lo, bump.hi, 0.0, float(cumulative[-1]), exact_derivative=bump
    )
