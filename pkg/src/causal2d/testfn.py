"""Analytic, compactly supported 2-D test functions.

A :class:`TestFunction2D` is a finite sum of tensor products
``sum_i c_i a_i(u) b_i(v)`` of one-dimensional smooth factors
(:mod:`causal2d.smooth1d`).  The representation is closed under the
partial derivatives and the primitive constructions below, so value,
du, dv and the mixed derivative are all evaluated from closed-form
factor derivatives; no data is ever differentiated numerically.

Besides plain tensor bumps this module builds the two auxiliary pairs
``(psi, eta)`` used by the decomposition routines:

* ``build_psi_eta_1d``: ``psi = phi - phi0(u) * I(v)`` where ``I(v)``
  is the u-integral of ``phi``, together with the u-antiderivative
  combination ``eta`` satisfying ``d(eta)/du = psi``.  ``eta`` is again
  compactly supported because the mollifier has unit mass.
* ``build_psi_eta_2d``: the four-term analogue for the mixed second
  derivative, with ``d2(eta)/dudv = psi``; the four tail cancellations
  that make ``eta`` compactly supported hold numerically to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import MarginViolationError
from .geometry import Rect
from .smooth1d import Bump1D, gl_rule, integrate_smooth, mollifier

__all__ = [
    "Bump1D",
    "TestFunction2D",
    "mollifier",
    "tensor_bump",
    "phi1",
    "build_psi_eta_1d",
    "build_psi_eta_2d",
]


@dataclass(frozen=True, eq=False)
class TestFunction2D:
    """Sum of tensor products of 1-D smooth factors, compactly supported.

    ``support`` is a rectangle outside which the value vanishes (for the
    eta constructions this encodes the tail-cancellation rectangle, not
    the per-term supports, which individually extend to infinity).
    """

    terms: tuple  # of (coefficient, Smooth1D in u, Smooth1D in v)
    support: Rect

    def value(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        acc = 0.0
        for c, a, b in self.terms:
            acc = acc + c * a.value(u) * b.value(v)
        return acc

    def du(self, u, v) -> np.ndarray:
        return self.derivative("u").value(u, v)

    def dv(self, u, v) -> np.ndarray:
        return self.derivative("v").value(u, v)

    def duv(self, u, v) -> np.ndarray:
        return self.derivative("u").derivative("v").value(u, v)

    def derivative(self, axis: str) -> "TestFunction2D":
        if axis == "u":
            return self._du
        if axis == "v":
            return self._dv
        raise ValueError(f"axis must be 'u' or 'v', got {axis!r}")

    @cached_property
    def _du(self) -> "TestFunction2D":
        return TestFunction2D(
            tuple((c, a.derivative(), b) for c, a, b in self.terms), self.support
        )

    @cached_property
    def _dv(self) -> "TestFunction2D":
        return TestFunction2D(
            tuple((c, a, b.derivative()) for c, a, b in self.terms), self.support
        )

    @property
    def integral(self) -> float:
        """Integral over the plane (product of factor totals, summed)."""
        return float(sum(c * a.total_integral * b.total_integral for c, a, b in self.terms))

    @cached_property
    def l1_mass(self) -> float:
        """L1 norm, by Gauss-Legendre quadrature over the support box."""
        s = self.support
        if len(self.terms) == 1:
            c, a, b = self.terms[0]
            ma = integrate_smooth(lambda x: np.abs(a.value(x)), s.u_min, s.u_max, 256)
            mb = integrate_smooth(lambda x: np.abs(b.value(x)), s.v_min, s.v_max, 256)
            return abs(c) * ma * mb
        xg, wg = gl_rule(128)
        um = 0.5 * (s.u_min + s.u_max) + 0.5 * s.span_u * xg
        vm = 0.5 * (s.v_min + s.v_max) + 0.5 * s.span_v * xg
        vals = np.abs(self.value(um[:, None], vm[None, :]))
        return float(0.25 * s.span_u * s.span_v * (wg @ vals @ wg))

    def __add__(self, other: "TestFunction2D") -> "TestFunction2D":
        return TestFunction2D(self.terms + other.terms, _union(self.support, other.support))

    def __neg__(self) -> "TestFunction2D":
        return self.__rmul__(-1.0)

    def __sub__(self, other: "TestFunction2D") -> "TestFunction2D":
        return self + (-other)

    def __rmul__(self, scalar: float) -> "TestFunction2D":
        return TestFunction2D(
            tuple((scalar * c, a, b) for c, a, b in self.terms), self.support
        )

    __mul__ = __rmul__


def _union(r1: Rect, r2: Rect) -> Rect:
    return Rect(
        min(r1.u_min, r2.u_min),
        max(r1.u_max, r2.u_max),
        min(r1.v_min, r2.v_min),
        max(r1.v_max, r2.v_max),
    )


def tensor_bump(bu: Bump1D, bv: Bump1D, coeff: float = 1.0) -> TestFunction2D:
    """Tensor product ``coeff * bu(u) * bv(v)``."""
    return TestFunction2D(((coeff, bu, bv),), Rect(bu.lo, bu.hi, bv.lo, bv.hi))


def phi1(phi0: Bump1D) -> TestFunction2D:
    """The negated tensor square ``-phi0(u) phi0(v)`` of a mollifier.

    Its partial integrals reproduce ``-phi0`` on either axis, which is
    what makes it the right gauge term in the additive separation.
    """
    return tensor_bump(phi0, phi0, -1.0)


def _check_within(support: Rect, within: Rect | None, what: str) -> None:
    if within is not None and not within.contains_rect(support):
        raise MarginViolationError(
            f"{what} support {support.as_list()} overflows the working "
            f"rectangle {within.as_list()}"
        )


def build_psi_eta_1d(
    phi: TestFunction2D, phi0: Bump1D, within: Rect | None = None
) -> tuple[TestFunction2D, TestFunction2D]:
    """Auxiliary pair for killing the u-dependence of a pairing.

    psi(u, v) = phi(u, v) - phi0(u) * integral_s phi(s, v) ds
    eta(u, v) = int_{-inf}^{u} phi(s, v) ds
               - (integral_s phi(s, v) ds) * int_{-inf}^{u} phi0(s) ds

    d(eta)/du = psi holds by construction, and integral_s psi(s, v) ds = 0
    for every v because the mollifier has unit mass.  Both are compactly
    supported; the support box is returned on the objects.
    """
    _check_within(phi.support, within, "phi")
    _check_within(Rect(phi0.lo, phi0.hi, phi.support.v_min, phi.support.v_max), within, "phi0")
    box = Rect(
        min(phi.support.u_min, phi0.lo),
        max(phi.support.u_max, phi0.hi),
        phi.support.v_min,
        phi.support.v_max,
    )
    cap_phi0 = phi0.antiderivative()
    psi_terms = list(phi.terms)
    eta_terms = []
    for c, a, b in phi.terms:
        total_a = a.total_integral
        psi_terms.append((-c * total_a, phi0, b))
        eta_terms.append((c, a.antiderivative(), b))
        eta_terms.append((-c * total_a, cap_phi0, b))
    return TestFunction2D(tuple(psi_terms), box), TestFunction2D(tuple(eta_terms), box)


def build_psi_eta_2d(
    phi: TestFunction2D, phi0: Bump1D, within: Rect | None = None
) -> tuple[TestFunction2D, TestFunction2D]:
    """Four-term auxiliary pair for the mixed second derivative.

    psi subtracts from phi both mollified marginals and adds back the
    total mass against ``phi0 x phi0``; eta is the corresponding
    combination of antiderivatives, with ``d2(eta)/dudv = psi``.  For
    large u the first/second and third/fourth terms of eta cancel, for
    large v the first/third and second/fourth do, so eta is compactly
    supported inside the returned box.
    """
    _check_within(phi.support, within, "phi")
    if within is not None and not (
        within.u_min <= phi0.lo and phi0.hi <= within.u_max
        and within.v_min <= phi0.lo and phi0.hi <= within.v_max
    ):
        raise MarginViolationError(
            f"phi0 support [{phi0.lo}, {phi0.hi}] overflows the working "
            f"rectangle {within.as_list()}"
        )
    box = Rect(
        min(phi.support.u_min, phi0.lo),
        max(phi.support.u_max, phi0.hi),
        min(phi.support.v_min, phi0.lo),
        max(phi.support.v_max, phi0.hi),
    )
    cap_phi0 = phi0.antiderivative()
    total_mass = phi.integral

    psi_terms = list(phi.terms)
    eta_terms = []
    for c, a, b in phi.terms:
        ia, jb = a.total_integral, b.total_integral
        cap_a, cap_b = a.antiderivative(), b.antiderivative()
        psi_terms.append((-c * ia, phi0, b))
        psi_terms.append((-c * jb, a, phi0))
        eta_terms.append((c, cap_a, cap_b))
        eta_terms.append((-c * ia, cap_phi0, cap_b))
        eta_terms.append((-c * jb, cap_a, cap_phi0))
    psi_terms.append((total_mass, phi0, phi0))
    eta_terms.append((total_mass, cap_phi0, cap_phi0))
    return TestFunction2D(tuple(psi_terms), box), TestFunction2D(tuple(eta_terms), box)
