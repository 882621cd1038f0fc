"""Causal isomorphisms of the plane: construction, classification, decision.

A plane map ``(sigma, tau) = F(u, v)`` between null-coordinate
rectangles is a causal isomorphism exactly when it has one of two split
shapes built from matching-direction monotone 1-D maps:

    (phi(u), psi(v))   with phi, psi increasing, or
    (phi(v), psi(u))   with phi, psi decreasing.

``decide_causal_isomorphism`` runs four independent probes of this:

1. structural classification (are sigma and tau each weakly independent
   of one variable, and strictly monotone in the other?),
2. the monotonicity condition tag,
3. invariance of the d'Alembert solution family ``A + B`` under
   pullback and pushforward (mixed weak-derivative residuals),
4. a seeded Monte-Carlo oracle checking order preservation directly.

The classifier plus monotonicity decides; residuals and the oracle are
recorded as corroborating evidence, since finitely many probes can
refute but never certify a universally quantified statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import Config
from .decomp import reduce_to_1d
from .errors import (
    CodomainError,
    InvalidOrientationPair,
    NonMonotone,
    NotBijective,
    NotHomeomorphism,
)
from .geometry import Grid2D, Rect, SampledField2D, SampledFunction1D, causal_leq_tx
from .pairing import ProbeSet, residual, weak_du, weak_dv, weak_mixed
from .smooth1d import Bump1D

STRICTNESS = 1e-12  # minimum adjacent-sample growth for "strictly monotone"


def vector_bisect(fn: Callable, lo, hi, target, iters: int = 60) -> np.ndarray:
    """Elementwise bisection solve of ``fn(x) = target`` on [lo, hi].

    ``fn`` must be vectorized and elementwise strictly increasing.
    """
    target = np.asarray(target, dtype=float)
    a = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    b = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    for _ in range(iters):
        mid = 0.5 * (a + b)
        go_right = np.asarray(fn(mid)) < target
        a = np.where(go_right, mid, a)
        b = np.where(go_right, b, mid)
    return 0.5 * (a + b)


def _direction_of(diffs: np.ndarray, what: str) -> str:
    if np.all(diffs >= STRICTNESS):
        return "increasing"
    if np.all(diffs <= -STRICTNESS):
        return "decreasing"
    raise NotHomeomorphism(f"{what} is not strictly monotone")


@dataclass(frozen=True, eq=False)
class MonotoneMap1D:
    """Strictly monotone continuous map on an interval, with inverse."""

    domain: tuple[float, float]
    direction: str
    forward: Callable
    inverse: Callable
    label: str = ""

    def __call__(self, x):
        return self.forward(x)

    @property
    def value_range(self) -> tuple[float, float]:
        ya = float(np.asarray(self.forward(self.domain[0])))
        yb = float(np.asarray(self.forward(self.domain[1])))
        return (ya, yb) if ya < yb else (yb, ya)

    @staticmethod
    def from_callable(
        fn: Callable, domain: tuple[float, float], samples: int = 4097, label: str = ""
    ) -> "MonotoneMap1D":
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise ValueError("domain interval must be increasing")
        xs = np.linspace(lo, hi, samples)
        ys = np.asarray(fn(xs), dtype=float)
        if not np.all(np.isfinite(ys)):
            raise NotHomeomorphism(f"map {label or 'fn'} is not finite on its domain")
        direction = _direction_of(np.diff(ys), label or "map")
        increasing = direction == "increasing"
        # seed table for the inverse (np.interp needs increasing knots)
        ys_t, xs_t = (ys, xs) if increasing else (ys[::-1], xs[::-1])
        h = (hi - lo) / (samples - 1)
        y_span = float(np.abs(ys[-1] - ys[0]))

        def inverse(y):
            """Table seed plus secant refinement; bisection as a safety net."""
            y = np.asarray(y, dtype=float)
            x_prev = np.clip(np.interp(y, ys_t, xs_t) - 0.5 * h, lo, hi)
            x_cur = np.clip(x_prev + h, lo, hi)
            f_prev = np.asarray(fn(x_prev)) - y
            f_cur = np.asarray(fn(x_cur)) - y
            for _ in range(12):
                denom = f_cur - f_prev
                ok = denom != 0.0
                step = np.where(ok, f_cur * (x_cur - x_prev) / np.where(ok, denom, 1.0), 0.0)
                x_prev, f_prev = x_cur, f_cur
                x_cur = np.clip(x_cur - step, lo, hi)
                f_cur = np.asarray(fn(x_cur)) - y
            bad = np.abs(f_cur) > 1e-12 * y_span
            if np.any(bad):
                y_bad = np.where(bad, y, ys_t[0])
                if increasing:
                    rescue = vector_bisect(fn, lo, hi, y_bad)
                else:
                    rescue = vector_bisect(
                        lambda x: -np.asarray(fn(x)), lo, hi, -y_bad
                    )
                x_cur = np.where(bad, rescue, x_cur)
            return x_cur

        return MonotoneMap1D((lo, hi), direction, fn, inverse, label)

    @staticmethod
    def from_table(xs, ys, label: str = "") -> "MonotoneMap1D":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("table needs matching 1-D arrays with >= 2 rows")
        if not np.all(np.diff(xs) > 0.0):
            raise ValueError("table abscissae must be strictly increasing")
        direction = _direction_of(np.diff(ys), label or "table")

        def forward(x):
            return np.interp(np.asarray(x, dtype=float), xs, ys)

        if direction == "increasing":
            yi, xi = ys, xs
        else:
            yi, xi = ys[::-1], xs[::-1]

        def inverse(y):
            return np.interp(np.asarray(y, dtype=float), yi, xi)

        return MonotoneMap1D((float(xs[0]), float(xs[-1])), direction, forward, inverse, label)


@dataclass(frozen=True, eq=False)
class PlaneMap:
    """Homeomorphism ``(u, v) -> (sigma, tau)`` between rectangles."""

    domain: Rect
    codomain: Rect
    forward: Callable  # (U, V) -> (S, T), vectorized
    inverse: Callable  # (S, T) -> (U, V), vectorized
    kind: str  # split-increasing | split-decreasing-swapped | general

    def roundtrip_error(self, n: int = 20) -> float:
        """Worst identity defect of inverse-then-forward and back, on an
        n x n sample, relative to the domain span."""
        span = max(self.domain.span_u, self.domain.span_v,
                   self.codomain.span_u, self.codomain.span_v)
        du = np.linspace(self.domain.u_min, self.domain.u_max, n)
        dv = np.linspace(self.domain.v_min, self.domain.v_max, n)
        U, V = np.meshgrid(du, dv, indexing="ij")
        S, T = self.forward(U, V)
        Ub, Vb = self.inverse(S, T)
        worst = max(np.max(np.abs(Ub - U)), np.max(np.abs(Vb - V)))
        cu = np.linspace(self.codomain.u_min, self.codomain.u_max, n)
        cv = np.linspace(self.codomain.v_min, self.codomain.v_max, n)
        S, T = np.meshgrid(cu, cv, indexing="ij")
        U, V = self.inverse(S, T)
        Sb, Tb = self.forward(U, V)
        worst = max(worst, np.max(np.abs(Sb - S)), np.max(np.abs(Tb - T)))
        return float(worst / span)


def make_causal_iso(phi: MonotoneMap1D, psi: MonotoneMap1D) -> PlaneMap:
    """Assemble the split-form map generated by two 1-D homeomorphisms.

    Both increasing gives ``(phi(u), psi(v))``; both decreasing gives the
    swapped ``(phi(v), psi(u))``.  Mixed directions cannot preserve the
    order and are rejected.
    """
    if phi.direction != psi.direction:
        raise InvalidOrientationPair(
            f"phi is {phi.direction} but psi is {psi.direction}; "
            "the two maps must share a direction"
        )
    if phi.direction == "increasing":
        domain = Rect(*phi.domain, *psi.domain)
        codomain = Rect(*phi.value_range, *psi.value_range)

        def forward(U, V):
            return phi.forward(U), psi.forward(V)

        def inverse(S, T):
            return phi.inverse(S), psi.inverse(T)

        return PlaneMap(domain, codomain, forward, inverse, "split-increasing")

    # both decreasing: sigma reads v, tau reads u
    domain = Rect(*psi.domain, *phi.domain)
    codomain = Rect(*phi.value_range, *psi.value_range)

    def forward(U, V):
        return phi.forward(V), psi.forward(U)

    def inverse(S, T):
        return psi.inverse(T), phi.inverse(S)

    return PlaneMap(domain, codomain, forward, inverse, "split-decreasing-swapped")


@dataclass(frozen=True)
class Classification:
    """Structural verdict on the split shape of a plane map."""

    tag: str  # split-increasing | split-decreasing-swapped | not-split | non-monotone
    condition: int | None  # 1 or 2 for the two valid shapes
    residuals: dict  # weak-derivative residuals of sigma and tau
    phi_samples: SampledFunction1D | None = None
    psi_samples: SampledFunction1D | None = None


def _sample_forward(F: PlaneMap, grid: Grid2D) -> tuple[SampledField2D, SampledField2D]:
    U, V = grid.meshgrid()
    S, T = F.forward(U, V)
    return (
        SampledField2D(grid, np.broadcast_to(S, U.shape)),
        SampledField2D(grid, np.broadcast_to(T, U.shape)),
    )


def _monotone_direction(samples: SampledFunction1D) -> str | None:
    diffs = np.diff(samples.y)
    if np.all(diffs >= STRICTNESS):
        return "increasing"
    if np.all(diffs <= -STRICTNESS):
        return "decreasing"
    return None


def classify_split_form(
    F: PlaneMap,
    probes: ProbeSet,
    grid: Grid2D,
    moll_u: Bump1D,
    moll_v: Bump1D,
    tol: float = 1e-5,
) -> Classification:
    """Decide which (if either) split shape the map has.

    ``sigma`` and ``tau`` are sampled on the grid and their weak
    derivatives probed; a coordinate weakly constant in both variables
    means the map cannot be a bijection and raises ``NotBijective``.
    For a split candidate the 1-D maps are extracted by mollified
    reduction and their strict monotonicity directions checked.
    """
    sigma_f, tau_f = _sample_forward(F, grid)
    res = {
        "sigma_u": residual(weak_du(sigma_f), probes),
        "sigma_v": residual(weak_dv(sigma_f), probes),
        "tau_u": residual(weak_du(tau_f), probes),
        "tau_v": residual(weak_dv(tau_f), probes),
    }
    sigma_dep_u, sigma_dep_v = res["sigma_u"] >= tol, res["sigma_v"] >= tol
    tau_dep_u, tau_dep_v = res["tau_u"] >= tol, res["tau_v"] >= tol
    if not (sigma_dep_u or sigma_dep_v):
        raise NotBijective("sigma is weakly constant in both variables")
    if not (tau_dep_u or tau_dep_v):
        raise NotBijective("tau is weakly constant in both variables")

    if not sigma_dep_v and not tau_dep_u:
        # candidate (phi(u), psi(v)); valid only if both increasing
        phi_s = reduce_to_1d(sigma_f, moll_v, axis="v").samples
        psi_s = reduce_to_1d(tau_f, moll_u, axis="u").samples
        d_phi, d_psi = _monotone_direction(phi_s), _monotone_direction(psi_s)
        if d_phi == "increasing" and d_psi == "increasing":
            return Classification("split-increasing", 1, res, phi_s, psi_s)
        return Classification("non-monotone", None, res, phi_s, psi_s)

    if not sigma_dep_u and not tau_dep_v:
        # candidate (phi(v), psi(u)); valid only if both decreasing
        phi_s = reduce_to_1d(sigma_f, moll_u, axis="u").samples
        psi_s = reduce_to_1d(tau_f, moll_v, axis="v").samples
        d_phi, d_psi = _monotone_direction(phi_s), _monotone_direction(psi_s)
        if d_phi == "decreasing" and d_psi == "decreasing":
            return Classification("split-decreasing-swapped", 2, res, phi_s, psi_s)
        return Classification("non-monotone", None, res, phi_s, psi_s)

    return Classification("not-split", None, res)


def monotonicity_check(classification: Classification) -> int:
    """Condition tag of a split-form classification (1 or 2).

    Raises :class:`NonMonotone` when the shape is split but the
    directions are wrong or mixed.
    """
    if classification.condition is not None:
        return classification.condition
    raise NonMonotone(
        f"map classified as {classification.tag}; no valid direction pair"
    )


def _normalizer(lo: float, hi: float) -> Callable:
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return lambda s: (s - mid) / half


def solution_family(rect: Rect) -> list[tuple[str, Callable]]:
    """Separable solutions ``A + B`` used by the invariance test.

    The canonical four are the raw coordinates and their squares; the
    rest draw A and B from a fixed basis (polynomials up to degree 3,
    sine, exponential) of the rectangle-normalized coordinates.
    """
    nu = _normalizer(rect.u_min, rect.u_max)
    nv = _normalizer(rect.v_min, rect.v_max)
    family: list[tuple[str, Callable]] = [
        ("sigma", lambda s, t: s + 0.0 * t),
        ("tau", lambda s, t: t + 0.0 * s),
        ("sigma^2", lambda s, t: s * s + 0.0 * t),
        ("tau^2", lambda s, t: t * t + 0.0 * s),
        ("linear", lambda s, t: nu(s) + nv(t)),
        ("quadratic", lambda s, t: nu(s) ** 2 + nv(t) ** 2),
        ("cubic", lambda s, t: nu(s) ** 3 + nv(t) ** 3),
        ("sine", lambda s, t: np.sin(2.0 * nu(s)) + np.sin(2.0 * nv(t))),
        ("exponential", lambda s, t: np.exp(nu(s)) + np.exp(nv(t))),
    ]
    return family


def wave_invariance_test(
    F: PlaneMap,
    probes_domain: ProbeSet,
    probes_codomain: ProbeSet,
    grid_n: int,
    family_forward: list | None = None,
    family_backward: list | None = None,
) -> tuple[float, float]:
    """Worst mixed weak-derivative residual of transported solutions.

    Forward: solutions in the image coordinates are pulled back through
    ``F`` and probed on the domain grid.  Backward: solutions in the
    domain coordinates are pushed through ``F^{-1}`` and probed on the
    codomain grid.  A causal isomorphism keeps both residuals at the
    quadrature floor; a map that mixes the null directions shows an
    order-one residual.

    Custom solution families (lists of ``(name, callable)``) may be
    supplied; the default is :func:`solution_family` on each rectangle.
    """
    dom_grid = Grid2D(F.domain, grid_n, grid_n)
    cod_grid = Grid2D(F.codomain, grid_n, grid_n)
    fam_fwd = family_forward if family_forward is not None else solution_family(F.codomain)
    fam_bwd = family_backward if family_backward is not None else solution_family(F.domain)

    U, V = dom_grid.meshgrid()
    S, T = F.forward(U, V)
    forward_worst = 0.0
    for _, theta in fam_fwd:
        field = SampledField2D(dom_grid, theta(S, T))
        forward_worst = max(forward_worst, residual(weak_mixed(field), probes_domain))

    # axis-broadcast arguments: split-map inverses then work on n values
    # per axis instead of n^2 grid points
    Ub, Vb = F.inverse(cod_grid.u_nodes[:, None], cod_grid.v_nodes[None, :])
    shape = (cod_grid.nu, cod_grid.nv)
    Ub = np.broadcast_to(np.asarray(Ub), shape)
    Vb = np.broadcast_to(np.asarray(Vb), shape)
    slack = 1e-9 * max(F.domain.span_u, F.domain.span_v)
    if not F.domain.contains(Ub, Vb, slack=slack):
        raise CodomainError(
            "inverse images of the codomain grid leave the domain; "
            "the declared codomain exceeds the image of the map"
        )
    backward_worst = 0.0
    for _, theta in fam_bwd:
        field = SampledField2D(cod_grid, theta(Ub, Vb))
        backward_worst = max(backward_worst, residual(weak_mixed(field), probes_codomain))
    return forward_worst, backward_worst


def order_oracle(F: PlaneMap, n_pairs: int, seed: int) -> int:
    """Count order-preservation failures on seeded random event pairs.

    Draws pairs uniformly in the domain rectangle (null coordinates) and
    compares the causal order before and after applying the map, in both
    argument orders.  Deterministic given the seed.
    """
    rng = np.random.default_rng(seed)
    r = F.domain
    u1 = rng.uniform(r.u_min, r.u_max, n_pairs)
    v1 = rng.uniform(r.v_min, r.v_max, n_pairs)
    u2 = rng.uniform(r.u_min, r.u_max, n_pairs)
    v2 = rng.uniform(r.v_min, r.v_max, n_pairs)
    s1, t1 = F.forward(u1, v1)
    s2, t2 = F.forward(u2, v2)

    def leq(ua, va, ub, vb):
        return causal_leq_tx((ua - va) / 2.0, (ua + va) / 2.0,
                             (ub - vb) / 2.0, (ub + vb) / 2.0)

    fwd = leq(u1, v1, u2, v2) != leq(s1, t1, s2, t2)
    bwd = leq(u2, v2, u1, v1) != leq(s2, t2, s1, t1)
    return int(np.count_nonzero(fwd | bwd))


@dataclass(frozen=True)
class CausalVerdict:
    """Full decision record for one plane map."""

    is_causal_iso: bool
    classification: str
    condition: int | None
    invariance_residual_forward: float
    invariance_residual_backward: float
    oracle_violations: int
    roundtrip_error: float
    details: dict

    def to_dict(self) -> dict:
        return {
            "is_causal_iso": self.is_causal_iso,
            "classification": self.classification,
            "condition": self.condition,
            "invariance_residual_forward": self.invariance_residual_forward,
            "invariance_residual_backward": self.invariance_residual_backward,
            "oracle_violations": self.oracle_violations,
            "roundtrip_error": self.roundtrip_error,
            "details": self.details,
        }


def decide_causal_isomorphism(F: PlaneMap, config: Config | None = None) -> CausalVerdict:
    """Run all four sub-tests and assemble the verdict.

    The verdict is true only when the structural classification lands on
    one of the two split shapes, both invariance residuals are below the
    weakly-zero tolerance, and the order oracle finds no violations.
    Sub-test failures are folded into the details record; non-causal
    input produces a false verdict, not an exception.
    """
    cfg = config or Config()
    grid = Grid2D(F.domain, cfg.grid, cfg.grid)
    probes_dom = ProbeSet.lattice(F.domain, (cfg.probes_u, cfg.probes_v), cfg.seed)
    probes_cod = ProbeSet.lattice(F.codomain, (cfg.probes_u, cfg.probes_v), cfg.seed)
    moll_u = cfg.axis_mollifier(F.domain.u_min, F.domain.u_max)
    moll_v = cfg.axis_mollifier(F.domain.v_min, F.domain.v_max)
    details: dict = {}

    roundtrip = F.roundtrip_error()
    details["roundtrip_error"] = roundtrip

    try:
        cls = classify_split_form(F, probes_dom, grid, moll_u, moll_v, cfg.tol)
        tag, condition = cls.tag, cls.condition
        details["classification_residuals"] = {k: float(x) for k, x in cls.residuals.items()}
    except NotBijective as exc:
        tag, condition = "not-split", None
        details["classification_error"] = f"NotBijective: {exc}"

    try:
        res_fwd, res_bwd = wave_invariance_test(
            F, probes_dom, probes_cod, cfg.grid
        )
    except CodomainError as exc:
        res_fwd, res_bwd = float("inf"), float("inf")
        details["invariance_error"] = f"CodomainError: {exc}"

    violations = order_oracle(F, cfg.oracle_pairs, cfg.seed)

    ok = (
        tag in ("split-increasing", "split-decreasing-swapped")
        and res_fwd < cfg.tol
        and res_bwd < cfg.tol
        and violations == 0
    )
    return CausalVerdict(
        is_causal_iso=ok,
        classification=tag,
        condition=condition,
        invariance_residual_forward=float(res_fwd),
        invariance_residual_backward=float(res_bwd),
        oracle_violations=violations,
        roundtrip_error=roundtrip,
        details=details,
    )
