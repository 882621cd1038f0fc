"""Seeded corpus of valid and corrupted plane maps.

Used to measure the decision procedure against the Monte-Carlo order
oracle: fifty maps assembled from matching-direction monotone pairs
(expression- and table-backed), and fifty corruptions that should be
refused — direction mismatches and additive cross-terms ``eps*u*v``
with ``eps`` in {0.1, 1}.  Everything is drawn from one seeded
generator, so the corpus is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .causal import MonotoneMap1D, PlaneMap, make_causal_iso, vector_bisect
from .geometry import Rect

CROSS_EPSILONS = (0.1, 1.0)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    plane_map: PlaneMap
    expect_causal: bool


def _random_increasing(rng: np.random.Generator, lo: float, hi: float,
                       min_slope: float, as_table: bool, label: str) -> MonotoneMap1D:
    """Strictly increasing map with derivative bounded below by min_slope."""
    slope = rng.uniform(min_slope + 0.1, min_slope + 1.4)
    cubic = rng.uniform(0.0, 1.2)
    wiggle = rng.uniform(0.0, 0.9) * (slope - min_slope)
    offset = rng.uniform(-1.0, 1.0)
    phase = rng.uniform(0.0, 2.0 * np.pi)

    def fn(x):
        x = np.asarray(x, dtype=float)
        return slope * x + cubic * x**3 + wiggle * np.sin(x + phase) + offset

    if as_table:
        knots = np.linspace(lo, hi, 33)
        return MonotoneMap1D.from_table(knots, fn(knots), label=label)
    return MonotoneMap1D.from_callable(fn, (lo, hi), label=label)


def _negated(m: MonotoneMap1D, label: str) -> MonotoneMap1D:
    def fn(x):
        return -np.asarray(m.forward(x))

    def inv(y):
        return m.inverse(-np.asarray(y))

    return MonotoneMap1D(m.domain, "decreasing", fn, inv, label)


def _mismatch_map(phi: MonotoneMap1D, psi_dec: MonotoneMap1D, rect: Rect) -> PlaneMap:
    """(phi(u), psi(v)) with phi increasing and psi decreasing."""
    lo_s, hi_s = phi.value_range
    lo_t, hi_t = psi_dec.value_range
    codomain = Rect(lo_s, hi_s, lo_t, hi_t)

    def forward(U, V):
        return phi.forward(U), psi_dec.forward(V)

    def inverse(S, T):
        return phi.inverse(S), psi_dec.inverse(T)

    return PlaneMap(rect, codomain, forward, inverse, "general")


def _cross_term_map(phi: MonotoneMap1D, psi: MonotoneMap1D, eps: float,
                    rect: Rect) -> PlaneMap:
    """(phi(u) + eps*u*v, psi(v)); invertible because phi' > eps*|v|."""
    u_lo, u_hi = rect.u_min, rect.u_max
    v_lo, v_hi = rect.v_min, rect.v_max

    def sigma(U, V):
        return np.asarray(phi.forward(U)) + eps * np.asarray(U) * np.asarray(V)

    # inscribed codomain box: sigma is increasing in u for every fixed v
    s_lo = max(sigma(u_lo, v_lo), sigma(u_lo, v_hi))
    s_hi = min(sigma(u_hi, v_lo), sigma(u_hi, v_hi))
    t_lo, t_hi = psi.value_range
    codomain = Rect(float(s_lo), float(s_hi), t_lo, t_hi)

    def forward(U, V):
        return sigma(U, V), psi.forward(V)

    def inverse(S, T):
        V = np.asarray(psi.inverse(T))
        U = vector_bisect(
            lambda mid: np.asarray(phi.forward(mid)) + eps * mid * V, u_lo, u_hi, S
        )
        return U, V

    return PlaneMap(rect, codomain, forward, inverse, "general")


def generate_corpus(
    n_valid: int = 50,
    n_corrupt: int = 50,
    seed: int = 42,
    rect: Rect = Rect(-1.0, 1.0, -1.0, 1.0),
) -> list[CorpusEntry]:
    rng = np.random.default_rng(seed)
    entries: list[CorpusEntry] = []

    for i in range(n_valid):
        as_table = i % 5 == 4
        decreasing = i % 2 == 1
        kind = "table" if as_table else "expr"
        if decreasing:
            # split-decreasing-swapped: phi reads v, psi reads u
            phi = _negated(
                _random_increasing(rng, rect.v_min, rect.v_max, 0.3, as_table, "phi"),
                "phi",
            )
            psi = _negated(
                _random_increasing(rng, rect.u_min, rect.u_max, 0.3, as_table, "psi"),
                "psi",
            )
            name = f"valid-{i:02d}-decreasing-{kind}"
        else:
            phi = _random_increasing(rng, rect.u_min, rect.u_max, 0.3, as_table, "phi")
            psi = _random_increasing(rng, rect.v_min, rect.v_max, 0.3, as_table, "psi")
            name = f"valid-{i:02d}-increasing-{kind}"
        entries.append(CorpusEntry(name, make_causal_iso(phi, psi), True))

    half = n_corrupt // 2
    for i in range(n_corrupt):
        if i < half:
            phi = _random_increasing(rng, rect.u_min, rect.u_max, 0.3, False, "phi")
            psi = _negated(
                _random_increasing(rng, rect.v_min, rect.v_max, 0.3, False, "psi"),
                "psi",
            )
            pm = _mismatch_map(phi, psi, rect)
            name = f"corrupt-{i:02d}-direction-flip"
        else:
            eps = CROSS_EPSILONS[i % len(CROSS_EPSILONS)]
            vmax = max(abs(rect.v_min), abs(rect.v_max))
            phi = _random_increasing(rng, rect.u_min, rect.u_max, 1.2 * eps * vmax,
                                     False, "phi")
            psi = _random_increasing(rng, rect.v_min, rect.v_max, 0.3, False, "psi")
            pm = _cross_term_map(phi, psi, eps, rect)
            name = f"corrupt-{i:02d}-cross-eps{eps}"
        entries.append(CorpusEntry(name, pm, False))

    return entries
