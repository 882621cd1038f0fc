"""Run configuration shared by the CLI, the service and the test harness."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .geometry import Rect
from .smooth1d import Bump1D, mollifier

ENV_SEED = "CAUSAL2D_SEED"


@dataclass(frozen=True)
class Config:
    """Resolved run parameters; every report embeds one of these.

    ``mollifier_center``/``mollifier_radius`` of ``None`` mean "adapt to
    the working rectangle" (centered, radius a quarter of the span).
    """

    grid: int = 256
    probes_u: int = 5
    probes_v: int = 5
    tol: float = 1e-5  # single weakly-zero threshold for all verdicts
    oracle_pairs: int = 10_000
    seed: int = 42
    mollifier_center: float | None = None
    mollifier_radius: float | None = None

    def __post_init__(self):
        if self.grid < 2:
            raise ValueError("grid resolution must be >= 2")
        if self.tol <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.oracle_pairs < 1:
            raise ValueError("oracle pair count must be >= 1")
        if self.probes_u < 1 or self.probes_v < 1:
            raise ValueError("probe lattice must be at least 1x1")
        if self.mollifier_radius is not None and self.mollifier_radius <= 0.0:
            raise ValueError("mollifier radius must be positive")

    def axis_mollifier(self, lo: float, hi: float) -> Bump1D:
        """Mollifier for integrating one axis out, honoring overrides."""
        if self.mollifier_center is not None or self.mollifier_radius is not None:
            center = self.mollifier_center if self.mollifier_center is not None else 0.5 * (lo + hi)
            radius = self.mollifier_radius if self.mollifier_radius is not None else 0.25 * (hi - lo)
            if center - radius < lo or center + radius > hi:
                raise ValueError(
                    f"mollifier [{center - radius}, {center + radius}] overflows "
                    f"axis range [{lo}, {hi}]"
                )
            return mollifier(center, radius)
        return mollifier(0.5 * (lo + hi), 0.25 * (hi - lo))

    def shared_mollifier(self, rect: Rect) -> Bump1D:
        """One mollifier usable on both axes (additive separation needs it)."""
        lo = max(rect.u_min, rect.v_min)
        hi = min(rect.u_max, rect.v_max)
        if lo >= hi:
            raise ValueError(
                "the u and v ranges do not overlap; supply an explicit "
                "mollifier placement"
            )
        return self.axis_mollifier(lo, hi)

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "probes": [self.probes_u, self.probes_v],
            "tol": self.tol,
            "oracle_pairs": self.oracle_pairs,
            "seed": self.seed,
            "mollifier_center": self.mollifier_center,
            "mollifier_radius": self.mollifier_radius,
        }

    def with_overrides(self, **kwargs) -> "Config":
        return replace(self, **kwargs)


def default_seed() -> int:
    """Default seed, overridable through the environment."""
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_SEED} must be an integer, got {raw!r}") from exc
