"""Weak-derivative calculus and causal-isomorphism decisions on the
two-dimensional null-coordinate plane.

Public surface, by area:

* geometry: events, the causal order, rectangles, grids, sampled fields
* testfn / smooth1d: analytic compactly supported test functions
* pairing: quadrature pairings, weak derivatives, probe sets, residuals
* decomp: mollified reductions, primitive split, additive separation
* causal: monotone 1-D maps, split-form plane maps, the decision procedure
* expr: the small expression language used by file formats and the CLI
"""

from .causal import (
    CausalVerdict,
    MonotoneMap1D,
    PlaneMap,
    classify_split_form,
    decide_causal_isomorphism,
    make_causal_iso,
    monotonicity_check,
    order_oracle,
    wave_invariance_test,
)
from .config import Config
from .decomp import (
    PrimitiveSplit,
    Reduction1D,
    Separation,
    additively_separate,
    reduce_to_1d,
    split_primitive,
)
from .geometry import (
    Event,
    Grid2D,
    Rect,
    SampledField2D,
    SampledFunction1D,
    causal_leq,
    from_null,
    to_null,
)
from .pairing import (
    ProbeSet,
    WeakFunctional,
    classical_weak_agreement,
    pair,
    residual,
    weak_du,
    weak_dv,
    weak_mixed,
)
from .smooth1d import Bump1D, bump_norm_constant
from .testfn import (
    TestFunction2D,
    build_psi_eta_1d,
    build_psi_eta_2d,
    mollifier,
    phi1,
    tensor_bump,
)

__version__ = "0.1.0"

__all__ = [
    "Bump1D",
    "CausalVerdict",
    "Config",
    "Event",
    "Grid2D",
    "MonotoneMap1D",
    "PlaneMap",
    "PrimitiveSplit",
    "ProbeSet",
    "Rect",
    "Reduction1D",
    "SampledField2D",
    "SampledFunction1D",
    "Separation",
    "TestFunction2D",
    "WeakFunctional",
    "additively_separate",
    "build_psi_eta_1d",
    "build_psi_eta_2d",
    "bump_norm_constant",
    "causal_leq",
    "classical_weak_agreement",
    "classify_split_form",
    "decide_causal_isomorphism",
    "from_null",
    "make_causal_iso",
    "mollifier",
    "monotonicity_check",
    "order_oracle",
    "pair",
    "phi1",
    "reduce_to_1d",
    "residual",
    "split_primitive",
    "tensor_bump",
    "to_null",
    "wave_invariance_test",
    "weak_du",
    "weak_dv",
    "weak_mixed",
]
