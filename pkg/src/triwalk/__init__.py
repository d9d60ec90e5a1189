"""Random walks on a finite triangular lattice with absorbing boundaries.

Three engines solve the same problem — expected visit counts at interior
sites and absorption probabilities on the boundary, for a walk started at a
single interior source:

- :func:`solve_exact` — closed-form separable solution (odd ``m``),
- :func:`solve_oracle` — sparse solve of the defining linear system,
- :func:`simulate` — seeded, reproducible Monte Carlo.
"""

from .closed_form import (
    AbsorptionMap,
    DegenerateMode,
    DegenerateModeUnresolved,
    FieldSolution,
    ModeAmplitudes,
    ModeData,
    SingularMatching,
    UnsupportedGeometry,
    absorption_map,
    delta_identity_check,
    mode_amplitudes,
    mode_constants,
    solve_exact,
)
from .lattice import (
    InvalidSource,
    LatticeSpec,
    Site,
    SiteClass,
    SourceSpec,
    boundary_sites,
    classify,
    mirror_p,
    neighbors,
)
from .linear_oracle import IterationDivergence, LinearSystem, assemble, row_index, solve_oracle
from .montecarlo import McEstimate, SpecMismatch, WalkConfig, WalkOverflow, simulate, zscores

__version__ = "0.1.0"

__all__ = [
    "AbsorptionMap",
    "DegenerateMode",
    "DegenerateModeUnresolved",
    "FieldSolution",
    "InvalidSource",
    "IterationDivergence",
    "LatticeSpec",
    "LinearSystem",
    "McEstimate",
    "ModeAmplitudes",
    "ModeData",
    "SingularMatching",
    "Site",
    "SiteClass",
    "SourceSpec",
    "SpecMismatch",
    "UnsupportedGeometry",
    "WalkConfig",
    "WalkOverflow",
    "absorption_map",
    "assemble",
    "boundary_sites",
    "classify",
    "delta_identity_check",
    "mirror_p",
    "mode_amplitudes",
    "mode_constants",
    "neighbors",
    "row_index",
    "simulate",
    "solve_exact",
    "solve_oracle",
    "zscores",
    "__version__",
]
