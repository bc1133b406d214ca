"""Numerical geometry of the unit ball of constrained H-infinity spaces."""

__version__ = "0.1.0"

from .circle import (  # noqa: E402
    BoundaryGrid,
    BoundarySample,
    GridMask,
    Spectrum,
    analyticity_defect,
    conjugate_function,
    from_spectrum,
    measure,
    sup_norm,
    to_spectrum,
)
from .constraints import (  # noqa: E402
    ConstraintSet,
    Functional,
    apply,
    fourier_constraints,
    kernel_polynomial,
    membership_defect,
    random_constraints,
)
from .outer import (  # noqa: E402
    exposed_mass,
    extremality_test,
    inner_defect,
    make_outer,
    sublevel_set,
)
from .witness import (  # noqa: E402
    NAZAROV_C,
    extreme_violation_witness,
    restricted_sup_constant,
    strong_violation_witness,
    turan_nazarov_check,
)
from .admissibility import (  # noqa: E402
    SweepConfig,
    eps_lower,
    eps_upper,
    probe_admissibility,
    run_sweep,
    theorem2_construction,
)

__all__ = [
    "BoundaryGrid", "BoundarySample", "GridMask", "Spectrum", "analyticity_defect",
    "conjugate_function", "from_spectrum", "measure", "sup_norm", "to_spectrum",
    "ConstraintSet", "Functional", "apply", "fourier_constraints", "kernel_polynomial",
    "membership_defect", "random_constraints",
    "exposed_mass", "extremality_test", "inner_defect", "make_outer", "sublevel_set",
    "NAZAROV_C", "extreme_violation_witness", "restricted_sup_constant",
    "strong_violation_witness", "turan_nazarov_check",
    "SweepConfig", "eps_lower", "eps_upper", "probe_admissibility", "run_sweep",
    "theorem2_construction",
]
