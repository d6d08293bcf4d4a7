"""Inverse problems for one-dimensional barriers and wells.

Forward quantities (classical periods, barrier times, Gamow transmission) are
computed with endpoint-weighted quadrature, and inverted back to barrier
widths or canonical potentials by Abel-type transforms.  Reflectionless
potentials are rebuilt from a discrete spectrum through the Marchenko
equation.
"""

from .errors import (
    BarrierInverseError,
    BracketFailure,
    BranchOverlap,
    ConfigError,
    DomainError,
    EnergyOutOfRange,
    GridTooCoarse,
    InvalidGrid,
    InvalidInterval,
    NonConvergence,
    NonMonotoneData,
    NonMonotoneResult,
    NumericalError,
    OutOfDomain,
    ShapeMismatch,
    SingularSystem,
)
from .forward import (
    CurveKind,
    ScatteringCurve,
    backward_time,
    classical_period,
    gamow_exponent,
    gamow_transmission,
    sample_curve,
    traversal_time,
)
from .inversion import (
    AbelProblem,
    Orientation,
    canonical_potential,
    centered_split,
    family_member,
    invert_barrier_backward,
    invert_gamow,
    invert_gamow_by_abel,
    invert_well_period,
    modified_abel_solve,
    zero_split,
)
from .marchenko import (
    DiscreteSpectrum,
    ReconstructionGrid,
    reconstruct_potential,
    solve_marchenko,
)
from .potentials import (
    ColdEmission,
    HarmonicWell,
    LinearRamp,
    LinearWell,
    ParabolicBarrier,
    PhysicalConstants,
    Shape,
    Tabulated,
    WidthFunction,
    barrier_max,
    turning_points,
    well_min,
    width_function,
)
from .quadrature import QuadratureResult, SingularEnd, integrate_smooth, integrate_sqrt_singular
from .tabulated import TabulatedFunction

__version__ = "0.1.0"
