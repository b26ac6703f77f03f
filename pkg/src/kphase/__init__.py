"""Geometric phases of linear Hamiltonian flows on coherent-state orbits.

The package works in a single holomorphic chart of a homogeneous Kahler
manifold: reproducing kernels and Kahler potentials (``manifolds``,
``geometry``), Mobius and Riccati chart dynamics with coherent expectation
values (``dynamics``), exact triangle phases, connection line integrals,
and phase reports (``phases``), the rank-one Schrodinger reference
(``su2``), and Betti numbers of the underlying quotients (``topology``).
"""

from .errors import (
    BoundaryTooClose,
    BranchCut,
    ChartOverflow,
    CrossCheckFailure,
    DimensionMismatch,
    GridMismatch,
    InvalidRank,
    InvalidSpin,
    KernelZero,
    KPhaseError,
    NoCycleFound,
    NonDivisible,
    NonRealExpectation,
    NotClosed,
    NotCoherent,
    NotCyclic,
    OutsideDomain,
    RankMismatch,
    ScheduleGap,
    SingularMinor,
    SpecMismatch,
    SymmetryViolation,
    UnknownGroup,
    UnsupportedFamily,
)
from .manifolds import (
    Family,
    ManifoldSpec,
    PointMatrix,
    cp1,
    flag_minor_kernel,
    kernel,
    normalized_overlap,
    projective_distance,
    random_point,
    validate_point,
)
from .geometry import (
    KahlerSample,
    PositivityReport,
    connection_eval,
    coordinate_basis,
    gradient,
    metric,
    positivity_check,
    potential,
    sample,
    tangent_components,
)
from .dynamics import (
    CycleInfo,
    HamiltonianSchedule,
    Trajectory,
    block_split,
    evolve_unitary,
    expectation,
    expm_hermitian_generator,
    find_cycle,
    is_stationary,
    mobius_act,
    ray_distances,
    riccati_rhs,
    trajectory,
)
from .phases import (
    PhaseReport,
    StokesReport,
    assemble_report,
    dynamical_phase,
    line_integral_phase,
    polygon_phase,
    stokes_compare,
    triangle_phase,
    wrap_angle,
)
from .su2 import (
    SpinRep,
    StateTrajectory,
    bloch_projection,
    coherent_vector,
    map_schedule,
    map_to_spin,
    quantum_phases,
    schrodinger_evolve,
    spin_operators,
)
from .topology import (
    BettiReport,
    GroupSpec,
    MinOrbitInfo,
    PoincarePolynomial,
    Series,
    SimpleFactor,
    betti_validate,
    hirsch_polynomial,
    min_orbit,
    parse_group,
    parse_quotient,
    poincare_quotient,
    weyl_degrees,
)
from .loops import fourier_loop, latitude_circle

__version__ = "1.0.0"

__all__ = [
    "BettiReport",
    "BoundaryTooClose",
    "BranchCut",
    "ChartOverflow",
    "CrossCheckFailure",
    "CycleInfo",
    "DimensionMismatch",
    "Family",
    "GridMismatch",
    "GroupSpec",
    "HamiltonianSchedule",
    "InvalidRank",
    "InvalidSpin",
    "KPhaseError",
    "KahlerSample",
    "KernelZero",
    "ManifoldSpec",
    "MinOrbitInfo",
    "NoCycleFound",
    "NonDivisible",
    "NonRealExpectation",
    "NotClosed",
    "NotCoherent",
    "NotCyclic",
    "OutsideDomain",
    "PhaseReport",
    "PoincarePolynomial",
    "PointMatrix",
    "PositivityReport",
    "RankMismatch",
    "ScheduleGap",
    "Series",
    "SimpleFactor",
    "SingularMinor",
    "SpecMismatch",
    "SpinRep",
    "StateTrajectory",
    "StokesReport",
    "SymmetryViolation",
    "Trajectory",
    "UnknownGroup",
    "UnsupportedFamily",
    "assemble_report",
    "betti_validate",
    "bloch_projection",
    "block_split",
    "coherent_vector",
    "connection_eval",
    "coordinate_basis",
    "cp1",
    "dynamical_phase",
    "evolve_unitary",
    "expectation",
    "expm_hermitian_generator",
    "find_cycle",
    "flag_minor_kernel",
    "fourier_loop",
    "gradient",
    "hirsch_polynomial",
    "is_stationary",
    "kernel",
    "latitude_circle",
    "line_integral_phase",
    "map_schedule",
    "map_to_spin",
    "metric",
    "min_orbit",
    "mobius_act",
    "normalized_overlap",
    "parse_group",
    "parse_quotient",
    "poincare_quotient",
    "polygon_phase",
    "positivity_check",
    "potential",
    "projective_distance",
    "quantum_phases",
    "random_point",
    "ray_distances",
    "riccati_rhs",
    "sample",
    "schrodinger_evolve",
    "spin_operators",
    "stokes_compare",
    "tangent_components",
    "trajectory",
    "triangle_phase",
    "validate_point",
    "weyl_degrees",
    "wrap_angle",
]
