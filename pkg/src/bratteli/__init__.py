"""Exact tail-invariant measures on generalized Bratteli diagrams.

The library works with diagrams built from countably many odometers chained
by single edges, plus finite stationary standard diagrams.  It computes tower
heights and telescopings in exact integer arithmetic, represents tail
invariant measures as level vector sequences, extends odometer measures to
their saturations with certified finite/infinite verdicts, builds and
verifies closed-form eigenpairs and their induced measures, classifies
distinguished classes of finite stationary diagrams, and analyzes adic
successor dynamics under per-vertex edge orders.
"""

from .diagram import (
    DiagramError,
    DiagramSpec,
    ExplicitFinite,
    ExplicitLevels,
    GeneralChain,
    HeightsVector,
    LevelMatrix,
    NonStationaryUniform,
    StationaryAK,
    StationaryDecreasing,
    StationaryIncreasing,
    Truncation,
    VertexId,
    WindowError,
    WorkBudgetError,
    count_paths_bruteforce,
    diagram_from_json,
    heights,
    incidence,
    telescope,
)
from .extension import (
    FINITE,
    INFINITE,
    UNDETERMINED,
    ConvergenceResult,
    ErgodicClassification,
    ExtendedMeasure,
    OracleVerdict,
    SubdiagramSpec,
    classify_ergodic_measures,
    closed_form_oracles,
    odometer_extension_mass,
    extend_odometer,
    extended_cylinder_measure,
    extension_total_mass,
    mass_series_terms,
)
from .finite_stationary import (
    ClassDecomposition,
    DistinguishedData,
    FiniteStationaryMeasure,
    decompose,
    distinguished_classes,
    distinguished_eigenvector,
    measures_finite_stationary,
    spectral_radius,
)
from .measure import (
    CylinderSpec,
    EndVertex,
    ExplicitPath,
    InvarianceReport,
    MeasureVectors,
    OdometerMeasure,
    check_tail_invariance,
    cylinder_measure,
    odometer_measure,
)
from .orders import (
    ALEPH0,
    AllMaximalPrefix,
    EventuallyQuasiStationary,
    ExplicitOrder,
    ExtensionVerdict,
    QuasiStationary,
    TruncatedPath,
    VertexOrder,
    canonical_order,
    classify_odometer,
    extension_verdict,
    minimal_path_into,
    orbit_frequencies,
    order_at,
    order_from_json,
    successor,
    vertical_path,
)
from .sequences import (
    Arithmetic,
    Constant,
    Geometric,
    IntSequence,
    Polynomial,
    Table,
    seq_from_json,
    seq_from_text,
)
from .spectral import (
    ComparisonReport,
    EigenMeasure,
    EigenPair,
    ResidualReport,
    compare_eigen_vs_extension,
    eigen_measure,
    eigenvector_ak,
    eigenvector_decreasing,
    verify_eigenpair,
)

__version__ = "0.1.0"
