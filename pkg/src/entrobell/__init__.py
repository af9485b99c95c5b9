"""entrobell: entropic classicality vs Bell nonlocality for few-qubit states.

The package answers one family of questions about 2-4 qubit density
matrices: when does mixedness (measured by the participation ratio
R = 1 / Tr(rho^2)) force a state to look classical -- no conditional
entropy below zero, no Bell-inequality violation, no entanglement --
and how often do those three verdicts coincide on random states?

The public surface re-exported here:

* ``states``       -- density matrices, named families (GHZ, noisy GHZ,
                      Bell-diagonal), Haar sampling, and the fixed-purity
                      sampler built on the eigenvalue-tetrahedron geometry.
* ``entropic``     -- conditional-entropy reports, the violation flag, and
                      the largest-eigenvalue bound with its implied max R.
* ``bell``         -- CHSH/Mermin and the recursive multi-observer
                      operator, closed forms, optimizer, and the
                      mixedness envelopes.
* ``correlations`` -- concurrence, quantum discord, geometric discord.
* ``survey``       -- reproducible Monte Carlo surveys, coincidence
                      statistics with Wilson intervals, ratio sweeps,
                      envelope checks, and CSV/JSON export.

Command line: ``python -m entrobell --help`` (or the ``entrobell``
console script).
"""

from .bell import (
    CHSH_CLASSICAL_BOUND,
    GHZ4_RECURSION_MAX,
    MABK_CLASSICAL_BOUNDS,
    MERMIN_CLASSICAL_BOUND,
    TSIRELSON_BOUND,
    VIOLATION_SLACK,
    BellResult,
    MeasurementSettings,
    chsh_envelope,
    chsh_max,
    chsh_operator,
    horodecki_m,
    mabk_max,
    mabk_operator,
    mermin_envelope,
    mermin_max,
    mermin_operator,
    werner_mabk_threshold,
)
from .correlations import (
    BlochDecomposition,
    MeasurementBasis,
    bloch_decompose,
    concurrence,
    discord_grid_minimum,
    discord_rank_witness,
    discord_witness_matrix,
    geometric_discord,
    quantum_discord,
)
from .entropic import (
    LN2,
    VIOLATION_TOL,
    BipartitionEntropy,
    EntropicReport,
    entropic_report,
    implied_max_ratio,
    single_eigenvalue_bound,
    von_neumann_entropy,
)
from .errors import (
    BadRatio,
    BadSettings,
    BadSubset,
    BadWeight,
    EntrobellError,
    MissingMeasure,
    NotDensityMatrix,
    NotHermitian,
    OptimizerFailure,
    OutsideTetrahedron,
    SamplerStalled,
    StateFormatError,
    UnsupportedMeasure,
    UnsupportedSize,
)
from .states import (
    TETRAHEDRON,
    DensityMatrix,
    TetrahedronGeometry,
    bell_diagonal,
    ghz,
    haar_unitary,
    maximally_mixed,
    participation_ratio,
    random_density,
    random_fixed_ratio,
    random_simplex_point,
    ratio_to_radius,
    read_state,
    region3_polar_cut,
    simplex_to_eigenvalues,
    substream,
    tetrahedron_region,
    werner2,
    werner3,
    werner_ghz,
    write_state,
)
from .survey import (
    CSV_COLUMNS,
    FAMILIES,
    MEASURES,
    PAIRS,
    CoincidenceStats,
    EnvelopeReport,
    SurveyConfig,
    SurveyRecord,
    SweepRow,
    available_pairs,
    coincidence,
    envelope_check,
    export,
    load_records,
    measure_state,
    ratio_sweep,
    record_as_dict,
    run_survey,
    sample_states,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # states
    "DensityMatrix",
    "TetrahedronGeometry",
    "TETRAHEDRON",
    "bell_diagonal",
    "ghz",
    "haar_unitary",
    "maximally_mixed",
    "participation_ratio",
    "random_density",
    "random_fixed_ratio",
    "random_simplex_point",
    "ratio_to_radius",
    "read_state",
    "region3_polar_cut",
    "simplex_to_eigenvalues",
    "substream",
    "tetrahedron_region",
    "werner2",
    "werner3",
    "werner_ghz",
    "write_state",
    # entropic
    "LN2",
    "VIOLATION_TOL",
    "BipartitionEntropy",
    "EntropicReport",
    "entropic_report",
    "implied_max_ratio",
    "single_eigenvalue_bound",
    "von_neumann_entropy",
    # bell
    "CHSH_CLASSICAL_BOUND",
    "GHZ4_RECURSION_MAX",
    "MABK_CLASSICAL_BOUNDS",
    "MERMIN_CLASSICAL_BOUND",
    "TSIRELSON_BOUND",
    "VIOLATION_SLACK",
    "BellResult",
    "MeasurementSettings",
    "chsh_envelope",
    "chsh_max",
    "chsh_operator",
    "horodecki_m",
    "mabk_max",
    "mabk_operator",
    "mermin_envelope",
    "mermin_max",
    "mermin_operator",
    "werner_mabk_threshold",
    # correlations
    "BlochDecomposition",
    "MeasurementBasis",
    "bloch_decompose",
    "concurrence",
    "discord_grid_minimum",
    "discord_rank_witness",
    "discord_witness_matrix",
    "geometric_discord",
    "quantum_discord",
    # survey
    "CSV_COLUMNS",
    "FAMILIES",
    "MEASURES",
    "PAIRS",
    "CoincidenceStats",
    "EnvelopeReport",
    "SurveyConfig",
    "SurveyRecord",
    "SweepRow",
    "available_pairs",
    "coincidence",
    "envelope_check",
    "export",
    "load_records",
    "measure_state",
    "ratio_sweep",
    "record_as_dict",
    "run_survey",
    "sample_states",
    # errors
    "EntrobellError",
    "BadRatio",
    "BadSettings",
    "BadSubset",
    "BadWeight",
    "MissingMeasure",
    "NotDensityMatrix",
    "NotHermitian",
    "OptimizerFailure",
    "OutsideTetrahedron",
    "SamplerStalled",
    "StateFormatError",
    "UnsupportedMeasure",
    "UnsupportedSize",
]
