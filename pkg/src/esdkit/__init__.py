"""Two-qubit open-system dynamics and entanglement sudden death.

The package simulates dissipative two-qubit channels (local decay at zero
or finite temperature, local and collective dephasing, custom Lindblad
jump lists), detects finite-time loss of entanglement on trajectories,
and classifies the geometry of a channel's asymptotic states relative to
the separable set.
"""

from .errors import (
    BadDistributionError,
    EmptySetError,
    InconclusiveError,
    NegativePopulationError,
    NoConvergenceError,
    NotHermitianError,
    NotPositiveError,
    NotXFormError,
    OutOfRangeError,
    ParseError,
    StepTooLargeError,
    TraceNotOneError,
    UnsupportedChannelError,
    ValidationError,
)
from .states import (
    DEFAULT_TOL,
    DensityMatrix,
    HermitianObservable,
    QubitState,
    ToleranceConfig,
    XState,
    bell,
    bell_mixture,
    embed_x,
    expectation,
    format_dense_entries,
    format_state_literal,
    local_coherences,
    make_density,
    make_x,
    maximally_mixed,
    observable,
    parse_dense_entries,
    parse_state_literal,
    project_x,
    random_density,
    random_x,
    reduce_qubit,
    werner,
)
from .entanglement import (
    LABEL_BOUNDARY,
    LABEL_ENTANGLED,
    LABEL_INTERIOR,
    RegionLabel,
    XVerdict,
    classify_position,
    eigenvalues_hermitian,
    is_entangled_ppt,
    min_pt_eigenvalue,
    negativity,
    partial_transpose,
    x_entangled,
)
from .channels import (
    AsymptoticSet,
    ChannelSpec,
    CollectiveDephasing,
    CustomChannel,
    ExplicitSamples,
    IndependentDecay,
    IndependentDephasing,
    SinglePoint,
    XFamily,
    asymptotic_set,
    format_channel_literal,
    generator,
    is_catalog,
    jump_operators,
    liouvillian,
    max_rate,
    parse_channel_literal,
    propagate_numeric,
    propagate_x_closed,
    set_contains,
    thermal_product,
    x_closed_curves,
)
from .dynamics import (
    DEFAULT_SAMPLES,
    VERDICT_ASYMPTOTIC,
    VERDICT_FINITE,
    VERDICT_NEVER,
    VERDICT_PERSISTENT,
    DeathReport,
    Trajectory,
    crossing_count,
    death_report_from_json,
    death_report_to_json,
    death_time,
    estimate_asymptote,
    parse_trajectory_csv,
    simulate,
    trajectory_to_csv,
)
from .classify import (
    CASES,
    FAMILY_MULTI,
    FAMILY_ONE,
    Evidence,
    ScenarioLabel,
    classify_channel,
    classify_set,
    sample_asymptotic,
    scenario_from_json,
    scenario_to_json,
)

__version__ = "0.1.0"
