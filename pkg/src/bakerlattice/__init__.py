"""Random-walk baker lattices on Z^d x [0,1)^2.

Exact dynamics and strip calculus for the lattice of baker's maps realizing
a finite-support random walk, estimators for five infinite-volume mixing
notions, and the torus Fourier diagnostics behind their decay rates.
"""

from .lattice import (
    DimensionMismatchError,
    LatticeSignal,
    SpanVerdict,
    WalkDistribution,
    a1_boundary_constant,
    a1_defect,
    convolution_power,
    convolve,
    drift,
    moment,
    span_check,
)
from .phase import (
    BudgetExceededError,
    ItineraryPushforward,
    PartitionTable,
    PhasePoint,
    SiteHistogram,
    Strip,
    inverse_step,
    push_strip,
    simulate_walk,
    step,
)
from .observables import (
    NON_CONVERGENT,
    AverageEstimate,
    Box,
    BoxFamily,
    CellObservable,
    SiteObservable,
    av_invariance_check,
    box_average,
    box_average_product,
    constant_observable,
    custom_observable,
    estimate_average,
    evolve_site,
    localized_observable,
    observable_from_config,
    observable_to_config,
    orthant_observable,
    periodic_observable,
    reduce_to_site,
    sign_observable,
)
from .fourier import (
    AliasingError,
    DefectNorms,
    FourierConfig,
    TorusGrid,
    a_norm,
    box_kernel_hat,
    box_signal,
    char_function,
    defect_signal,
    drift_removed_char,
    h_norm,
    local_bounds_report,
    nowak_check,
    nowak_constant,
    parseval_pairing,
    periodic_pairing,
    smallest_grid,
    taylor_coefficient,
)
from .mixing import (
    NOT_COMPUTABLE,
    AuditRecord,
    CorrelationReport,
    LocalObservable,
    RateFit,
    correlate_global_local,
    implication_audit,
    itinerary_oracle,
    m1_limit,
    m1_report,
    m2_entry,
    m2_table,
    m4_report,
    m5_gap,
    m5_report,
    rate_profile,
)
from .presets import PRESETS, preset

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "AuditRecord",
    "AverageEstimate",
    "Box",
    "BoxFamily",
    "BudgetExceededError",
    "CellObservable",
    "CorrelationReport",
    "DefectNorms",
    "DimensionMismatchError",
    "FourierConfig",
    "ItineraryPushforward",
    "LatticeSignal",
    "LocalObservable",
    "NON_CONVERGENT",
    "NOT_COMPUTABLE",
    "PRESETS",
    "PartitionTable",
    "PhasePoint",
    "RateFit",
    "SiteHistogram",
    "SiteObservable",
    "SpanVerdict",
    "Strip",
    "TorusGrid",
    "WalkDistribution",
    "a1_boundary_constant",
    "a1_defect",
    "a_norm",
    "av_invariance_check",
    "box_average",
    "box_average_product",
    "box_kernel_hat",
    "box_signal",
    "char_function",
    "constant_observable",
    "convolution_power",
    "convolve",
    "correlate_global_local",
    "custom_observable",
    "defect_signal",
    "drift",
    "drift_removed_char",
    "estimate_average",
    "evolve_site",
    "h_norm",
    "implication_audit",
    "inverse_step",
    "itinerary_oracle",
    "local_bounds_report",
    "localized_observable",
    "m1_limit",
    "m1_report",
    "m2_entry",
    "m2_table",
    "m4_report",
    "m5_gap",
    "m5_report",
    "moment",
    "nowak_check",
    "nowak_constant",
    "observable_from_config",
    "observable_to_config",
    "orthant_observable",
    "parseval_pairing",
    "periodic_observable",
    "periodic_pairing",
    "preset",
    "push_strip",
    "rate_profile",
    "reduce_to_site",
    "sign_observable",
    "simulate_walk",
    "smallest_grid",
    "span_check",
    "step",
    "taylor_coefficient",
]
