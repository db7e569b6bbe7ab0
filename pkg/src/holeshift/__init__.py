"""Survivor sets of the b-adic shift with one moving forbidden word.

At every stage k a word of length m is removed from play; the package
counts the surviving words exactly or in log space, classifies hole
positions by how the forbidden word overlaps its predecessors, evaluates
the growth rates and dimensions the structural schedule families admit,
and bounds the joint spectral radius of the transition matrices.
"""

from .counting import (
    BitMatrix,
    CountingError,
    LogSeries,
    NVector,
    StateVector,
    adjacency_matrix,
    advance_state,
    count_exact,
    count_from_prefix,
    count_series,
    initial_state,
    nvec_from_series,
    nvec_step,
    product_norm,
)
from .dimension import (
    DimensionError,
    DimReport,
    PredictedDims,
    RegularityReport,
    estimate_dims,
    family_checkpoints,
    moran_bound,
    predict_dims,
    regularity_ratios,
)
from .jsr import (
    FinitenessReport,
    JsrError,
    JsrReport,
    exhaustive_maxima,
    finiteness_check,
    jsr_upper_exhaustive,
    jsr_upper_po,
)
from .model import (
    ModelError,
    Params,
    Word,
    check_word,
    format_word,
    make_params,
    pack_word,
    parse_word,
    unpack_word,
)
from .schedules import (
    CycleStream,
    ExplicitSchedule,
    FamilySchedule,
    HoleSchedule,
    LpqSchedule,
    MixedSchedule,
    MultiSchedule,
    PatternClass,
    PeriodicSchedule,
    PQSchedule,
    ProgressiveOverlap,
    RngStream,
    ScheduleError,
    TotallyDistinct,
    build_pq_schedule,
    classify_position,
    from_words,
    gen_family,
    gen_lpq,
    gen_mixed,
    gen_progressive,
    gen_totally_distinct,
    make_stream,
    pattern_density,
    strict_ceil,
)
from .spectra import (
    LambdaPQ,
    RootResult,
    SpectraError,
    all_roots,
    b_power_closed,
    char_poly_exact,
    dominant_root,
    growth_poly_mixed,
    growth_poly_po,
    growth_poly_td,
    is_primitive,
    lambda_pq,
    mat_mul,
    mat_pow,
    pisot_conjugates,
    spectral_radius,
    struct_matrix_a,
    struct_matrix_b,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
