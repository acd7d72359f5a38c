"""Rational surrogate models for dense grid tensors.

Fits multivariate rational interpolants to gridded data through
one-variable Loewner null spaces composed recursively, converts them
between barycentric, monomial, and superposition forms, and benchmarks
the whole pipeline on a fifty-function catalog.
"""

from .adaptive import AdaptiveConfig, AdaptiveStep, AdaptiveTrace, fit_adaptive
from .benchmark import (
    BenchmarkCase,
    EvalReport,
    bench_cases,
    catalog,
    get_case,
    read_report,
    register_formula,
    rmse,
    run_case,
    sweep_configs,
    write_report,
)
from .complexity import (
    ComplexityReport,
    StorageAccount,
    flops_full,
    flops_recursive,
    format_bytes,
    max_storage,
    report_for,
    worst_case_flops,
)
from .direct import FitConfig, FlopCounter, detect_orders, fit_direct, recursive_nullspace
from .errors import (
    CaseUnavailable,
    DegenerateSlice,
    DegenerateSupport,
    FactorsUnavailable,
    GridLookupError,
    InvalidAxis,
    InvalidInput,
    MethodFallbackWarning,
    MLoewnerError,
    OverPrunedModel,
    PartitionError,
    PoleEncountered,
    SamplingError,
    SweepExhausted,
)
from .grid import (
    GridAxis,
    GridTensor,
    SupportPartition,
    column_capacity,
    complement_rows,
    gather_values,
    linspace_axis,
    sample_grid,
    split_support,
)
from .loewner import (
    LoewnerMatrix,
    NullMethod,
    build_loewner_1d,
    estimate_order,
    normalized_singular_values,
    null_vector,
    prune_weights,
)
from .models import (
    BarycentricModel,
    KstModel,
    MonomialModel,
    compose_factors,
    emit_network_graph,
    eval_barycentric,
    eval_barycentric_batch,
    eval_kst,
    eval_monomial,
    eval_monomial_batch,
    expand_factor,
    to_kst,
    to_monomial,
    vandermonde_matrix,
)
from .rng import SplitMix64, derive_case_seed

__version__ = "0.1.0"
