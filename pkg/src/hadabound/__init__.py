"""Certified rank-one Loewner bounds for Schur products of PSD matrices."""

from .bounds import (
    BoundKind,
    BoundReport,
    RankOneLowerBound,
    classical_bounds,
    compressed_lower_bound,
    gamma_rank,
    hkv_equal_gram_bound,
    main_lower_bound,
    multifactor_lower_bound,
    multiplier_lower_bound,
    orthoprojection_P,
    rank_one_sum_exact,
    sqrt_bound,
    upper_bound,
)
from .errors import DimensionError, DomainError, HadaboundError, NumericError, UsageError
from .factor import GramFactor, gram_factor, pad_columns, principal_sqrt, rank_one_columns
from .kernels import (
    cosine_gram,
    entrywise_power_preserver_check,
    gaussian_gram,
    gaussian_novak_matrix,
    novak_matrix,
    product_kernel_lower_bound,
)
from .matcore import (
    DEFAULT_TOL,
    LoewnerCertificate,
    Tolerances,
    bilinear_trace_residual,
    diag_vector,
    hadamard,
    hermitian_eigen,
    loewner_geq,
    numerical_rank,
    principal_submatrix,
    psd_certificate,
    trace_inner,
)
from .witness import DnnCounterexample, TightWitness, dimension_embedding, dnn_counterexample, tight_example

__version__ = "0.1.0"

__all__ = [
    "bilinear_trace_residual",
    "BoundKind",
    "BoundReport",
    "classical_bounds",
    "compressed_lower_bound",
    "cosine_gram",
    "DEFAULT_TOL",
    "diag_vector",
    "dimension_embedding",
    "DimensionError",
    "dnn_counterexample",
    "DnnCounterexample",
    "DomainError",
    "entrywise_power_preserver_check",
    "gamma_rank",
    "gaussian_gram",
    "gaussian_novak_matrix",
    "gram_factor",
    "GramFactor",
    "HadaboundError",
    "hadamard",
    "hermitian_eigen",
    "hkv_equal_gram_bound",
    "loewner_geq",
    "LoewnerCertificate",
    "main_lower_bound",
    "multifactor_lower_bound",
    "multiplier_lower_bound",
    "novak_matrix",
    "numerical_rank",
    "NumericError",
    "orthoprojection_P",
    "pad_columns",
    "principal_sqrt",
    "principal_submatrix",
    "product_kernel_lower_bound",
    "psd_certificate",
    "rank_one_columns",
    "rank_one_sum_exact",
    "RankOneLowerBound",
    "sqrt_bound",
    "tight_example",
    "TightWitness",
    "Tolerances",
    "trace_inner",
    "upper_bound",
    "UsageError",
]
