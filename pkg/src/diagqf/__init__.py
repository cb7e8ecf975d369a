"""diagqf: representation counts, genus-character series and density
experiments for the diagonal quadratic forms x^2 + z*y^2."""

from .arith import (
    PrimeSubset,
    ShapeZ,
    fundamental_divisors,
    is_fundamental_discriminant,
    kronecker,
    mobius,
    primes_1mod4,
    squarefree_part,
    tau,
)
from .classgroup import ClassGroupInfo, GenusPair, ReducedForm, class_group_info, genus_pairs, reduced_forms
from .errors import GenusReconstructionError, InvariantViolation
from .experiments import (
    BernaysPoint,
    DensityReport,
    DiagnosticsReport,
    ExperimentConfig,
    CorrelationReport,
    bernays_scan,
    char_sum_diagnostics,
    density_run,
    correlation_ladder,
)
from .lseries import (
    LValue,
    MainTermReport,
    ProductCharacter,
    class_number_formula_check,
    l_value,
    main_term,
    main_term_report,
    truncated_l1,
)
from .series import (
    CoefficientSeries,
    dirichlet_convolve,
    factorization_check,
    genus_coeffs,
    mobius_identity_lhs_rhs,
    mobius_identity_table,
    multiplicative_series,
    prime_power_coeff,
    quotient_series,
    reconstruct_r,
    split_type,
)
from .sieve import MomentReport, RepTable, moment_report, rep_counts, union_count, weighted_sum_table

__version__ = "0.1.0"
