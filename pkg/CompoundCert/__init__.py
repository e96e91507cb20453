"""
CompoundCert.__init__
~~~~~~~~~~~~

This module implements the CompoundCert package.
"""

# Import the required modules
from CompoundCert.Combinat import IndexSet, binomial, lex_sequences, rank, unrank
from CompoundCert.Compound import (
    CompoundMatrix, CompoundKind, minor, det_cofactor, mult_compound, add_compound, add_compound_oracle,
    kron_product, kron_sum, split_alpha, alpha_add_compound, alpha_mult_compound, real_matrix_power
)
from CompoundCert.Measures import MeasureKind, vector_norm, matrix_norm, measure, compound_measure, measure_limit, coppel_bound
from CompoundCert.SignVariation import SignVariationResult, ConeVariant, SignRegularity, sign_vector, s_minus, s_plus, sign_variations, in_cone, sign_regular_order, competitive_transform
from CompoundCert.Classify import (
    CertReport, PropertySelector, VerdictSelector, PatternCase, is_metzler, is_irreducible, metzler_compound_pattern, is_jacobi,
    certify_k_positive, certify_k_contracting, certify_alpha_contracting, certify_k_cooperative, k_diag_stability_check,
    certify_k_diag_stable, check_cone_invariance, ltv_samples, jacobian_samples, sample_times, coppel_check
)
from CompoundCert.Dynamics import (
    IntegrationBlowupError, SignVariationError, time_grid, rk4_march, integrate, transition_matrix, compound_transition_residual,
    k_volume, volume_trace, variational_matrix, variational_system, sign_variation_trace, box_grid, state_space_grid,
    converges_to_equilibrium, attractor_summary
)
from CompoundCert.Systems import (
    SystemDef, SystemKind, Trajectory, ltv_system, example5_system, example8_system, thomas_system, thomas_alpha_bound,
    thomas_threshold, thomas_gain_bound, cyclic_system, jacobi_system, builtin_system, BUILTIN_SYSTEMS
)
from CompoundCert.Expression import MatrixExpression, ExpressionParseError, parse_matrix_expression, serialize_matrix, entry_matrix
from CompoundCert.GoldenExamples import run_selftest
from CompoundCert.DomainCheck import DomainCheck, DomainError, UnsupportedDomainError
from CompoundCert.Progress import Progress, _ProgressData, ProgressStatusSelector
from CompoundCert.Debugger import DebuggerConfiguration
from CompoundCert.Configuration import Configuration

# Set the debugging mode (the command line turns it on with --debug)
DebuggerConfiguration.DEBUGGING = False
DebuggerConfiguration.CREATE_DEBUG_FILES = False
DebuggerConfiguration.SKIP_LOW_IMPORTANCE = True

# The version of the package
__version__ = "1.0.0"

# The name of the package
__name__ = "CompoundCert"

# The license of the package
__license__ = "MIT"

# The description of the package
__description__ = "CompoundCert computes multiplicative, additive and alpha compound matrices and certifies k-contraction, k-positivity and k-cooperativity of linear time-varying and nonlinear systems."
