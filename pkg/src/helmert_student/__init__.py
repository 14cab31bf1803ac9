"""Explicit Helmert orthogonal matrix and a Monte Carlo check of Student's theorem."""

from .dist_functions import chi2_cdf, chi2_sf, kolmogorov_survival, normal_cdf
from .gram_schmidt import entry_complexity, gram_schmidt_orthogonalize, transform_equivalence_check
from .helmert_core import (
    SymbolicEntry,
    apply,
    apply_transpose,
    build_dense,
    certify_orders,
    symbolic_entry,
    symbolic_matrix,
    verify_orthogonality_exact,
)
from .sampling import NormalParams, destandardize, sample_stats, standard_normal_batch, standardize
from .stat_tests import contingency_independence, ks_test, pearson_r
from .theorem_verifier import VerificationConfig, run_all, run_negative_controls

__version__ = "0.1.0"
