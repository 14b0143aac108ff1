"""Exact K-theory computation of A_n-structure bounds on mod p^k Moore spectra."""
from .exact_arith import INFINITY, NotPrimeError, is_p_integral, multiplicative_order, vp
from .ktheory import KClass, PsiMatrix, adams_apply, fixed_subspace, psi_matrix, solve_fixed_series
from .obstruction import (
    DegreeDecomposition,
    InternalConsistencyError,
    ObstructionReport,
    an_bound,
    an_bound_p2,
    degree_decompose,
    find_generator,
    first_failure_index,
    verify_theorem,
)
from .series import TruncSeries, adams_argument, log_series

__version__ = "0.1.0"
