"""Szász-type exponential bounds for scalar and matrix polynomials."""
from __future__ import annotations

from .bounds import (BoundId, BoundReport, FunctionalBounds, Hypothesis, InconsistencyError,
                     LiftedBounds, de_branges, functional_bounds, intermediate_bound, lh_bound,
                     lifted_bounds, matrix_factored_bound, numerical_range_certificate,
                     realization_bound, szasz_original, von_neumann_sup)
from .conditions import (ConditionVerdict, elementary_pos_check, elementary_pos_value,
                         im_identity_check, matrix_location_sum, minus_semis_predicate,
                         rank_one_trace, scalar_location_sum, stable_factors, var_semis_check)
from .linalg import (ConvergenceError, DimensionError, frobenius_norm, hadamard, kronecker,
                     lambda_H, operator_norm)
from .poly import (HypothesisError, MatrixPoly, ScalarPoly, eval_matrix_poly,
                   eval_matrix_poly_at_matrix, eval_scalar, eval_scalar_at_matrix,
                   expand_matrix_factors, expand_scalar_factors)
from .realization import (Realization, StructureError, StructureReport, build_realization,
                          check_structure, eval_realization, factors_from_realization,
                          realization_from_factors, validate)

__version__ = "0.1.0"
