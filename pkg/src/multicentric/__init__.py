"""Multicentric calculus on polynomial lemniscates.

A monic polynomial p with distinct roots turns w = p(z) into a working
variable: analytic functions are carried by a vector of local series
f_1..f_d through phi(z) = sum_j delta_j(z) f_j(p(z)).  This package
implements the series machinery, the roots-of-unity refinement in
p(z)^n, the geometry of the sublevel sets |p(z)| <= rho, and the
resulting spectral projections of matrices with computable norm bounds.
"""

from .polynomials import (
    MonicPolynomial,
    SeparationTask,
    from_roots,
    model_polynomial,
    cubic_example,
)
from .powerseries import (
    TruncatedSeries,
    JetSpec,
    MulticentricSeries,
    root_branch,
    delta_lambda_series,
    b_table,
    fj_recursion,
    fj_interpolation,
    evaluate_multicentric,
)
from .unityfold import FoldedMulticentric, split_coefficients, split_pointwise, fold_multicentric
from .lemniscate import (
    GridSpec,
    LemniscateAnalysis,
    analysis_report,
    analyze,
    extract_contours,
    sublevel_components,
    distance_to_contours,
    separation_gap_s,
    separates_imaginary_axis,
    avoids_origin,
    segments_inside,
    max_eta,
    ratio_and_angle,
    sum_abs_delta,
    constant_C,
    L_rho,
)
from .projection import (
    ProjectionReport,
    poly_apply,
    matrix_norm2,
    power_schedule,
    riesz_projection,
    riesz_bound,
    oracle_projection_eigen,
    oracle_projection_contour,
    block_matrix,
    block_example,
)

__version__ = "0.1.0"
