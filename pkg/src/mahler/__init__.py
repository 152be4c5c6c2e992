"""Numerical Mahler measures of three two-variable polynomial families.

The library evaluates logarithmic Mahler measures by two independent methods
(direct torus quadrature and the Jensen reduction), provides fast paths for
the hyperelliptic family ``Q_k``, the elliptic family ``P_lam`` and the
four-term family ``R_lam``, and verifies the linear relations between them
together with all supporting closed forms (elliptic integrals, Gauss
hypergeometric transformations, branch and singularity claims).
"""

from .config import DEFAULTS, RunConfig, get_precision, set_precision, show_config
from .identities import (
    VerificationReport,
    asymptotic_gap,
    run_suite,
    verify_boyd,
    verify_branch_bounds,
    verify_derivatives,
    verify_hyp_transforms,
    verify_J,
    verify_main,
    verify_singularity_order,
    verify_substitution_identity,
)
from .measures import (
    BranchExtremes,
    MeasureValue,
    branch_extremes,
    mahler_1var,
    mahler_jensen_2var,
    mahler_torus,
    p_measure,
    q_measure,
    r_measure,
    y_branches,
)
from .poly import (
    FamilySpec,
    LaurentPolynomial,
    UnivariateView,
    as_poly_in_y,
    evaluate,
    make_family,
    poly_from_text,
    poly_to_text,
    verify_substitution,
)
from .quadrature import NumericalError, QuadratureResult, adaptive, periodic_trapezoid, tanh_sinh
from .roots import BranchPair, poly_roots, quadratic_roots
from .specfun import (
    Hyp2F1Spec,
    MuParameter,
    SingularityProfile,
    UnsupportedRegimeError,
    agm,
    cubic_singularities,
    dp_dlambda,
    dq_dlambda_closed,
    dq_dlambda_fd,
    dr_dlambda,
    gauss_2f1_agm,
    gauss_2f1_series,
    hyp2f1,
    mu_of_lambda,
    singular_points,
)

__version__ = "0.1.0"
