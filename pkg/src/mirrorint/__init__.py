"""Exact-arithmetic toolkit for integrality of mirror maps.

Decide the integrality dichotomy for factorial ratios of linear forms,
expand the attached canonical coordinates, mirror maps and mirror-type
maps as exact truncated power series, and verify the p-adic machinery
(valuation identities, the Dieudonne-Dwork test, formal congruences and
operator case studies) at desk scale.
"""

from .forms import (
    INFINITY,
    FormSystem,
    factorial_ratio,
    harmonic,
    is_prime,
    vp_of_rational,
    vp_ratio_legendre,
)
from .landau import (
    BudgetExceededError,
    CriterionVerdict,
    JumpProfile,
    SamplingStrategy,
    StrategyDisagreementError,
    Tag,
    classify,
    delta_at,
    enumerate_weight_vectors,
    in_jump_region,
    jump_criterion_check,
    univariate_jump_profile,
)
from .series import (
    LogSeries,
    MSeries,
    apply_theta_poly,
    compose,
    invert_diagonal,
    theta,
)
from .mirror import (
    MirrorBundle,
    ScanReport,
    build_bundle,
    build_F,
    build_Gk,
    build_GL,
    check_factorization,
    integrality_scan,
)
from .dwork import (
    CongruenceRanges,
    CongruenceReport,
    PadicContext,
    convolution_sum,
    dd_coefficient_k,
    dd_coefficient_L,
    dieudonne_dwork_check,
    gamma_p,
    gamma_p_check,
    good_residues,
    harmonic_obstruction,
    is_good_residue,
    landau_negative_witness,
    obstruction_ratio,
    padic_weight,
    q_ratio_congruence_sweep,
    verify_formal_congruences,
)
from .operators import (
    AnnihilationReport,
    CaseRecord,
    ThetaOperator,
    apply_operator,
    case30_landau_check,
    case30_record,
    verify_annihilation,
)
from .systems import BUNDLED, default_order

__version__ = "0.1.0"
