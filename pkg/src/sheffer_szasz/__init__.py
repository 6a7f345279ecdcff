"""Chlodowsky-type Szász operators built on Sheffer polynomial families."""
from .moments import (
    MomentSet,
    algebraic_c2,
    central_moment2,
    first_central_moment,
    korovkin_report,
    moment_closed_form,
)
from .operators import (
    Evaluation,
    OperatorConfig,
    ScalingSequence,
    TargetFunction,
    TruncationError,
    apply_P_star,
    apply_T,
    apply_T_star,
    eval_grid,
    sheffer_weights,
)
from .power_series import (
    TruncatedSeries,
    series_add,
    series_eval_derivatives,
    series_exp,
    series_mul,
)
from .sheffer import (
    FamilyError,
    ShefferFamily,
    appell_family,
    builtin_family,
    make_family,
    sheffer_values,
    validate_family,
)
from .smoothness import (
    BoundReport,
    ModulusReport,
    bound_thm26,
    bound_thm27,
    bound_thm28,
    bound_thm29,
    modulus,
    second_modulus,
    steklov,
)
from .weighted import (
    WeightFunction,
    bound_thm37,
    default_weight,
    lemma33_bound,
    theorem37_quantities,
    weighted_modulus,
    weighted_norm,
)

__version__ = "0.1.0"
