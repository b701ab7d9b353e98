"""Series solutions of nonlinear problems by decomposition, with a tunable
convergence-control parameter and residual-driven selection of its optimal value."""

from .calculus import (
    Condition,
    InversePlan,
    LinearComb,
    apply_inverse,
    apply_linear,
    check_conditions,
    linear_operator,
    verify_conditions,
)
from .problems import (
    CATALOG_IDS,
    ExactSolution,
    ProblemSpec,
    catalog,
    heat_transfer_first_order_check,
    load_problem,
    nems_casimir,
    perturbation_uprime0,
    problem_file_path,
    validate_problem,
)
from .ratpoly import (
    VARIABLES,
    Monomial,
    Polynomial,
    UnboundVariableError,
    UnknownVariableError,
    parse_polynomial,
    rational,
)
from .residual import (
    BracketError,
    DivisionNearZero,
    GridResidual,
    OptimizeResult,
    ResidualEvaluator,
    SampleGrid,
    Table1Row,
    averaged_residual,
    error_field,
    error_remainder,
    error_vs_exact,
    exact_residual,
    max_error_remainder,
    optimal_c,
    residual_field,
    table1_rows,
)
from .scheme import (
    SeriesSolution,
    adm_solve,
    admp_solve,
    partial_sum,
    relate_terms,
    solution_from_text,
    solution_to_text,
)
from .series import (
    Add,
    Const,
    IntPow,
    Mul,
    NonInvertibleLeadingTerm,
    NonlinearExpr,
    SeriesComposer,
    TruncatedSeries,
    UnknownDeriv,
    adomian_list,
    compose,
    parse_expr,
    series_int_pow,
    series_mul,
    u,
)

__version__ = "0.1.0"
