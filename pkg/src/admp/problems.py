"""The built-in problem catalog, exact solutions, and problem-file loading.

Four problems ship with the toolkit:

* ``heat_transfer`` — first-order nonlinear cooling ODE ``(1 + eps*u) u' + u = 0``,
  ``u(0) = 1``; the physical parameter eps stays symbolic through the
  recursion, so one solve covers every eps.
* ``nems_vdw`` — nondimensional cantilever beam BVP
  ``u'''' + (1/5) u^-3 + (1/2) u^-2 + (1/4) u^-1 = 0`` with clamped/free
  conditions; quadruple-integral inverse operator.
* ``burgers`` — ``u_t + u u_x + u_xxt = 0``, ``u(x,0) = x``; exact solution
  ``x / (1 + t)``.
* ``rlw`` — ``u_t + u_x + u u_x + u_xxt = 0``, ``u(x,0) = x``; exact solution
  ``(x - t) / (1 + t)``.

User problems load from JSON documents with the same fields (see
``load_problem``); the four catalog entries also ship as example files under
``admp/data``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Mapping

from .calculus import (
    Condition,
    ConditionReport,
    InversePlan,
    LinearComb,
    verify_conditions,
)
from .ratpoly import Polynomial, RationalLike, parse_polynomial, rational
from .residual import SampleGrid, exact_residual
from .series import (
    DEFAULT_MAX_DERIVATIVE_ORDER,
    Const,
    NonlinearExpr,
    parse_expr,
    u,
)

__all__ = [
    "ExactSolution",
    "ProblemSpec",
    "CATALOG_IDS",
    "catalog",
    "nems_casimir",
    "perturbation_uprime0",
    "FirstOrderCheck",
    "heat_transfer_first_order_check",
    "load_problem",
    "problem_file_path",
    "ProblemValidation",
    "validate_problem",
]

CATALOG_IDS = ("heat_transfer", "nems_vdw", "burgers", "rlw")


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form solution: the evaluator plus every partial the operators need."""

    evaluator: Callable[[Mapping], object]
    partials: Mapping[tuple[int, int], Callable[[Mapping], object]]
    description: str

    def __call__(self, point: Mapping):
        return self.evaluator(point)


@dataclass(frozen=True)
class ProblemSpec:
    """Full statement of one problem in operator-split form L + R + N = f."""

    id: str
    independent_vars: tuple[str, ...]
    inverse_plan: InversePlan
    remainder: LinearComb
    nonlinearity: NonlinearExpr
    source_f: Polynomial
    phi: Polynomial
    conditions: tuple[Condition, ...]
    default_grid: SampleGrid
    domain: Mapping[str, tuple[Fraction, Fraction]]
    exact: ExactSolution | None = None
    parameters: Mapping[str, Fraction] = field(default_factory=dict)
    max_derivative_order: int = DEFAULT_MAX_DERIVATIVE_ORDER
    note: str = ""


def _burgers_exact(point: Mapping):
    return point["x"] / (1 + point["t"])


def _rlw_exact(point: Mapping):
    return (point["x"] - point["t"]) / (1 + point["t"])


def _build_heat_transfer() -> ProblemSpec:
    eps = Polynomial.var("eps")
    spec = ProblemSpec(
        id="heat_transfer",
        independent_vars=("t",),
        inverse_plan=InversePlan.of(("t", 0)),
        remainder=LinearComb.identity(),
        nonlinearity=Const(eps) * u() * u(dt=1),
        source_f=Polynomial.zero(),
        phi=Polynomial.const(1),
        conditions=(Condition.of(0, 0, {"t": 0}, 1),),
        default_grid=SampleGrid.regular(
            {"t": (Fraction(1, 20), Fraction(1, 20), 20)}, label="t=j/20, j=1..20"
        ),
        domain={"t": (Fraction(0), Fraction(1))},
        parameters={},
    )
    return spec


def _build_nems_vdw() -> ProblemSpec:
    alpha3, alpha2, alpha1 = Fraction(1, 5), Fraction(1, 2), Fraction(1, 4)
    nonlinearity = (
        Const(Polynomial.const(alpha3)) * u() ** -3
        + Const(Polynomial.const(alpha2)) * u() ** -2
        + Const(Polynomial.const(alpha1)) * u() ** -1
    )
    return ProblemSpec(
        id="nems_vdw",
        independent_vars=("x",),
        inverse_plan=InversePlan.of(("x", 1), ("x", 1), ("x", 0), ("x", 0)),
        remainder=LinearComb.zero(),
        nonlinearity=nonlinearity,
        source_f=Polynomial.zero(),
        phi=Polynomial.const(1),
        conditions=(
            Condition.of(0, 0, {"x": 0}, 1),
            Condition.of(1, 0, {"x": 0}, 0),
            Condition.of(2, 0, {"x": 1}, 0),
            Condition.of(3, 0, {"x": 1}, 0),
        ),
        # j runs from 0: the residual at x=0 vanishes identically for every
        # order beyond the first, and the order-1 optimum is only consistent
        # with the clamped end included.
        default_grid=SampleGrid.regular(
            {"x": (Fraction(0), Fraction(1, 20), 21)}, label="x=j/20, j=0..20"
        ),
        domain={"x": (Fraction(0), Fraction(1))},
        parameters={"alpha3": alpha3, "alpha2": alpha2, "alpha1": alpha1},
    )


def _build_burgers() -> ProblemSpec:
    return ProblemSpec(
        id="burgers",
        independent_vars=("t", "x"),
        inverse_plan=InversePlan.of(("t", 0)),
        remainder=LinearComb.of((1, 2, 1)),
        nonlinearity=u() * u(dx=1),
        source_f=Polynomial.zero(),
        phi=Polynomial.var("x"),
        conditions=(Condition.of(0, 0, {"t": 0}, Polynomial.var("x")),),
        default_grid=SampleGrid.regular(
            {
                "t": (Fraction(1, 20), Fraction(1, 20), 20),
                "x": (Fraction(1, 2), Fraction(1, 2), 20),
            },
            label="(x,t)=(i/2,j/20), i,j=1..20",
        ),
        domain={
            "t": (Fraction(1, 20), Fraction(1)),
            "x": (Fraction(1, 2), Fraction(10)),
        },
        exact=ExactSolution(
            evaluator=_burgers_exact,
            partials={
                (0, 0): _burgers_exact,
                (1, 0): lambda p: 1 / (1 + p["t"]),
                (0, 1): lambda p: -p["x"] / (1 + p["t"]) ** 2,
                (2, 1): lambda p: 0 * p["t"],
            },
            description="x/(1+t)",
        ),
        parameters={},
    )


def _build_rlw() -> ProblemSpec:
    return ProblemSpec(
        id="rlw",
        independent_vars=("t", "x"),
        inverse_plan=InversePlan.of(("t", 0)),
        remainder=LinearComb.of((1, 1, 0), (1, 2, 1)),
        nonlinearity=u() * u(dx=1),
        source_f=Polynomial.zero(),
        phi=Polynomial.var("x"),
        conditions=(Condition.of(0, 0, {"t": 0}, Polynomial.var("x")),),
        default_grid=SampleGrid.regular(
            {
                "t": (Fraction(1, 20), Fraction(1, 20), 20),
                "x": (Fraction(1, 2), Fraction(1, 2), 20),
            },
            label="(x,t)=(i/2,j/20), i,j=1..20",
        ),
        domain={
            "t": (Fraction(1, 20), Fraction(1)),
            "x": (Fraction(1, 2), Fraction(10)),
        },
        exact=ExactSolution(
            evaluator=_rlw_exact,
            partials={
                (0, 0): _rlw_exact,
                (1, 0): lambda p: 1 / (1 + p["t"]),
                (0, 1): lambda p: -(1 + p["x"]) / (1 + p["t"]) ** 2,
                (2, 1): lambda p: 0 * p["t"],
            },
            description="(x-t)/(1+t)",
        ),
        parameters={},
    )


_BUILDERS = {
    "heat_transfer": _build_heat_transfer,
    "nems_vdw": _build_nems_vdw,
    "burgers": _build_burgers,
    "rlw": _build_rlw,
}


@lru_cache(maxsize=None)
def catalog(problem_id: str) -> ProblemSpec:
    """The built-in problem with the given id; validates its own conditions."""
    builder = _BUILDERS.get(problem_id)
    if builder is None:
        raise ValueError(
            f"unknown problem id: {problem_id!r} (known: {', '.join(CATALOG_IDS)})"
        )
    spec = builder()
    report = verify_conditions(spec.inverse_plan, spec.phi, spec.conditions)
    if not report.passed:
        raise AssertionError(f"catalog problem {problem_id!r} fails its own conditions")
    return spec


def nems_casimir(
    alpha4: RationalLike = Fraction(1, 5),
    alpha2: RationalLike = Fraction(1, 2),
    alpha1: RationalLike = Fraction(1, 4),
) -> ProblemSpec:
    """Beam problem with the quartic-reciprocal force term instead of the cubic one.

    Same grammar and operators as ``nems_vdw``; ships without reference values.
    """
    base = catalog("nems_vdw")
    a4, a2, a1 = rational(alpha4), rational(alpha2), rational(alpha1)
    nonlinearity = (
        Const(Polynomial.const(a4)) * u() ** -4
        + Const(Polynomial.const(a2)) * u() ** -2
        + Const(Polynomial.const(a1)) * u() ** -1
    )
    return ProblemSpec(
        id="nems_casimir",
        independent_vars=base.independent_vars,
        inverse_plan=base.inverse_plan,
        remainder=base.remainder,
        nonlinearity=nonlinearity,
        source_f=base.source_f,
        phi=base.phi,
        conditions=base.conditions,
        default_grid=base.default_grid,
        domain=base.domain,
        parameters={"alpha4": a4, "alpha2": a2, "alpha1": a1},
        note="no reference baseline",
    )


def perturbation_uprime0(n: int, eps_value: RationalLike) -> Fraction:
    """Partial sum of the alternating series for the initial slope: -sum_{k<=n} (-eps)^k."""
    if n < 0:
        raise ValueError("order must be >= 0")
    eps = rational(eps_value)
    total = Fraction(0)
    power = Fraction(1)
    for _ in range(n + 1):
        total += power
        power *= -eps
    return -total


@dataclass(frozen=True)
class FirstOrderCheck:
    eps: Fraction
    c_value: Fraction
    actual: Fraction
    expected: Fraction

    @property
    def passed(self) -> bool:
        return self.actual == self.expected


def heat_transfer_first_order_check(eps_value: RationalLike) -> FirstOrderCheck:
    """First-order parameterized slope at the analytic c equals the exact slope.

    With c = 1/(1+eps) the first-order approximation already reproduces
    u'(0) = -1/(1+eps), exactly in rational arithmetic.
    """
    from .scheme import admp_solve, partial_sum

    eps = rational(eps_value)
    if eps == -1:
        raise ValueError("eps = -1 makes the analytic parameter value singular")
    c_value = 1 / (1 + eps)
    sol = admp_solve(catalog("heat_transfer"), 1)
    psi1 = partial_sum(sol, 1)
    slope = psi1.diff("t").substitute("t", 0).substitute("c", c_value)
    actual = slope.evaluate({"eps": eps})
    return FirstOrderCheck(eps, c_value, actual, -c_value)


# -- problem files -----------------------------------------------------------------


def problem_file_path(problem_id: str) -> Path:
    """Path of the shipped example file for a catalog problem."""
    if problem_id not in CATALOG_IDS:
        raise ValueError(f"unknown problem id: {problem_id!r}")
    return Path(__file__).parent / "data" / f"{problem_id}.json"


def _grid_from_data(data: Mapping) -> SampleGrid:
    label = data.get("label", "")
    if "ranges" in data:
        ranges = {
            var: (rational(start), rational(step), int(count))
            for var, (start, step, count) in data["ranges"].items()
        }
        return SampleGrid.regular(ranges, label=label)
    points = tuple(
        {var: rational(val) for var, val in point.items()} for point in data["points"]
    )
    return SampleGrid(points, label=label)


def load_problem(path: str | Path) -> ProblemSpec:
    """Load a problem from a JSON document.

    Fields: ``id``, ``independent_vars``, ``inverse_plan`` (innermost step
    first, e.g. ``[["x", 1], ["x", 1], ["x", 0], ["x", 0]]``), ``remainder``
    (list of ``[coeff, order_x, order_t]``), ``nonlinearity`` (expression
    grammar), ``f``, ``phi``, ``conditions``, ``grid``, ``domain``, optional
    ``parameters`` and ``max_derivative_order``.  All rationals are written as
    integers or strings like ``"1/20"``.
    """
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    independent_vars = tuple(data["independent_vars"])
    for var in independent_vars:
        if var not in ("t", "x"):
            raise ValueError(f"independent variables must be t or x, got {var!r}")
    conditions = tuple(
        Condition.of(
            int(cond["dx"]),
            int(cond["dt"]),
            {var: rational(val) for var, val in cond["point"].items()},
            parse_polynomial(str(cond["value"])),
        )
        for cond in data.get("conditions", ())
    )
    spec = ProblemSpec(
        id=str(data["id"]),
        independent_vars=independent_vars,
        inverse_plan=InversePlan.of(
            *[(var, rational(lo)) for var, lo in data["inverse_plan"]]
        ),
        remainder=LinearComb.of(
            *[(rational(coeff), int(a), int(b)) for coeff, a, b in data.get("remainder", ())]
        ),
        nonlinearity=parse_expr(data["nonlinearity"]),
        source_f=parse_polynomial(str(data.get("f", "0"))),
        phi=parse_polynomial(str(data["phi"])),
        conditions=conditions,
        default_grid=_grid_from_data(data["grid"]),
        domain={
            var: (rational(lo), rational(hi))
            for var, (lo, hi) in data["domain"].items()
        },
        parameters={k: rational(v) for k, v in data.get("parameters", {}).items()},
        max_derivative_order=int(
            data.get("max_derivative_order", DEFAULT_MAX_DERIVATIVE_ORDER)
        ),
    )
    return spec


@dataclass(frozen=True)
class ProblemValidation:
    conditions: ConditionReport
    exact_residual_max: float | None

    @property
    def passed(self) -> bool:
        ok = self.conditions.passed
        if self.exact_residual_max is not None:
            ok = ok and self.exact_residual_max <= 1e-10
        return ok


def validate_problem(spec: ProblemSpec) -> ProblemValidation:
    """Conditions check plus, when an exact solution is present, the requirement
    that it annihilates the operator on the default grid."""
    report = verify_conditions(spec.inverse_plan, spec.phi, spec.conditions)
    residual_max = None
    if spec.exact is not None:
        worst = 0.0
        for point in spec.default_grid.points:
            worst = max(worst, abs(float(exact_residual(spec, point))))
        residual_max = worst
    return ProblemValidation(report, residual_max)
