"""Linear side of the method: remainder operators and inverse linear operators.

A remainder operator is a linear combination of mixed partial derivatives; an
inverse operator is a plan of nested definite antiderivatives applied
innermost-first, each step with its own rational lower limit.  Initial and
boundary conditions are verified against the plan and the carrier polynomial
rather than solved for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .ratpoly import Polynomial, RationalLike, rational

__all__ = [
    "LinearComb",
    "InversePlan",
    "Condition",
    "ConditionCheck",
    "ConditionReport",
    "apply_linear",
    "apply_inverse",
    "linear_operator",
    "check_conditions",
    "verify_conditions",
]


@dataclass(frozen=True)
class LinearComb:
    """Sum of mixed partials: terms are (coefficient, order in x, order in t)."""

    terms: tuple[tuple[Fraction, int, int], ...]

    def __post_init__(self):
        seen = set()
        for coeff, a, b in self.terms:
            if not coeff:
                raise ValueError("linear-combination coefficients must be nonzero")
            if a < 0 or b < 0:
                raise ValueError("derivative orders must be non-negative")
            if (a, b) in seen:
                raise ValueError(f"duplicate derivative pair ({a},{b})")
            seen.add((a, b))

    @classmethod
    def of(cls, *terms: tuple[RationalLike, int, int]) -> "LinearComb":
        return cls(tuple((rational(coeff), a, b) for coeff, a, b in terms))

    @classmethod
    def identity(cls) -> "LinearComb":
        return cls.of((1, 0, 0))

    @classmethod
    def zero(cls) -> "LinearComb":
        return cls(())


def apply_linear(comb: LinearComb, p: Polynomial) -> Polynomial:
    """Exact image of p under the linear combination of partial derivatives."""
    acc = Polynomial.zero()
    for coeff, a, b in comb.terms:
        acc = acc + p.diff("x", a).diff("t", b) * coeff
    return acc


@dataclass(frozen=True)
class InversePlan:
    """Nested definite antiderivatives, innermost step first: (variable, lower limit)."""

    steps: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("an inverse plan needs at least one step")
        for var, _ in self.steps:
            if var not in ("t", "x"):
                raise ValueError(f"inverse-plan variable must be t or x, got {var!r}")

    @classmethod
    def of(cls, *steps: tuple[str, RationalLike]) -> "InversePlan":
        return cls(tuple((var, rational(lo)) for var, lo in steps))

    def variables(self) -> frozenset[str]:
        return frozenset(var for var, _ in self.steps)


def apply_inverse(plan: InversePlan, p: Polynomial) -> Polynomial:
    """Fold the plan's definite antiderivatives over p, innermost step first."""
    for var, lower in plan.steps:
        p = p.antideriv(var, lower)
    return p


def linear_operator(plan: InversePlan) -> LinearComb:
    """The differential operator the plan inverts (one mixed partial, coefficient 1)."""
    a = sum(1 for var, _ in plan.steps if var == "x")
    b = sum(1 for var, _ in plan.steps if var == "t")
    return LinearComb.of((1, a, b))


@dataclass(frozen=True)
class Condition:
    """One initial/boundary condition: the (dx, dt) derivative at a point equals ``value``.

    The point may bind a subset of the variables (e.g. only t for an initial
    condition of a PDE); the check is exact polynomial equality after
    substitution, so ``value`` may itself involve the free variables.
    """

    dx: int
    dt: int
    point: tuple[tuple[str, Fraction], ...]
    value: Polynomial

    @classmethod
    def of(
        cls,
        dx: int,
        dt: int,
        point: Mapping[str, RationalLike],
        value: Polynomial | RationalLike,
    ) -> "Condition":
        val = value if isinstance(value, Polynomial) else Polynomial.const(value)
        return cls(dx, dt, tuple(sorted((v, rational(q)) for v, q in point.items())), val)

    def describe(self) -> str:
        at = ", ".join(f"{v}={q}" for v, q in self.point)
        return f"d^{self.dx}_x d^{self.dt}_t at ({at}) = {self.value.to_text()}"


@dataclass(frozen=True)
class ConditionCheck:
    subject: str
    condition: Condition
    actual: Polynomial
    passed: bool


@dataclass(frozen=True)
class ConditionReport:
    checks: tuple[ConditionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[ConditionCheck]:
        return [check for check in self.checks if not check.passed]


def _restrict(p: Polynomial, condition: Condition) -> Polynomial:
    q = p.diff("x", condition.dx).diff("t", condition.dt)
    for var, val in condition.point:
        q = q.substitute(var, val)
    return q


def check_conditions(
    p: Polynomial, conditions: Sequence[Condition], subject: str = "psi"
) -> ConditionReport:
    """Exact check of a polynomial (e.g. a partial sum) against every condition."""
    checks = []
    for condition in conditions:
        actual = _restrict(p, condition)
        checks.append(
            ConditionCheck(subject, condition, actual, actual == condition.value)
        )
    return ConditionReport(tuple(checks))


def _probe_monomials(variables: Sequence[str], max_degree: int) -> list[Polynomial]:
    probes = [Polynomial.const(1)]
    for deg in range(1, max_degree + 1):
        for combo in combinations_with_replacement(variables, deg):
            exps: dict[str, int] = {}
            for var in combo:
                exps[var] = exps.get(var, 0) + 1
            mono = Polynomial.const(1)
            for var, e in sorted(exps.items()):
                mono = mono * Polynomial.var(var, e)
            probes.append(mono)
    return probes


def verify_conditions(
    plan: InversePlan,
    phi: Polynomial,
    conditions: Sequence[Condition],
    probe_degree: int = 6,
) -> ConditionReport:
    """Check that partial sums built from this plan and phi meet the conditions.

    Any partial sum is phi + a combination of inverse-operator images, so it
    suffices that phi satisfies the stated conditions and that images of the
    inverse operator satisfy their homogeneous forms.  The homogeneous half is
    checked on all probe monomials up to ``probe_degree`` in the variables the
    plan and data involve.
    """
    checks = list(check_conditions(phi, conditions, "phi").checks)
    vars_involved = set(plan.variables()) | set(phi.variables())
    for condition in conditions:
        vars_involved |= set(condition.value.variables())
        vars_involved |= {v for v, _ in condition.point}
    probe_vars = sorted(v for v in vars_involved if v in ("t", "x"))
    homogeneous = [
        Condition(cond.dx, cond.dt, cond.point, Polynomial.zero()) for cond in conditions
    ]
    for probe in _probe_monomials(probe_vars, probe_degree):
        image = apply_inverse(plan, probe)
        subject = f"L^-1[{probe.to_text()}]"
        for condition in homogeneous:
            actual = _restrict(image, condition)
            checks.append(ConditionCheck(subject, condition, actual, actual.is_zero))
    return ConditionReport(tuple(checks))
