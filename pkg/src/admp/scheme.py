"""Recursion drivers for the two decomposition schemes.

``adm_solve`` runs the classical recursion; ``admp_solve`` runs the
parameterized one, keeping the convergence-control variable c symbolic through
every term.  One symbolic solve therefore serves every candidate c value
downstream; numeric c enters only through substitution or evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .calculus import apply_inverse, apply_linear
from .ratpoly import Polynomial, RationalLike, parse_polynomial
from .series import SeriesComposer

__all__ = [
    "SeriesSolution",
    "adm_solve",
    "admp_solve",
    "partial_sum",
    "RelationCheck",
    "RelationReport",
    "relate_terms",
    "solution_to_text",
    "solution_from_text",
]

ADM = "ADM"
ADMP = "ADMP"


@dataclass(frozen=True)
class SeriesSolution:
    """Ordered solution terms of one method applied to one problem.

    ``terms[k]`` is the k-th solution term (c-free for ADM; a polynomial in c
    of degree at most k for ADMP).
    """

    method: str
    problem_id: str
    terms: tuple[Polynomial, ...]

    def __post_init__(self):
        if self.method not in (ADM, ADMP):
            raise ValueError(f"method must be {ADM!r} or {ADMP!r}, got {self.method!r}")
        if not self.terms:
            raise ValueError("a solution needs at least the order-0 term")

    @property
    def order(self) -> int:
        return len(self.terms) - 1


def _run_recursion(problem, n: int, parameterized: bool) -> list[Polynomial]:
    if n < 0:
        raise ValueError("order must be >= 0")
    plan = problem.inverse_plan
    term0 = apply_inverse(plan, problem.source_f) + problem.phi
    terms = [term0]
    if n == 0:
        return terms
    composer = SeriesComposer(problem.nonlinearity, problem.max_derivative_order)
    c = Polynomial.var("c")
    one = Polynomial.const(1)
    images: list[Polynomial] = []  # images[j] = L^-1[R(terms[j]) + (decomp poly j)]
    for k in range(1, n + 1):
        decomp_prev = composer.append(terms[-1])
        image = apply_inverse(
            plan, apply_linear(problem.remainder, terms[-1]) + decomp_prev
        )
        images.append(image)
        if parameterized:
            new = -(c * image)
            if k >= 2:
                new = new - (one - c) * images[k - 2]
        else:
            new = -image
        terms.append(new)
    return terms


def adm_solve(problem, n: int) -> SeriesSolution:
    """Classical recursion: u_0 = L^-1[f] + phi, then each term from the previous
    term's remainder image and decomposition polynomial."""
    return SeriesSolution(ADM, problem.id, tuple(_run_recursion(problem, n, False)))


def admp_solve(problem, n: int) -> SeriesSolution:
    """Parameterized recursion: v_1 draws on order 0 scaled by c; later terms mix
    the two previous orders with weights c and (1 - c), all with c symbolic."""
    return SeriesSolution(ADMP, problem.id, tuple(_run_recursion(problem, n, True)))


def partial_sum(sol: SeriesSolution, m: int, c_value: RationalLike | None = None) -> Polynomial:
    """Sum of terms 0..m, with c substituted when a value is given."""
    if m < 0 or m > sol.order:
        raise IndexError(f"partial sum order {m} outside 0..{sol.order}")
    acc = Polynomial.zero()
    for k in range(m + 1):
        acc = acc + sol.terms[k]
    if c_value is not None:
        acc = acc.substitute("c", c_value)
    return acc


@dataclass(frozen=True)
class RelationCheck:
    name: str
    passed: bool


@dataclass(frozen=True)
class RelationReport:
    checks: tuple[RelationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def relate_terms(adm: SeriesSolution, admp: SeriesSolution) -> RelationReport:
    """Exact identities tying the first parameterized terms to the classical ones:
    v0 = u0, v1 = c u1, v2 = c^2 u2 + (1-c) u1, v3 = c^3 u3 + 2 c (1-c) u2."""
    if adm.problem_id != admp.problem_id:
        raise ValueError("solutions to relate must come from the same problem")
    if adm.method != ADM or admp.method != ADMP:
        raise ValueError("relate_terms expects (ADM, ADMP) solutions in that order")
    if adm.order != admp.order or adm.order < 3:
        raise ValueError("relate_terms needs equal orders >= 3")
    c = Polynomial.var("c")
    one = Polynomial.const(1)
    u, v = adm.terms, admp.terms
    expected = [
        ("v0 = u0", u[0]),
        ("v1 = c*u1", c * u[1]),
        ("v2 = c^2*u2 + (1-c)*u1", c * c * u[2] + (one - c) * u[1]),
        ("v3 = c^3*u3 + 2*c*(1-c)*u2", c * c * c * u[3] + 2 * c * (one - c) * u[2]),
    ]
    checks = tuple(
        RelationCheck(name, v[k] == rhs) for k, (name, rhs) in enumerate(expected)
    )
    return RelationReport(checks)


# -- serialization ----------------------------------------------------------------


def solution_to_text(sol: SeriesSolution) -> str:
    """Structured text document: method, problem id, order, then one term per line."""
    lines = [
        f"method: {sol.method}",
        f"problem: {sol.problem_id}",
        f"order: {sol.order}",
    ]
    for k, term in enumerate(sol.terms):
        lines.append(f"term {k}: {term.to_text()}")
    return "\n".join(lines) + "\n"


def solution_from_text(text: str) -> SeriesSolution:
    """Parse the document written by :func:`solution_to_text`."""
    method = problem_id = None
    order = None
    terms: dict[int, Polynomial] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "method":
            method = value
        elif key == "problem":
            problem_id = value
        elif key == "order":
            order = int(value)
        elif key.startswith("term"):
            terms[int(key.split()[1])] = parse_polynomial(value)
        else:
            raise ValueError(f"unrecognized solution line: {raw!r}")
    if method is None or problem_id is None or order is None:
        raise ValueError("solution document is missing method/problem/order")
    if sorted(terms) != list(range(order + 1)):
        raise ValueError("solution document terms do not cover 0..order")
    return SeriesSolution(method, problem_id, tuple(terms[k] for k in range(order + 1)))
