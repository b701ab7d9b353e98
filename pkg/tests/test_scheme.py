from fractions import Fraction
from pathlib import Path

import pytest

from admp.problems import catalog
from admp.ratpoly import Polynomial, parse_polynomial
from admp.scheme import (
    SeriesSolution,
    adm_solve,
    admp_solve,
    partial_sum,
    relate_terms,
    solution_from_text,
    solution_to_text,
)

P = parse_polynomial
GOLDEN = Path(__file__).parent / "golden"


# -- classical scheme ------------------------------------------------------------


def test_cooling_classical_terms_to_order_three():
    sol = adm_solve(catalog("heat_transfer"), 3)
    assert sol.method == "ADM"
    assert sol.terms == (
        P("1"),
        P("-t"),
        P("eps*t + 1/2*t^2"),
        P("-eps^2*t - 3/2*eps*t^2 - 1/6*t^3"),
    )


def test_order_zero_is_recursion_base():
    for pid in ("heat_transfer", "nems_vdw", "burgers", "rlw"):
        spec = catalog(pid)
        sol = adm_solve(spec, 0)
        assert sol.terms == (spec.phi,)  # f = 0 for every catalog problem


def test_classical_terms_are_c_free():
    sol = adm_solve(catalog("burgers"), 4)
    for term in sol.terms:
        assert "c" not in term.variables()


def test_classical_wave_order_two_matches_collapsed_parameterized():
    spec = catalog("burgers")
    adm = adm_solve(spec, 2)
    admp = admp_solve(spec, 2)
    psi2_collapsed = partial_sum(admp, 2, c_value=1)
    assert partial_sum(adm, 2) == psi2_collapsed
    # from the printed order-2 sum with c = 1: (1 - t + t^2) x
    assert psi2_collapsed == P("x - t*x + t^2*x")


# -- parameterized scheme ----------------------------------------------------------


def test_cooling_parameterized_terms():
    sol = admp_solve(catalog("heat_transfer"), 3)
    assert sol.method == "ADMP"
    assert sol.terms[0] == P("1")
    assert sol.terms[1] == P("-c*t")
    assert sol.terms[2] == P("c*t - t + c^2*eps*t + 1/2*c^2*t^2")
    assert sol.terms[3] == P(
        "2*c*eps*t - 2*c^2*eps*t - c^3*eps^2*t"
        " + c*t^2 - c^2*t^2 - 3/2*c^3*eps*t^2 - 1/6*c^3*t^3"
    )


def test_beam_first_parameterized_term():
    sol = admp_solve(catalog("nems_vdw"), 1)
    assert sol.terms[1] == P("-19/80*c*x^2 + 19/120*c*x^3 - 19/480*c*x^4")


def test_wave_with_drift_first_order_sum():
    sol = admp_solve(catalog("rlw"), 1)
    assert partial_sum(sol, 1) == P("x - c*t - c*x*t")


# -- partial sums -------------------------------------------------------------------


def test_partial_sum_order_zero():
    sol = admp_solve(catalog("burgers"), 3)
    assert partial_sum(sol, 0) == sol.terms[0]


def test_partial_sum_bounds():
    sol = admp_solve(catalog("burgers"), 2)
    with pytest.raises(IndexError):
        partial_sum(sol, 3)
    with pytest.raises(IndexError):
        partial_sum(sol, -1)


def test_wave_fourth_order_sum_matches_printed_form():
    sol = admp_solve(catalog("burgers"), 4)
    want = P("x - t*x + t^2*x + 2*c^3*t^3*x - 3*c^2*t^3*x + c^4*t^4*x")
    assert partial_sum(sol, 4) == want


def test_cooling_slope_of_third_order_sum():
    sol = admp_solve(catalog("heat_transfer"), 3)
    slope = partial_sum(sol, 3).diff("t").substitute("t", 0)
    assert slope == P("-1 + 2*c*eps - c^2*eps - c^3*eps^2")


def test_partial_sum_with_c_value():
    sol = admp_solve(catalog("burgers"), 2)
    psi = partial_sum(sol, 2, c_value=Fraction(4, 5))
    assert psi == P("x - t*x + 16/25*t^2*x")


# -- term relationships ---------------------------------------------------------------


@pytest.mark.parametrize("pid", ["heat_transfer", "nems_vdw", "burgers", "rlw"])
def test_relate_terms_all_problems(pid):
    spec = catalog(pid)
    report = relate_terms(adm_solve(spec, 3), admp_solve(spec, 3))
    assert report.passed, [c.name for c in report.checks if not c.passed]


def test_relate_terms_requires_matching_orders():
    spec = catalog("burgers")
    with pytest.raises(ValueError):
        relate_terms(adm_solve(spec, 2), admp_solve(spec, 2))
    with pytest.raises(ValueError):
        relate_terms(adm_solve(spec, 3), admp_solve(spec, 4))
    with pytest.raises(ValueError):
        relate_terms(admp_solve(spec, 3), admp_solve(spec, 3))


def test_relate_terms_rejects_mixed_problems():
    with pytest.raises(ValueError):
        relate_terms(adm_solve(catalog("burgers"), 3), admp_solve(catalog("rlw"), 3))


@pytest.mark.parametrize("pid", ["heat_transfer", "nems_vdw", "burgers", "rlw"])
def test_collapse_at_unit_parameter(pid, solved):
    adm = solved(pid, "ADM")
    admp = solved(pid, "ADMP")
    for k in range(adm.order + 1):
        assert admp.terms[k].substitute("c", 1) == adm.terms[k], (pid, k)


@pytest.mark.parametrize("pid", ["heat_transfer", "nems_vdw", "burgers", "rlw"])
def test_parameter_degree_grows_at_most_linearly(pid, solved):
    admp = solved(pid, "ADMP")
    for k, term in enumerate(admp.terms):
        assert term.degree("c") <= k, (pid, k)


# -- serialization ---------------------------------------------------------------------


def test_solution_text_round_trip():
    sol = admp_solve(catalog("rlw"), 3)
    text = solution_to_text(sol)
    back = solution_from_text(text)
    assert back == sol


def test_solution_text_skips_comments():
    sol = adm_solve(catalog("heat_transfer"), 1)
    text = "# c = 1\n" + solution_to_text(sol)
    assert solution_from_text(text) == sol


def test_solution_from_text_rejects_gaps():
    with pytest.raises(ValueError):
        solution_from_text("method: ADM\nproblem: p\norder: 1\nterm 0: 1\n")


def test_solution_validates_method():
    with pytest.raises(ValueError):
        SeriesSolution("XYZ", "p", (Polynomial.const(1),))


@pytest.mark.parametrize("pid", ["heat_transfer", "nems_vdw", "burgers", "rlw"])
def test_golden_solutions_at_order_ten(pid, solved):
    text = (GOLDEN / f"{pid}_admp_n10.txt").read_text(encoding="utf-8")
    assert solution_to_text(solved(pid, "ADMP")) == text
