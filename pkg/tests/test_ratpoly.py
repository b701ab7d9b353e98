from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from admp.ratpoly import (
    Monomial,
    Polynomial,
    UnboundVariableError,
    UnknownVariableError,
    parse_polynomial,
    rational,
)

P = parse_polynomial


# -- strategies ---------------------------------------------------------------

rationals = st.builds(
    Fraction, st.integers(-40, 40), st.integers(1, 12)
)


@st.composite
def polynomials(draw, max_terms=6, max_degree=6):
    n_terms = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(n_terms):
        exps = {}
        budget = max_degree
        for var in ("t", "x", "c", "eps"):
            e = draw(st.integers(0, min(3, budget)))
            budget -= e
            if e:
                exps[var] = e
        terms.append((Monomial(exps), draw(rationals)))
    return Polynomial(terms)


# -- construction and canonical form -------------------------------------------


def test_zero_polynomial_has_no_terms():
    assert Polynomial.zero().terms == {}
    assert Polynomial.const(0).terms == {}
    assert (P("t") - P("t")).terms == {}


def test_monomial_rejects_unknown_variable():
    with pytest.raises(UnknownVariableError):
        Monomial({"y": 1})
    with pytest.raises(UnknownVariableError):
        Polynomial.var("q")


def test_monomial_stores_no_zero_exponents():
    m = Monomial({"t": 2, "x": 0})
    assert m.exps == (("t", 2),)
    assert m.exponent("x") == 0
    assert m.degree == 2


def test_rational_coercion():
    assert rational("19/80") == Fraction(19, 80)
    assert rational(3) == 3
    with pytest.raises(TypeError):
        rational(0.5)


# -- arithmetic examples ---------------------------------------------------------


def test_additive_inverse():
    assert (P("t") + P("-t")).is_zero


def test_first_order_wave_shape():
    # (1 - c*t) * x
    assert P("1 - c*t") * P("x") == P("x - t*x*c")


def test_mul_against_pairwise_distributive_oracle():
    a = P("t + 1/2*t^2")
    b = P("t - 1")
    assert a * b == P("1/2*t^3 + 1/2*t^2 - t")
    # independent oracle: accumulate every pairwise monomial product by hand
    acc = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            key = tuple(sorted((ma * mb).exps))
            acc[key] = acc.get(key, Fraction(0)) + ca * cb
    oracle = Polynomial((Monomial(dict(k)), v) for k, v in acc.items())
    assert a * b == oracle


def test_pow_matches_repeated_mul():
    p = P("1 + t + x")
    assert p**3 == p * p * p
    assert p**0 == Polynomial.const(1)


# -- differentiation ---------------------------------------------------------------


def test_diff_constant_is_zero():
    assert Polynomial.const(1).diff("t").is_zero


def test_diff_first_order_slope():
    assert P("-c*t").diff("t") == P("-c")


def test_fourth_derivative_yields_force_sum():
    # the quartic carrier integrates the constant 19/20; four derivatives recover it
    p = P("19/480*x^4 - 19/120*x^3 + 19/80*x^2")
    assert p.diff("x", times=4) == Polynomial.const(Fraction(19, 20))
    # repeated single-variable power-rule oracle
    coeffs = {4: Fraction(19, 480), 3: Fraction(-19, 120), 2: Fraction(19, 80)}
    for _ in range(4):
        coeffs = {e - 1: c * e for e, c in coeffs.items() if e}
    oracle = sum(
        (Polynomial.var("x", e) * c if e else Polynomial.const(c) for e, c in coeffs.items()),
        Polynomial.zero(),
    )
    assert p.diff("x", times=4) == oracle


def test_diff_product_rule_property():
    a = P("t^2*x - c")
    b = P("x^2 + eps*t")
    lhs = (a * b).diff("x")
    assert lhs == a.diff("x") * b + a * b.diff("x")


# -- antiderivatives -----------------------------------------------------------------


def test_antideriv_of_one():
    assert Polynomial.const(1).antideriv("t", 0) == P("t")


def test_antideriv_sign_flip_gives_second_term_contribution():
    # -(integral of -t) = t^2/2, the classical order-2 piece
    assert -(P("-t").antideriv("t", 0)) == P("1/2*t^2")


def test_antideriv_nonzero_lower_limit():
    got = P("x - 1").antideriv("x", 1)
    assert got == P("1/2*x^2 - x + 1/2")
    # evaluate both sides at 20 rational points
    for k in range(20):
        q = Fraction(k - 7, 3)
        lhs = got.evaluate({"x": q})
        assert lhs == (q - 1) ** 2 / 2
    assert got.evaluate({"x": 1}) == 0


def test_antideriv_then_diff_round_trip():
    p = P("3*t^2*x - c*t + 7")
    assert p.antideriv("t", Fraction(1, 3)).diff("t") == p


# -- evaluation -----------------------------------------------------------------------


def test_evaluate_initial_condition_value():
    psi1 = P("x - t*x*c")
    assert psi1.evaluate({"x": 1, "t": 0, "c": 5}) == 1


def test_evaluate_direct_substitution():
    assert P("-1 + c^2*eps").evaluate({"c": 1, "eps": 2}) == 1


def test_evaluate_constant_force_sum():
    assert Polynomial.const(Fraction(19, 20)).evaluate({}) == Fraction(1, 5) + Fraction(1, 2) + Fraction(1, 4)


def test_evaluate_unbound_variable_names_it():
    with pytest.raises(UnboundVariableError, match="eps"):
        P("eps*t").evaluate({"t": 1})


def test_evaluate_float_path():
    p = P("1/3*t^2")
    out = p.evaluate({"t": 0.5})
    assert isinstance(out, float)
    assert out == pytest.approx(0.25 / 3)


def test_evaluate_exact_path_returns_rational():
    out = P("1/3*t^2").evaluate({"t": Fraction(1, 2)})
    assert out == Fraction(1, 12)


# -- substitution -----------------------------------------------------------------------


def test_substitute_collapse_to_classical():
    assert P("c^2*eps*t").substitute("c", 1) == P("eps*t")


def test_substitute_order_two_term():
    v2 = P("c*t - t + c^2*eps*t + 1/2*c^2*t^2")
    assert v2.substitute("c", 1) == P("eps*t + 1/2*t^2")


def test_substitute_analytic_parameter_value():
    # c -> 1/(1+eps) at eps=3
    assert P("-c").substitute("c", Fraction(1, 4)).evaluate({}) == Fraction(-1, 4)


def test_substitute_polynomial_composition():
    p = P("c^2 + t")
    q = P("1 + x")
    assert p.substitute("c", q) == P("x^2 + 2*x + t + 1")
    assert p.substitute("c", Polynomial.var("c")) == p


# -- ring axioms and calculus properties (randomized) ------------------------------------


@settings(max_examples=200, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + Polynomial.zero() == a
    assert a * Polynomial.const(1) == a


@settings(max_examples=100, deadline=None)
@given(polynomials(), st.sampled_from(["t", "x", "c", "eps"]), rationals)
def test_diff_inverts_antideriv(p, var, lower):
    assert p.antideriv(var, lower).diff(var) == p
    assert p.antideriv(var, lower).evaluate(
        {v: lower if v == var else Fraction(1, 3) for v in ("t", "x", "c", "eps")}
    ) == 0 or not p.antideriv(var, lower).variables()


@settings(max_examples=100, deadline=None)
@given(polynomials(max_terms=4), polynomials(max_terms=4))
def test_evaluate_commutes_with_arithmetic(a, b):
    point = {"t": Fraction(2, 3), "x": Fraction(-1, 2), "c": Fraction(5, 7), "eps": Fraction(1, 4)}
    assert (a + b).evaluate(point) == a.evaluate(point) + b.evaluate(point)
    assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point)


@settings(max_examples=100, deadline=None)
@given(polynomials(max_terms=4), st.sampled_from(["t", "x", "c", "eps"]))
def test_evaluate_commutes_with_diff(p, var):
    # restrict p to a line in `var` and differentiate the univariate restriction
    point = {"t": Fraction(1, 5), "x": Fraction(-2, 3), "c": Fraction(3, 4), "eps": Fraction(7, 2)}
    restricted = p
    for other, val in point.items():
        if other != var:
            restricted = restricted.substitute(other, val)
    coeffs = {}
    for mono, coeff in restricted.terms.items():
        coeffs[mono.exponent(var)] = coeffs.get(mono.exponent(var), Fraction(0)) + coeff
    slope_oracle = sum(
        e * c * point[var] ** (e - 1) for e, c in coeffs.items() if e
    )
    assert p.diff(var).evaluate(point) == slope_oracle


# -- canonical text form -------------------------------------------------------------------


def test_text_form_is_graded_lex_descending():
    p = P("x") + P("-t*x*c") + Polynomial.const(2)
    assert p.to_text() == "-t*x*c + x + 2"


def test_text_form_elides_unit_factors():
    assert P("t").to_text() == "t"
    assert P("-t").to_text() == "-t"
    assert P("2*t").to_text() == "2*t"
    assert P("1/2*t^2").to_text() == "1/2*t^2"
    assert Polynomial.zero().to_text() == "0"
    assert Polynomial.const(Fraction(-3, 4)).to_text() == "-3/4"


def test_parse_rejects_unknown_names():
    with pytest.raises(UnknownVariableError):
        P("2*y")


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        P("t +")
    with pytest.raises(ValueError):
        P("t ^ x")


@settings(max_examples=200, deadline=None)
@given(polynomials())
def test_text_round_trip(p):
    assert parse_polynomial(p.to_text()) == p
