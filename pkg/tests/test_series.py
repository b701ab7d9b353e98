import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from admp.ratpoly import Polynomial, parse_polynomial
from admp.series import (
    Add,
    Const,
    IntPow,
    Mul,
    NonInvertibleLeadingTerm,
    SeriesComposer,
    TruncatedSeries,
    UnknownDeriv,
    adomian_list,
    compose,
    expr_derivative_orders,
    parse_expr,
    series_int_pow,
    series_mul,
    u,
    validate_expr,
)

P = parse_polynomial


def S(*texts):
    return TruncatedSeries(tuple(P(t) for t in texts))


# -- truncated series basics ---------------------------------------------------


def test_series_keeps_explicit_order():
    s = S("1", "0", "0")
    assert s.order == 2
    assert s.truncated(4).order == 4
    assert s.truncated(1).order == 1
    with pytest.raises(ValueError):
        TruncatedSeries(())


def test_series_mul_identity():
    s = S("x", "-t*x", "t^2*x")
    one = TruncatedSeries.constant(1, 2)
    assert series_mul(one, s) == s


def test_series_mul_degree_one_product_by_hand():
    # (1 - c*t s) * (0 - c s): coefficient of s^1 of u * u' for the cooling problem
    left = S("1", "-c*t")
    right = S("0", "-c")
    got = series_mul(left, right)
    assert got.coeffs[0].is_zero
    assert got.coeffs[1] == P("-c")


def test_series_mul_square_matches_binomial():
    s = S("1", "t", "1/2*t^2")
    sq = series_mul(s, s)
    # coefficient of s^2 of (1 + u1 s + u2 s^2)^2 = 2 u2 + u1^2
    assert sq.coeffs[2] == 2 * P("1/2*t^2") + P("t") * P("t")


def test_series_mul_truncates_to_smaller_order():
    a = S("1", "t", "t^2")
    b = S("1", "x")
    assert series_mul(a, b).order == 1


# -- integer powers ---------------------------------------------------------------


def test_int_pow_constant_series():
    s = TruncatedSeries.constant(1, 3)
    assert series_int_pow(s, -3) == s


def test_int_pow_square():
    s = S("1", "t")
    got = series_int_pow(s.truncated(2), 2)
    assert got == S("1", "2*t", "t^2")


def test_int_pow_negative_first_coefficient_chain_rule():
    # coefficient of s^1 in (1 + v1 s)^-3 is -3 v1
    v1 = P("-19/80*c*x^2 + 19/120*c*x^3 - 19/480*c*x^4")
    s = TruncatedSeries((Polynomial.const(1), v1))
    got = series_int_pow(s, -3)
    assert got.coeffs[1] == -3 * v1


def test_int_pow_inverse_times_direct_is_one():
    s = S("2", "t", "x*t", "c")
    inv = series_int_pow(s, -2)
    direct = series_int_pow(s, 2)
    assert series_mul(inv, direct) == TruncatedSeries.constant(1, 3)


def test_int_pow_rejects_zero_leading_term():
    with pytest.raises(NonInvertibleLeadingTerm):
        series_int_pow(S("0", "t"), -1)


def test_int_pow_rejects_nonconstant_leading_term():
    with pytest.raises(NonInvertibleLeadingTerm):
        series_int_pow(S("x", "t"), -2)


# -- expression trees ----------------------------------------------------------------


def test_expr_operators_flatten():
    expr = Const(Polynomial.var("eps")) * u() * u(dt=1)
    assert isinstance(expr, Mul) and len(expr.children) == 3
    expr2 = u() + u(dx=1) + u(dx=2)
    assert isinstance(expr2, Add) and len(expr2.children) == 3


def test_expr_rejects_zero_power():
    with pytest.raises(ValueError):
        IntPow(u(), 0)


def test_expr_rejects_negative_derivative_orders():
    with pytest.raises(ValueError):
        UnknownDeriv(-1, 0)


def test_validate_expr_enforces_derivative_cap():
    with pytest.raises(ValueError):
        validate_expr(u(dx=5))
    validate_expr(u(dx=5), max_derivative_order=5)


def test_expr_derivative_orders():
    expr = u() * u(dx=1) + Const(Polynomial.const(2)) * u(dx=2, dt=1)
    assert expr_derivative_orders(expr) == {(0, 0), (1, 0), (2, 1)}


# -- composition -----------------------------------------------------------------------


def test_compose_wave_zeroth_coefficient():
    # N = u * u_x over the initial term x alone
    got = compose(u() * u(dx=1), [P("x")], order=0)
    assert got.coeffs == (P("x"),)


def test_compose_cooling_first_coefficient():
    # N = eps * u * u_t over [1, -t]: coefficient 1 is -eps
    expr = Const(Polynomial.var("eps")) * u() * u(dt=1)
    got = compose(expr, [P("1"), P("-t")], order=1)
    assert got.coeffs[0].is_zero
    assert got.coeffs[1] == P("-eps")


def _closed_form_decomposition(powers, terms):
    """Classical order-0..3 decomposition polynomials for N(u) = sum q_i u^i.

    Independent oracle: the closed forms
      A0 = N[u0], A1 = N'[u0] u1, A2 = N'[u0] u2 + N''[u0] u1^2 / 2,
      A3 = N'[u0] u3 + N''[u0] u1 u2 + N'''[u0] u1^3 / 6.
    """
    u0, u1, u2, u3 = terms

    def N(k):  # k-th derivative of N at u0
        acc = Polynomial.zero()
        for i, q in powers.items():
            if i >= k:
                fall = 1
                for j in range(k):
                    fall *= i - j
                acc = acc + q * fall * u0 ** (i - k)
        return acc

    half = Fraction(1, 2)
    sixth = Fraction(1, 6)
    return [
        N(0),
        N(1) * u1,
        N(1) * u2 + half * (N(2) * u1 * u1),
        N(1) * u3 + N(2) * u1 * u2 + sixth * (N(3) * u1 * u1 * u1),
    ]


def _random_poly(rng, vars=("t", "x"), max_deg=2, terms=3):
    out = Polynomial.zero()
    for _ in range(terms):
        coeff = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        mono = Polynomial.const(coeff)
        for var in vars:
            e = rng.randint(0, max_deg)
            if e:
                mono = mono * Polynomial.var(var, e)
        out = out + mono
    return out


def test_compose_matches_closed_forms_on_random_polynomial_nonlinearities():
    rng = random.Random(1234)
    for _ in range(12):
        powers = {i: _random_poly(rng, terms=2) for i in rng.sample(range(4), k=2)}
        expr = None
        for i, q in sorted(powers.items()):
            node = Const(q) if i == 0 else (Const(q) * u() ** i if i > 1 else Const(q) * u())
            expr = node if expr is None else expr + node
        terms = [_random_poly(rng) for _ in range(4)]
        got = adomian_list(expr, terms)
        want = _closed_form_decomposition(powers, terms)
        assert got == want


def test_adomian_list_length_and_order_zero():
    expr = u() * u(dx=1)
    got = adomian_list(expr, [P("x")])
    assert got == [P("x")]


def test_parameterized_decomposition_identities():
    # lift classical terms through the two-scheme relationship, then compare
    rng = random.Random(99)
    c = Polynomial.var("c")
    one = Polynomial.const(1)
    for expr in (u() * u(), u() * u(dx=1)):
        us = [_random_poly(rng) for _ in range(4)]
        vs = [
            us[0],
            c * us[1],
            c * c * us[2] + (one - c) * us[1],
            c * c * c * us[3] + 2 * c * (one - c) * us[2],
        ]
        A = adomian_list(expr, us)
        B = adomian_list(expr, vs)
        assert B[0] == A[0]
        assert B[1] == c * A[1]
        assert B[2] == c * c * A[2] + (one - c) * A[1]
        assert B[3] == c * c * c * A[3] + 2 * c * (one - c) * A[2]


def test_compose_is_linear_and_multiplicative():
    rng = random.Random(7)
    terms = [_random_poly(rng) for _ in range(4)]
    n1 = u() * u(dx=1)
    n2 = Const(P("2*t")) * u()
    lhs = compose(n1 + n2, terms)
    rhs_sum = compose(n1, terms)
    rhs2 = compose(n2, terms)
    assert lhs.coeffs == tuple(a + b for a, b in zip(rhs_sum.coeffs, rhs2.coeffs))
    prod = compose(n1 * n2, terms)
    assert prod == series_mul(compose(n1, terms), compose(n2, terms))


def test_compose_propagates_inversion_failure():
    with pytest.raises(NonInvertibleLeadingTerm):
        compose(u() ** -1, [P("x"), P("t")])


# -- incremental composer vs fresh composition ---------------------------------------


def test_composer_equals_fresh_composition():
    rng = random.Random(4321)
    exprs = [
        Const(Polynomial.var("eps")) * u() * u(dt=1),
        u() * u(dx=1),
        Const(P("1/5")) * u() ** -3 + Const(P("1/2")) * u() ** -2 + Const(P("1/4")) * u() ** -1,
        (u() + Const(P("1"))) ** 2 * u(dx=1),
    ]
    for expr in exprs:
        # leading term constant 1 so the reciprocal cases stay invertible
        terms = [Polynomial.const(1)] + [_random_poly(rng) for _ in range(5)]
        comp = SeriesComposer(expr)
        incremental = [comp.append(term) for term in terms]
        fresh = adomian_list(expr, terms)
        assert incremental == fresh


def test_composer_coefficient_bounds():
    comp = SeriesComposer(u() * u())
    comp.append(P("x"))
    assert comp.coefficient(0) == P("x^2")
    with pytest.raises(IndexError):
        comp.coefficient(1)


def test_composer_reports_inversion_failure_lazily():
    comp = SeriesComposer(u() ** -2)
    with pytest.raises(NonInvertibleLeadingTerm):
        comp.append(P("x"))


# -- text grammar -------------------------------------------------------------------


def test_parse_expr_cooling():
    assert parse_expr("eps * u * dt u") == Const(Polynomial.var("eps")) * u() * u(dt=1)


def test_parse_expr_beam():
    want = (
        Const(P("1/5")) * u() ** -3
        + Const(P("1/2")) * u() ** -2
        + Const(P("1/4")) * u() ** -1
    )
    assert parse_expr("1/5 * u^-3 + 1/2 * u^-2 + 1/4 * u^-1") == want


def test_parse_expr_wave():
    assert parse_expr("u * dx u") == u() * u(dx=1)


def test_parse_expr_mixed_derivatives_and_parens():
    got = parse_expr("dx^2 dt u * (u + 1)")
    assert got == u(dx=2, dt=1) * (u() + Const(Polynomial.const(1)))


def test_parse_expr_minus():
    got = parse_expr("u - 2 * dx u")
    series = compose(got, [P("x"), P("t*x")])
    direct = compose(u() + Const(Polynomial.const(-2)) * u(dx=1), [P("x"), P("t*x")])
    assert series == direct


def test_parse_expr_rejects_bad_tokens():
    with pytest.raises(ValueError):
        parse_expr("u ^ u")
    with pytest.raises(ValueError):
        parse_expr("dx")
    with pytest.raises(ValueError):
        parse_expr("u * * u")


# -- randomized agreement property ----------------------------------------------------


@st.composite
def small_exprs(draw):
    depth = draw(st.integers(0, 2))

    def build(d):
        if d == 0:
            return draw(
                st.sampled_from(
                    [u(), u(dx=1), u(dt=1), Const(P("t")), Const(P("2")), Const(P("x"))]
                )
            )
        kind = draw(st.sampled_from(["add", "mul", "pow"]))
        if kind == "add":
            return build(d - 1) + build(d - 1)
        if kind == "mul":
            return build(d - 1) * build(d - 1)
        return build(d - 1) ** draw(st.integers(1, 3))

    return build(depth)


@settings(max_examples=60, deadline=None)
@given(small_exprs(), st.integers(1, 4))
def test_composer_matches_compose_randomized(expr, n_terms):
    rng = random.Random(11)
    terms = [_random_poly(rng) for _ in range(n_terms)]
    comp = SeriesComposer(expr)
    incremental = [comp.append(term) for term in terms]
    assert incremental == adomian_list(expr, terms)
