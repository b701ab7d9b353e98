"""Truncated formal series with polynomial coefficients and decomposition polynomials.

A :class:`TruncatedSeries` carries the coefficients of powers of the embedding
parameter; the parameter itself is never materialized as a symbol, only as the
coefficient index.  Composing a nonlinear operator expression with the series
of solution terms and reading off coefficient k yields the decomposition
polynomial of order k (the classical one for plain terms, the parameterized
one for c-dependent terms).

Two composition routes are provided on purpose:

* :func:`compose` builds the whole truncated series in one pass from the full
  series operations (:func:`series_mul`, :func:`series_int_pow`);
* :class:`SeriesComposer` extends one coefficient at a time as new solution
  terms arrive, which is what the recursion drivers use.

They must agree exactly; the test suite proves it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ratpoly import Polynomial, RationalLike, rational

__all__ = [
    "TruncatedSeries",
    "NonlinearExpr",
    "UnknownDeriv",
    "Const",
    "Add",
    "Mul",
    "IntPow",
    "u",
    "NonInvertibleLeadingTerm",
    "series_mul",
    "series_int_pow",
    "compose",
    "adomian_list",
    "SeriesComposer",
    "validate_expr",
    "expr_derivative_orders",
    "parse_expr",
    "DEFAULT_MAX_DERIVATIVE_ORDER",
]

#: Derivative orders above this are rejected unless explicitly raised.
DEFAULT_MAX_DERIVATIVE_ORDER = 4


class NonInvertibleLeadingTerm(ValueError):
    """Negative series power requested around a zero or non-constant leading term."""


@dataclass(frozen=True)
class TruncatedSeries:
    """Finite series: ``coeffs[k]`` multiplies the k-th power of the embedding parameter.

    Trailing zero coefficients are retained; the truncation order is explicit,
    never inferred.
    """

    coeffs: tuple[Polynomial, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series needs at least the order-0 coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_polys(cls, polys: Iterable[Polynomial]) -> "TruncatedSeries":
        return cls(tuple(polys))

    @classmethod
    def constant(cls, value: Polynomial | RationalLike, order: int) -> "TruncatedSeries":
        p = value if isinstance(value, Polynomial) else Polynomial.const(value)
        zero = Polynomial.zero()
        return cls((p,) + (zero,) * order)

    def truncated(self, order: int) -> "TruncatedSeries":
        """Copy with the given order: pads with zero coefficients or drops the tail."""
        if order == self.order:
            return self
        if order < self.order:
            return TruncatedSeries(self.coeffs[: order + 1])
        zero = Polynomial.zero()
        return TruncatedSeries(self.coeffs + (zero,) * (order - self.order))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller of the two orders."""
    order = min(a.order, b.order)
    out = []
    for k in range(order + 1):
        acc = Polynomial.zero()
        for i in range(k + 1):
            ai = a.coeffs[i]
            bj = b.coeffs[k - i]
            if ai.is_zero or bj.is_zero:
                continue
            acc = acc + ai * bj
        out.append(acc)
    return TruncatedSeries(tuple(out))


def _series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    lead = a.coeffs[0]
    if lead.is_zero or not lead.is_constant:
        raise NonInvertibleLeadingTerm(
            "series inversion needs a nonzero constant leading coefficient, "
            f"got {lead.to_text()!r}"
        )
    inv0 = 1 / lead.constant_value()
    out = [Polynomial.const(inv0)]
    for k in range(1, a.order + 1):
        acc = Polynomial.zero()
        for i in range(1, k + 1):
            ai = a.coeffs[i]
            if ai.is_zero:
                continue
            acc = acc + ai * out[k - i]
        out.append(acc * (-inv0))
    return TruncatedSeries(tuple(out))


def series_int_pow(a: TruncatedSeries, n: int) -> TruncatedSeries:
    """Integer power of a truncated series; negative powers invert the series first.

    Negative powers require the leading coefficient to be a nonzero constant
    (raises :class:`NonInvertibleLeadingTerm` otherwise), which keeps every
    coefficient a polynomial.
    """
    if n == 0:
        return TruncatedSeries.constant(Polynomial.const(1), a.order)
    if n < 0:
        return series_int_pow(_series_inverse(a), -n)
    # repeated squaring, truncating at the input order throughout
    result = TruncatedSeries.constant(Polynomial.const(1), a.order)
    base = a
    while n:
        if n & 1:
            result = series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


# -- nonlinear operator expressions -------------------------------------------


class NonlinearExpr:
    """Base class for nonlinear-operator expression trees.

    Nodes are immutable and support ``+``, ``*``, unary ``-`` and ``**`` so
    operators read the way they are written:  ``Const(eps) * u() * u(dt=1)``.
    """

    def _coerce(self, other) -> "NonlinearExpr | None":
        if isinstance(other, NonlinearExpr):
            return other
        if isinstance(other, Polynomial):
            return Const(other)
        try:
            return Const(Polynomial.const(rational(other)))
        except (TypeError, ValueError):
            return None

    @staticmethod
    def _chain(kind, left, right):
        # flatten so a + b + c and a * b * c have one n-ary node regardless of
        # whether they came from operators or the text parser
        parts = []
        for item in (left, right):
            parts.extend(item.children if isinstance(item, kind) else (item,))
        return kind(tuple(parts))

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._chain(Add, self, o)

    def __radd__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._chain(Add, o, self)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._chain(Add, self, -o)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._chain(Mul, self, o)

    def __rmul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._chain(Mul, o, self)

    def __neg__(self):
        return self._chain(Mul, Const(Polynomial.const(-1)), self)

    def __pow__(self, n: int):
        return IntPow(self, n)


@dataclass(frozen=True)
class UnknownDeriv(NonlinearExpr):
    """The unknown u differentiated dx times in x and dt times in t; (0,0) is u itself."""

    dx: int = 0
    dt: int = 0

    def __post_init__(self):
        if self.dx < 0 or self.dt < 0:
            raise ValueError("derivative orders must be non-negative")


@dataclass(frozen=True)
class Const(NonlinearExpr):
    """A coefficient polynomial (may involve registry variables, e.g. eps)."""

    value: Polynomial


@dataclass(frozen=True)
class Add(NonlinearExpr):
    children: tuple[NonlinearExpr, ...]


@dataclass(frozen=True)
class Mul(NonlinearExpr):
    children: tuple[NonlinearExpr, ...]


@dataclass(frozen=True)
class IntPow(NonlinearExpr):
    """Integer power, negative allowed; n = 0 is rejected."""

    base: NonlinearExpr
    n: int

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("IntPow exponent must be nonzero")


def u(dx: int = 0, dt: int = 0) -> UnknownDeriv:
    """Shorthand for :class:`UnknownDeriv`."""
    return UnknownDeriv(dx, dt)


def validate_expr(expr: NonlinearExpr, max_derivative_order: int = DEFAULT_MAX_DERIVATIVE_ORDER) -> None:
    """Reject malformed expressions early (derivative order beyond the configured cap)."""
    if isinstance(expr, UnknownDeriv):
        if expr.dx > max_derivative_order or expr.dt > max_derivative_order:
            raise ValueError(
                f"derivative order ({expr.dx},{expr.dt}) exceeds the maximum "
                f"{max_derivative_order}"
            )
    elif isinstance(expr, (Add, Mul)):
        for child in expr.children:
            validate_expr(child, max_derivative_order)
    elif isinstance(expr, IntPow):
        validate_expr(expr.base, max_derivative_order)
    elif not isinstance(expr, Const):
        raise TypeError(f"not a nonlinear-expression node: {expr!r}")


def expr_derivative_orders(expr: NonlinearExpr) -> set[tuple[int, int]]:
    """All (dx, dt) pairs of the unknown appearing in the expression."""
    out: set[tuple[int, int]] = set()

    def walk(node):
        if isinstance(node, UnknownDeriv):
            out.add((node.dx, node.dt))
        elif isinstance(node, (Add, Mul)):
            for child in node.children:
                walk(child)
        elif isinstance(node, IntPow):
            walk(node.base)

    walk(expr)
    return out


def compose(
    expr: NonlinearExpr,
    terms: Sequence[Polynomial],
    order: int | None = None,
    max_derivative_order: int = DEFAULT_MAX_DERIVATIVE_ORDER,
) -> TruncatedSeries:
    """Truncated series of the expression applied to the generating series of ``terms``.

    Coefficient k of the result is the order-k decomposition polynomial of the
    nonlinearity over ``terms``.
    """
    if not terms:
        raise ValueError("terms must be nonempty")
    validate_expr(expr, max_derivative_order)
    if order is None:
        order = len(terms) - 1
    zero = Polynomial.zero()
    padded = [terms[k] if k < len(terms) else zero for k in range(order + 1)]
    cache: dict[NonlinearExpr, TruncatedSeries] = {}

    def build(node: NonlinearExpr) -> TruncatedSeries:
        got = cache.get(node)
        if got is not None:
            return got
        if isinstance(node, UnknownDeriv):
            coeffs = [p.diff("x", node.dx).diff("t", node.dt) for p in padded]
            result = TruncatedSeries(tuple(coeffs))
        elif isinstance(node, Const):
            result = TruncatedSeries.constant(node.value, order)
        elif isinstance(node, Add):
            acc = [Polynomial.zero()] * (order + 1)
            for child in node.children:
                cs = build(child)
                acc = [a + b for a, b in zip(acc, cs.coeffs)]
            result = TruncatedSeries(tuple(acc))
        elif isinstance(node, Mul):
            result = build(node.children[0])
            for child in node.children[1:]:
                result = series_mul(result, build(child))
        elif isinstance(node, IntPow):
            result = series_int_pow(build(node.base), node.n)
        else:
            raise TypeError(f"not a nonlinear-expression node: {node!r}")
        cache[node] = result
        return result

    return build(expr)


def adomian_list(
    expr: NonlinearExpr,
    terms: Sequence[Polynomial],
    max_derivative_order: int = DEFAULT_MAX_DERIVATIVE_ORDER,
) -> list[Polynomial]:
    """Decomposition polynomials of orders 0..len(terms)-1 over the given terms."""
    return list(compose(expr, terms, len(terms) - 1, max_derivative_order).coeffs)


# -- incremental composition ---------------------------------------------------


class _Node:
    __slots__ = ("_coeffs",)

    def __init__(self):
        self._coeffs: list[Polynomial] = []

    def coeff(self, k: int) -> Polynomial:
        while len(self._coeffs) <= k:
            self._coeffs.append(self._compute(len(self._coeffs)))
        return self._coeffs[k]

    def _compute(self, k: int) -> Polynomial:  # pragma: no cover - abstract
        raise NotImplementedError


class _InputNode(_Node):
    __slots__ = ("_terms", "_dx", "_dt")

    def __init__(self, terms: list[Polynomial], dx: int, dt: int):
        super().__init__()
        self._terms = terms
        self._dx = dx
        self._dt = dt

    def _compute(self, k: int) -> Polynomial:
        return self._terms[k].diff("x", self._dx).diff("t", self._dt)


class _ConstNode(_Node):
    __slots__ = ("_value",)

    def __init__(self, value: Polynomial):
        super().__init__()
        self._value = value

    def _compute(self, k: int) -> Polynomial:
        return self._value if k == 0 else Polynomial.zero()


class _SumNode(_Node):
    __slots__ = ("_children",)

    def __init__(self, children: list[_Node]):
        super().__init__()
        self._children = children

    def _compute(self, k: int) -> Polynomial:
        acc = Polynomial.zero()
        for child in self._children:
            acc = acc + child.coeff(k)
        return acc


class _ProdNode(_Node):
    __slots__ = ("_left", "_right")

    def __init__(self, left: _Node, right: _Node):
        super().__init__()
        self._left = left
        self._right = right

    def _compute(self, k: int) -> Polynomial:
        acc = Polynomial.zero()
        for i in range(k + 1):
            a = self._left.coeff(i)
            b = self._right.coeff(k - i)
            if a.is_zero or b.is_zero:
                continue
            acc = acc + a * b
        return acc


class _InvNode(_Node):
    __slots__ = ("_child", "_inv0")

    def __init__(self, child: _Node):
        super().__init__()
        self._child = child
        self._inv0: Fraction | None = None

    def _compute(self, k: int) -> Polynomial:
        if k == 0:
            lead = self._child.coeff(0)
            if lead.is_zero or not lead.is_constant:
                raise NonInvertibleLeadingTerm(
                    "series inversion needs a nonzero constant leading coefficient, "
                    f"got {lead.to_text()!r}"
                )
            self._inv0 = 1 / lead.constant_value()
            return Polynomial.const(self._inv0)
        acc = Polynomial.zero()
        for i in range(1, k + 1):
            ai = self._child.coeff(i)
            if ai.is_zero:
                continue
            acc = acc + ai * self._coeffs[k - i]
        return acc * (-self._inv0)


class SeriesComposer:
    """Extends the composed series one order at a time as solution terms arrive.

    ``append(term)`` feeds the next solution term and returns the decomposition
    polynomial of the newly available order.  Per-node coefficient caches make
    each extension incremental instead of recomposing from scratch; the result
    is identical to :func:`compose` over the terms fed so far.
    """

    def __init__(self, expr: NonlinearExpr, max_derivative_order: int = DEFAULT_MAX_DERIVATIVE_ORDER):
        validate_expr(expr, max_derivative_order)
        self._terms: list[Polynomial] = []
        self._expr_cache: dict[NonlinearExpr, _Node] = {}
        self._pow_cache: dict[tuple[int, int], _Node] = {}
        self._root = self._build(expr)

    @property
    def count(self) -> int:
        """Number of terms fed so far."""
        return len(self._terms)

    def _build(self, expr: NonlinearExpr) -> _Node:
        got = self._expr_cache.get(expr)
        if got is not None:
            return got
        if isinstance(expr, UnknownDeriv):
            node: _Node = _InputNode(self._terms, expr.dx, expr.dt)
        elif isinstance(expr, Const):
            node = _ConstNode(expr.value)
        elif isinstance(expr, Add):
            node = _SumNode([self._build(ch) for ch in expr.children])
        elif isinstance(expr, Mul):
            node = self._build(expr.children[0])
            for child in expr.children[1:]:
                node = _ProdNode(node, self._build(child))
        elif isinstance(expr, IntPow):
            base = self._build(expr.base)
            if expr.n < 0:
                base = self._inv_of(base)
            node = self._power_of(base, abs(expr.n))
        else:
            raise TypeError(f"not a nonlinear-expression node: {expr!r}")
        self._expr_cache[expr] = node
        return node

    def _inv_of(self, base: _Node) -> _Node:
        key = (id(base), -1)
        got = self._pow_cache.get(key)
        if got is None:
            got = self._pow_cache[key] = _InvNode(base)
        return got

    def _power_of(self, base: _Node, n: int) -> _Node:
        if n == 1:
            return base
        key = (id(base), n)
        got = self._pow_cache.get(key)
        if got is None:
            got = self._pow_cache[key] = _ProdNode(self._power_of(base, n - 1), base)
        return got

    def append(self, term: Polynomial) -> Polynomial:
        """Feed the next solution term; returns the decomposition polynomial of its order."""
        self._terms.append(term)
        return self._root.coeff(len(self._terms) - 1)

    def coefficient(self, k: int) -> Polynomial:
        """Decomposition polynomial of order k (k < number of terms fed)."""
        if k >= len(self._terms):
            raise IndexError(f"coefficient {k} needs {k + 1} terms, only {len(self._terms)} fed")
        return self._root.coeff(k)


# -- text grammar ---------------------------------------------------------------


def parse_expr(text: str) -> NonlinearExpr:
    """Parse the nonlinearity grammar used in problem files.

    Atoms: rational constants (``19/80``), registry variable names used as
    coefficients (``eps``), the unknown ``u``, and derivative prefixes
    ``dx^a dt^b u``.  Combine with ``*``, ``+``, ``-``, integer powers ``^n``
    (negative allowed) and parentheses.  Examples::

        eps * u * dt u
        1/5 * u^-3 + 1/2 * u^-2 + 1/4 * u^-1
        u * dx u
    """
    from .ratpoly import _Tokens  # same tokenizer: digits, names, operators

    tks = _Tokens(text)
    expr = _parse_expr_sum(tks)
    if tks.peek() is not None:
        raise ValueError(f"trailing tokens in expression: {tks.peek()!r}")
    return expr


def _parse_expr_sum(tks) -> NonlinearExpr:
    sign = 1
    if tks.peek() in ("+", "-"):
        sign = -1 if tks.next() == "-" else 1
    total = _parse_expr_term(tks)
    if sign < 0:
        total = -total
    while tks.peek() in ("+", "-"):
        sign = -1 if tks.next() == "-" else 1
        nxt = _parse_expr_term(tks)
        total = total + (nxt if sign > 0 else -nxt)
    return total


def _parse_expr_term(tks) -> NonlinearExpr:
    factors = [_parse_expr_factor(tks)]
    while tks.peek() == "*":
        tks.next()
        factors.append(_parse_expr_factor(tks))
    return factors[0] if len(factors) == 1 else Mul(tuple(factors))


def _parse_expr_factor(tks) -> NonlinearExpr:
    atom = _parse_expr_atom(tks)
    if tks.peek() == "^":
        tks.next()
        sign = 1
        if tks.peek() == "-":
            tks.next()
            sign = -1
        etok = tks.next()
        if not etok.isdigit():
            raise ValueError(f"expected integer exponent, got {etok!r}")
        return IntPow(atom, sign * int(etok))
    return atom


def _parse_expr_atom(tks) -> NonlinearExpr:
    tok = tks.peek()
    if tok is None:
        raise ValueError("unexpected end of expression")
    if tok == "(":
        tks.next()
        inner = _parse_expr_sum(tks)
        tks.expect(")")
        return inner
    if tok.isdigit():
        tks.next()
        num = int(tok)
        if tks.peek() == "/":
            tks.next()
            den = tks.next()
            if not den.isdigit():
                raise ValueError(f"expected denominator digits, got {den!r}")
            return Const(Polynomial.const(Fraction(num, int(den))))
        return Const(Polynomial.const(num))
    if tok in ("dx", "dt", "u"):
        return _parse_deriv(tks)
    if tok.isalpha():
        tks.next()
        return Const(Polynomial.var(tok))  # registry check happens inside var()
    raise ValueError(f"unexpected token {tok!r} in expression")


def _parse_deriv(tks) -> UnknownDeriv:
    dx = dt = 0
    while tks.peek() in ("dx", "dt"):
        which = tks.next()
        e = 1
        if tks.peek() == "^":
            tks.next()
            etok = tks.next()
            if not etok.isdigit():
                raise ValueError(f"expected derivative order digits, got {etok!r}")
            e = int(etok)
        if which == "dx":
            dx += e
        else:
            dt += e
    tks.expect("u")
    return UnknownDeriv(dx, dt)
