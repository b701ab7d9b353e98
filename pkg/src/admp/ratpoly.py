"""Exact multivariate polynomials over arbitrary-precision rationals.

Every closed-form object in the toolkit is a sparse polynomial in the fixed
variable registry (t, x, c, eps) with exact rational coefficients.  Floats
never enter the symbolic pipeline; they appear only on the evaluation
boundary (see :meth:`Polynomial.evaluate`).

The canonical text form of a polynomial lists its terms in descending
graded-lexicographic order over (t, x, c, eps), e.g. ``-19/80*c*x^2 + x``.
``parse_polynomial`` inverts it exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "VARIABLES",
    "Monomial",
    "Polynomial",
    "UnknownVariableError",
    "UnboundVariableError",
    "rational",
    "parse_polynomial",
]

#: The closed variable registry; unknown names are rejected everywhere.
VARIABLES = ("t", "x", "c", "eps")

_VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}

RationalLike = Union[int, str, Fraction]


class UnknownVariableError(ValueError):
    """Raised for a variable name outside the registry (t, x, c, eps)."""


class UnboundVariableError(ValueError):
    """Raised when evaluation leaves a variable of the polynomial unbound."""


def rational(value: RationalLike, den: int | None = None) -> Fraction:
    """Coerce ``value`` (int, ``"num/den"`` string, Fraction) to an exact rational.

    Floats are rejected: exactness inside the symbolic pipeline is a hard
    invariant, and a float argument is almost always an accident.
    """
    if den is not None:
        return Fraction(value) / Fraction(den)
    if isinstance(value, float):
        raise TypeError("refusing to build an exact rational from a float")
    return Fraction(value)


class Monomial:
    """A power product of registry variables; absent variable = exponent 0."""

    __slots__ = ("exps", "_hash")

    def __init__(self, exps: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = exps.items() if isinstance(exps, Mapping) else exps
        pairs = []
        for var, exp in items:
            if var not in _VAR_INDEX:
                raise UnknownVariableError(f"unknown variable: {var!r}")
            if not isinstance(exp, int) or exp < 0:
                raise ValueError(f"exponent of {var} must be a non-negative int, got {exp!r}")
            if exp:
                pairs.append((var, exp))
        pairs.sort(key=lambda p: _VAR_INDEX[p[0]])
        self.exps = tuple(pairs)
        self._hash = hash(self.exps)

    @classmethod
    def one(cls) -> "Monomial":
        return _MONO_ONE

    @classmethod
    def _raw(cls, pairs: tuple[tuple[str, int], ...]) -> "Monomial":
        self = object.__new__(cls)
        self.exps = pairs
        self._hash = hash(pairs)
        return self

    def exponent(self, var: str) -> int:
        for v, e in self.exps:
            if v == var:
                return e
        if var not in _VAR_INDEX:
            raise UnknownVariableError(f"unknown variable: {var!r}")
        return 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not self.exps:
            return other
        if not other.exps:
            return self
        merged = dict(self.exps)
        for var, exp in other.exps:
            merged[var] = merged.get(var, 0) + exp
        pairs = tuple(sorted(merged.items(), key=lambda p: _VAR_INDEX[p[0]]))
        return Monomial._raw(pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return self.exps == other.exps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}^{e}" for v, e in self.exps) or "1"
        return f"Monomial({inner})"

    def grlex_key(self) -> tuple:
        # graded lex over the registry order; sort descending for display
        return (self.degree,) + tuple(self.exponent(v) for v in VARIABLES)


_MONO_ONE = Monomial(())


def _coeff_text(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Polynomial:
    """Sparse exact polynomial: mapping monomial -> nonzero rational coefficient.

    Canonical form is maintained by every operation (no zero coefficients are
    ever stored), so structural equality coincides with mathematical equality.
    Instances are immutable by convention; all operations return new objects.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, RationalLike] | Iterable[tuple[Monomial, RationalLike]] = ()):
        data: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            q = rational(coeff)
            if q:
                acc = data.get(mono)
                q = q if acc is None else acc + q
                if q:
                    data[mono] = q
                elif mono in data:
                    del data[mono]
        self.terms = data
        self._hash = None

    @classmethod
    def _raw(cls, data: dict) -> "Polynomial":
        self = object.__new__(cls)
        self.terms = data
        self._hash = None
        return self

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    @classmethod
    def const(cls, value: RationalLike) -> "Polynomial":
        q = rational(value)
        return cls._raw({_MONO_ONE: q} if q else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Polynomial":
        if name not in _VAR_INDEX:
            raise UnknownVariableError(f"unknown variable: {name!r}")
        if power < 1:
            raise ValueError("power must be >= 1")
        return cls._raw({Monomial(((name, power),)): Fraction(1)})

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        return parse_polynomial(text)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _MONO_ONE in self.terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (raises if non-constant)."""
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError(f"not a constant polynomial: {self}")
        return self.terms[_MONO_ONE]

    def variables(self) -> frozenset[str]:
        out: set[str] = set()
        for mono in self.terms:
            out.update(mono.variables())
        return frozenset(out)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or the degree in ``var``; zero polynomial has degree 0."""
        if not self.terms:
            return 0
        if var is None:
            return max(m.degree for m in self.terms)
        return max(m.exponent(var) for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order (the canonical output order)."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].grlex_key(), reverse=True)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) or _is_rational(other):
            return Polynomial.const(other)
        return None

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in o.terms.items():
            acc = out.get(mono)
            val = coeff if acc is None else acc + coeff
            if val:
                out[mono] = val
            elif mono in out:
                del out[mono]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in o.terms.items():
            acc = out.get(mono)
            val = -coeff if acc is None else acc - coeff
            if val:
                out[mono] = val
            elif mono in out:
                del out[mono]
        return Polynomial._raw(out)

    def __rsub__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.terms, o.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                mono = m1 * m2
                acc = out.get(mono)
                val = c1 * c2 if acc is None else acc + c1 * c2
                if val:
                    out[mono] = val
                elif mono in out:
                    del out[mono]
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative ints")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def diff(self, var: str, times: int = 1) -> "Polynomial":
        """Exact partial derivative with respect to ``var`` (``times`` applications)."""
        if var not in _VAR_INDEX:
            raise UnknownVariableError(f"unknown variable: {var!r}")
        p = self
        for _ in range(times):
            out: dict[Monomial, Fraction] = {}
            for mono, coeff in p.terms.items():
                e = mono.exponent(var)
                if e == 0:
                    continue
                pairs = tuple(
                    (v, ee - 1 if v == var else ee)
                    for v, ee in mono.exps
                    if not (v == var and ee == 1)
                )
                out[Monomial._raw(pairs)] = coeff * e
            p = Polynomial._raw(out)
        return p

    def antideriv(self, var: str, lower: RationalLike = 0) -> "Polynomial":
        """Definite antiderivative: q(var) - q(lower), where q' = self and q(0)=0-constant.

        The result differentiates back to ``self`` and vanishes at var=lower.
        """
        if var not in _VAR_INDEX:
            raise UnknownVariableError(f"unknown variable: {var!r}")
        lo = rational(lower)
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            e = mono.exponent(var)
            if e:
                pairs = tuple((v, ee + 1 if v == var else ee) for v, ee in mono.exps)
            else:
                merged = dict(mono.exps)
                merged[var] = 1
                pairs = tuple(sorted(merged.items(), key=lambda p: _VAR_INDEX[p[0]]))
            out[Monomial._raw(pairs)] = coeff / (e + 1)
        integrated = Polynomial._raw(out)
        if lo == 0:
            return integrated
        return integrated - integrated._substitute_constant(var, lo)

    # -- substitution and evaluation ----------------------------------------

    def _substitute_constant(self, var: str, value: Fraction) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        powers: dict[int, Fraction] = {}
        for mono, coeff in self.terms.items():
            e = mono.exponent(var)
            if e:
                scale = powers.get(e)
                if scale is None:
                    scale = powers[e] = value**e
                coeff = coeff * scale
                mono = Monomial._raw(tuple(p for p in mono.exps if p[0] != var))
                if not coeff:
                    continue
            acc = out.get(mono)
            val = coeff if acc is None else acc + coeff
            if val:
                out[mono] = val
            elif mono in out:
                del out[mono]
        return Polynomial._raw(out)

    def substitute(self, var: str, replacement: "Polynomial | RationalLike") -> "Polynomial":
        """Exact composition: replace ``var`` by a polynomial (or rational constant)."""
        if var not in _VAR_INDEX:
            raise UnknownVariableError(f"unknown variable: {var!r}")
        if not isinstance(replacement, Polynomial):
            return self._substitute_constant(var, rational(replacement))
        if replacement.is_constant:
            return self._substitute_constant(var, replacement.constant_value())
        result = Polynomial.zero()
        powers: dict[int, Polynomial] = {}

        def rep_power(e: int) -> Polynomial:
            got = powers.get(e)
            if got is None:
                got = powers[e] = replacement**e
            return got

        for mono, coeff in self.terms.items():
            e = mono.exponent(var)
            rest = Monomial._raw(tuple(p for p in mono.exps if p[0] != var))
            piece = Polynomial._raw({rest: coeff})
            if e:
                piece = piece * rep_power(e)
            result = result + piece
        return result

    def evaluate(self, bindings: Mapping[str, object]):
        """Evaluate at a point; exact when every binding is rational, float otherwise.

        Every variable occurring in the polynomial must be bound (extra
        bindings are ignored).  The float path converts each exact coefficient
        to a double and accumulates terms in canonical order, so results are
        reproducible bit-for-bit.
        """
        needed = self.variables()
        for var in VARIABLES:
            if var in needed and var not in bindings:
                raise UnboundVariableError(f"unbound variable: {var!r}")
        float_mode = any(isinstance(bindings[v], float) for v in needed)
        if float_mode:
            values = {v: float(bindings[v]) for v in needed}
            total = 0.0
        else:
            values = {v: rational(bindings[v]) for v in needed}
            total = Fraction(0)
        powers: dict[tuple[str, int], object] = {}
        for mono, coeff in self.sorted_terms():
            term = float(coeff) if float_mode else coeff
            for var, e in mono.exps:
                p = powers.get((var, e))
                if p is None:
                    p = powers[(var, e)] = values[var] ** e
                term = term * p
            total = total + term
        return total

    __call__ = evaluate

    # -- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) or _is_rational(other):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((m, c) for m, c in self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form: graded-lex descending, unit factors elided."""
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for mono, coeff in self.sorted_terms():
            negative = coeff < 0
            mag = -coeff if negative else coeff
            factors = [f"{v}^{e}" if e > 1 else v for v, e in mono.exps]
            if not factors:
                body = _coeff_text(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_coeff_text(mag)] + factors)
            if not chunks:
                chunks.append(f"-{body}" if negative else body)
            else:
                chunks.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(chunks)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"Polynomial.parse({self.to_text()!r})"


def _is_rational(value) -> bool:
    import numbers

    return isinstance(value, numbers.Rational)


# -- parsing -----------------------------------------------------------------


class _Tokens:
    def __init__(self, text: str):
        self.toks: list[str] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(text[i:j])
                i = j
            elif ch.isalpha():
                j = i
                while j < n and text[j].isalpha():
                    j += 1
                self.toks.append(text[i:j])
                i = j
            elif ch in "+-*/^()":
                self.toks.append(ch)
                i += 1
            else:
                raise ValueError(f"unexpected character {ch!r} in polynomial text")
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of polynomial text")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")


def parse_polynomial(text: str) -> Polynomial:
    """Parse the canonical polynomial text form (round trip of ``to_text``)."""
    tks = _Tokens(text)
    result = _parse_sum(tks)
    if tks.peek() is not None:
        raise ValueError(f"trailing tokens in polynomial text: {tks.peek()!r}")
    return result


def _parse_sum(tks: _Tokens) -> Polynomial:
    sign = 1
    if tks.peek() in ("+", "-"):
        sign = -1 if tks.next() == "-" else 1
    total = _parse_term(tks) * sign
    while tks.peek() in ("+", "-"):
        sign = -1 if tks.next() == "-" else 1
        total = total + _parse_term(tks) * sign
    return total


def _parse_term(tks: _Tokens) -> Polynomial:
    coeff = Fraction(1)
    exps: dict[str, int] = {}
    first = True
    while True:
        tok = tks.peek()
        if tok is None or tok in ("+", "-"):
            if first:
                raise ValueError("empty term in polynomial text")
            break
        if not first:
            if tok != "*":
                break
            tks.next()
        first = False
        tok = tks.next()
        if tok.isdigit():
            num = int(tok)
            if tks.peek() == "/":
                tks.next()
                den = tks.next()
                if not den.isdigit():
                    raise ValueError(f"expected denominator digits, got {den!r}")
                coeff *= Fraction(num, int(den))
            else:
                coeff *= num
        elif tok.isalpha():
            if tok not in _VAR_INDEX:
                raise UnknownVariableError(f"unknown variable: {tok!r}")
            e = 1
            if tks.peek() == "^":
                tks.next()
                etok = tks.next()
                if not etok.isdigit():
                    raise ValueError(f"expected exponent digits, got {etok!r}")
                e = int(etok)
            exps[tok] = exps.get(tok, 0) + e
        else:
            raise ValueError(f"unexpected token {tok!r} in polynomial text")
    mono = Monomial({v: e for v, e in exps.items() if e})
    return Polynomial(((mono, coeff),))
