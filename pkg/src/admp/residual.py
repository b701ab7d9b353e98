"""Residual-based quality measures and the optimal-parameter search.

The residual of an approximation is the full operator image L[psi] + R[psi] +
N[psi] - f; derivative images are always formed symbolically and exactly, and
only the final evaluation crosses to floats.  The averaged squared residual
over a sample grid, seen as a function of the convergence-control value c, is
minimized by a coarse seed scan followed by bounded Brent refinement; the
stationarity diagnostic (central-difference slope at the minimizer) is
reported rather than solved for directly, which avoids landing on maxima or
saddles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .calculus import apply_linear, linear_operator
from .ratpoly import Polynomial, UnboundVariableError, rational
from .series import Add, Const, IntPow, Mul, UnknownDeriv, expr_derivative_orders

__all__ = [
    "DivisionNearZero",
    "BracketError",
    "SampleGrid",
    "OptimizeResult",
    "ResidualEvaluator",
    "GridResidual",
    "error_remainder",
    "averaged_residual",
    "optimal_c",
    "max_error_remainder",
    "error_vs_exact",
    "exact_residual",
    "residual_field",
    "error_field",
    "Table1Row",
    "table1_rows",
    "TABLE1_COLUMNS",
    "FIELD_COLUMNS",
    "DEFAULT_BRACKET",
    "DEFAULT_TOL",
    "DEFAULT_SEEDS",
    "DEFAULT_MER_SAMPLES",
    "DEFAULT_DIV_FLOOR",
]

DEFAULT_BRACKET = (0.1, 2.0)
DEFAULT_TOL = 1e-8
DEFAULT_SEEDS = 64
DEFAULT_MER_SAMPLES = 1001
DEFAULT_DIV_FLOOR = 1e-12

TABLE1_COLUMNS = ("n", "c_star", "E_at_c_star", "MER_admp", "MER_adm")
FIELD_COLUMNS = ("x", "t", "c", "residual")

_GOLDEN = 0.3819660112501051


class DivisionNearZero(ArithmeticError):
    """A reciprocal power was evaluated on a base below the configured floor.

    For the beam problem this signals that the approximation left the physical
    regime (the gap closed).
    """


class BracketError(RuntimeError):
    """The averaged residual is smaller at a bracket end than anywhere inside."""


@dataclass(frozen=True, eq=True)
class SampleGrid:
    """Fixed sample points; every point binds exactly the problem's variables."""

    points: tuple[Mapping[str, Fraction], ...]
    label: str = ""

    def __post_init__(self):
        if not self.points:
            raise ValueError("a sample grid needs at least one point")
        keys = frozenset(self.points[0])
        for point in self.points:
            if frozenset(point) != keys:
                raise ValueError("all grid points must bind the same variables")

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def regular(
        cls,
        ranges: Mapping[str, tuple],
        label: str = "",
    ) -> "SampleGrid":
        """Cartesian product grid: ``ranges[var] = (start, step, count)`` exactly.

        Variables iterate in registry order (t outermost).
        """
        names = [v for v in ("t", "x", "c", "eps") if v in ranges]
        axes = []
        for var in names:
            start, step, count = ranges[var]
            start, step = rational(start), rational(step)
            axes.append([(var, start + i * step) for i in range(int(count))])
        points: list[dict[str, Fraction]] = [{}]
        for axis in axes:
            points = [dict(p, **{var: val}) for p in points for var, val in axis]
        return cls(tuple(points), label)


@dataclass(frozen=True)
class OptimizeResult:
    """Outcome of the averaged-residual minimization over c."""

    c_star: float
    e_at_c_star: float
    e_prime_at_c_star: float
    bracket: tuple[float, float]
    evaluations: int


def _horner(coeffs: Sequence[float], x: float) -> float:
    # coeffs ascending by power
    acc = 0.0
    for coeff in reversed(coeffs):
        acc = acc * x + coeff
    return acc


def _eval_tree(expr, deriv_value: Callable, const_value: Callable, div_floor: float):
    """Numeric walk of a nonlinearity tree over already-evaluated derivative images."""
    if isinstance(expr, UnknownDeriv):
        return deriv_value(expr.dx, expr.dt)
    if isinstance(expr, Const):
        return const_value(expr)
    if isinstance(expr, Add):
        total = _eval_tree(expr.children[0], deriv_value, const_value, div_floor)
        for child in expr.children[1:]:
            total = total + _eval_tree(child, deriv_value, const_value, div_floor)
        return total
    if isinstance(expr, Mul):
        total = _eval_tree(expr.children[0], deriv_value, const_value, div_floor)
        for child in expr.children[1:]:
            total = total * _eval_tree(child, deriv_value, const_value, div_floor)
        return total
    if isinstance(expr, IntPow):
        base = _eval_tree(expr.base, deriv_value, const_value, div_floor)
        if expr.n < 0:
            near_zero = (not base) if not isinstance(base, float) else abs(base) < div_floor
            if near_zero:
                raise DivisionNearZero(
                    f"reciprocal power on a base of magnitude {float(abs(base)):.3e} "
                    f"(floor {div_floor:.1e})"
                )
        return base ** expr.n
    raise TypeError(f"not a nonlinear-expression node: {expr!r}")


def _collect_consts(expr, out: list):
    if isinstance(expr, Const):
        if expr not in out:
            out.append(expr)
    elif isinstance(expr, (Add, Mul)):
        for child in expr.children:
            _collect_consts(child, out)
    elif isinstance(expr, IntPow):
        _collect_consts(expr.base, out)


class ResidualEvaluator:
    """Residual of one approximation for one problem.

    The linear image L[psi] + R[psi] - f and every derivative of psi that the
    nonlinearity mentions are formed symbolically once; each call then only
    evaluates polynomials and folds the nonlinearity tree numerically.
    """

    def __init__(self, problem, psi: Polynomial, div_floor: float = DEFAULT_DIV_FLOOR):
        self.problem = problem
        self.psi = psi
        self.div_floor = div_floor
        comb = linear_operator(problem.inverse_plan)
        self.linear_image = (
            apply_linear(comb, psi)
            + apply_linear(problem.remainder, psi)
            - problem.source_f
        )
        self.deriv_images = {
            (a, b): psi.diff("x", a).diff("t", b)
            for (a, b) in sorted(expr_derivative_orders(problem.nonlinearity))
        }
        self._consts: list[Const] = []
        _collect_consts(problem.nonlinearity, self._consts)

    def _bindings(self, point, c_value, params, as_float: bool):
        bind = {}
        if params:
            bind.update(params)
        bind.update(point)
        if c_value is not None:
            bind["c"] = c_value
        if as_float:
            bind = {k: float(v) for k, v in bind.items()}
        else:
            bind = {k: rational(v) for k, v in bind.items()}
        return bind

    def value(self, point: Mapping, c_value=None, params: Mapping | None = None) -> float:
        """Float residual at one point (exact symbolic derivatives, float evaluation)."""
        bind = self._bindings(point, c_value, params, as_float=True)
        dvals = {ab: poly.evaluate(bind) for ab, poly in self.deriv_images.items()}
        nonlinear = _eval_tree(
            self.problem.nonlinearity,
            lambda a, b: dvals[(a, b)],
            lambda node: node.value.evaluate(bind),
            self.div_floor,
        )
        return self.linear_image.evaluate(bind) + nonlinear

    def value_exact(self, point: Mapping, c_value=None, params: Mapping | None = None) -> Fraction:
        """Exact rational residual (available whenever all bindings are rational)."""
        bind = self._bindings(point, c_value, params, as_float=False)
        dvals = {ab: poly.evaluate(bind) for ab, poly in self.deriv_images.items()}
        nonlinear = _eval_tree(
            self.problem.nonlinearity,
            lambda a, b: dvals[(a, b)],
            lambda node: node.value.evaluate(bind),
            self.div_floor,
        )
        return self.linear_image.evaluate(bind) + nonlinear

    def on_grid(self, grid: SampleGrid, params: Mapping | None = None) -> "GridResidual":
        return GridResidual(self, grid, params)


def _c_coefficient_floats(poly: Polynomial, fixed: Mapping[str, Fraction]) -> list[float]:
    """Exactly substitute every fixed variable, then read off float coefficients by power of c."""
    q = poly
    for var, val in fixed.items():
        if var != "c":
            q = q.substitute(var, val)
    coeffs = [0.0] * (q.degree("c") + 1)
    for mono, coeff in q.terms.items():
        leftover = [v for v in mono.variables() if v != "c"]
        if leftover:
            raise UnboundVariableError(f"unbound variable: {leftover[0]!r}")
        coeffs[mono.exponent("c")] = float(coeff)
    return coeffs


class GridResidual:
    """Residuals over a fixed grid, compiled for fast re-evaluation at many c values.

    At each grid point every required polynomial collapses (by exact
    substitution) to a univariate polynomial in c, so one residual evaluation
    is a handful of Horner passes plus the nonlinearity fold.  Sums run in
    fixed point order, making results independent of evaluation order.
    """

    def __init__(self, evaluator: ResidualEvaluator, grid: SampleGrid, params: Mapping | None = None):
        problem = evaluator.problem
        expected = frozenset(problem.independent_vars)
        for point in grid.points:
            if frozenset(point) != expected:
                raise ValueError(
                    f"grid points must bind exactly {sorted(expected)}, "
                    f"got {sorted(point)}"
                )
        self.evaluator = evaluator
        self.grid = grid
        fixed_params = {k: rational(v) for k, v in (params or {}).items()}
        self._points = []
        for point in grid.points:
            fixed = dict(fixed_params)
            fixed.update({k: rational(v) for k, v in point.items()})
            lin = _c_coefficient_floats(evaluator.linear_image, fixed)
            derivs = {
                ab: _c_coefficient_floats(poly, fixed)
                for ab, poly in evaluator.deriv_images.items()
            }
            consts = {
                node: _c_coefficient_floats(node.value, fixed)
                for node in evaluator._consts
            }
            self._points.append((lin, derivs, consts))

    def __len__(self) -> int:
        return len(self._points)

    def residual(self, index: int, c_value: float) -> float:
        lin, derivs, consts = self._points[index]
        nonlinear = _eval_tree(
            self.evaluator.problem.nonlinearity,
            lambda a, b: _horner(derivs[(a, b)], c_value),
            lambda node: _horner(consts[node], c_value),
            self.evaluator.div_floor,
        )
        return _horner(lin, c_value) + nonlinear

    def averaged(self, c_value: float) -> float:
        total = 0.0
        for index in range(len(self._points)):
            r = self.residual(index, c_value)
            total += r * r
        return total / len(self._points)


def error_remainder(problem, psi: Polynomial, point: Mapping, c_value=None,
                    params: Mapping | None = None, div_floor: float = DEFAULT_DIV_FLOOR) -> float:
    """Residual L[psi] + R[psi] + N[psi] - f at one point, as a float."""
    return ResidualEvaluator(problem, psi, div_floor).value(point, c_value, params)


def averaged_residual(problem, psi: Polynomial, grid: SampleGrid, c_value,
                      params: Mapping | None = None, div_floor: float = DEFAULT_DIV_FLOOR) -> float:
    """Mean squared residual over the grid (fixed summation order)."""
    gr = ResidualEvaluator(problem, psi, div_floor).on_grid(grid, params)
    return gr.averaged(float(c_value))


def _brent_min(f: Callable[[float], float], a: float, b: float, tol: float,
               max_iter: int = 200) -> tuple[float, float, int]:
    """Bounded Brent minimization (golden section with parabolic steps)."""
    x = w = v = a + _GOLDEN * (b - a)
    fx = fw = fv = f(x)
    evals = 1
    d = e = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        tol1 = tol * abs(x) + tol
        tol2 = 2.0 * tol1
        if abs(x - mid) <= tol2 - 0.5 * (b - a):
            break
        use_golden = True
        if abs(e) > tol1:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            e_prev, e = e, d
            if abs(p) < abs(0.5 * q * e_prev) and q * (a - x) < p < q * (b - x):
                d = p / q
                candidate = x + d
                if candidate - a < tol2 or b - candidate < tol2:
                    d = tol1 if x < mid else -tol1
                use_golden = False
        if use_golden:
            e = (b - x) if x < mid else (a - x)
            d = _GOLDEN * e
        candidate = x + d if abs(d) >= tol1 else x + (tol1 if d > 0 else -tol1)
        fc = f(candidate)
        evals += 1
        if fc <= fx:
            if candidate >= x:
                a = x
            else:
                b = x
            v, w, x = w, x, candidate
            fv, fw, fx = fw, fx, fc
        else:
            if candidate < x:
                a = candidate
            else:
                b = candidate
            if fc <= fw or w == x:
                v, w = w, candidate
                fv, fw = fw, fc
            elif fc <= fv or v == x or v == w:
                v, fv = candidate, fc
    return x, fx, evals


def _local_minima(values: Sequence[float]) -> list[int]:
    """Indices of interior points not exceeded by either neighbor."""
    return [
        i
        for i in range(1, len(values) - 1)
        if values[i - 1] >= values[i] <= values[i + 1]
    ]


def optimal_c(problem, psi: Polynomial, grid: SampleGrid,
              bracket: tuple[float, float] = DEFAULT_BRACKET,
              tol: float = DEFAULT_TOL,
              seeds: int = DEFAULT_SEEDS,
              params: Mapping | None = None,
              div_floor: float = DEFAULT_DIV_FLOOR) -> OptimizeResult:
    """Minimize the averaged residual over c inside the bracket.

    A coarse scan over ``seeds`` equispaced values checks that the minimum is
    bracketed and flags multimodality.  Every coarse basin is then rescanned
    at 16x resolution (a narrow deep valley can hide entirely between two
    coarse seeds, and really does for the wave problems), each fine basin is
    refined by bounded Brent, and the global winner is returned.  Raises
    :class:`BracketError` if the coarse scan minimum sits on a bracket end.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy low < high")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if seeds < 3:
        raise ValueError("need at least 3 scan seeds")
    gr = ResidualEvaluator(problem, psi, div_floor).on_grid(grid, params)
    evals = 0

    def energy(cv: float) -> float:
        nonlocal evals
        evals += 1
        return gr.averaged(cv)

    cs = [lo + i * (hi - lo) / (seeds - 1) for i in range(seeds)]
    es = [energy(cv) for cv in cs]
    best = min(range(seeds), key=lambda i: (es[i], i))
    if best == 0 or best == seeds - 1:
        raise BracketError(
            f"averaged residual is smallest at bracket end c={cs[best]:.6g}; "
            "the minimum is not bracketed"
        )
    # candidate windows: two coarse intervals either side of every coarse basin
    candidates = set(_local_minima(es))
    candidates.add(best)
    windows = []
    for i in sorted(candidates):
        windows.append((cs[max(i - 2, 0)], cs[min(i + 2, seeds - 1)]))
    # merge overlaps so each region is scanned once
    windows.sort()
    merged = [windows[0]]
    for w_lo, w_hi in windows[1:]:
        if w_lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], w_hi))
        else:
            merged.append((w_lo, w_hi))
    coarse_step = (hi - lo) / (seeds - 1)
    fine_step = coarse_step / 16.0
    refined: list[tuple[float, float, tuple[float, float]]] = []
    for w_lo, w_hi in merged:
        count = max(int(round((w_hi - w_lo) / fine_step)), 4) + 1
        fs = [w_lo + i * (w_hi - w_lo) / (count - 1) for i in range(count)]
        fe = [energy(cv) for cv in fs]
        basins = _local_minima(fe)
        fbest = min(range(count), key=lambda i: (fe[i], i))
        if fbest not in basins and 0 < fbest < count - 1:
            basins.append(fbest)
        if not basins:
            basins = [fbest] if 0 < fbest < count - 1 else [max(1, min(fbest, count - 2))]
        for i in basins:
            b_lo, b_hi = fs[i - 1], fs[i + 1]
            c_min, e_min, _ = _brent_min(energy, b_lo, b_hi, tol)
            refined.append((e_min, c_min, (b_lo, b_hi)))
    refined.sort(key=lambda item: (item[0], item[1]))
    e_star, c_star, sub_bracket = refined[0]
    h = 1e-6 * max(1.0, abs(c_star))
    e_prime = (energy(c_star + h) - energy(c_star - h)) / (2.0 * h)
    return OptimizeResult(c_star, e_star, e_prime, sub_bracket, evals)


class _FloatPoly:
    """A polynomial with pre-fixed variables folded to float coefficients.

    Used on dense-sampling paths (maximal error remainder, field dumps) where
    thousands of evaluations at a fixed c dominate and 1e-15-level rounding in
    the coefficients is irrelevant to the measured quantities.
    """

    __slots__ = ("free", "terms", "_dense")

    def __init__(self, poly: Polynomial, fixed: Mapping[str, float], free: tuple[str, ...]):
        acc: dict[tuple[int, ...], float] = {}
        for mono, coeff in poly.sorted_terms():
            val = float(coeff)
            key = []
            for var in free:
                key.append(mono.exponent(var))
            for var, e in mono.exps:
                if var in fixed:
                    val *= fixed[var] ** e
                elif var not in free:
                    raise UnboundVariableError(f"unbound variable: {var!r}")
            key_t = tuple(key)
            acc[key_t] = acc.get(key_t, 0.0) + val
        self.free = free
        self.terms = sorted(acc.items(), reverse=True)
        if len(free) == 1:
            degree = max((k[0] for k, _ in self.terms), default=0)
            dense = [0.0] * (degree + 1)
            for (e,), val in self.terms:
                dense[e] = val
            self._dense = dense
        else:
            self._dense = None

    def eval(self, values: Sequence[float]) -> float:
        if self._dense is not None:
            return _horner(self._dense, values[0])
        total = 0.0
        for exps, coeff in self.terms:
            term = coeff
            for e, v in zip(exps, values):
                if e:
                    term *= v ** e
            total += term
        return total


class _FieldResidual:
    """Residual over the independent variables at a fixed c (and parameters)."""

    def __init__(self, evaluator: ResidualEvaluator, c_value, params: Mapping | None = None):
        problem = evaluator.problem
        self.free = tuple(problem.independent_vars)
        fixed = {k: float(v) for k, v in (params or {}).items()}
        if c_value is not None:
            fixed["c"] = float(c_value)
        self.evaluator = evaluator
        self._lin = _FloatPoly(evaluator.linear_image, fixed, self.free)
        self._derivs = {
            ab: _FloatPoly(poly, fixed, self.free)
            for ab, poly in evaluator.deriv_images.items()
        }
        self._consts = {
            node: _FloatPoly(node.value, fixed, self.free)
            for node in evaluator._consts
        }

    def residual(self, values: Sequence[float]) -> float:
        nonlinear = _eval_tree(
            self.evaluator.problem.nonlinearity,
            lambda a, b: self._derivs[(a, b)].eval(values),
            lambda node: self._consts[node].eval(values),
            self.evaluator.div_floor,
        )
        return self._lin.eval(values) + nonlinear


def _golden_max_abs(f: Callable[[float], float], a: float, b: float, iters: int = 80) -> float:
    """Deterministic golden-section maximization of |f| on [a, b]."""
    inv_phi = 1.0 - _GOLDEN
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = abs(f(x1)), abs(f(x2))
    best = max(f1, f2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = abs(f(x2))
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = abs(f(x1))
        best = max(best, f1, f2)
        if b - a < 1e-14 * max(1.0, abs(a) + abs(b)):
            break
    return best


def _axis_points(lo: float, hi: float, samples: int) -> list[float]:
    return [lo + i * (hi - lo) / (samples - 1) for i in range(samples)]


def max_error_remainder(problem, psi: Polynomial, c_value=None,
                        domain: Mapping | tuple | None = None,
                        samples: int = DEFAULT_MER_SAMPLES,
                        params: Mapping | None = None,
                        div_floor: float = DEFAULT_DIV_FLOOR) -> float:
    """Max |residual| over a dense uniform grid, sharpened by golden-section refinement.

    ``domain`` defaults to the problem's domain; a bare (lo, hi) pair is
    accepted for single-variable problems.  Deterministic for fixed inputs.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    free = tuple(problem.independent_vars)
    if domain is None:
        domain = problem.domain
    if isinstance(domain, tuple):
        if len(free) != 1:
            raise ValueError("a bare (lo, hi) domain needs a single-variable problem")
        domain = {free[0]: domain}
    field = _FieldResidual(ResidualEvaluator(problem, psi, div_floor), c_value, params)
    axes = [
        _axis_points(float(domain[var][0]), float(domain[var][1]), samples)
        for var in free
    ]
    if len(free) == 1:
        xs = axes[0]
        values = [abs(field.residual((xv,))) for xv in xs]
        best = max(range(len(xs)), key=lambda i: (values[i], -i))
        lo = xs[max(best - 1, 0)]
        hi = xs[min(best + 1, len(xs) - 1)]
        refined = _golden_max_abs(lambda xv: field.residual((xv,)), lo, hi)
        return max(values[best], refined)
    # multi-variable: dense product scan, then a few rounds of per-axis refinement
    best_val = -1.0
    best_point: list[float] = []
    idx = [0] * len(free)

    def scan(depth: int, current: list[float]):
        nonlocal best_val, best_point
        if depth == len(free):
            val = abs(field.residual(tuple(current)))
            if val > best_val:
                best_val = val
                best_point = list(current)
            return
        for xv in axes[depth]:
            current.append(xv)
            scan(depth + 1, current)
            current.pop()

    scan(0, [])
    point = list(best_point)
    for _ in range(2):
        for axis, var in enumerate(free):
            xs = axes[axis]
            center = point[axis]
            step = xs[1] - xs[0] if len(xs) > 1 else 0.0
            lo = max(xs[0], center - step)
            hi = min(xs[-1], center + step)

            def along(xv: float) -> float:
                trial = list(point)
                trial[axis] = xv
                return field.residual(tuple(trial))

            refined = _golden_max_abs(along, lo, hi)
            if refined > best_val:
                best_val = refined
    return best_val


def error_vs_exact(psi: Polynomial, exact: Callable[[Mapping], object], point: Mapping,
                   c_value=None):
    """Difference between the approximation and a closed-form solution at one point.

    Exact (rational) when every input is rational, float otherwise.
    """
    bind = dict(point)
    if c_value is not None:
        bind["c"] = c_value
    return psi.evaluate(bind) - exact(point)


def exact_residual(problem, point: Mapping):
    """Residual of the problem's closed-form solution, via its stored partials.

    Exact for rational points when the partials are exact; used to certify
    that a claimed exact solution annihilates the operator.
    """
    if problem.exact is None:
        raise ValueError(f"problem {problem.id!r} has no exact solution")
    partials = problem.exact.partials

    def dval(a: int, b: int):
        return partials[(a, b)](point)

    comb = linear_operator(problem.inverse_plan)
    total = 0
    for coeff, a, b in comb.terms + problem.remainder.terms:
        total = total + coeff * dval(a, b)
    nonlinear = _eval_tree(
        problem.nonlinearity,
        dval,
        lambda node: node.value.evaluate(point),
        DEFAULT_DIV_FLOOR,
    )
    return total + nonlinear - problem.source_f.evaluate(point)


def _domain_axes(problem, domain, samples: int):
    free = tuple(problem.independent_vars)
    if domain is None:
        domain = problem.domain
    return free, [
        _axis_points(float(domain[var][0]), float(domain[var][1]), samples)
        for var in free
    ]


def _iterate_product(free, axes):
    points: list[dict[str, float]] = [{}]
    for var, axis in zip(free, axes):
        points = [dict(p, **{var: val}) for p in points for val in axis]
    return points


def residual_field(problem, psi: Polynomial, c_value=None,
                   samples: int = 101, domain: Mapping | None = None,
                   params: Mapping | None = None,
                   div_floor: float = DEFAULT_DIV_FLOOR) -> list[tuple[dict, float]]:
    """Residual values on a dense uniform grid over the domain, for plotting dumps."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    field = _FieldResidual(ResidualEvaluator(problem, psi, div_floor), c_value, params)
    free, axes = _domain_axes(problem, domain, samples)
    rows = []
    for point in _iterate_product(free, axes):
        values = tuple(point[var] for var in free)
        rows.append((point, field.residual(values)))
    return rows


def error_field(problem, psi: Polynomial, c_value=None,
                samples: int = 101, domain: Mapping | None = None,
                params: Mapping | None = None) -> list[tuple[dict, float]]:
    """psi minus the exact solution on a dense uniform grid over the domain."""
    if problem.exact is None:
        raise ValueError(f"problem {problem.id!r} has no exact solution")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    fixed = {k: float(v) for k, v in (params or {}).items()}
    if c_value is not None:
        fixed["c"] = float(c_value)
    free, axes = _domain_axes(problem, domain, samples)
    poly = _FloatPoly(psi, fixed, free)
    rows = []
    for point in _iterate_product(free, axes):
        values = tuple(point[var] for var in free)
        rows.append((point, poly.eval(values) - problem.exact(point)))
    return rows


# -- the beam-problem error table ------------------------------------------------


@dataclass(frozen=True)
class Table1Row:
    n: int
    c_star: float
    e_at_c_star: float
    mer_admp: float
    mer_adm: float


def table1_rows(problem, order_max: int = 10,
                grid: SampleGrid | None = None,
                bracket: tuple[float, float] = DEFAULT_BRACKET,
                tol: float = DEFAULT_TOL,
                samples: int = DEFAULT_MER_SAMPLES,
                seeds: int = DEFAULT_SEEDS,
                params: Mapping | None = None) -> list[Table1Row]:
    """Per-order optimal c and maximal error remainders, parameterized vs classical.

    One symbolic solve at ``order_max`` serves every row: the order-n
    approximation is just the n-th partial sum.
    """
    from .scheme import adm_solve, admp_solve, partial_sum

    if grid is None:
        grid = problem.default_grid
    admp = admp_solve(problem, order_max)
    adm = adm_solve(problem, order_max)
    rows = []
    for n in range(1, order_max + 1):
        psi_admp = partial_sum(admp, n)
        opt = optimal_c(problem, psi_admp, grid, bracket=bracket, tol=tol,
                        seeds=seeds, params=params)
        mer_admp = max_error_remainder(problem, psi_admp, opt.c_star,
                                       samples=samples, params=params)
        psi_adm = partial_sum(adm, n)
        mer_adm = max_error_remainder(problem, psi_adm, 1.0,
                                      samples=samples, params=params)
        rows.append(Table1Row(n, opt.c_star, opt.e_at_c_star, mer_admp, mer_adm))
    return rows
