"""Command-line surface.

Commands

    solve           write the series-solution document for a problem
    optimize        minimize the averaged residual over c and report the result
    table1          per-order optimal c and maximal error remainders (CSV)
    residual-field  dense dump of the residual over the problem domain (CSV)
    error-field     dense dump of psi minus the exact solution (CSV)
    validate        check conditions (and the exact solution, if any) of a problem

``--problem`` takes a catalog id (heat_transfer, nems_vdw, burgers, rlw) or a
path to a problem JSON file.  ``--c`` takes ``symbolic``, ``optimal``, or an
exact rational/decimal value (``1``, ``0.8``, ``4/5``).  Grids override as
``var=start:step:count`` groups joined by ``;``.  All numeric defaults are
echoed in ``#`` metadata headers, and reruns with identical configs produce
byte-identical output.

Exit codes: 0 success, 1 usage error, 2 validation or solver failure.

Nonlinearity grammar (problem files): atoms are the unknown ``u``, derivative
prefixes ``dx^a dt^b u``, rational constants (``19/80``), and registry
variable names used as coefficients (``eps``); combine with ``*``, ``+``,
``-``, parentheses, and integer powers ``^n`` (negative allowed), e.g.
``eps * u * dt u`` or ``1/5 * u^-3 + 1/2 * u^-2 + 1/4 * u^-1``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .problems import CATALOG_IDS, catalog, load_problem, validate_problem
from .ratpoly import Polynomial, UnboundVariableError, UnknownVariableError, rational
from .residual import (
    DEFAULT_BRACKET,
    DEFAULT_DIV_FLOOR,
    DEFAULT_MER_SAMPLES,
    DEFAULT_SEEDS,
    DEFAULT_TOL,
    FIELD_COLUMNS,
    TABLE1_COLUMNS,
    BracketError,
    DivisionNearZero,
    SampleGrid,
    error_field,
    optimal_c,
    residual_field,
    table1_rows,
)
from .scheme import SeriesSolution, adm_solve, admp_solve, partial_sum, solution_to_text
from .series import NonInvertibleLeadingTerm

DEFAULT_FIELD_SAMPLES = 101


class UsageError(Exception):
    """Bad flags or flag combinations; exits with code 1."""


class ValidationFailure(Exception):
    """A validate run that found failures; exits with code 2."""


@dataclass
class RunConfig:
    command: str
    problem: str
    order: int = 0
    c: str = "symbolic"
    eps: str | None = None
    grid: str | None = None
    bracket: tuple[float, float] = DEFAULT_BRACKET
    tol: float = DEFAULT_TOL
    samples: int | None = None
    out: str = "-"
    format: str | None = None
    order_max: int = 10


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="admp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def common(p, order=False):
        p.add_argument("--problem", required=True,
                       help="catalog id (%s) or problem-file path" % ", ".join(CATALOG_IDS))
        if order:
            p.add_argument("--order", type=int, default=0, help="series order n")
        p.add_argument("--eps", default=None,
                       help="numeric value of the physical parameter eps (exact rational)")
        p.add_argument("--grid", default=None,
                       help="grid override: var=start:step:count[;var=...] (exact rationals)")
        p.add_argument("--bracket", default=None, help="search bracket lo:hi for c")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="minimizer tolerance on c")
        p.add_argument("--samples", type=int, default=None, help="dense sampling density")
        p.add_argument("--out", default="-", help="output path, or - for stdout")
        p.add_argument("--format", choices=("csv", "structured-text"), default=None)

    p = sub.add_parser("solve", help="write the series-solution document")
    common(p, order=True)
    p.add_argument("--c", default="symbolic",
                   help='"symbolic", "optimal", or an exact value (1 selects the classical scheme)')

    p = sub.add_parser("optimize", help="minimize the averaged residual over c")
    common(p, order=True)

    p = sub.add_parser("table1", help="per-order optimal c and maximal error remainders")
    common(p)
    p.add_argument("--order-max", type=int, default=10, dest="order_max")

    p = sub.add_parser("residual-field", help="dense residual dump over the domain")
    common(p, order=True)
    p.add_argument("--c", default="1", help="c value for the dump (exact rational)")

    p = sub.add_parser("error-field", help="dense (psi - exact) dump over the domain")
    common(p, order=True)
    p.add_argument("--c", default="1", help="c value for the dump (exact rational)")

    p = sub.add_parser("validate", help="check problem conditions and exact solution")
    common(p)
    return parser


def _config_from_args(args) -> RunConfig:
    bracket = DEFAULT_BRACKET
    if getattr(args, "bracket", None):
        pieces = args.bracket.replace(",", ":").split(":")
        if len(pieces) != 2:
            raise UsageError("--bracket must be lo:hi")
        bracket = (float(pieces[0]), float(pieces[1]))
    return RunConfig(
        command=args.command,
        problem=args.problem,
        order=getattr(args, "order", 0),
        c=getattr(args, "c", "symbolic"),
        eps=args.eps,
        grid=args.grid,
        bracket=bracket,
        tol=args.tol,
        samples=args.samples,
        out=args.out,
        format=args.format,
        order_max=getattr(args, "order_max", 10),
    )


def _resolve_problem(name: str):
    if name in CATALOG_IDS:
        return catalog(name)
    path = Path(name)
    if path.exists():
        return load_problem(path)
    raise UsageError(
        f"--problem: {name!r} is neither a catalog id ({', '.join(CATALOG_IDS)}) "
        "nor an existing file"
    )


def _parse_grid_override(text: str) -> SampleGrid:
    ranges = {}
    for group in text.split(";"):
        group = group.strip()
        if not group:
            continue
        var, _, spec = group.partition("=")
        pieces = spec.split(":")
        if len(pieces) != 3:
            raise UsageError(f"--grid: range for {var!r} must be start:step:count")
        ranges[var.strip()] = (Fraction(pieces[0]), Fraction(pieces[1]), int(pieces[2]))
    if not ranges:
        raise UsageError("--grid: empty grid specification")
    return SampleGrid.regular(ranges, label=text)


def _parse_rational_flag(value: str, flag: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{flag}: {value!r} is not an exact rational") from exc


def _params_for(problem, eps: str | None, needed_vars, config_cmd: str):
    params = {}
    if eps is not None:
        params["eps"] = _parse_rational_flag(eps, "--eps")
    elif "eps" in needed_vars:
        raise UsageError(
            f"--eps is required: the {problem.id!r} terms involve the physical parameter"
        )
    return params


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _metadata(pairs) -> str:
    return "".join(f"# {key} = {value}\n" for key, value in pairs)


def _csv_row(values) -> str:
    return ",".join(values) + "\n"


def _fmt(value: float) -> str:
    return repr(float(value))


def _run_solve(config: RunConfig) -> int:
    problem = _resolve_problem(config.problem)
    if config.order < 0:
        raise UsageError("--order must be >= 0")
    meta = []
    if config.c == "symbolic":
        sol = admp_solve(problem, config.order)
    elif config.c == "optimal":
        sol = admp_solve(problem, config.order)
        psi = partial_sum(sol, config.order)
        grid = _parse_grid_override(config.grid) if config.grid else problem.default_grid
        params = _params_for(problem, config.eps, psi.variables(), config.command)
        opt = optimal_c(problem, psi, grid, bracket=config.bracket, tol=config.tol,
                        params=params)
        c_value = Fraction(opt.c_star)
        sol = SeriesSolution(sol.method, sol.problem_id,
                             tuple(t.substitute("c", c_value) for t in sol.terms))
        meta.append(("c_star", _fmt(opt.c_star)))
        meta.append(("grid", grid.label or f"{len(grid)} points"))
    else:
        c_value = _parse_rational_flag(config.c, "--c")
        if c_value == 1:
            sol = adm_solve(problem, config.order)
        else:
            sol = admp_solve(problem, config.order)
            sol = SeriesSolution(sol.method, sol.problem_id,
                                 tuple(t.substitute("c", c_value) for t in sol.terms))
            meta.append(("c", str(c_value)))
    if config.eps is not None:
        eps_value = _parse_rational_flag(config.eps, "--eps")
        sol = SeriesSolution(sol.method, sol.problem_id,
                             tuple(t.substitute("eps", eps_value) for t in sol.terms))
        meta.append(("eps", str(eps_value)))
    if config.format == "csv":
        text = _metadata(meta) + _csv_row(("k", "term"))
        for k, term in enumerate(sol.terms):
            text += _csv_row((str(k), term.to_text()))
    else:
        text = _metadata(meta) + solution_to_text(sol)
    _emit(text, config.out)
    return 0


def _run_optimize(config: RunConfig) -> int:
    problem = _resolve_problem(config.problem)
    sol = admp_solve(problem, config.order)
    psi = partial_sum(sol, config.order)
    grid = _parse_grid_override(config.grid) if config.grid else problem.default_grid
    params = _params_for(problem, config.eps, psi.variables(), config.command)
    opt = optimal_c(problem, psi, grid, bracket=config.bracket, tol=config.tol,
                    params=params)
    meta = _metadata([
        ("command", "optimize"),
        ("problem", problem.id),
        ("order", config.order),
        ("grid", grid.label or f"{len(grid)} points"),
        ("bracket", f"{config.bracket[0]!r}:{config.bracket[1]!r}"),
        ("tol", repr(config.tol)),
        ("seeds", DEFAULT_SEEDS),
        ("div_floor", repr(DEFAULT_DIV_FLOOR)),
    ])
    if config.format == "csv":
        body = _csv_row(("c_star", "e_at_c_star", "e_prime_at_c_star",
                         "bracket_lo", "bracket_hi", "evaluations"))
        body += _csv_row((_fmt(opt.c_star), _fmt(opt.e_at_c_star),
                          _fmt(opt.e_prime_at_c_star), _fmt(opt.bracket[0]),
                          _fmt(opt.bracket[1]), str(opt.evaluations)))
    else:
        body = (
            f"c_star: {_fmt(opt.c_star)}\n"
            f"e_at_c_star: {_fmt(opt.e_at_c_star)}\n"
            f"e_prime_at_c_star: {_fmt(opt.e_prime_at_c_star)}\n"
            f"bracket: {_fmt(opt.bracket[0])} {_fmt(opt.bracket[1])}\n"
            f"evaluations: {opt.evaluations}\n"
        )
    _emit(meta + body, config.out)
    return 0


def _run_table1(config: RunConfig) -> int:
    problem = _resolve_problem(config.problem)
    if config.order_max < 1:
        raise UsageError("--order-max must be >= 1")
    grid = _parse_grid_override(config.grid) if config.grid else problem.default_grid
    samples = config.samples or DEFAULT_MER_SAMPLES
    params = {}
    if config.eps is not None:
        params["eps"] = _parse_rational_flag(config.eps, "--eps")
    rows = table1_rows(problem, order_max=config.order_max, grid=grid,
                       bracket=config.bracket, tol=config.tol, samples=samples,
                       params=params or None)
    meta = _metadata([
        ("command", "table1"),
        ("problem", problem.id),
        ("order_max", config.order_max),
        ("grid", grid.label or f"{len(grid)} points"),
        ("bracket", f"{config.bracket[0]!r}:{config.bracket[1]!r}"),
        ("tol", repr(config.tol)),
        ("seeds", DEFAULT_SEEDS),
        ("mer_samples", samples),
        ("div_floor", repr(DEFAULT_DIV_FLOOR)),
    ])
    if config.format == "structured-text":
        body = ""
        for row in rows:
            body += (f"n: {row.n}  c_star: {_fmt(row.c_star)}  "
                     f"E_at_c_star: {_fmt(row.e_at_c_star)}  "
                     f"MER_admp: {_fmt(row.mer_admp)}  MER_adm: {_fmt(row.mer_adm)}\n")
    else:
        body = _csv_row(TABLE1_COLUMNS)
        for row in rows:
            body += _csv_row((str(row.n), _fmt(row.c_star), _fmt(row.e_at_c_star),
                              _fmt(row.mer_admp), _fmt(row.mer_adm)))
    _emit(meta + body, config.out)
    return 0


def _field_rows_text(problem, rows, c_text: str, value_name: str, meta_pairs) -> str:
    header = FIELD_COLUMNS[:3] + (value_name,)
    text = _metadata(meta_pairs) + _csv_row(header)
    for point, value in rows:
        x = _fmt(point["x"]) if "x" in point else ""
        t = _fmt(point["t"]) if "t" in point else ""
        text += _csv_row((x, t, c_text, _fmt(value)))
    return text


def _run_field(config: RunConfig, which: str) -> int:
    problem = _resolve_problem(config.problem)
    sol = admp_solve(problem, config.order)
    psi = partial_sum(sol, config.order)
    c_value = _parse_rational_flag(config.c, "--c")
    needed = psi.variables() - {"c"}
    params = _params_for(problem, config.eps, needed, config.command)
    samples = config.samples or DEFAULT_FIELD_SAMPLES
    if which == "residual":
        rows = residual_field(problem, psi, c_value, samples=samples, params=params)
    else:
        rows = error_field(problem, psi, c_value, samples=samples, params=params)
    meta = [
        ("command", f"{which}-field"),
        ("problem", problem.id),
        ("order", config.order),
        ("c", str(c_value)),
        ("samples_per_axis", samples),
        ("domain", "; ".join(f"{var} in [{lo}, {hi}]"
                             for var, (lo, hi) in sorted(problem.domain.items()))),
    ]
    if params:
        meta.append(("eps", str(params["eps"])))
    _emit(_field_rows_text(problem, rows, _fmt(float(c_value)), which, meta), config.out)
    return 0


def _run_validate(config: RunConfig) -> int:
    problem = _resolve_problem(config.problem)
    result = validate_problem(problem)
    lines = [f"problem: {problem.id}"]
    for check in result.conditions.checks:
        status = "ok" if check.passed else "FAIL"
        lines.append(f"{status}: {check.subject}: {check.condition.describe()}")
    if result.exact_residual_max is not None:
        status = "ok" if result.exact_residual_max <= 1e-10 else "FAIL"
        lines.append(
            f"{status}: exact solution residual on default grid <= "
            f"{_fmt(result.exact_residual_max)}"
        )
    lines.append("validation: " + ("passed" if result.passed else "FAILED"))
    _emit("\n".join(lines) + "\n", config.out)
    if not result.passed:
        raise ValidationFailure(f"problem {problem.id!r} failed validation")
    return 0


def run(config: RunConfig) -> int:
    if config.command == "solve":
        return _run_solve(config)
    if config.command == "optimize":
        return _run_optimize(config)
    if config.command == "table1":
        return _run_table1(config)
    if config.command == "residual-field":
        return _run_field(config, "residual")
    if config.command == "error-field":
        return _run_field(config, "error")
    if config.command == "validate":
        return _run_validate(config)
    raise UsageError(f"unknown command {config.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return run(_config_from_args(args))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except (NonInvertibleLeadingTerm, DivisionNearZero, BracketError,
            UnknownVariableError, UnboundVariableError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
