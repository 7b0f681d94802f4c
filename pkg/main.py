#!/usr/bin/env python3
"""
Three-Body Integrals - Main Entry Point

Evaluates closed-form and series three-body integrals, checks them against
the brute-force oracle, and reproduces the published reference tables.
"""
import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence

import colorama
import numpy as np
from colorama import Fore, Style
from scipy.special import spherical_jn
from tqdm import tqdm

# Initialize colorama for Windows support
colorama.init(autoreset=True)

# Import local modules
from config import (
    FINE_STRUCTURE, LOG_FORMAT, LOG_LEVEL, ORACLE_NODES, ORACLE_TOL, OUTPUT_FORMATS, PRECISIONS,
    TABLE_I_RTOL, TABLE_II_RTOL, TABLE_WORKERS, XI_MAPPINGS, XI_NODE_COUNT,
    XI_TOL, format_value, print_config,
)
from core import (
    BasicBSpec, ExpParams, IntegralResult, PerimetricPoint, PowerIndices, RelativePoint,
    basic_b, basic_b_closed, from_perimetric, gamma_klm, larson_a, power_g, to_perimetric,
)
from bessel_single import (
    BesselArgument, BesselIntegralSpec, SeriesControl, bessel0_integral, bessel1_integral,
    bessel_integral, recursion_residual, spherical_jL,
)
from bessel_double import (
    DoubleBesselSpec, default_control, double_bessel_integral, product_jj_series, sin_sin_integral,
)
from uehling import (
    INTEGRAL, KI_FORM, PAIRS, UehlingSystem, XiQuadSpec, bessel_k0, ki_n, ubar_kernel,
    uehling_matrix_element, uehling_potential_point, yukawa_matrix_element,
)
from composite import JSpec, SeriesFunction, bessel_neg1_integral, j_integral_derivative, series_integral
from oracle import OracleSpec, monomial, quad3d
from addition_theorem import residual_survey
from tables import TABLES
from errors import ConvergenceError, IntegralDomainError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NOT_CONVERGED = 4


@dataclass
class OutputRecord:
    """One result line: operation, echoed inputs and the IntegralResult fields"""
    operation: str
    inputs: Dict
    value: float
    abs_err: float = 0.0
    terms: int = 0
    converged: bool = True
    wall_time: Optional[float] = None
    extra: Dict = field(default_factory=dict)

    @classmethod
    def from_result(cls, operation: str, inputs: Dict, result: IntegralResult, **extra) -> "OutputRecord":
        return cls(operation, inputs, result.value, result.abs_error_estimate,
                   result.terms_used, result.converged, extra=extra)

    def to_dict(self) -> Dict:
        row = {"operation": self.operation, **self.inputs, "value": self.value,
               "abs_err": self.abs_err, "terms": self.terms, "converged": self.converged}
        row.update(self.extra)
        if self.wall_time is not None:
            row["wall_time"] = self.wall_time
        return row


# ============================================================================
# OUTPUT
# ============================================================================

def _cell(value) -> str:
    if isinstance(value, bool) or not isinstance(value, (float, np.floating)):
        return str(value)
    return format_value(float(value))


def write_rows(rows: List[Dict], fmt: str, stream=None):
    """CSV with 17-digit scientific values, or JSON mirroring the rows"""
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(rows, stream, indent=2)
        stream.write("\n")
        return
    if not rows:
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(list(rows[0].keys()))
    for row in rows:
        writer.writerow([_cell(v) for v in row.values()])


def _warn(message: str):
    print(f"{Fore.YELLOW}⚠ {message}{Style.RESET_ALL}", file=sys.stderr)


def _error(message: str):
    print(f"{Fore.RED}✗ {message}{Style.RESET_ALL}", file=sys.stderr)


# ============================================================================
# ARGUMENT HELPERS
# ============================================================================

def _indices(args) -> PowerIndices:
    return PowerIndices(args.k, args.l, args.n)


def _params(args) -> ExpParams:
    return ExpParams(args.alpha, args.beta, args.gamma)


def _echo(args) -> Dict:
    return {"k": args.k, "l": args.l, "n": args.n, "alpha": args.alpha, "beta": args.beta, "gamma": args.gamma}


def _control(args, base: Optional[SeriesControl] = None, **overrides) -> SeriesControl:
    """Command-line overrides on top of base (the single-Bessel defaults when omitted)"""
    options = {"precision": args.precision}
    if args.tol is not None:
        options["rel_tol"] = args.tol
    if args.qmax is not None:
        options["q_max"] = args.qmax
    options.update(overrides)
    return replace(base or SeriesControl(), **options)


def _add_indices(parser):
    parser.add_argument('-k', type=int, default=0, help='Power of r32 (default: 0)')
    parser.add_argument('-l', type=int, default=0, help='Power of r31 (default: 0)')
    parser.add_argument('-n', type=int, default=0, help='Power of r21 (default: 0)')


def _add_params(parser, default=1.0):
    parser.add_argument('-a', '--alpha', type=float, default=default, help='Exponent of r32')
    parser.add_argument('-b', '--beta', type=float, default=default, help='Exponent of r31')
    parser.add_argument('-c', '--gamma', type=float, default=default, help='Exponent of r21')


def _parse_series_term(text: str):
    parts = text.split(':')
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"series term must be A:n or A:n:B, got {text!r}")
    coefficient, power = float(parts[0]), int(parts[1])
    return (coefficient, power) if len(parts) == 2 else (coefficient, power, float(parts[2]))


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def cmd_gamma(args) -> List[OutputRecord]:
    result = gamma_klm(_indices(args), _params(args), args.precision)
    return [OutputRecord.from_result("gamma", _echo(args), result)]


def cmd_larson(args) -> List[OutputRecord]:
    value = larson_a(args.order, args.x)
    return [OutputRecord("larson", {"order": args.order, "x": args.x}, value)]


def _basic_spec(args) -> BasicBSpec:
    p1, p2, p3 = args.p
    q0, q1, q2, q3 = args.q
    return BasicBSpec(args.alpha, args.beta, args.gamma, p1, p2, p3, q0, q1, q2, q3, args.s)


def _basic_echo(args) -> Dict:
    return {"a": args.alpha, "b": args.beta, "c": args.gamma, "p": " ".join(map(str, args.p)),
            "q": " ".join(map(str, args.q)), "s": args.s}


def cmd_basic_b(args) -> List[OutputRecord]:
    spec = _basic_spec(args)
    if args.closed:
        result = basic_b_closed(spec)
    else:
        result = basic_b(spec, args.tol) if args.tol is not None else basic_b(spec)
    return [OutputRecord.from_result("basic-b", _basic_echo(args), result)]


def cmd_power_g(args) -> List[OutputRecord]:
    return [OutputRecord.from_result("power-g", _basic_echo(args), power_g(_basic_spec(args)))]


def cmd_perimetric(args) -> List[OutputRecord]:
    x, y, z = args.coords
    if args.inverse:
        r = from_perimetric(PerimetricPoint(x, y, z))
        rows = [("r32", r.r32), ("r31", r.r31), ("r21", r.r21)]
    else:
        u = to_perimetric(RelativePoint(x, y, z))
        rows = [("u1", u.u1), ("u2", u.u2), ("u3", u.u3)]
    return [OutputRecord("perimetric", {"input": " ".join(map(str, args.coords)), "component": name}, value)
            for name, value in rows]


def cmd_jl(args) -> List[OutputRecord]:
    return [OutputRecord("jl", {"order": args.order, "x": args.x}, spherical_jL(args.order, args.x))]


def cmd_bessel(args) -> List[OutputRecord]:
    spec = BesselIntegralSpec(_indices(args), _params(args), args.V, args.order)
    result = bessel_integral(spec, _control(args), BesselArgument(args.argument))
    inputs = {**_echo(args), "V": args.V, "order": args.order, "argument": args.argument}
    return [OutputRecord.from_result("bessel", inputs, result)]


def cmd_recursion(args) -> List[OutputRecord]:
    spec = BesselIntegralSpec(_indices(args), _params(args), args.V, args.order)
    value = recursion_residual(spec, _control(args))
    return [OutputRecord("recursion", {**_echo(args), "V": args.V, "order": args.order}, value)]


def cmd_bessel2(args) -> List[OutputRecord]:
    L1, L2 = args.orders
    spec = DoubleBesselSpec(_indices(args), _params(args), args.V, L1, L2)
    result = double_bessel_integral(spec, _control(args, default_control()))
    inputs = {**_echo(args), "V": args.V, "L1": L1, "L2": L2}
    return [OutputRecord.from_result("bessel2", inputs, result)]


def cmd_sin_sin(args) -> List[OutputRecord]:
    result = sin_sin_integral(_indices(args), _params(args), args.V, _control(args, default_control()))
    return [OutputRecord.from_result("sin-sin", {**_echo(args), "V": args.V}, result)]


def cmd_jj(args) -> List[OutputRecord]:
    L1, L2 = args.orders
    value = product_jj_series(L1, L2, args.a, args.b, args.x, args.y, args.pmax)
    inputs = {"L1": L1, "L2": L2, "a": args.a, "b": args.b, "x": args.x, "y": args.y, "p_max": args.pmax}
    return [OutputRecord("jj", inputs, value, terms=args.pmax + 1)]


def _uehling_system(args) -> UehlingSystem:
    q1, q2, q3 = args.charges
    return UehlingSystem(q1, q2, q3, args.fine_structure, args.Q)


def cmd_uehling_me(args) -> List[OutputRecord]:
    quad = XiQuadSpec(args.nodes, args.mapping, args.tol if args.tol is not None else XI_TOL)
    result = uehling_matrix_element(_uehling_system(args), _params(args), quad)
    inputs = {"alpha": args.alpha, "beta": args.beta, "gamma": args.gamma,
              "charges": " ".join(map(str, args.charges)), "mapping": args.mapping, "nodes": args.nodes}
    return [OutputRecord.from_result("uehling-me", inputs, result)]


def cmd_uehling_point(args) -> List[OutputRecord]:
    value = uehling_potential_point(_uehling_system(args), args.r, args.mode)
    return [OutputRecord("uehling-point", {"r": args.r, "Q": args.Q, "mode": args.mode}, value)]


def cmd_ubar(args) -> List[OutputRecord]:
    value = ubar_kernel(args.pair, _params(args), args.shift)
    inputs = {"pair": args.pair, "alpha": args.alpha, "beta": args.beta, "gamma": args.gamma, "shift": args.shift}
    return [OutputRecord("ubar", inputs, value)]


def cmd_yukawa(args) -> List[OutputRecord]:
    result = yukawa_matrix_element(_params(args), args.mu, args.V0, args.pair)
    inputs = {"pair": args.pair, "alpha": args.alpha, "beta": args.beta, "gamma": args.gamma,
              "mu": args.mu, "V0": args.V0}
    return [OutputRecord.from_result("yukawa", inputs, result)]


def cmd_ki(args) -> List[OutputRecord]:
    value = bessel_k0(args.z, args.method) if args.order == 0 else ki_n(args.order, args.z)
    return [OutputRecord("ki", {"order": args.order, "z": args.z}, value)]


def cmd_j_integral(args) -> List[OutputRecord]:
    spec = JSpec(_indices(args), _params(args), args.t)
    result = j_integral_derivative(spec, args.derivative, _control(args))
    inputs = {**_echo(args), "t": args.t, "derivative": args.derivative}
    return [OutputRecord.from_result("j-integral", inputs, result)]


def cmd_cosine(args) -> List[OutputRecord]:
    result = bessel_neg1_integral(_indices(args), _params(args), args.V, _control(args))
    return [OutputRecord.from_result("cosine", {**_echo(args), "V": args.V}, result)]


def cmd_series(args) -> List[OutputRecord]:
    f = SeriesFunction.from_pairs(args.term)
    result = series_integral(f, _params(args), args.damped)
    inputs = {"alpha": args.alpha, "beta": args.beta, "gamma": args.gamma,
              "terms": " ".join(f"{t.coefficient}:{t.power}:{t.damping}" for t in f.terms),
              "damped": args.damped}
    return [OutputRecord.from_result("series", inputs, result)]


def cmd_oracle(args) -> List[OutputRecord]:
    factor = None
    if args.order is not None:
        order, V = args.order, args.V
        factor = lambda r32, r31, r21: spherical_jn(order, V * r32)
    spec = OracleSpec(monomial(args.k, args.l, args.n, factor), _params(args),
                      include_volume_weight=args.weight, nodes_per_axis=args.nodes,
                      tol=args.tol if args.tol is not None else ORACLE_TOL)
    result = quad3d(spec)
    inputs = {**_echo(args), "order": "" if args.order is None else args.order, "V": args.V,
              "weight": args.weight, "nodes": args.nodes}
    return [OutputRecord.from_result("oracle", inputs, result)]


def _relative_difference(computed: float, published: float) -> float:
    return abs(computed - published) / abs(published)


def _table_i_rows(args) -> List[OutputRecord]:
    jobs = [(row, gamma) for row in TABLES["I"] for gamma in (0.567, -0.567)]

    def evaluate(job):
        row, gamma = job
        return gamma_klm(row.idx, row.params(gamma), args.precision)

    records = []
    for (row, gamma), result in zip(jobs, _parallel(evaluate, jobs, "Table I")):
        published = row.positive if gamma > 0 else row.negative
        diff = _relative_difference(result.value, published)
        matched = diff <= TABLE_I_RTOL
        _report_row(f"Gamma_{{{row.k};2;1}}(gamma={gamma:+.3f})", diff, matched, False)
        inputs = {"k": row.k, "l": 2, "n": 1, "alpha": 2.35, "beta": 1.41, "gamma": gamma,
                  "V": "", "kind": "Gamma", "published": published}
        records.append(OutputRecord.from_result("table-I", inputs, result, rel_diff=diff))
    return records


def _table_ii_rows(args) -> List[OutputRecord]:
    jobs = [(row, kind) for row in TABLES["II"] for kind in ("B0", "B1")]

    def evaluate(job):
        row, kind = job
        spec = BesselIntegralSpec(row.idx, row.params, row.V)
        ctl = _control(args, q_max=args.qmax or row.q_max)
        return (bessel0_integral if kind == "B0" else bessel1_integral)(spec, ctl)

    records = []
    for (row, kind), result in zip(jobs, _parallel(evaluate, jobs, "Table II")):
        published = row.b0 if kind == "B0" else row.b1
        diff = _relative_difference(result.value, published)
        matched = diff <= TABLE_II_RTOL
        _report_row(f"{kind}_{{{row.k};2;1}}(V={row.V:.2f})", diff, matched, row.suspect)
        inputs = {"k": row.k, "l": 2, "n": 1, "alpha": 2.35, "beta": 1.41, "gamma": 0.567,
                  "V": row.V, "kind": kind, "published": published}
        records.append(OutputRecord.from_result("table-II", inputs, result, rel_diff=diff))
    return records


def _parallel(evaluate: Callable, jobs: Sequence, label: str) -> List:
    show = sys.stderr.isatty()
    with ThreadPoolExecutor(max_workers=TABLE_WORKERS) as pool:
        return list(tqdm(pool.map(evaluate, jobs), total=len(jobs), desc=label,
                         disable=not show, leave=False))


def _report_row(label: str, diff: float, matched: bool, suspect: bool):
    if matched:
        print(f"{Fore.GREEN}✓ {label}: rel. diff {diff:.2e}{Style.RESET_ALL}", file=sys.stderr)
    elif suspect:
        _warn(f"{label}: published row is a duplicate, rel. diff {diff:.2e}")
        logger.warning("suspect published row %s differs by %.3g", label, diff)
    else:
        _error(f"{label}: rel. diff {diff:.2e} above tolerance")


def cmd_table(args) -> List[OutputRecord]:
    return _table_i_rows(args) if args.which == "I" else _table_ii_rows(args)


def cmd_addition_survey(args) -> List[Dict]:
    return residual_survey(args.count, args.wave, args.order, args.seed, args.lmax)


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per library operation"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', type=float, help='Relative tolerance (series rel_tol or quadrature tol)')
    common.add_argument('--qmax', type=int, help='Series term cap')
    common.add_argument('--format', choices=OUTPUT_FORMATS, default='csv', help='Output format (default: csv)')
    common.add_argument('--precision', choices=PRECISIONS, default='standard',
                        help='Accumulator precision (default: standard)')
    common.add_argument('--timing', action='store_true', help='Add wall time to every output record')
    common.add_argument('--verbose', '-v', action='count', default=0, help='More log output on stderr')

    parser = argparse.ArgumentParser(description="Three-body exponential integrals")
    parser.add_argument('--show-config', action='store_true', help='Print the active configuration and exit')
    sub = parser.add_subparsers(dest='command')

    def add(name, handler, help_text, indices=True, params=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if indices:
            _add_indices(p)
        if params:
            _add_params(p)
        p.set_defaults(func=handler)
        return p

    add('gamma', cmd_gamma, 'Closed-form Gamma_{k;l;n}')

    p = add('larson', cmd_larson, 'Larson function A_n(X) = n!/X^(n+1)', indices=False, params=False)
    p.add_argument('--order', type=float, required=True)
    p.add_argument('--x', type=float, required=True)

    for name, handler, help_text in (('basic-b', cmd_basic_b, 'Basic integral B via its 1D reduction'),
                                     ('power-g', cmd_power_g, 'Closed-form power-type integral G')):
        p = add(name, handler, help_text, indices=False)
        p.add_argument('--p', type=float, nargs=3, default=[0.0, 0.0, 0.0], metavar=('P1', 'P2', 'P3'))
        p.add_argument('--q', type=float, nargs=4, default=[1.0, 0.0, 0.0, 0.0], metavar=('Q0', 'Q1', 'Q2', 'Q3'))
        p.add_argument('--s', type=float, default=1.0)
        if name == 'basic-b':
            p.add_argument('--closed', action='store_true', help='Use the closed form (q=(1,0,0,0), s=1)')

    p = add('perimetric', cmd_perimetric, 'Relative <-> perimetric coordinates', indices=False, params=False)
    p.add_argument('coords', type=float, nargs=3)
    p.add_argument('--inverse', action='store_true', help='Input is (u1, u2, u3)')

    p = add('jl', cmd_jl, 'Spherical Bessel function j_L(x)', indices=False, params=False)
    p.add_argument('--order', type=int, required=True)
    p.add_argument('--x', type=float, required=True)

    p = add('bessel', cmd_bessel, 'Integral with j_L(V r_ij)')
    p.add_argument('--order', type=int, default=0)
    p.add_argument('--V', type=float, required=True)
    p.add_argument('--argument', choices=[a.value for a in BesselArgument], default='r32')

    p = add('recursion', cmd_recursion, 'Residual of the Bessel recursion between integrals')
    p.add_argument('--order', type=int, default=1)
    p.add_argument('--V', type=float, required=True)

    p = add('bessel2', cmd_bessel2, 'Integral with j_L1(V r32) j_L2(V r31)')
    p.add_argument('--orders', type=int, nargs=2, default=[0, 0], metavar=('L1', 'L2'))
    p.add_argument('--V', type=float, required=True)

    p = add('sin-sin', cmd_sin_sin, 'Integral with sin(V r32) sin(V r31)')
    p.add_argument('--V', type=float, required=True)

    p = add('jj', cmd_jj, 'Double series for j_L1(a x) j_L2(b y)', indices=False, params=False)
    p.add_argument('--orders', type=int, nargs=2, default=[0, 0], metavar=('L1', 'L2'))
    p.add_argument('--a', type=float, default=1.0)
    p.add_argument('--b', type=float, default=1.0)
    p.add_argument('--x', type=float, required=True)
    p.add_argument('--y', type=float, required=True)
    p.add_argument('--pmax', type=int, default=40)

    for name, handler, help_text in (('uehling-me', cmd_uehling_me, 'Uehling three-body matrix element'),
                                     ('uehling-point', cmd_uehling_point, 'Uehling potential U(r)')):
        p = add(name, handler, help_text, indices=False, params=(name == 'uehling-me'))
        p.add_argument('--charges', type=float, nargs=3, default=[1.0, -1.0, -1.0], metavar=('Q1', 'Q2', 'Q3'))
        p.add_argument('--fine-structure', type=float, default=FINE_STRUCTURE)
        p.add_argument('--Q', type=float, default=1.0, help='Nuclear charge for U(r)')
        if name == 'uehling-me':
            p.add_argument('--mapping', choices=XI_MAPPINGS, default='inverse')
            p.add_argument('--nodes', type=int, default=XI_NODE_COUNT)
        else:
            p.add_argument('--r', type=float, required=True)
            p.add_argument('--mode', choices=(INTEGRAL, KI_FORM), default=INTEGRAL)

    p = add('ubar', cmd_ubar, 'Pair kernel U-bar_ij(shift)', indices=False)
    p.add_argument('--pair', type=int, choices=PAIRS, default=21)
    p.add_argument('--shift', type=float, default=0.0)

    p = add('yukawa', cmd_yukawa, 'Yukawa-type matrix element', indices=False)
    p.add_argument('--pair', type=int, choices=PAIRS, default=32)
    p.add_argument('--mu', type=float, default=0.0)
    p.add_argument('--V0', type=float, default=1.0)

    p = add('ki', cmd_ki, 'K0 (order 0) or Bickley function Ki_n', indices=False, params=False)
    p.add_argument('--order', type=int, default=0)
    p.add_argument('--z', type=float, required=True)
    p.add_argument('--method', choices=('auto', 'series', 'integral'), default='auto')

    p = add('j-integral', cmd_j_integral, 'J(t) or its t-derivatives')
    p.add_argument('--t', type=float, default=0.0)
    p.add_argument('--derivative', type=int, default=0)

    p = add('cosine', cmd_cosine, 'Cosine moment (integral with j_-1)')
    p.add_argument('--V', type=float, default=1.0)

    p = add('series', cmd_series, 'Integral of a finite radial series', indices=False)
    p.add_argument('--term', type=_parse_series_term, action='append', required=True,
                   help='Series term A:n or A:n:B (repeatable)')
    p.add_argument('--damped', action='store_true')

    p = add('oracle', cmd_oracle, 'Brute-force perimetric quadrature')
    p.add_argument('--order', type=int, help='Multiply by j_L(V r32)')
    p.add_argument('--V', type=float, default=0.0)
    p.add_argument('--nodes', type=int, default=ORACLE_NODES)
    p.add_argument('--weight', action='store_true', help='Include the r32 r31 r21 volume factor')

    p = add('table', cmd_table, 'Recompute a published table', indices=False, params=False)
    p.add_argument('--which', choices=sorted(TABLES), required=True)

    p = add('addition-survey', cmd_addition_survey, 'Identity residuals over random triangles',
            indices=False, params=False)
    p.add_argument('--count', type=int, default=100)
    p.add_argument('--wave', type=float, default=1.0, help='Wave number k')
    p.add_argument('--order', type=int, default=1, help='Order L of the term-wise identity')
    p.add_argument('--lmax', type=int, default=30)
    p.add_argument('--seed', type=int, default=0)

    return parser


def _configure_logging(verbose: int):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand, print its rows; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    if args.show_config:
        print_config()
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    _configure_logging(args.verbose)
    started = time.perf_counter()
    try:
        output = args.func(args)
    except IntegralDomainError as exc:
        _error(f"{args.command}: {exc}")
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        _error(f"{args.command}: {exc}")
        return EXIT_NOT_CONVERGED
    elapsed = time.perf_counter() - started
    logger.info("%s finished in %.3f s", args.command, elapsed)

    if output and isinstance(output[0], OutputRecord):
        if args.timing:
            for record in output:
                record.wall_time = elapsed
        converged = all(record.converged for record in output)
        rows = [record.to_dict() for record in output]
    else:
        converged = True
        rows = output
    write_rows(rows, args.format)

    if not converged:
        _warn(f"{args.command}: result did not converge")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def main():
    """Main application flow"""
    return run(sys.argv[1:])


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print(f"\n\n{Fore.YELLOW}⚠ Interrupted by user{Style.RESET_ALL}", file=sys.stderr)
        sys.exit(1)
