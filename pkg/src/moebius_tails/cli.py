"""Batch front end: ``moebius-lab <subcommand> [options]``.

Every run writes a CSV table (stdout or --out) and a JSON manifest (stderr
or --manifest). ``moebius-lab replay MANIFEST`` re-executes a manifest;
results do not depend on --workers.

Exit codes: 0 success, 1 domain/validation error, 2 numeric
non-convergence, 64 malformed command line.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from typing import Callable

import numpy as np

from . import __version__
from .analysis import conjecture_report, log_grid
from .errors import ConvergenceError, MoebiusLabError
from .mellin_barnes import ContourSpec, default_abscissa, inverse_mellin
from .moebius import (DEFAULT_BLOCK_SIZE, DEFAULT_CAPACITY, default_workers, mertens_checkpoints,
                      sieve_block, write_block_cache)
from .residues import asymptotic_parts, bundled_zero_table, load_zero_table
from .series import (SeriesParams, TruncationPlan, bose_laplace_integral, moebius_tail,
                     moebius_tails, plain_tail, power_series_rhs)
from .special import zeta

EXIT_OK, EXIT_DOMAIN, EXIT_NONCONVERGENCE, EXIT_USAGE = 0, 1, 2, 64
SCHEMA_VERSION = 1

ENV_DEFAULTS = {
    "workers": "MOEBIUS_LAB_WORKERS",
    "block_size": "MOEBIUS_LAB_BLOCK_SIZE",
    "capacity": "MOEBIUS_LAB_CAPACITY",
    "zeros": "MOEBIUS_LAB_ZEROS",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _int_like(text: str) -> int:
    # accepts 1e9 style as well as plain integers
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


class Table:
    def __init__(self, schema: str, columns: list[str], meta: dict | None = None):
        self.schema = schema
        self.columns = columns
        self.meta = meta or {}
        self.rows: list[list] = []

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError("row width does not match header")
        self.rows.append(list(row))

    def render(self) -> str:
        buf = io.StringIO()
        buf.write(f"# moebius-lab {self.schema} schema v{SCHEMA_VERSION}\n")
        for k, v in self.meta.items():
            buf.write(f"# {k}={_fmt(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()


def _plan(args) -> TruncationPlan:
    kw = dict(mertens_coefficient=args.mertens_a, mertens_exponent=args.mertens_theta)
    if args.cutoff is not None:
        return TruncationPlan.fixed(args.cutoff, **kw)
    return TruncationPlan(target_tolerance=args.tol, **kw)


def _zero_table(args):
    return load_zero_table(args.zeros) if args.zeros else bundled_zero_table()


# -- subcommands ------------------------------------------------------------------

def cmd_sieve(args) -> Table:
    if args.mertens:
        t = Table("sieve-mertens", ["n", "mertens"])
        for cp in mertens_checkpoints(args.mertens, block_size=args.block_size,
                                      workers=args.workers, capacity=args.capacity):
            t.add(cp.n, cp.value)
        return t
    block = sieve_block(args.start, args.length, args.capacity)
    if args.cache:
        write_block_cache(args.cache, block)
    t = Table("sieve-block", ["n", "mu"], {"start": block.start, "length": len(block)})
    for i, v in enumerate(block.values):
        t.add(block.start + i, int(v))
    return t


def cmd_msum(args) -> Table:
    plan = _plan(args)
    ests = moebius_tails(args.s, args.x, plan, workers=args.workers,
                         block_size=args.block_size, capacity=args.capacity)
    t = Table("msum", ["x", "value_re", "value_im", "value_error", "cutoff",
                       "truncation_error", "rounding_error"],
              {"s": args.s, "error_model": plan.model})
    for x, e in zip(args.x, ests):
        t.add(x, e.value.real, e.value.imag, e.error, e.cutoff, e.truncation_error, e.rounding_error)
    return t


def cmd_psum(args) -> Table:
    t = Table("psum", ["x", "value_re", "value_im", "value_error"], {"s": args.s})
    for x in args.x:
        e = plain_tail(SeriesParams(args.s, x, TruncationPlan(args.tol)))
        t.add(x, e.value.real, e.value.imag, e.error)
    return t


def cmd_mb(args) -> Table:
    t = Table("mb", ["x", "value_re", "value_im", "value_error", "c", "half_height", "panels"],
              {"s": args.s})
    for x in args.x:
        contour = None
        if args.c is not None or args.half_height is not None:
            from .mellin_barnes import default_half_height
            c = args.c if args.c is not None else default_abscissa(args.s)
            y = args.half_height or default_half_height(args.s, x, c, args.tol)
            contour = ContourSpec(c, y)
        e = inverse_mellin(args.s, x, contour, args.tol)
        t.add(x, e.value.real, e.value.imag, e.error, e.contour.c, e.contour.half_height, e.panels)
    return t


def cmd_residue(args) -> Table:
    table = _zero_table(args)
    cols = ["x", "approx_re", "approx_im", "pole_part_re", "pole_part_im",
            "zero_part_re", "zero_part_im", "last_pair_abs"]
    if args.compare:
        cols += ["direct_re", "direct_im", "direct_error", "relative_deviation"]
    t = Table("residue-approx", cols, {"s": args.s, "n_max": args.n_max,
                                       "zero_pairs": args.zero_pairs, "zeros": table.source})
    direct = None
    if args.compare:
        direct = moebius_tails(args.s, args.x, _plan(args), workers=args.workers,
                               block_size=args.block_size, capacity=args.capacity)
    for i, x in enumerate(args.x):
        p = asymptotic_parts(args.s, x, args.n_max, args.zero_pairs, table)
        row = [x, p.total.real, p.total.imag, p.pole_part.real, p.pole_part.imag,
               p.zero_part.real, p.zero_part.imag, p.last_pair]
        if direct is not None:
            d = direct[i]
            row += [d.value.real, d.value.imag, d.error, abs(p.total - d.value) / abs(d.value)]
        t.add(*row)
    return t


def identity_checks(s: complex, tol: float, table=None, workers=None) -> list[dict]:
    """Cross-method deviations for one exponent s (Re s > 1)."""
    rows = []

    def add(name, x, lhs, lhs_err, rhs, rhs_err, allowed):
        dev = abs(lhs - rhs)
        rows.append(dict(identity=name, x=x, lhs=lhs, lhs_error=lhs_err, rhs=rhs,
                         rhs_error=rhs_err, deviation=dev, allowed=allowed, ok=dev <= allowed))

    plan = TruncationPlan(min(tol, 1e-10) / 10)
    xs = [0.0, 0.25, 0.5, 0.9, 2.0, 10.0, 1000.0]
    direct = dict(zip(xs, moebius_tails(s, xs, plan, workers=workers)))
    d0 = direct[0.0]
    add("dirichlet_inverse_zeta", 0.0, d0.value, d0.error, 1 / zeta(s), 0.0, tol + d0.error)
    for x in (0.25, 0.5, 0.9):
        d = direct[x]
        add("power_series", x, d.value, d.error, power_series_rhs(s, x), 0.0, tol + d.error)
    for x in (0.5, 2.0, 10.0):
        d = direct[x]
        m = inverse_mellin(s, x, tolerance=1e-13)
        add("mellin_barnes", x, d.value, d.error, m.value, m.error, tol + d.error + m.error)
    for x in (1.0, 10.0):
        p = plain_tail(SeriesParams(s, x))
        b = bose_laplace_integral(s, x)
        add("laplace_integral", x, p.value, p.error, b.value, b.error, tol + p.error + b.error)
    d = direct[1000.0]
    a = asymptotic_parts(s, 1000.0, 1, 50, table).total
    add("residue_expansion", 1000.0, d.value, d.error, a, 0.0, 0.2 * abs(d.value))
    return rows


def cmd_verify(args) -> Table:
    rows = identity_checks(args.s, args.tol, _zero_table(args), args.workers)
    t = Table("verify-identities", ["identity", "x", "lhs_re", "lhs_im", "lhs_error", "rhs_re",
                                    "rhs_im", "rhs_error", "deviation", "allowed", "pass"],
              {"s": args.s, "tol": args.tol})
    for r in rows:
        t.add(r["identity"], r["x"], r["lhs"].real, r["lhs"].imag, r["lhs_error"],
              complex(r["rhs"]).real, complex(r["rhs"]).imag, r["rhs_error"], r["deviation"],
              r["allowed"], r["ok"])
    t.failed = not all(r["ok"] for r in rows)
    return t


def cmd_fit(args) -> Table:
    grid = log_grid(args.xmin, args.xmax, args.points)
    plan = TruncationPlan.fixed(args.cutoff, mertens_coefficient=args.mertens_a,
                                mertens_exponent=args.mertens_theta)
    rep = conjecture_report(args.s, grid, args.epsilon, plan=plan, workers=args.workers,
                            block_size=args.block_size, capacity=args.capacity,
                            threshold=args.threshold)
    fit = rep.fit
    summary = {
        "s": str(rep.s), "fitted_slope": rep.fitted_slope,
        "slope_halfwidth": fit.slope_halfwidth if fit else None,
        "conjectured_slope": rep.conjectured_slope, "epsilon_slope": rep.epsilon_slope,
        "sigma_m_estimate": rep.sigma_m_estimate, "verdict": rep.verdict,
        "exponent_match": rep.exponent_match,
    }
    t = Table("fit", ["fitted_slope", "slope_halfwidth", "intercept", "residual_rms",
                      "conjectured_slope", "epsilon_slope", "sigma_m_estimate",
                      "sigma_m_halfwidth", "points_used", "verdict", "exponent_match"],
              {"s": args.s, "epsilon": args.epsilon, "cutoff": args.cutoff,
               "summary": json.dumps(summary, sort_keys=True, default=_fmt)})
    if fit:
        t.add(fit.slope, fit.slope_halfwidth, fit.intercept, fit.residual_rms,
              rep.conjectured_slope, rep.epsilon_slope, fit.sigma_m_estimate,
              fit.slope_halfwidth, fit.points_used, rep.verdict, rep.exponent_match)
    else:
        t.add(math.nan, math.nan, math.nan, math.nan, rep.conjectured_slope, rep.epsilon_slope,
              math.nan, math.nan, 0, rep.verdict, rep.exponent_match)
    if args.samples:
        st = Table("fit-samples", ["x", "value_re", "value_im", "value_error", "admitted"],
                   {"s": args.s})
        sm = rep.samples
        for x, v, e, a in zip(sm.x, sm.value, sm.error, sm.admitted):
            st.add(x, v.real, v.imag, e, bool(a))
        with open(args.samples, "w") as fh:
            fh.write(st.render())
    return t


def cmd_watson(args) -> Table:
    t = Table("watson", ["x", "plain_re", "plain_im", "plain_error", "leading_re", "leading_im",
                         "ratio_re", "ratio_im", "ratio_deviation", "laplace_re", "laplace_im",
                         "laplace_error"], {"s": args.s})
    s = args.s
    for x in args.x:
        p = plain_tail(SeriesParams(s, x))
        lead = np.exp((1 - s) * math.log(x)) / (s - 1)
        ratio = p.value / lead
        b = bose_laplace_integral(s, x)
        t.add(x, p.value.real, p.value.imag, p.error, lead.real, lead.imag, ratio.real,
              ratio.imag, abs(ratio - 1), b.value.real, b.value.imag, b.error)
    return t


COMMANDS: dict[str, Callable] = {
    "sieve": cmd_sieve, "msum": cmd_msum, "psum": cmd_psum, "mb": cmd_mb,
    "residue-approx": cmd_residue, "verify-identities": cmd_verify, "fit": cmd_fit,
    "watson": cmd_watson,
}


# -- parser ----------------------------------------------------------------------------

def _env(name, cast, default):
    raw = os.environ.get(ENV_DEFAULTS[name])
    if raw is None:
        return default
    try:
        return cast(raw)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"bad value {raw!r} in ${ENV_DEFAULTS[name]}") from None


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="CSV destination (default stdout)")
    common.add_argument("--manifest", help="manifest destination (default stderr)")
    common.add_argument("--workers", type=_int_like, default=_env("workers", int, None),
                        help="worker threads for block-parallel work (default: all CPUs)")
    common.add_argument("--block-size", type=_int_like,
                        default=_env("block_size", int, DEFAULT_BLOCK_SIZE))
    common.add_argument("--capacity", type=_int_like,
                        default=_env("capacity", int, DEFAULT_CAPACITY))
    common.add_argument("--seed", type=int, default=0, help="recorded for synthetic runs")

    plan = _Parser(add_help=False)
    plan.add_argument("--tol", type=float, default=1e-10, help="target truncation tolerance")
    plan.add_argument("--cutoff", type=_int_like, default=None, help="fixed cutoff N")
    plan.add_argument("--mertens-a", type=float, default=0.6)
    plan.add_argument("--mertens-theta", type=float, default=0.6)

    sx = _Parser(add_help=False)
    sx.add_argument("--s", type=parse_complex, required=True)
    sx.add_argument("--x", type=float, nargs="+", required=True)

    zeros = _Parser(add_help=False)
    zeros.add_argument("--zeros", default=_env("zeros", str, None),
                       help="zero-table file (default: bundled first 100 ordinates)")

    p = _Parser(prog="moebius-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("sieve", parents=[common], help="dump mu blocks or Mertens checkpoints")
    q.add_argument("--start", type=_int_like, default=1)
    q.add_argument("--length", type=_int_like, default=100)
    q.add_argument("--mertens", type=_int_like, nargs="+")
    q.add_argument("--cache", help="also write the block to this binary cache file")

    sub.add_parser("msum", parents=[common, sx, plan], help="direct Moebius tail")
    q = sub.add_parser("psum", parents=[common, sx], help="plain tail sum (x+n)^-s")
    q.add_argument("--tol", type=float, default=1e-13)
    q = sub.add_parser("mb", parents=[common, sx], help="Mellin-Barnes contour integral")
    q.add_argument("--c", type=float, default=None)
    q.add_argument("--half-height", type=float, default=None)
    q.add_argument("--tol", type=float, default=1e-12)

    q = sub.add_parser("residue-approx", parents=[common, sx, plan, zeros],
                       help="residue expansion over poles and zeta zeros")
    q.add_argument("--n-max", type=int, default=1)
    q.add_argument("--zero-pairs", type=int, default=50)
    q.add_argument("--compare", action="store_true", help="also compute the direct sum")

    q = sub.add_parser("verify-identities", parents=[common, zeros],
                       help="all cross-method checks at one s")
    q.add_argument("--s", type=parse_complex, required=True)
    q.add_argument("--tol", type=float, default=1e-8)

    q = sub.add_parser("fit", parents=[common, zeros], help="conjecture report")
    q.add_argument("--s", type=parse_complex, required=True)
    q.add_argument("--xmin", type=float, default=1e2)
    q.add_argument("--xmax", type=float, default=1e6)
    q.add_argument("--points", type=int, default=17)
    q.add_argument("--epsilon", type=float, default=0.0)
    q.add_argument("--cutoff", type=_int_like, default=10 ** 9)
    q.add_argument("--threshold", type=float, default=0.15)
    q.add_argument("--mertens-a", type=float, default=0.6)
    q.add_argument("--mertens-theta", type=float, default=0.6)
    q.add_argument("--samples", help="write per-point samples CSV here")

    q = sub.add_parser("watson", parents=[common], help="plain tail / leading Watson term")
    q.add_argument("--s", type=parse_complex, required=True)
    q.add_argument("--x", type=float, nargs="+", default=[1e1, 1e2, 1e3, 1e4, 1e5])

    q = sub.add_parser("replay", help="re-run a manifest")
    q.add_argument("manifest_in", metavar="MANIFEST")
    q.add_argument("--workers", type=_int_like, default=None)
    q.add_argument("--out")
    q.add_argument("--manifest")
    return p


# options never written into a replayable argv
_VOLATILE = {"out", "manifest", "workers", "command", "help"}


def canonical_argv(parser: _Parser, args) -> list[str]:
    """Every option of the chosen subcommand spelled out explicitly."""
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    subparser = sub.choices[args.command]
    argv = [args.command]
    for action in subparser._actions:
        if action.dest in _VOLATILE or not action.option_strings:
            continue
        value = getattr(args, action.dest, None)
        flag = action.option_strings[-1]
        if isinstance(action, argparse._StoreTrueAction):
            if value:
                argv.append(flag)
            continue
        if value is None:
            continue
        argv.append(flag)
        values = value if isinstance(value, list) else [value]
        argv.extend(repr(v) if isinstance(v, float) else str(v) for v in values)
    return argv


def _execute(parser, args, out_path, manifest_path) -> int:
    if args.workers is None:
        args.workers = default_workers()
    t0 = time.perf_counter()
    table = COMMANDS[args.command](args)
    wall = time.perf_counter() - t0
    text = table.render()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    manifest = {
        "tool": "moebius-lab",
        "version": __version__,
        "command": args.command,
        "argv": canonical_argv(parser, args),
        "parameters": {k: (v if isinstance(v, (int, float, str, list, type(None), bool)) else str(v))
                       for k, v in sorted(vars(args).items()) if k not in ("out", "manifest")},
        "environment": {v: os.environ[v] for v in ENV_DEFAULTS.values() if v in os.environ},
        "workers": args.workers,
        "wall_time_s": wall,
        "csv_schema": f"{table.schema} v{SCHEMA_VERSION}",
    }
    blob = json.dumps(manifest, indent=2, sort_keys=True, default=str)
    if manifest_path:
        with open(manifest_path, "w") as fh:
            fh.write(blob + "\n")
    else:
        sys.stderr.write(blob + "\n")
    return EXIT_DOMAIN if getattr(table, "failed", False) else EXIT_OK


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.command == "replay":
            with open(args.manifest_in) as fh:
                saved = json.load(fh)
            replay_argv = list(saved["argv"])
            if args.workers is not None:
                replay_argv += ["--workers", str(args.workers)]
            inner = parser.parse_args(replay_argv)
            return _execute(parser, inner, args.out, args.manifest)
        return _execute(parser, args, args.out, args.manifest)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ConvergenceError as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return EXIT_NONCONVERGENCE
    except OverflowError as exc:
        sys.stderr.write(f"numeric overflow: {exc}\n")
        return EXIT_NONCONVERGENCE
    except (MoebiusLabError, OSError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
