"""Command-line entry point: ``cliquex <subcommand> [options]``.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 resource cap,
5 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

import mpmath

from . import asymptotics as asy
from .exact_engine import (
    ModelParams,
    clique_term_rational,
    exact_rational_expectation,
    expectation_profile,
    sandwich_bounds,
)
from .hypergraph import (
    HyperModelParams,
    conjecture_exponent,
    conjecture_lower_term_log,
    hyper_expectation_log,
    hyper_expectation_rational,
    hyper_term_rational,
    lower_term_size,
)
from .numerics import (
    DomainError,
    ResourceCapError,
    parse_probability,
    precision,
    resolve_precision,
    to_fraction,
)
from .oracle import exhaustive_expected_cliques, exhaustive_expected_hypercliques
from .sampling import mc_estimate

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_IO = 0, 2, 3, 4, 5

SUBCOMMANDS = (
    "exact",
    "profile",
    "argmax",
    "asymptote",
    "stationary",
    "residual-sweep",
    "simulate",
    "oracle",
    "hyper",
    "conjecture",
)


# ---------------------------------------------------------------- formatting


def format_real(x, prec: int) -> str:
    """Shortest decimal that parses back to ``x`` at ``prec`` bits."""
    if isinstance(x, float):
        return repr(x)
    with precision(prec):
        x = mpmath.mpf(x)
        if mpmath.isinf(x) or mpmath.isnan(x):
            return str(x)
        top = mpmath.libmp.libmpf.repr_dps(prec)
        for digits in range(1, top + 1):
            text = mpmath.libmp.to_str(x._mpf_, digits)
            if mpmath.mpf(text) == x:
                return text
        return mpmath.libmp.to_str(x._mpf_, top)


def format_fraction(q: Fraction) -> str:
    return str(q)


def format_p(p) -> str:
    if isinstance(p, Fraction):
        return format_fraction(p)
    return str(p)


class Report:
    """A result ready for JSON or CSV output."""

    def __init__(self, obj: dict, rows: list[dict] | None = None, prec: int = 53):
        self.obj = obj
        self.rows = rows
        self.prec = prec

    def _scalar(self, v) -> str:
        if isinstance(v, bool) or v is None:
            return json.dumps(v)
        if isinstance(v, int):
            return str(v)
        if isinstance(v, Fraction):
            return json.dumps(format_fraction(v))
        if isinstance(v, (float, mpmath.mpf)):
            text = format_real(v, self.prec)
            if text in ("inf", "-inf", "+inf", "nan"):
                return json.dumps(text.lstrip("+"))
            return text
        return json.dumps(str(v))

    def _encode(self, v) -> str:
        if isinstance(v, dict):
            return "{" + ",".join(json.dumps(str(k)) + ":" + self._encode(x) for k, x in v.items()) + "}"
        if isinstance(v, (list, tuple)):
            return "[" + ",".join(self._encode(x) for x in v) + "]"
        return self._scalar(v)

    def to_json(self) -> str:
        return self._encode(self.obj) + "\n"

    def _cell(self, v) -> str:
        if isinstance(v, Fraction):
            return format_fraction(v)
        if isinstance(v, (float, mpmath.mpf)):
            return format_real(v, self.prec)
        return str(v)

    def to_csv(self) -> str:
        rows = self.rows if self.rows is not None else [self.obj]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0].keys()))
        for row in rows:
            writer.writerow([self._cell(v) for v in row.values()])
        return buf.getvalue()


def emit_report(report: Report, fmt: str = "json", path: str | None = None) -> None:
    text = report.to_json() if fmt == "json" else report.to_csv()
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------- parsing


def _grid_value(text: str) -> int:
    text = text.strip()
    m = re.fullmatch(r"(\d+)\^(\d+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    m = re.fullmatch(r"(\d+)e(\d+)", text)
    if m:
        return int(m.group(1)) * 10 ** int(m.group(2))
    return int(text)


def parse_n_grid(text: str) -> list[int]:
    """``start:stop:xF`` (geometric), ``start:stop:+D`` (arithmetic) or a comma list; inclusive."""
    if ":" not in text:
        return [_grid_value(t) for t in text.split(",")]
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    start, stop = _grid_value(parts[0]), _grid_value(parts[1])
    step = parts[2].strip()
    out = []
    if step.startswith("x"):
        factor = int(step[1:])
        if factor < 2 or start < 1:
            raise argparse.ArgumentTypeError(f"bad geometric grid {text!r}")
        v = start
        while v <= stop:
            out.append(v)
            v *= factor
    else:
        delta = int(step.lstrip("+"))
        if delta < 1:
            raise argparse.ArgumentTypeError(f"bad arithmetic grid {text!r}")
        out = list(range(start, stop + 1, delta))
    return out


def _n_grid_arg(text):
    try:
        return parse_n_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _probability_arg(text):
    try:
        return parse_probability(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=None, help="mantissa bits (default 128 or $CLIQUEX_PRECISION_BITS)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="cliquex", description="Maximal-clique statistics of G(n, p).")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_, n=True, p=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if n:
            sp.add_argument("-n", type=int, required=True)
        if p:
            sp.add_argument("-p", type=_probability_arg, required=True, help="decimal or a/b")
        return sp

    sp = add("exact", "expected number of maximal cliques")
    sp.add_argument("--mode", choices=("log_domain", "rational"), default="log_domain")
    sp = add("profile", "per-size log expectations")
    sp.add_argument("--mode", choices=("log_domain", "rational"), default="log_domain")
    add("argmax", "most popular clique size")
    sp = add("asymptote", "f, g, a, b, h at chosen points")
    sp.add_argument("-x", type=float, action="append", default=None, help="evaluation point (repeatable; default c ln n)")
    add("stationary", "Lambert-W stationary point of h")
    sp = sub.add_parser("residual-sweep", parents=[common], help="growth-law residual over an n grid")
    sp.add_argument("--n-grid", type=_n_grid_arg, default=parse_n_grid("2^10:2^20:x2"))
    sp.add_argument("-p", type=_probability_arg, action="append", required=True)
    sp = add("simulate", "Monte Carlo estimate of the clique count")
    sp.add_argument("-r", type=int, default=2)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp = add("oracle", "exhaustive rational expectation (tiny n)")
    sp.add_argument("-r", type=int, default=2)
    sp = add("hyper", "r-uniform hypergraph expectation")
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("--mode", choices=("log_domain", "rational"), default="log_domain")
    sp = add("conjecture", "hypergraph growth exponent against the exact sum", n=False)
    sp.add_argument("-n", type=int, default=None)
    sp.add_argument("--n-grid", type=_n_grid_arg, default=None)
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("--constant", type=float, default=0.0)
    return parser


# ---------------------------------------------------------------- handlers


def _rational_p(p) -> Fraction:
    return p if isinstance(p, Fraction) else to_fraction(p)


def cmd_exact(a, prec):
    if a.mode == "rational":
        p = _rational_p(a.p)
        total = exact_rational_expectation(a.n, p)
        per_size = {str(k): clique_term_rational(a.n, k, p) for k in range(1, a.n + 1)}
        obj = {"n": a.n, "p": format_p(p), "total": total, "per_size": per_size}
        rows = [{"k": int(k), "expected": v} for k, v in per_size.items()]
        return Report(obj, rows, prec)
    profile = expectation_profile(ModelParams(a.n, a.p), prec)
    lower, upper = sandwich_bounds(profile)
    obj = {
        "n": a.n,
        "p": format_p(a.p),
        "precision_bits": prec,
        "log_total": profile.log_total,
        "argmax_k": profile.argmax_k,
        "sandwich_lower": lower,
        "sandwich_upper": upper,
    }
    return Report(obj, None, prec)


def cmd_profile(a, prec):
    p = _rational_p(a.p) if a.mode == "rational" else a.p
    profile = expectation_profile(ModelParams(a.n, p, a.mode), prec)
    terms = [float(v) for v in profile.log_terms]
    obj = {
        "n": a.n,
        "p": format_p(p),
        "precision_bits": prec,
        "argmax_k": profile.argmax_k,
        "log_total": profile.log_total,
        "log_terms": terms,
    }
    rows = [{"k": k, "log_term": v} for k, v in enumerate(terms, start=1)]
    return Report(obj, rows, prec)


def cmd_argmax(a, prec):
    profile = expectation_profile(ModelParams(a.n, a.p), prec)
    obj = {"n": a.n, "p": format_p(a.p), "precision_bits": prec, "argmax_k": profile.argmax_k, "log_term": profile.peak_log_term}
    return Report(obj, None, prec)


def cmd_asymptote(a, prec):
    params = asy.AsymptoticParams(a.n, a.p, prec)
    xs = a.x if a.x else [params.c() * params.log_n()]
    rows = []
    for x in xs:
        ev = asy.envelope(params, x)
        rows.append({"x": ev.x, "f": ev.f, "g": ev.g, "a": ev.a, "b": ev.b, "h": ev.h})
    obj = {"n": a.n, "p": format_p(a.p), "precision_bits": prec, "points": rows}
    return Report(obj, rows, prec)


def cmd_stationary(a, prec):
    params = asy.AsymptoticParams(a.n, a.p, prec)
    x = asy.h_stationary_point(params)
    ev = asy.envelope(params, x) if x < a.n else None
    obj = {
        "n": a.n,
        "p": format_p(a.p),
        "precision_bits": prec,
        "x_tilde": x,
        "h_prime": asy.h_prime(params, x),
        "h_second": asy.h_second(params, x),
        "h_max": ev.h if ev is not None else None,
        "markov_threshold_log": asy.markov_threshold_log(params),
    }
    return Report(obj, None, prec)


def cmd_residual_sweep(a, prec):
    rows = []
    for p in a.p:
        for n in a.n_grid:
            profile = expectation_profile(ModelParams(n, p), prec)
            rho = asy.theorem_residual(asy.AsymptoticParams(n, p, prec), profile.log_total)
            rows.append({"n": n, "p": format_p(p), "log_total": profile.log_total, "residual": rho})
    obj = {"precision_bits": prec, "rows": rows}
    return Report(obj, rows, prec)


def cmd_simulate(a, prec):
    if a.r == 2:
        params = ModelParams(a.n, a.p)
        log_total = expectation_profile(params, prec).log_total
    else:
        params = HyperModelParams(a.n, a.r, a.p)
        log_total = hyper_expectation_log(params, prec)
    est = mc_estimate(params, a.trials, a.seed, workers=a.workers)
    with precision(prec):
        expected = mpmath.exp(log_total)
    obj = {
        "n": a.n,
        "p": format_p(a.p),
        "r": a.r,
        "trials": est.trials,
        "master_seed": est.master_seed,
        "mean": est.mean,
        "stderr": est.stderr,
        "expected": float(expected),
    }
    return Report(obj, None, prec)


def _rational_report(n, r, p, total, per_size, prec):
    obj = {"n": n, "p": format_p(p)}
    if r != 2:
        obj["r"] = r
    obj["total"] = total
    # sizes below r - 1 are never maximal; leave them out
    per_size = {k: v for k, v in per_size.items() if v}
    obj["per_size"] = {str(k): v for k, v in per_size.items()}
    rows = [{"k": k, "expected": v} for k, v in per_size.items()]
    return Report(obj, rows, prec)


def cmd_oracle(a, prec):
    p = _rational_p(a.p)
    if a.r == 2:
        res = exhaustive_expected_cliques(a.n, p)
    else:
        res = exhaustive_expected_hypercliques(a.n, a.r, p)
    per_size = {k: res.per_size.get(k, Fraction(0)) for k in range(1, a.n + 1)}
    return _rational_report(a.n, a.r, p, res.total, per_size, prec)


def cmd_hyper(a, prec):
    if a.mode == "rational":
        p = _rational_p(a.p)
        params = HyperModelParams(a.n, a.r, p)
        per_size = {k: hyper_term_rational(params, k) for k in range(1, a.n + 1)}
        return _rational_report(a.n, a.r, p, hyper_expectation_rational(params), per_size, prec)
    params = HyperModelParams(a.n, a.r, a.p)
    k = lower_term_size(params)
    obj = {
        "n": a.n,
        "r": a.r,
        "p": format_p(a.p),
        "precision_bits": prec,
        "log_total": hyper_expectation_log(params, prec),
        "lower_k": k,
        "lower_term_log": conjecture_lower_term_log(params, prec) if k >= 1 else None,
    }
    return Report(obj, None, prec)


def cmd_conjecture(a, prec):
    if a.n_grid is None and a.n is None:
        raise DomainError("conjecture needs -n or --n-grid")
    grid = a.n_grid if a.n_grid is not None else [a.n]
    rows = []
    for n in grid:
        params = HyperModelParams(n, a.r, a.p)
        log_total = hyper_expectation_log(params, prec)
        exponent = conjecture_exponent(params, a.constant, prec)
        with precision(prec):
            gap = log_total - exponent
        rows.append({"n": n, "r": a.r, "p": format_p(a.p), "log_total": log_total, "exponent": exponent, "gap": gap})
    obj = {"precision_bits": prec, "constant": a.constant, "rows": rows}
    return Report(obj, rows, prec)


HANDLERS = {
    "exact": cmd_exact,
    "profile": cmd_profile,
    "argmax": cmd_argmax,
    "asymptote": cmd_asymptote,
    "stationary": cmd_stationary,
    "residual-sweep": cmd_residual_sweep,
    "simulate": cmd_simulate,
    "oracle": cmd_oracle,
    "hyper": cmd_hyper,
    "conjecture": cmd_conjecture,
}


def dispatch(args) -> int:
    try:
        prec = resolve_precision(args.precision_bits)
        report = HANDLERS[args.subcommand](args, prec)
    except DomainError as exc:
        print(f"cliquex: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceCapError as exc:
        print(f"cliquex: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    try:
        emit_report(report, args.format, args.output)
    except OSError as exc:
        print(f"cliquex: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
