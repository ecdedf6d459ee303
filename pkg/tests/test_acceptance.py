"""Acceptance criteria 1-9, one PASS/FAIL line each (see the terminal summary)."""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import jsonschema
import mpmath
import pytest

from cliquex import cli
from cliquex.asymptotics import AsymptoticParams, envelope, f_continuous, h_prime, h_stationary_point, theorem_residual
from cliquex.exact_engine import (
    ModelParams,
    clique_term_rational,
    exact_rational_expectation,
    expectation_profile,
    sandwich_bounds,
)
from cliquex.hypergraph import HyperModelParams, conjecture_lower_term_log, hyper_expectation_log, lower_term_size
from cliquex.numerics import lambert_w0, precision
from cliquex.oracle import exhaustive_expected_cliques, exhaustive_expected_hypercliques
from cliquex.sampling import maximal_cliques, maximal_cliques_naive, mc_estimate, sample_gnp
from cliquex.schemas import CSV_HEADERS, JSON_SCHEMAS

pytestmark = pytest.mark.slow

RATIONAL_PS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]
PS = ["0.3", "0.5", "0.7"]
SANDWICH_NS = [10**e for e in range(1, 7)]
SWEEP_NS = [2**e for e in range(10, 21)]
RHO_BOUND = 5.0


def grid_x(n):
    xs = {mpmath.mpf(i) * n / 100 for i in range(1, 100)}
    xs |= {mpmath.mpf(k) for k in range(1, min(n - 1, 200) + 1)}
    return sorted(xs)


@pytest.mark.criterion("1 oracle equality")
def test_c1_oracle_equality(criterion):
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 6):
        for p in RATIONAL_PS:
            oracle = exhaustive_expected_cliques(n, p)
            if exact_rational_expectation(n, p) != oracle.total:
                bad.append((n, p, "total"))
            for k in range(1, n + 1):
                if oracle.per_size.get(k, 0) != clique_term_rational(n, k, p):
                    bad.append((n, p, k))
    spots = exhaustive_expected_cliques(2, Fraction(1, 3)).total == Fraction(5, 3)
    three = exhaustive_expected_cliques(3, Fraction(1, 2))
    spots &= three.total == 2 and [three.per_size[k] for k in (1, 2, 3)] == [Fraction(3, 4), Fraction(9, 8), Fraction(1, 8)]
    elapsed = time.perf_counter() - t0
    criterion.check(not bad and spots and elapsed < 10, f"mismatches={len(bad)} spots={spots} {elapsed:.2f}s")


@pytest.mark.criterion("2 enumerator equivalence")
def test_c2_enumerator_equivalence(criterion):
    t0 = time.perf_counter()
    mismatches = 0
    for i in range(1000):
        n = 1 + i % 12
        g = sample_gnp(n, (0.2, 0.5, 0.8)[(i // 12) % 3], 10_000 + i)
        mismatches += maximal_cliques(g) != maximal_cliques_naive(g)
    elapsed = time.perf_counter() - t0
    criterion.check(mismatches == 0 and elapsed < 60, f"1000 instances, mismatches={mismatches} {elapsed:.1f}s")


@pytest.mark.criterion("3 Monte Carlo consistency")
def test_c3_monte_carlo(criterion):
    t0 = time.perf_counter()
    params = ModelParams(10, "0.5")
    est = mc_estimate(params, 10**5, 20240611)
    again = mc_estimate(params, 10**5, 20240611)
    threaded = mc_estimate(params, 10**5, 20240611, workers=4)
    with precision(128):
        exact = float(mpmath.exp(expectation_profile(params).log_total))
    z = abs(est.mean - exact) / est.stderr
    elapsed = time.perf_counter() - t0
    ok = z <= 5 and est == again == threaded and elapsed < 60
    criterion.check(ok, f"mean={est.mean:.5f} exact={exact:.5f} z={z:.2f} identical={est == again == threaded} {elapsed:.1f}s")


@pytest.mark.criterion("4 sandwich")
def test_c4_sandwich(criterion):
    t0 = time.perf_counter()
    failures = []
    with precision(128):
        for n in SANDWICH_NS:
            for p in PS:
                prof = expectation_profile(ModelParams(n, p), 128)
                lo, hi = sandwich_bounds(prof)
                if not (lo - 1e-9 <= prof.log_total <= hi + 1e-9):
                    failures.append((n, p))
    elapsed = time.perf_counter() - t0
    criterion.check(not failures and elapsed < 120, f"{len(SANDWICH_NS) * len(PS)} points, failures={failures} {elapsed:.1f}s")


@pytest.mark.criterion("5 f <= g and g = a + b")
def test_c5_upper_bound(criterion):
    worst_gap, worst_rel, points = -math.inf, 0.0, 0
    with precision(128):
        for n in (10, 100, 1000):
            for p in PS:
                params = AsymptoticParams(n, p)
                for x in grid_x(n):
                    ev = envelope(params, x)
                    worst_gap = max(worst_gap, float(ev.f - ev.g))
                    worst_rel = max(worst_rel, float(abs(ev.g - (ev.a + ev.b)) / max(abs(ev.g), mpmath.mpf(1e-300))))
                    points += 1
    criterion.check(worst_gap <= 1e-9 and worst_rel <= 1e-12, f"{points} points, max(f-g)={worst_gap:.3g}, max rel|g-a-b|={worst_rel:.3g}")


@pytest.mark.criterion("6 stationarity and Lambert W")
def test_c6_stationarity(criterion):
    worst = 0.0
    for n in (10, 100, 1000):
        for p in PS:
            params = AsymptoticParams(n, p)
            worst = max(worst, float(abs(h_prime(params, h_stationary_point(params)))))
    with precision(128):
        built = AsymptoticParams(mpmath.exp(mpmath.mpf(3) / 2), mpmath.exp(-1))
        x_err = float(abs(h_stationary_point(built) - 1))
        xs = [-1 / mpmath.e, -1 / mpmath.e + mpmath.mpf(10) ** -30, -0.3, -0.1, 0, 1e-20, 0.5, 1, mpmath.e]
        xs += [mpmath.mpf(10) ** (e / 4) for e in range(1, 25)]
        w_err = 0.0
        for x in xs:
            w = lambert_w0(x)
            w_err = max(w_err, float(abs(w * mpmath.exp(w) - x) / max(1, abs(x))))
    criterion.check(worst <= 1e-9 and x_err <= 1e-10 and w_err <= 1e-12, f"max|h'|={worst:.3g} |x~-1|={x_err:.3g} max W residual={w_err:.3g}")


def _sweep():
    rows = {}
    with precision(128):
        for p in PS:
            for n in SWEEP_NS:
                log_total = expectation_profile(ModelParams(n, p), 128).log_total
                params = AsymptoticParams(n, p)
                rows[p, n] = (log_total, float(theorem_residual(params, log_total)))
    return rows


@pytest.fixture(scope="module")
def sweep():
    t0 = time.perf_counter()
    rows = _sweep()
    return rows, time.perf_counter() - t0


@pytest.mark.criterion("7a residual differences decrease over the top half")
def test_c7_residual_differences(criterion, sweep):
    rows, elapsed = sweep
    details, ok = [], elapsed < 300
    half = len(SWEEP_NS) // 2
    for p in PS:
        rho = [rows[p, n][1] for n in SWEEP_NS]
        diffs = [abs(b - a) for a, b in zip(rho, rho[1:])]
        top = diffs[half:]
        decreasing = all(b < a for a, b in zip(top, top[1:]))
        ok &= decreasing
        details.append(f"p={p} spread={max(rho) - min(rho):.4f} top diffs=[{', '.join(f'{d:.4f}' for d in top)}] {'ok' if decreasing else 'not monotone'}")
    criterion.check(ok, "; ".join(details))


@pytest.mark.criterion("7b envelope lower bound and bounded residual")
def test_c7_envelope(criterion, sweep):
    rows, _ = sweep
    below, worst = [], 0.0
    with precision(128):
        for p in PS:
            for n in SWEEP_NS:
                log_total, rho = rows[p, n]
                params = AsymptoticParams(n, p)
                center = params.c() * params.log_n()
                for delta in (-1, 0, 1):
                    if log_total < f_continuous(params, center + delta):
                        below.append((p, n, delta))
                lead = log_total * (-2 * params.log_p()) / params.log_n() - (params.log_n() - 2 * mpmath.log(params.log_n()))
                worst = max(worst, abs(float(lead)))
    criterion.check(not below and worst <= RHO_BOUND, f"envelope violations={below} max|leading-two-term gap|={worst:.4f} bound={RHO_BOUND}")


@pytest.mark.criterion("8 hypergraph reduction and oracle")
def test_c8_hypergraph(criterion):
    worst = 0.0
    for n in SANDWICH_NS:
        if n > 10**4:
            continue
        for p in PS:
            a = hyper_expectation_log(HyperModelParams(n, 2, p))
            b = expectation_profile(ModelParams(n, p)).log_total
            worst = max(worst, float(abs(a - b) / abs(b)))
    three = exhaustive_expected_hypercliques(3, 3, Fraction(1, 2)).total
    lower_ok = True
    for r in (2, 3, 4):
        for n in (r, 8, 30, 200, 3000):
            if n < r:
                continue
            for p in ("0.2", "0.5", "0.8"):
                params = HyperModelParams(n, r, p)
                if lower_term_size(params) >= 1:
                    lower_ok &= conjecture_lower_term_log(params) <= hyper_expectation_log(params)
    params = HyperModelParams(8, 3, "0.5")
    est = mc_estimate(params, 10**5, 31337)
    with precision(128):
        exact = float(mpmath.exp(hyper_expectation_log(params)))
    z = abs(est.mean - exact) / est.stderr
    ok = worst <= 1e-12 and three == 2 and lower_ok and z <= 5
    criterion.check(ok, f"r=2 max rel diff={worst:.3g} (3,3,1/2) total={three} lower<=total={lower_ok} r=3 MC mean={est.mean:.4f} exact={exact:.4f} z={z:.2f}")


DISPATCH_SCHEMA_CASES = [
    ["exact", "-n", "3", "-p", "1/2", "--mode", "rational"],
    ["exact", "-n", "100", "-p", "0.5"],
    ["profile", "-n", "3", "-p", "0.5"],
    ["argmax", "-n", "1000", "-p", "0.3"],
    ["asymptote", "-n", "100", "-p", "0.5"],
    ["stationary", "-n", "1000", "-p", "0.5"],
    ["residual-sweep", "--n-grid", "2^10:2^14:x2", "-p", "0.5"],
    ["simulate", "-n", "5", "-p", "0.5", "--trials", "500", "--seed", "3"],
    ["oracle", "-n", "3", "-r", "3", "-p", "1/2"],
    ["hyper", "-n", "8", "-r", "3", "-p", "0.5"],
    ["conjecture", "-n", "100", "-r", "3", "-p", "0.5"],
]


def _cli(argv):
    return subprocess.run([sys.executable, "-m", "cliquex", *argv], capture_output=True, text=True, check=False)


@pytest.mark.criterion("9 CLI determinism and schema")
def test_c9_cli(criterion, capsys):
    exact = _cli(["exact", "-n", "3", "-p", "1/2", "--mode", "rational"])
    ex1 = exact.returncode == 0 and exact.stdout == '{"n":3,"p":"1/2","total":"2","per_size":{"1":"3/4","2":"9/8","3":"1/8"}}\n'
    unknown = _cli(["exact", "-n", "3", "-p", "1/2", "--frobnicate"])
    ex2 = unknown.returncode == 2 and unknown.stdout == "" and "usage:" in unknown.stderr
    sim = ["simulate", "-n", "3", "-p", "0.5", "--trials", "100000", "--seed", "7"]
    first, second = _cli(sim), _cli(sim)
    ex3 = first.returncode == 0 and first.stdout == second.stdout
    schema_errors = []
    for argv in DISPATCH_SCHEMA_CASES:
        for fmt in ("json", "csv"):
            code = cli.main([*argv, "--format", fmt])
            out = capsys.readouterr().out
            try:
                assert code == 0
                if fmt == "json":
                    jsonschema.validate(json.loads(out), JSON_SCHEMAS[argv[0]])
                else:
                    assert out.splitlines()[0] in CSV_HEADERS[argv[0]]
            except (AssertionError, jsonschema.ValidationError) as exc:
                schema_errors.append(f"{argv[0]}/{fmt}: {str(exc)[:80]}")
    ok = ex1 and ex2 and ex3 and not schema_errors
    criterion.check(ok, f"exact example={ex1} unknown flag={ex2} simulate repeat={ex3} schema errors={schema_errors}")
