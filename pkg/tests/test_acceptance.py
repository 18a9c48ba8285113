"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one line so a verbose run reads as a checklist.  The
criteria are numbered A1..A9; run `pytest tests/test_acceptance.py -v -s`.
"""

import itertools
import math
import time

import numpy as np
import pytest

from corpus import build_corpus
from pospart.distributions import (
    CenteredScaledPoisson,
    FiniteDiscrete,
    IndependentSum,
    Normal,
    PointMass,
    Shift,
)
from pospart.moments import (
    MomentOrder,
    i_p,
    improper_cf_moment,
    j_p,
    match_discrete,
    ppm_cf,
    ppm_diff,
    ppm_laplace,
)
from pospart.oracles import density_ppm, mc_tail, naive_series_ppm
from pospart.quadrature import integrate_halfline
from pospart.tailbound import TailBoundProblem, eta_spec, pin, pin_curve

A2_SPECS = [
    PointMass(1.3),
    FiniteDiscrete(((-1.0, 0.5), (1.0, 0.5))),
    FiniteDiscrete(((-0.7, 0.3), (0.4, 0.45), (2.2, 0.25))),
    Normal(0.0, 1.0),
    Normal(0.4, 0.6),
    Shift(IndependentSum(Normal(0.0, 0.75), CenteredScaledPoisson(0.25, 1.0)), -0.8),
]


def _report(tag, detail, elapsed, budget):
    print(f"[{tag}] PASS  {detail}  ({elapsed:.2f}s, budget {budget:.0f}s)")


def test_a1_point_mass_identity():
    start = time.perf_counter()
    worst = 0.0
    for x in (-5.0, -1.0, -0.1, 0.0, 0.1, 1.0, 5.0):
        for p in (0.3, 0.5, 1.0, 1.7, 2.0, 2.5, 3.0, 3.8):
            got = ppm_cf(PointMass(x), p, 1e-9).value
            want = max(x, 0.0) ** p
            tol = 1e-8 * (1.0 + abs(x) ** p)
            assert abs(got - want) <= tol, (x, p, got, want)
            worst = max(worst, abs(got - want) / tol)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _report("A1", f"56-point atom grid, worst at {worst:.3f} of tolerance", elapsed, 10)


def test_a2_method_agreement():
    start = time.perf_counter()
    worst = 0.0
    for spec in A2_SPECS:
        for p in (0.5, 1.0, 2.0, 2.5, 3.0):
            mo = MomentOrder.from_p(p)
            results = [
                ppm_laplace(spec, p, s, j, 1e-9)
                for s in (0.3, 1.0)
                for j in (-1, mo.ell)
            ]
            results.append(ppm_cf(spec, p, 1e-9))
            results.append(ppm_diff(spec, match_discrete(spec, p), p, 1e-9))
            for a, b in itertools.combinations(results, 2):
                gap = abs(a.value - b.value)
                allowed = a.reported_error + b.reported_error + 4e-16 * (1 + abs(a.value))
                assert gap <= allowed, (spec, p, a.method_used, b.method_used, gap, allowed)
                worst = max(worst, gap / allowed)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _report("A2", f"6 specs x 5 orders x 6 routes pairwise, worst gap at "
                  f"{worst:.3f} of combined budget", elapsed, 60)


def test_a3_gaussian_oracle():
    start = time.perf_counter()
    got1 = ppm_cf(Normal(0.0, 1.0), 1.0, 1e-10).value
    oracle = density_ppm(Normal(0.0, 1.0), 1.0).value
    assert abs(got1 - oracle) <= 1e-7
    assert abs(got1 - 0.3989423) <= 1e-7
    got2 = ppm_cf(Normal(0.0, 1.0), 2.0, 1e-10).value
    assert abs(got2 - 0.5) <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report("A3", f"order 1 gap {abs(got1 - oracle):.2e}, order 2 gap "
                  f"{abs(got2 - 0.5):.2e}", elapsed, 5)


def test_a4_compound_oracle_and_small_y():
    start = time.perf_counter()
    worst = 0.0
    for sigma, y, eps in ((1.0, 1.0, 0.5), (1.0, 0.3, 0.2)):
        problem = TailBoundProblem(sigma, y, eps)
        s_star = min(1.0 / y, 2.0 / sigma)
        for t in (-1.0, 0.0, 1.0):
            for p in (2, 3):
                oracle = naive_series_ppm(problem, t, p)
                spec = eta_spec(problem, t)
                for r in (ppm_laplace(spec, float(p), s_star, -1, 1e-9),
                          ppm_cf(spec, float(p), 1e-9)):
                    rel = abs(r.value - oracle.value) / abs(oracle.value)
                    assert rel <= 1e-6, (sigma, y, eps, t, p, r.method_used, rel)
                    worst = max(worst, rel)
    # the small-y regime where the naive series is excluded: the two
    # transform routes must still agree with each other
    problem = TailBoundProblem(1.0, 0.01, 0.5)
    for t in (-1.0, 0.0, 1.0):
        for p in (2, 3):
            spec = eta_spec(problem, t)
            a = ppm_laplace(spec, float(p), min(100.0, 2.0), -1, 1e-9)
            b = ppm_cf(spec, float(p), 1e-9)
            rel = abs(a.value - b.value) / abs(a.value)
            assert rel <= 1e-7, (t, p, rel)
            worst = max(worst, rel)
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    _report("A4", f"naive-series and cross-route agreement, worst rel {worst:.2e}",
            elapsed, 120)


def test_a5_tail_integral_suite():
    start = time.perf_counter()
    for p in (0.25, 0.5, 0.75, 1.5, 2.5):
        assert abs(i_p(p, 0.0)) <= 1e-9, p
    for p in (0.25, 0.5, 0.75):
        for v in np.logspace(-3, 3, 7):
            assert i_p(p, float(v)) > -1e-9
        for jj in (1, 2, 3):
            got = i_p(p, 2.0 * jj * math.pi)
            bound = (jj * math.pi**2 - 1.0) * math.cos(math.pi * p / 2.0) ** 3 \
                / (2.0 * jj * math.pi) ** (p + 1.0)
            assert got >= bound - 1e-9, (p, jj)
    for x in (0.5, 2.0, 7.0):
        for v in (0.1, 1.0, 10.0):
            lhs = j_p(0.5, x, v)
            rhs = x**0.5 * i_p(0.5, v * x)
            assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(rhs))
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report("A5", "I_p(.,0)=0, positivity, lower bounds at 2pi/4pi/6pi, "
                  "J_p scaling to 1e-10", elapsed, 30)


def test_a6_improper_convergence():
    start = time.perf_counter()
    vs = [1.0, 0.3, 0.1, 0.03, 0.01]
    slopes = []
    for spec, name in ((PointMass(-1.0), "atom(-1)"), (Normal(0.0, 1.0), "normal")):
        for p in (0.5, 1.5):
            mo = MomentOrder.from_p(p)
            target = ppm_cf(spec, p, 1e-11).value
            conv = improper_cf_moment(spec, p, vs, 1e-10)
            gaps = [abs(val - target) for _, val in conv]
            assert all(g > 0 for g in gaps), (name, p, gaps)
            slope = float(np.polyfit(np.log(vs), np.log(gaps), 1)[0])
            assert slope >= 0.45 * (p - mo.ell), (name, p, slope)
            slopes.append(f"{name} p={p}: {slope:.2f}")
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _report("A6", "gap exponents " + ", ".join(slopes), elapsed, 60)


def test_a7_pin_bound_sanity():
    start = time.perf_counter()
    problem = TailBoundProblem(1.0, 1.0, 0.5)
    spec = eta_spec(problem, 0.0)
    details = []
    for i, x in enumerate((1.0, 2.0, 3.0)):
        row = pin(problem, x, rel_tol=1e-9)
        assert 0.0 < row.pin <= 1.0
        assert row.residual <= 1e-9
        tail = mc_tail(spec, x, 10**6, 1000 + i)
        assert tail.value <= row.pin + tail.half_width, (x, tail.value, row.pin)
        details.append(f"x={x:g}: mc {tail.value:.4f} <= pin {row.pin:.4f}")
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    _report("A7", "; ".join(details), elapsed, 120)


def test_a8_curve_performance():
    problem = TailBoundProblem(1.0, 1.0, 0.5)
    pin_curve(problem, 0.0, 5.0, 11, rel_tol=1e-7)  # warm the route caches
    start = time.perf_counter()
    rows = pin_curve(problem, 0.0, 5.0, 101, rel_tol=1e-7, tol_x=1e-9)
    elapsed = time.perf_counter() - start
    assert len(rows) == 101
    assert all(not r.is_failure() for r in rows)
    assert all(0.0 < r.pin <= 1.0 for r in rows)
    # regression metric; alarm threshold is twice the 1.0 s criterion
    assert elapsed <= 1.0, f"curve took {elapsed:.3f}s"
    assert elapsed <= 2.0, "2x alarm threshold breached"
    _report("A8", f"101-point curve in {elapsed * 1000:.0f} ms", elapsed, 1)


def test_a9_quadrature_corpus():
    start = time.perf_counter()
    tight = 0
    for entry in build_corpus():
        r = integrate_halfline(entry.f, entry.profile, entry.rel_tol)
        achieved = abs(r.value - entry.exact)
        assert achieved <= r.total_error, (entry.name, achieved, r.total_error)
        if r.total_error <= 100.0 * achieved:
            tight += 1
    assert tight >= 18, tight
    elapsed = time.perf_counter() - start
    assert elapsed < 20.0
    _report("A9", f"20/20 within reported error, {tight}/20 within 100x of achieved",
            elapsed, 20)
