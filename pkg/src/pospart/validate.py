"""Built-in validation suites for the CLI ``validate`` command.

Each check cross-examines the transform pipeline against an independent
oracle or an exact identity and reports one pass/fail line.  The quick suite
trims grids and Monte Carlo sizes so it finishes in seconds; the full suite
runs the acceptance-grade versions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import FiniteDiscrete, Normal, PointMass
from .moments import i_p, improper_cf_moment, j_p, match_discrete, ppm_cf, ppm_diff, ppm_laplace
from .oracles import density_ppm, mc_tail, naive_series_ppm
from .quadrature import IntegrandProfile, integrate_halfline
from .tailbound import TailBoundProblem, eta_spec, pin, pin_curve

__all__ = ["ValidationCheck", "run_suite", "SUITES"]


@dataclass
class ValidationCheck:
    check_id: str
    label: str
    passed: bool
    detail: str


def _check_point_mass(quick: bool, seed: int) -> ValidationCheck:
    xs = (-1.0, 0.1, 5.0) if quick else (-5.0, -1.0, -0.1, 0.0, 0.1, 1.0, 5.0)
    ps = (0.5, 2.0, 3.8) if quick else (0.3, 0.5, 1.0, 1.7, 2.0, 2.5, 3.0, 3.8)
    worst = 0.0
    for x in xs:
        for p in ps:
            got = ppm_cf(PointMass(x), p, 1e-9).value
            want = max(x, 0.0) ** p
            worst = max(worst, abs(got - want) / (1e-8 * (1.0 + abs(x) ** p)))
    return ValidationCheck(
        "point-mass", "atom identity E X_+^p = x_+^p", worst <= 1.0,
        f"worst error at {worst:.3g} of tolerance",
    )


def _check_gaussian(quick: bool, seed: int) -> ValidationCheck:
    r1 = ppm_cf(Normal(0.0, 1.0), 1.0, 1e-10)
    r2 = ppm_cf(Normal(0.0, 1.0), 2.0, 1e-10)
    d1 = density_ppm(Normal(0.0, 1.0), 1.0)
    ok = abs(r1.value - d1.value) <= 1e-8 and abs(r1.value - 0.3989423) <= 1e-7
    ok = ok and abs(r2.value - 0.5) <= 1e-8
    return ValidationCheck(
        "gaussian", "standard normal orders 1 and 2 vs density oracle", ok,
        f"p=1 gap {abs(r1.value - d1.value):.2e}, p=2 gap {abs(r2.value - 0.5):.2e}",
    )


def _check_method_agreement(quick: bool, seed: int) -> ValidationCheck:
    specs = [PointMass(1.3), Normal(0.4, 0.6)] if quick else [
        PointMass(1.3),
        FiniteDiscrete(((-1.0, 0.5), (1.0, 0.5))),
        Normal(0.0, 1.0),
        Normal(0.4, 0.6),
    ]
    ps = (0.5, 2.0) if quick else (0.5, 1.0, 2.0, 2.5, 3.0)
    worst = 0.0
    for spec in specs:
        for p in ps:
            vals = [
                ppm_laplace(spec, p, 0.3, -1, 1e-9),
                ppm_laplace(spec, p, 1.0, -1, 1e-9),
                ppm_cf(spec, p, 1e-9),
                ppm_diff(spec, match_discrete(spec, p), p, 1e-9),
            ]
            for a in vals:
                for b in vals:
                    allowed = a.reported_error + b.reported_error + 4e-16 * (1 + abs(a.value))
                    worst = max(worst, abs(a.value - b.value) / allowed)
    return ValidationCheck(
        "agreement", "Laplace/CF/difference routes agree within reported errors",
        worst <= 1.0, f"worst gap at {worst:.3f} of combined budget",
    )


def _check_compound(quick: bool, seed: int) -> ValidationCheck:
    cases = [(1.0, 1.0, 0.5, 0.0)] if quick else [
        (1.0, 1.0, 0.5, -1.0), (1.0, 1.0, 0.5, 0.0), (1.0, 1.0, 0.5, 1.0),
        (1.0, 0.3, 0.2, -1.0), (1.0, 0.3, 0.2, 0.0), (1.0, 0.3, 0.2, 1.0),
    ]
    worst = 0.0
    for sigma, y, eps, t in cases:
        problem = TailBoundProblem(sigma, y, eps)
        for p in (2, 3):
            oracle = naive_series_ppm(problem, t, p)
            got = ppm_laplace(eta_spec(problem, t), float(p), min(1.0 / y, 2.0 / sigma), -1, 1e-10)
            worst = max(worst, abs(got.value - oracle.value) / abs(oracle.value) / 1e-6)
    return ValidationCheck(
        "compound", "Gaussian+Poisson vs naive series oracle", worst <= 1.0,
        f"worst relative gap at {worst:.4f} of 1e-6",
    )


def _check_tail_integrals(quick: bool, seed: int) -> ValidationCheck:
    ok = True
    details = []
    for p in (0.5,) if quick else (0.25, 0.5, 0.75, 1.5, 2.5):
        z = abs(i_p(p, 0.0))
        ok = ok and z <= 1e-9
        details.append(f"I({p},0)={z:.1e}")
    sc = abs(j_p(0.5, 3.0, 0.2) - 3.0**0.5 * i_p(0.5, 0.6))
    ok = ok and sc <= 1e-10 * 3.0**0.5 * abs(i_p(0.5, 0.6))
    details.append(f"scaling gap={sc:.1e}")
    return ValidationCheck("tail-integrals", "I_p vanishes at 0; J_p scaling", ok,
                           ", ".join(details))


def _check_improper(quick: bool, seed: int) -> ValidationCheck:
    vs = [1.0, 0.1, 0.01] if quick else [1.0, 0.3, 0.1, 0.03, 0.01]
    ok = True
    details = []
    for spec, name in ((PointMass(-1.0), "atom(-1)"), (Normal(0.0, 1.0), "normal")):
        for p in (0.5,) if quick else (0.5, 1.5):
            target = ppm_cf(spec, p, 1e-10).value
            conv = improper_cf_moment(spec, p, vs, 1e-9)
            gaps = [abs(val - target) for _, val in conv]
            ok = ok and gaps[-1] < gaps[0]
            details.append(f"{name} p={p}: gap {gaps[0]:.1e}->{gaps[-1]:.1e}")
    return ValidationCheck("improper", "improper CF convergents approach the moment",
                           ok, "; ".join(details))


def _check_pin(quick: bool, seed: int) -> ValidationCheck:
    problem = TailBoundProblem(1.0, 1.0, 0.5)
    n = 10**5 if quick else 10**6
    ok = True
    details = []
    for i, x in enumerate((2.0,) if quick else (1.0, 2.0, 3.0)):
        row = pin(problem, x, rel_tol=1e-9)
        tail = mc_tail(eta_spec(problem, 0.0), x, n, seed + i)
        ok = ok and 0.0 < row.pin <= 1.0 and row.residual <= 1e-9
        ok = ok and tail.value <= row.pin + tail.half_width
        details.append(f"x={x}: pin={row.pin:.5f} mc={tail.value:.5f}")
    return ValidationCheck("pin-bound", "bound dominates the Monte Carlo tail",
                           ok, "; ".join(details))


def _check_curve(quick: bool, seed: int) -> ValidationCheck:
    problem = TailBoundProblem(1.0, 1.0, 0.5)
    steps = 21 if quick else 101
    rows = pin_curve(problem, 0.0, 5.0, steps, rel_tol=1e-7, tol_x=1e-9)
    ok = all(not r.is_failure() for r in rows)
    ok = ok and all(0.0 < r.pin <= 1.0 for r in rows)
    ok = ok and all(r.residual <= 1e-9 for r in rows)
    return ValidationCheck(
        "curve", f"{steps}-point bound curve: every row valid, residuals in "
                 "tolerance", ok,
        f"pin range [{rows[-1].pin:.3e}, {rows[0].pin:.5f}]",
    )


def _check_quadrature(quick: bool, seed: int) -> ValidationCheck:
    # small built-in slice of the validation corpus: every value inside the
    # reported error envelope
    cases = [
        (lambda t: np.exp(-t),
         IntegrandProfile(0.0, lambda T: math.exp(-T)), 1.0),
        (lambda t: np.where(t <= 1.0, 1.0 / np.sqrt(np.maximum(t, 1e-300)), 0.0),
         IntegrandProfile(-0.5, lambda T: 0.0 if T >= 1.0 else 2.0 * (1.0 - math.sqrt(T))),
         2.0),
        (lambda t: 1.0 / (1.0 + t * t),
         IntegrandProfile(0.0, lambda T: 1.0 / T), math.pi / 2.0),
        (lambda t: np.exp(-0.5 * t * t),
         IntegrandProfile(0.0, lambda T: math.sqrt(math.pi / 2) if T < 1.0
                          else math.exp(-0.5 * T * T) / T),
         math.sqrt(math.pi / 2.0)),
    ]
    ok = True
    worst = 0.0
    for f, profile, exact in cases:
        r = integrate_halfline(f, profile, 1e-9)
        achieved = abs(r.value - exact)
        ok = ok and achieved <= r.total_error
        worst = max(worst, achieved / max(r.total_error, 1e-300))
    return ValidationCheck(
        "quadrature", "closed-form integrals inside the reported envelope",
        ok, f"worst achieved/reported = {worst:.3f}",
    )


SUITES = {
    "quick": True,
    "full": False,
}

_CHECKS = [
    _check_point_mass,
    _check_gaussian,
    _check_method_agreement,
    _check_compound,
    _check_tail_integrals,
    _check_improper,
    _check_pin,
    _check_curve,
    _check_quadrature,
]


def run_suite(suite: str, seed: int = 0) -> list[ValidationCheck]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    quick = SUITES[suite]
    return [chk(quick, seed) for chk in _CHECKS]
