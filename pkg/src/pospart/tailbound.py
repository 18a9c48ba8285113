"""The optimal-bound pipeline for sums of bounded random variables.

Given a variance budget sigma^2, a summand upper bound y, and a skewness
fraction eps in (0, 1), the surrogate variable is

    eta = Normal(0, (1-eps) sigma^2) + y * (Poisson(lam) - lam),
    lam = eps sigma^2 / y^2,

whose transform has a simple closed form, so the positive-part moments of
eta - t are cheap through the transform representations.  The bound at level
x is

    Pin(x) = (E (eta - t_x)_+^2)^3 / (E (eta - t_x)_+^3)^2,

where t_x is the root of m(t) := t + E(eta-t)_+^3 / E(eta-t)_+^2 = x.

Moments default to the vertical-line route at s* = min(1/y, 2/sigma), which
keeps e^{s y} moderate while the transform still decays like a Gaussian in
the integration variable; for strongly negative t the line moves inward so
exp(-s t) cannot dwarf the result, and the characteristic-function route is
the fallback when the transform magnitude becomes extreme.  Below the
support's effective left edge (the Poisson floor minus thirty Gaussian
standard deviations) the positive part equals the variable itself, so raw
moments apply exactly; that switch keeps the x -> 0 end of a bound curve
exact and fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import (
    CenteredScaledPoisson,
    DistributionSpec,
    IndependentSum,
    Normal,
    Shift,
    raw_moment,
)
from .errors import BracketFailure, DegenerateMoment, PositivePartError, PreconditionError
from .moments import gamma_p1, ppm_cf
from .quadrature import IntegrandProfile, integrate_halfline
from .remainders import exp_remainder

__all__ = [
    "TailBoundProblem",
    "TailBoundResult",
    "eta_spec",
    "m_of_t",
    "solve_tx",
    "pin",
    "pin_curve",
]

_FAR_LEFT_Z = 30.0        # Gaussian z-score beyond which (eta-t) > 0 in effect
_RIGHT_GUARD_SIGMAS = 40.0
_TRANSFORM_GUARD = 230.0  # log of the 1e100 transform-magnitude fallback
_NEG_T_EXPONENT_CAP = 6.0  # keep s|t| small when t is far negative


@dataclass(frozen=True)
class TailBoundProblem:
    """(sigma, y, eps) with sigma, y > 0 and 0 < eps < 1."""

    sigma: float
    y: float
    eps: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise PreconditionError("sigma must be positive")
        if not self.y > 0.0:
            raise PreconditionError("y must be positive")
        if not 0.0 < self.eps < 1.0:
            raise PreconditionError("eps must be in (0, 1)")

    @property
    def lam(self) -> float:
        return self.eps * self.sigma**2 / self.y**2


@dataclass
class TailBoundResult:
    x: float
    t_x: float
    pin: float
    mu2: float
    mu3: float
    residual: float
    error: Optional[str] = None

    def is_failure(self) -> bool:
        return self.error is not None


def eta_spec(problem: TailBoundProblem, t: float) -> DistributionSpec:
    """The surrogate variable eta - t as a catalog spec."""
    return Shift(
        IndependentSum(
            Normal(0.0, (1.0 - problem.eps) * problem.sigma**2),
            CenteredScaledPoisson(problem.lam, problem.y),
        ),
        -t,
    )


def _log_transform_at(problem: TailBoundProblem, t: float, s: float) -> float:
    sy = s * problem.y
    e1 = math.expm1(sy) - sy if abs(sy) < 700 else math.inf
    return (
        -s * t
        + 0.5 * s * s * (1.0 - problem.eps) * problem.sigma**2
        + problem.lam * e1
    )


def _eta_laplace_moment(problem: TailBoundProblem, t: float, s: float, p: float,
                        rel_tol: float) -> float:
    """E(eta - t)_+^p on the vertical line at s, with the transform fused
    into a single exponential.

    Same mathematics as ppm_laplace(eta_spec(problem, t), p, s, -1) and
    cross-checked against it in the tests; this form skips the per-call
    kernel assembly, which dominates a bound-curve sweep.
    """
    a = (1.0 - problem.eps) * problem.sigma**2
    lam, y = problem.lam, problem.y
    q = p + 1.0

    def f(u):
        z = s + 1j * np.asarray(u, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
            lg = -z * t + 0.5 * a * z * z + lam * exp_remainder(z * y, 1) - q * np.log(z)
            return np.exp(lg).real

    K = math.exp(_log_transform_at(problem, t, s))

    def envelope(T):
        slow = T ** (1.0 - q) / (q - 1.0)
        arg = 0.5 * a * T * T
        mills = math.exp(-arg) / (a * T) if arg < 700.0 else 0.0
        return K * min(T**-q * mills, slow)

    freq = abs(t) + math.sqrt(a) + 2.0 * lam * y + 10.0 * y * math.sqrt(lam)
    profile = IntegrandProfile(
        0.0, envelope, oscillation_scale=1.0 / freq,
        max_panel_width=4.0 * math.pi / freq,
    )
    pref = gamma_p1(p) / math.pi
    basis = 1.0 + max(problem.sigma, abs(t)) ** p
    quad = integrate_halfline(f, profile, rel_tol, abs_tol=rel_tol * basis / pref * 0.5)
    return pref * quad.value


def _far_left_edge(problem: TailBoundProblem) -> float:
    # eta has a hard floor at -lam*y (the Poisson part) minus Gaussian spread;
    # below this edge P(eta <= t) is under the Phi(-30) ~ 5e-198 level
    gauss_sd = math.sqrt(1.0 - problem.eps) * problem.sigma
    return -(problem.lam * problem.y + _FAR_LEFT_Z * gauss_sd)


def _moments23(problem: TailBoundProblem, t: float, rel_tol: float):
    """(mu2, mu3, m(t)) for eta - t.

    Below the support's effective left edge the positive part equals the
    variable itself, so raw moments are exact and m(t) collapses to the
    cancellation-free closed form (m3 - 2 sigma^2 t) / (t^2 + sigma^2).
    """
    sigma = problem.sigma
    var = sigma * sigma
    if t <= _far_left_edge(problem):
        m3 = raw_moment(
            IndependentSum(
                Normal(0.0, (1.0 - problem.eps) * var),
                CenteredScaledPoisson(problem.lam, problem.y),
            ),
            3,
        )
        mu2 = t * t + var
        mu3 = m3 - 3.0 * var * t - t**3
        return mu2, mu3, (m3 - 2.0 * var * t) / mu2
    if t >= _RIGHT_GUARD_SIGMAS * sigma:
        raise DegenerateMoment(t)
    s_star = min(1.0 / problem.y, 2.0 / sigma)
    if t < -sigma:
        # keep exp(-s t) from dwarfing the result when t is far negative;
        # the line choice only moves the contour, not the value
        s_star = min(s_star, _NEG_T_EXPONENT_CAP / (-t))
    if _log_transform_at(problem, t, s_star) <= _TRANSFORM_GUARD:
        mu2 = _eta_laplace_moment(problem, t, s_star, 2.0, rel_tol)
        mu3 = _eta_laplace_moment(problem, t, s_star, 3.0, rel_tol)
        floor = rel_tol * (1.0 + max(sigma, abs(t)) ** 2)
    else:
        spec = eta_spec(problem, t)
        r2 = ppm_cf(spec, 2.0, rel_tol)
        r3 = ppm_cf(spec, 3.0, rel_tol)
        mu2, mu3 = r2.value, r3.value
        floor = 10.0 * r2.reported_error
    if not math.isfinite(mu2) or mu2 <= floor:
        raise DegenerateMoment(t)
    return mu2, mu3, t + mu3 / mu2


def m_of_t(problem: TailBoundProblem, t: float, rel_tol: float = 1e-9) -> float:
    """m(t) = t + E(eta-t)_+^3 / E(eta-t)_+^2."""
    return _moments23(problem, t, rel_tol)[2]


def solve_tx(
    problem: TailBoundProblem,
    x: float,
    tol_x: float = 1e-9,
    rel_tol: Optional[float] = None,
    bracket_seed: Optional[float] = None,
    bracket_width: Optional[float] = None,
) -> float:
    """The root t_x of m(t) = x, by bracketing plus a secant/bisection hybrid.

    m(t) - t is a ratio of positive moments, so m > t everywhere: starting
    from the seed (x itself when none is given, since m(x) > x) the bracket
    expands geometrically toward the root until m changes side.  A probe
    already within tol_x is accepted outright, which handles the x -> 0 end
    where the root runs off to -infinity while m(t) - x stays one-sided.
    """
    if not (1e-12 <= tol_x <= 1e-3):
        raise PreconditionError(f"tol_x must lie in [1e-12, 1e-3], got {tol_x!r}")
    if rel_tol is None:
        rel_tol = max(min(0.05 * tol_x, 1e-9), 1e-13)

    def g(t):
        try:
            return m_of_t(problem, t, rel_tol) - x
        except DegenerateMoment:
            # beyond the right guard m(t) = t + (positive); the sign is known
            return (t - x) + 1.0

    start = x if bracket_seed is None else bracket_seed
    g_start = g(start)
    if abs(g_start) <= tol_x:
        return start
    step = bracket_width or (4.0 * problem.sigma + 4.0 * problem.y + 1.0)
    if g_start > 0.0:
        hi, g_hi = start, g_start
        lo, g_lo = hi - step, g(hi - step)
        direction = -1.0
    else:
        lo, g_lo = start, g_start
        hi, g_hi = lo + step, g(lo + step)
        direction = 1.0
    expansions = 0
    while (g_lo > 0.0) if direction < 0 else (g_hi < 0.0):
        moving = g_lo if direction < 0 else g_hi
        if abs(moving) <= tol_x:
            return lo if direction < 0 else hi
        expansions += 1
        if expansions > 60:
            raise BracketFailure(lo, hi, g_lo + x, g_hi + x)
        step *= 2.0
        if direction < 0:
            hi, g_hi = lo, g_lo
            lo = lo - step
            g_lo = g(lo)
        else:
            lo, g_lo = hi, g_hi
            hi = hi + step
            g_hi = g(hi)
    # secant within the bracket, with a bisection safeguard: whenever two
    # consecutive steps fail to halve the bracket the next step bisects, so a
    # flat stretch (the far-left asymptote) cannot stall the iteration
    t_a, g_a = lo, g_lo
    t_b, g_b = hi, g_hi
    width_two_ago = t_b - t_a
    for it in range(300):
        width = t_b - t_a
        use_bisect = it % 2 == 1 and width > 0.25 * width_two_ago
        if not use_bisect and g_b != g_a:
            t_c = t_b - g_b * (t_b - t_a) / (g_b - g_a)
            if not (t_a < t_c < t_b):
                t_c = 0.5 * (t_a + t_b)
        else:
            t_c = 0.5 * (t_a + t_b)
        g_c = g(t_c)
        if abs(g_c) <= tol_x:
            return t_c
        if g_c < 0.0:
            t_a, g_a = t_c, g_c
        else:
            t_b, g_b = t_c, g_c
        if it % 2 == 1:
            width_two_ago = width
        if t_b - t_a <= 1e-14 * (1.0 + abs(t_b)):
            return 0.5 * (t_a + t_b)
    return 0.5 * (t_a + t_b)


def pin(
    problem: TailBoundProblem,
    x: float,
    rel_tol: float = 1e-9,
    tol_x: float = 1e-9,
    bracket_seed: Optional[float] = None,
    bracket_width: Optional[float] = None,
) -> TailBoundResult:
    """The bound at a single level x, with the solved root and both moments."""
    t_x = solve_tx(problem, x, tol_x, bracket_seed=bracket_seed,
                   bracket_width=bracket_width)
    mom_tol = max(min(0.05 * tol_x, rel_tol), 1e-13)
    mu2, mu3, m_val = _moments23(problem, t_x, mom_tol)
    value = mu2**3 / mu3**2
    residual = abs(m_val - x)
    return TailBoundResult(x=x, t_x=t_x, pin=value, mu2=mu2, mu3=mu3, residual=residual)


def pin_curve(
    problem: TailBoundProblem,
    x_min: float,
    x_max: float,
    steps: int,
    rel_tol: float = 1e-9,
    tol_x: float = 1e-9,
    warm_start: bool = True,
) -> list[TailBoundResult]:
    """The bound on a uniform grid of x values, ascending.

    With warm_start the previous root seeds the next bracket.  A failing
    point yields a NaN row carrying the error message instead of aborting
    the remaining grid.
    """
    if steps < 2:
        raise PreconditionError("need at least two grid points")
    if not x_min < x_max:
        raise PreconditionError("x_min must be below x_max")
    h = (x_max - x_min) / (steps - 1)
    out = []
    seed = None
    prev_seed = None
    for i in range(steps):
        x = x_min + h * i
        width = None
        if warm_start and seed is not None and prev_seed is not None:
            default_step = 4.0 * problem.sigma + 4.0 * problem.y + 1.0
            width = min(
                max(2.0 * (seed - prev_seed), 1e-6 * (1.0 + abs(seed))),
                default_step,
            )
        try:
            row = pin(problem, x, rel_tol, tol_x,
                      bracket_seed=seed if warm_start else None,
                      bracket_width=width)
            prev_seed, seed = seed, row.t_x
        except PositivePartError as exc:
            row = TailBoundResult(
                x=x, t_x=math.nan, pin=math.nan, mu2=math.nan, mu3=math.nan,
                residual=math.nan, error=str(exc),
            )
        out.append(row)
    return out
