"""Enumeration of all positive solutions of the coupled closing system.

The two-dimensional system is reduced to the scalar residual R(x) = g(f(x)) - x,
where f and g are the aperture maps of the two Goldberg dipyramids. Roots are
bracketed on a uniform grid and polished by Brent's bracketing method followed
by Newton steps.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import EvaluationError, NoTransitionError
from .geometry import FaceParams, SiameseConfig, SOLVER_TOL, aperture, height_max

POINT_ROOT_TOL = 1e-13
DEGENERATE_CUTOFF = 1e-9
SEPARATION = 1e-7
DEFAULT_SAMPLES = 4096


def default_samples():
    return int(os.environ.get("SIAMESE_FLEX_SAMPLES", DEFAULT_SAMPLES))


def bracket_scan(f, a, b, samples, vectorized=False):
    """Sign-change intervals of ``f`` on a uniform grid over [a, b].

    Returns an ordered list of ``(lo, hi)`` pairs. Samples where |f| < 1e-13 are
    reported as point roots ``(x, x)``.
    """
    if not a < b:
        raise ValueError(f"empty interval [{a}, {b}]")
    if samples < 2:
        raise ValueError("need at least two samples")
    xs = np.linspace(a, b, samples)
    if vectorized:
        ys = np.asarray(f(xs), dtype=float)
    else:
        ys = np.array([f(float(t)) for t in xs], dtype=float)
    bad = ~np.isfinite(ys)
    if bad.any():
        t = float(xs[np.argmax(bad)])
        raise EvaluationError(f"non-finite value at x = {t!r}", abscissa=t)

    out = []
    zero = np.abs(ys) < POINT_ROOT_TOL
    change = (np.sign(ys[:-1]) * np.sign(ys[1:]) < 0) & ~zero[:-1] & ~zero[1:]
    for i in range(samples):
        if zero[i]:
            out.append((float(xs[i]), float(xs[i])))
        if i < samples - 1 and change[i]:
            out.append((float(xs[i]), float(xs[i + 1])))
    return out


def refine_root(f, bracket, tol=1e-13):
    """Root of ``f`` inside ``bracket``: bracketed Brent iteration to width ``tol``, then Newton polish.

    Newton steps use central differences with step 1e-7 and are discarded whenever
    they leave the bracket; the abscissa with the smallest |f| is returned.
    """
    a, b = float(bracket[0]), float(bracket[1])
    fa = f(a)
    if a == b or abs(fa) < POINT_ROOT_TOL:
        return a
    fb = f(b)
    if abs(fb) < POINT_ROOT_TOL:
        return b
    x = brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    best, fbest = x, abs(f(x))
    h = 1e-7
    for _ in range(20):
        if fbest == 0.0:
            break
        lo, hi = max(a, x - h), min(b, x + h)
        if hi <= lo:
            break
        slope = (f(hi) - f(lo)) / (hi - lo)
        if slope == 0.0 or not math.isfinite(slope):
            break
        x_new = x - f(x) / slope
        if not a <= x_new <= b:
            break
        fx = abs(f(x_new))
        x = x_new
        if fx < fbest:
            best, fbest = x_new, fx
        else:
            break
    return best


@dataclass(frozen=True)
class SolutionSet:
    plan: FaceParams
    solutions: tuple
    regime: int

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def heights(self):
        return [(s.x, s.x_tilde) for s in self.solutions]


def _reduced_residual(plan):
    """The scalar residual R(x) and the interval on which it is defined."""
    n, l, lt = plan.n, plan.l, plan.l_tilde
    xm, xmt = height_max(n, l), height_max(n, lt)

    def f(x):
        return aperture(n, l, x)

    def R(x):
        return aperture(n, lt, np.minimum(f(x), xmt)) - x

    lo = 0.0
    if f(0.0) > xmt:
        # f decreases, so R is only defined to the right of f(x) = x_max(l~)
        lo = refine_root(lambda t: f(t) - xmt, (0.0, xm))
    return f, R, lo, xm


def solve_heights(plan, samples=None):
    """All positive solutions of the closing system for ``plan``, ascending in x."""
    samples = samples or default_samples()
    f, R, lo, hi = _reduced_residual(plan)
    if hi - lo <= DEGENERATE_CUTOFF:
        return SolutionSet(plan, (), 0)

    roots = []
    for br in bracket_scan(R, lo, hi, samples, vectorized=True):
        x = refine_root(lambda t: float(R(t)), br)
        xt = float(f(x))
        if x <= DEGENERATE_CUTOFF or xt <= DEGENERATE_CUTOFF:
            continue
        if roots and abs(x - roots[-1]) <= SEPARATION:
            continue
        roots.append(x)

    configs = []
    for x in roots:
        cfg = SiameseConfig.from_heights(plan, x, float(f(x))) if _closes(plan, x, f) else None
        if cfg is not None:
            configs.append(cfg)
    return SolutionSet(plan, tuple(configs), len(configs))


def _closes(plan, x, f):
    from .geometry import HeightsPair, system_residual

    r = system_residual(plan, HeightsPair(x, float(f(x))))
    return max(abs(r[0]), abs(r[1])) < SOLVER_TOL


def isomer_count(plan, samples=None):
    return solve_heights(plan, samples).regime


@dataclass(frozen=True)
class Transition:
    """Base length where two solutions merge, with the solutions present there."""

    l0: float
    solutions: SolutionSet

    def __float__(self):
        return self.l0


def transition_base_length(n, l_tilde, lo, hi, samples=None):
    """Locate the base length between ``lo`` and ``hi`` where the solution count changes.

    Bisection on the integer map l -> count(solve_heights) to width 1e-9, then the
    merging pair is reported once, with multiplicity 2, at the tangency.
    """
    def count(l):
        return solve_heights(FaceParams(n, l, l_tilde), samples).regime

    c_lo, c_hi = count(lo), count(hi)
    if c_lo == c_hi:
        raise NoTransitionError(f"solution count is {c_lo} at both l = {lo} and l = {hi}")
    a, b = lo, hi
    while b - a > 1e-9:
        mid = 0.5 * (a + b)
        if count(mid) == c_lo:
            a = mid
        else:
            b = mid

    # the side with more solutions still shows the merging pair as two roots
    side = a if c_lo > c_hi else b
    many = solve_heights(FaceParams(n, side, l_tilde), samples)
    xs = [s.x for s in many.solutions]
    if len(xs) < 2:
        raise NoTransitionError("no merging pair found next to the transition")
    gaps = np.diff(xs)
    k = int(np.argmin(gaps))
    x_lo, x_hi = xs[k], xs[k + 1]

    l0, x_double = _polish_tangency(n, l_tilde, 0.5 * (a + b), x_lo, x_hi)
    plan = FaceParams(n, l0, l_tilde)
    f, _, _, _ = _reduced_residual(plan)
    configs = [SiameseConfig.from_heights(plan, x_double, float(f(x_double)), multiplicity=2)]
    margin = 0.5 * (x_hi - x_lo)
    for s in solve_heights(plan, samples).solutions:
        if not x_lo - margin <= s.x <= x_hi + margin:
            configs.append(s)
    configs.sort(key=lambda c: c.x)
    return Transition(l0, SolutionSet(plan, tuple(configs), len(configs)))


def _polish_tangency(n, l_tilde, l_guess, x_lo, x_hi):
    """Refine (l0, x*) so that R and dR/dx vanish together.

    Between the merging roots R has a single hump; its signed extreme value is a
    smooth function of l that crosses zero exactly at the tangency.
    """
    _, R, _, _ = _reduced_residual(FaceParams(n, l_guess, l_tilde))
    sign = 1.0 if R(0.5 * (x_lo + x_hi)) > 0 else -1.0
    width = x_hi - x_lo

    def hump(l):
        _, R, lo, hi = _reduced_residual(FaceParams(n, l, l_tilde))
        a, b = max(lo, x_lo - width), min(hi, x_hi + width)
        res = minimize_scalar(lambda t: -sign * float(R(t)), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-13})
        return float(R(res.x)), float(res.x)

    l0 = l_guess
    v0, x0 = hump(l0)
    h = 1e-7
    for _ in range(40):
        if abs(v0) < 1e-14:
            break
        v1, _ = hump(l0 + h)
        slope = (v1 - v0) / h
        if slope == 0.0:
            break
        step = max(-1e-4, min(1e-4, -v0 / slope))
        l0 += step
        v0, x0 = hump(l0)
        h = max(1e-10, min(1e-7, abs(step)))
    return l0, x0
