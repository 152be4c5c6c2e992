"""Quadrature engines sized to the integrals that show up here.

Three engines:

* :func:`periodic_trapezoid` for integrals of 1-periodic functions (circle
  averages), which converge geometrically for analytic integrands;
* :func:`tanh_sinh` for finite intervals whose integrand may blow up like an
  inverse square root at the endpoints;
* :func:`adaptive` (adaptive Simpson bisection) as a general fallback for
  smooth, non-periodic pieces.

Singularities must sit at interval endpoints; interior singular points are
the caller's job to split at.  All engines are pure functions and safe for
concurrent use.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import DEFAULTS, get_precision

__all__ = ["QuadratureResult", "NumericalError", "periodic_trapezoid", "tanh_sinh", "adaptive"]

_EPS = sys.float_info.epsilon
# The double-exponential transform maps |t| ~ 5 to points whose weight times
# any admissible inverse-square-root blowup is far below double rounding.
_T_HARD = 5.0


class NumericalError(RuntimeError):
    """A numerical routine could not produce a trustworthy value."""


@dataclass(frozen=True)
class QuadratureResult:
    """Value plus an a posteriori error estimate.

    ``error_estimate`` is the absolute difference between the last two
    refinement levels; it is an indicator, not a guarantee.  ``converged``
    is False when a level/subdivision cap was reached first.
    """

    value: float
    error_estimate: float
    nodes: int
    converged: bool = True


def _err_floor(value: float) -> float:
    return 4 * _EPS * (1.0 + abs(value))


def periodic_trapezoid(
    f: Callable,
    n: int,
    *,
    offset: float = 0.5,
    vectorized: bool = False,
) -> QuadratureResult:
    """Average a 1-periodic function over ``n`` equispaced nodes.

    Nodes sit at ``(k + offset)/n``; the default half-step offset keeps
    integrands sampled away from t = 0.  The error estimate compares against
    the ``n/2``-node rule.

    Parameters
    ----------
    f : callable
        Function of one real argument with period 1.  With
        ``vectorized=True`` it receives the whole node array at once.
    n : int
        Node count; a power of two, at least 8.
    """
    if n < 8 or n & (n - 1):
        raise ValueError("n must be a power of two and at least 8")

    def level(m: int) -> float:
        t = (np.arange(m) + offset) / m
        if vectorized:
            vals = np.asarray(f(t), dtype=float)
            if vals.shape != t.shape:
                raise ValueError("vectorized integrand returned a wrong shape")
        else:
            vals = np.fromiter((float(f(tk)) for tk in t), dtype=float, count=m)
        bad = ~np.isfinite(vals)
        if bad.any():
            k = int(np.argmax(bad))
            raise NumericalError(f"integrand is not finite at t={t[k]!r}")
        return float(vals.mean())

    half = level(n // 2)
    full = level(n)
    err = max(abs(full - half), _err_floor(full))
    return QuadratureResult(value=full, error_estimate=err, nodes=n + n // 2)


def tanh_sinh(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float | None = None,
    *,
    level_max: int | None = None,
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]`` with double-exponential node placement.

    The change of variable ``x = mid + rad*tanh((pi/2) sinh t)`` pushes the
    endpoints to infinity, so integrable endpoint singularities up to
    ``(x-a)^(-1/2)`` / ``(b-x)^(-1/2)`` converge geometrically.  The mesh is
    halved per level until two successive levels differ by less than ``tol``.
    Reaching the level cap returns the last value with ``converged=False``;
    a NaN or infinity from ``f`` in the interior is a hard error.
    """
    if not (a < b):
        raise ValueError("need a < b")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("endpoints must be finite")
    tol = DEFAULTS.tanh_sinh_tol if tol is None else float(tol)
    level_max = DEFAULTS.tanh_sinh_level_max if level_max is None else int(level_max)
    if get_precision() == "extended":
        return _tanh_sinh_extended(f, a, b, tol, level_max)

    mid = 0.5 * (a + b)
    rad = 0.5 * (b - a)
    half_pi = 0.5 * math.pi

    def eval_at(t: float) -> float:
        # distance to the nearer endpoint is computed directly so that nodes
        # hug the endpoints as closely as doubles allow
        u = half_pi * math.sinh(t)
        w = rad * half_pi * math.cosh(t) / math.cosh(u) ** 2
        d = rad * 2.0 / (1.0 + math.exp(2.0 * abs(u)))
        x = b - d if t > 0 else (a + d if t < 0 else mid)
        if x <= a or x >= b:
            return 0.0
        fx = f(x)
        if math.isnan(fx):
            raise NumericalError(f"integrand returned NaN at x={x!r}")
        if math.isinf(fx):
            raise NumericalError(f"integrand blew up at interior point x={x!r}")
        return w * fx

    nodes = 0

    def row(h: float, first: float, step: float) -> float:
        # sum f*w at t = first, first+step, ... out to the hard tail cutoff
        nonlocal nodes
        total = 0.0
        t = first
        while t <= _T_HARD:
            term = eval_at(t) + (eval_at(-t) if t > 0 else 0.0)
            nodes += 2 if t > 0 else 1
            total += term
            t += step
        return total

    h = 1.0
    total = row(h, 0.0, h)
    value = h * total
    err = math.inf
    converged = False
    for _ in range(level_max):
        h *= 0.5
        total += row(h, h, 2.0 * h)
        new_value = h * total
        err = abs(new_value - value)
        value = new_value
        if err <= max(tol, _err_floor(value) / 4):
            converged = True
            break
    return QuadratureResult(value=value, error_estimate=max(err, _err_floor(value)), nodes=nodes, converged=converged)


def _tanh_sinh_extended(f, a, b, tol, level_max) -> QuadratureResult:
    """Same ladder with mpmath scalars (the extended-precision escape hatch)."""
    import mpmath as mp

    with mp.workdps(DEFAULTS.extended_dps):
        mid = (mp.mpf(a) + mp.mpf(b)) / 2
        rad = (mp.mpf(b) - mp.mpf(a)) / 2
        half_pi = mp.pi / 2
        nodes = 0

        def eval_at(t):
            nonlocal nodes
            u = half_pi * mp.sinh(t)
            w = rad * half_pi * mp.cosh(t) / mp.cosh(u) ** 2
            d = rad * 2 / (1 + mp.exp(2 * abs(u)))
            x = b - d if t > 0 else (a + d if t < 0 else mid)
            if x <= a or x >= b:
                return mp.mpf(0)
            nodes += 1
            fx = mp.mpf(f(x))
            if mp.isnan(fx) or mp.isinf(fx):
                raise NumericalError(f"integrand not finite at x={float(x)!r}")
            return w * fx

        t_hard = mp.mpf(DEFAULTS.extended_dps) / 4 + 4  # tail cutoff grows with precision
        def row(h, first, step):
            total = mp.mpf(0)
            t = first
            while t <= t_hard:
                total += eval_at(t) + (eval_at(-t) if t > 0 else 0)
                t += step
            return total

        h = mp.mpf(1)
        total = row(h, mp.mpf(0), h)
        value = h * total
        err = mp.inf
        converged = False
        for _ in range(level_max):
            h /= 2
            total += row(h, h, 2 * h)
            new_value = h * total
            err = abs(new_value - value)
            value = new_value
            if err <= tol:
                converged = True
                break
        return QuadratureResult(
            value=float(value),
            error_estimate=max(float(err), _err_floor(float(value))),
            nodes=nodes,
            converged=converged,
        )


def adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float | None = None,
    *,
    depth_max: int | None = None,
) -> QuadratureResult:
    """Adaptive Simpson bisection with the nested 3/5-point error estimate.

    Sub-intervals are split until the local Richardson error ``|S2 - S1|/15``
    fits a width-proportional share of ``tol``; per-interval errors are
    summed into the error estimate.  Exceeding the depth cap is an error.
    """
    if not (a < b):
        raise ValueError("need a < b")
    tol = DEFAULTS.adaptive_tol if tol is None else float(tol)
    depth_max = DEFAULTS.adaptive_depth_max if depth_max is None else int(depth_max)

    nodes = 0

    def fv(x: float) -> float:
        nonlocal nodes
        nodes += 1
        y = f(x)
        if not math.isfinite(y):
            raise NumericalError(f"integrand is not finite at x={x!r}")
        return y

    def simpson(fa: float, fm: float, fb: float, width: float) -> float:
        return width * (fa + 4.0 * fm + fb) / 6.0

    fa, fm, fb = fv(a), fv(0.5 * (a + b)), fv(b)
    whole = simpson(fa, fm, fb, b - a)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    value = 0.0
    err = 0.0
    while stack:
        x0, x1, f0, f1, f2, s, budget, depth = stack.pop()
        if depth > depth_max:
            raise NumericalError("adaptive bisection exceeded the subdivision cap")
        xm = 0.5 * (x0 + x1)
        fl = fv(0.5 * (x0 + xm))
        fr = fv(0.5 * (xm + x1))
        sl = simpson(f0, fl, f1, xm - x0)
        sr = simpson(f1, fr, f2, x1 - xm)
        delta = sl + sr - s
        if abs(delta) <= 15.0 * budget or (x1 - x0) < 16 * _EPS * max(abs(x0), abs(x1), 1.0):
            value += sl + sr + delta / 15.0
            err += abs(delta) / 15.0
        else:
            stack.append((x0, xm, f0, fl, f1, sl, budget / 2, depth + 1))
            stack.append((xm, x1, f1, fr, f2, sr, budget / 2, depth + 1))
    return QuadratureResult(value=value, error_estimate=max(err, _err_floor(value)), nodes=nodes)
