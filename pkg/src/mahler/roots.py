"""Numerically stable root solving: quadratics and an Aberth-Ehrlich solver."""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Sequence

__all__ = ["BranchPair", "quadratic_roots", "poly_roots", "RootSolveError"]

_EPS = sys.float_info.epsilon


class RootSolveError(RuntimeError):
    """Simultaneous iteration failed to converge within the iteration cap."""


def _modulus_key(z: complex):
    # order by modulus, ties broken by real then imaginary part
    return (abs(z), z.real, z.imag)


@dataclass(frozen=True)
class BranchPair:
    """The two roots of a monic quadratic, ordered by modulus."""

    y_minus: complex
    y_plus: complex

    def __iter__(self):
        return iter((self.y_minus, self.y_plus))


def quadratic_roots(b: complex, c: complex) -> BranchPair:
    """Roots of ``y^2 + b y + c``, cancellation-free.

    The larger root comes from ``-(b + s)/2`` with the square-root sign
    aligned with ``b`` so the sum never cancels; the smaller root is ``c``
    divided by it.
    """
    b = complex(b)
    c = complex(c)
    s = cmath.sqrt(b * b - 4 * c)
    if (b.conjugate() * s).real < 0:
        s = -s
    q = -(b + s) / 2
    if q == 0:
        # b == 0 and c == 0: double root at the origin
        r1 = r2 = 0j
    else:
        r1 = q
        r2 = c / q
    lo, hi = sorted((r1, r2), key=_modulus_key)
    return BranchPair(lo, hi)


def _horner2(coeffs: Sequence[complex], z: complex) -> tuple[complex, complex]:
    """Value and derivative by a single Horner pass (ascending coefficients)."""
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def poly_roots(coeffs: Sequence[complex], *, max_iter: int = 200, tol: float = 1e-13) -> list[complex]:
    """All roots of ``sum(coeffs[j] * y**j)`` by Aberth-Ehrlich iteration.

    Starts from a deterministically perturbed circle, freezes a root once its
    correction drops below ``tol * max(1, |root|)`` or its backward error is
    at rounding level, and returns the roots sorted by modulus (ties by real,
    then imaginary part).  Multiple roots are reported as the numerical
    cluster the iteration settles into.
    """
    cs = [complex(c) for c in coeffs]
    if len(cs) < 2:
        raise ValueError("degree must be at least 1")
    if cs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    d = len(cs) - 1
    lead = cs[-1]
    mon = [c / lead for c in cs]
    if d == 1:
        return [-mon[0]]

    radius = 1.0 + max(abs(c) for c in mon[:-1])
    z = [
        radius
        * (0.65 + 0.1 * math.fmod(0.618033988749895 * i, 1.0))
        * cmath.exp(2j * math.pi * (i + 0.25) / d + 0.42j)
        for i in range(d)
    ]
    done = [False] * d

    for _ in range(max_iter):
        max_step = 0.0
        for i in range(d):
            if done[i]:
                continue
            p, dp = _horner2(mon, z[i])
            scale = sum(abs(c) * abs(z[i]) ** j for j, c in enumerate(mon))
            if abs(p) <= 8 * _EPS * scale:
                done[i] = True
                continue
            if dp == 0:
                z[i] += (0.5 + 0.3j) * (1.0 + abs(z[i]))  # nudge off a critical point
                max_step = math.inf
                continue
            w = p / dp
            s = 0j
            for j in range(d):
                if j == i:
                    continue
                diff = z[i] - z[j]
                if abs(diff) < 1e-30:
                    diff = 1e-30
                s += 1.0 / diff
            denom = 1.0 - w * s
            step = w / denom if denom != 0 else w
            z[i] -= step
            rel = abs(step) / max(1.0, abs(z[i]))
            if rel < tol:
                done[i] = True
            max_step = max(max_step, rel)
        if all(done) or max_step < tol:
            break
    else:
        raise RootSolveError(f"no convergence within {max_iter} iterations")

    return sorted(z, key=_modulus_key)
