"""Special functions and closed forms for the measure derivatives.

Contains the Gauss hypergeometric machinery (direct series plus the AGM
route for the (1/2, 1/2; 1) case), the internal parameterisation
``lam = 2(1 + mu^2)/mu``, the bookkeeping of the cubic singularities
``(1 + lam*x)(1 + lam*x + 4x^2)`` together with their images under
``x = z(1-z)``, and the lambda-derivatives of the three family measures:

* ``dp_dlambda(lam) = F(1/3, 2/3; 1 | 27(lam+4)^2/(lam+8)^3) / (lam+8)``
  for lam > 5;
* ``dr_dlambda(lam) = sign(lam)/pi * int_0^1 dt/sqrt(t(1-t)(lam^2-16t))``
  for |lam| > 4, with the AGM fast path
  ``sign(lam)/|lam| * F(1/2, 1/2; 1 | 16/lam^2)`` cross-checked against the
  quadrature on every call;
* ``dq_dlambda_closed(lam)``: elliptic integrals between consecutive cubic
  singularities, for lam < -5 and lam > 13;
* ``dq_dlambda_fd(lam, h)``: the central finite difference of the measure
  itself, used as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULTS, get_precision
from .quadrature import NumericalError, QuadratureResult, tanh_sinh

__all__ = [
    "Hyp2F1Spec",
    "MuParameter",
    "SingularityProfile",
    "UnsupportedRegimeError",
    "agm",
    "gauss_2f1_series",
    "gauss_2f1_agm",
    "hyp2f1",
    "mu_of_lambda",
    "singular_points",
    "cubic_singularities",
    "radical_kernel",
    "integrate_derivative_kernel",
    "dp_dlambda",
    "dr_dlambda",
    "dq_dlambda_closed",
    "dq_dlambda_fd",
]


class UnsupportedRegimeError(ValueError):
    """The requested parameter lies outside the proven/supported range."""


# -- Gauss hypergeometric ------------------------------------------------------


def agm(x: float, y: float) -> float:
    """Arithmetic-geometric mean of two positive reals, to machine fixed point."""
    if x <= 0 or y <= 0:
        raise ValueError("agm needs positive arguments")
    if get_precision() == "extended":
        import mpmath as mp

        with mp.workdps(DEFAULTS.extended_dps):
            return float(mp.agm(x, y))
    a, g = float(x), float(y)
    for _ in range(64):
        if abs(a - g) <= 4e-16 * a:
            break
        a, g = 0.5 * (a + g), math.sqrt(a * g)
    return 0.5 * (a + g)


@dataclass(frozen=True)
class Hyp2F1Spec:
    """Parameters of a Gauss hypergeometric evaluation F(a, b; c | z)."""

    a: float | Fraction
    b: float | Fraction
    c: float | Fraction
    z: float

    def __post_init__(self) -> None:
        c = float(self.c)
        if c <= 0 and c == int(c):
            raise ValueError("c must not be a non-positive integer")


def gauss_2f1_series(a, b, c, z, *, tol: float | None = None, max_terms: int | None = None) -> float:
    """F(a, b; c | z) by direct summation, |z| < 1.

    Terms are accumulated with compensated summation and the sum stops once a
    term falls below ``tol`` times the partial sum.  Near z = 1 the terms of
    the cases used here decay like ``z^n / n``, so the cap is generous.
    """
    a, b, c = float(a), float(b), float(c)
    z = float(z)
    if c <= 0 and c == int(c):
        raise ValueError("c must not be a non-positive integer")
    if not abs(z) < 1.0:
        raise ValueError("series evaluation requires |z| < 1")
    tol = DEFAULTS.series_tol if tol is None else float(tol)
    max_terms = DEFAULTS.series_max_terms if max_terms is None else int(max_terms)

    if get_precision() == "extended":
        import mpmath as mp

        with mp.workdps(DEFAULTS.extended_dps):
            term = mp.mpf(1)
            total = mp.mpf(1)
            for n in range(max_terms):
                term *= (a + n) * (b + n) / ((c + n) * (1 + n)) * z
                total += term
                if abs(term) < tol * abs(total):
                    return float(total)
            raise NumericalError("hypergeometric series did not converge within the term cap")

    term = 1.0
    total = 1.0
    comp = 0.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (1 + n)) * z
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) < tol * abs(total):
            return total
    raise NumericalError("hypergeometric series did not converge within the term cap")


def gauss_2f1_agm(z: float) -> float:
    """F(1/2, 1/2; 1 | z) = 1/agm(1, sqrt(1-z)), valid for all z < 1."""
    z = float(z)
    if not z < 1.0:
        raise ValueError("the AGM route requires z < 1")
    return 1.0 / agm(1.0, math.sqrt(1.0 - z))


def hyp2f1(spec: Hyp2F1Spec) -> float:
    """Evaluate the requested hypergeometric value.

    The (1/2, 1/2; 1) case is dispatched to the AGM (any z < 1); everything
    else goes through the direct series (|z| < 1).
    """
    a, b, c = float(spec.a), float(spec.b), float(spec.c)
    if (a, b, c) == (0.5, 0.5, 1.0):
        return gauss_2f1_agm(spec.z)
    return gauss_2f1_series(a, b, c, spec.z)


# -- internal parameterisation ---------------------------------------------------


@dataclass(frozen=True)
class MuParameter:
    """Solution mu of ``lam = 2(1 + mu^2)/mu`` with the smaller modulus."""

    mu: float
    lam: float
    branch: str  # "positive" (mu > 0) or "negative" (mu < 0)


def mu_of_lambda(lam: float) -> MuParameter:
    """Invert ``lam = 2(1 + mu^2)/mu`` on the branch with |mu| <= 1/2.

    Real for |lam| >= 4; |mu| < 1/2 corresponds to |lam| > 5 and |lam| = 5
    gives |mu| = 1/2 exactly.
    """
    lam = float(lam)
    if abs(lam) < 4.0:
        raise ValueError("mu is complex for |lam| < 4")
    s = math.sqrt(lam * lam - 16.0)
    mu = (lam - math.copysign(s, lam)) / 4.0
    back = 2.0 * (1.0 + mu * mu) / mu
    if abs(back - lam) > 1e-12 * max(1.0, abs(lam)):
        raise NumericalError("mu(lambda) round trip failed")
    return MuParameter(mu=mu, lam=lam, branch="positive" if mu > 0 else "negative")


# -- singular points of the derivative integrals ----------------------------------


@dataclass(frozen=True)
class SingularityProfile:
    """Zeros of ``(1 + lam*x)(1 + lam*x + 4x^2)`` and their z-circle images."""

    x0: float
    x1: float
    x2: float
    z_points: tuple[float, ...]
    regime: str  # "neg" (lam < -5) or "pos" (lam > 13)


def cubic_singularities(lam: float) -> tuple[float, float, float]:
    """(x0, x1, x2) = (-1/lam, -(lam+s)/8, -(lam-s)/8) with s = sqrt(lam^2-16)."""
    lam = float(lam)
    if lam * lam < 16.0:
        raise ValueError("real singular points require |lam| >= 4")
    s = math.sqrt(lam * lam - 16.0)
    return (-1.0 / lam, -(lam + s) / 8.0, -(lam - s) / 8.0)


def _z_of_x(x: float, sign: int) -> float:
    return 0.5 * (1.0 + sign * math.sqrt(1.0 - 4.0 * x))


def singular_points(lam: float) -> SingularityProfile:
    """Singularity bookkeeping for the flattened derivative integrals.

    For lam < -5 the x-roots satisfy 0 < x0 < x1 < 1/4 with x2 > 1 and all
    four z-images lie on (0, 1); for lam > 13 they satisfy
    x1 < -2 < x2 < x0 < 0 with two z-images.  Anything in between is
    rejected.
    """
    lam = float(lam)
    if lam < -5.0:
        x0, x1, x2 = cubic_singularities(lam)
        if not (0.0 < x0 < x1 < 0.25 and x2 > 1.0):
            raise NumericalError("x-ordering violated in the negative regime")
        z = (_z_of_x(x0, -1), _z_of_x(x1, -1), _z_of_x(x1, +1), _z_of_x(x0, +1))
        if not all(0.0 < a < b < 1.0 for a, b in zip(z, z[1:])):
            raise NumericalError("z-ordering violated in the negative regime")
        return SingularityProfile(x0=x0, x1=x1, x2=x2, z_points=z, regime="neg")
    if lam > 13.0:
        x0, x1, x2 = cubic_singularities(lam)
        if not (x1 < -2.0 < x2 < x0 < 0.0):
            raise NumericalError("x-ordering violated in the positive regime")
        z = (_z_of_x(x2, -1), _z_of_x(x0, -1))
        if not (-1.0 < z[0] < z[1] < 1.0):
            raise NumericalError("z-ordering violated in the positive regime")
        return SingularityProfile(x0=x0, x1=x1, x2=x2, z_points=z, regime="pos")
    raise UnsupportedRegimeError("singular points are classified only for lam < -5 or lam > 13")


# -- derivative closed forms --------------------------------------------------------


def dp_dlambda(lam: float) -> float:
    """Derivative of the P-family measure, lam > 5."""
    lam = float(lam)
    if lam <= 5.0:
        raise UnsupportedRegimeError("dp/dlambda is used for lam > 5")
    z = 27.0 * (lam + 4.0) ** 2 / (lam + 8.0) ** 3
    if z >= 1.0:
        raise NumericalError("hypergeometric argument reached 1")
    return gauss_2f1_series(Fraction(1, 3), Fraction(2, 3), 1, z) / (lam + 8.0)


def dr_dlambda(lam: float) -> float:
    """Derivative of the R-family measure, |lam| > 4.

    Evaluates both the AGM closed form and the tanh-sinh quadrature of
    ``int_0^1 dt/sqrt(t(1-t)(lam^2 - 16t))`` and insists they agree to
    1e-11 before returning the (more precise) closed form.
    """
    lam = float(lam)
    if abs(lam) <= 4.0:
        raise UnsupportedRegimeError("dr/dlambda requires |lam| > 4")
    sign = math.copysign(1.0, lam)
    fast = sign * gauss_2f1_agm(16.0 / (lam * lam)) / abs(lam)
    l2 = lam * lam

    # two halves in distance-to-endpoint coordinates, so both inverse-sqrt
    # endpoints are resolved to full double precision
    def g_left(t: float) -> float:
        r = t * (1.0 - t) * (l2 - 16.0 * t)
        return 1.0 / math.sqrt(r) if r > 0.0 else 0.0

    def g_right(s: float) -> float:  # t = 1 - s
        r = (1.0 - s) * s * (l2 - 16.0 + 16.0 * s)
        return 1.0 / math.sqrt(r) if r > 0.0 else 0.0

    integral = tanh_sinh(g_left, 0.0, 0.5).value + tanh_sinh(g_right, 0.0, 0.5).value
    slow = sign * integral / math.pi
    if abs(fast - slow) > 1e-11 * max(1.0, abs(fast)):
        raise NumericalError(f"dr/dlambda routes disagree at lam={lam!r}: {fast!r} vs {slow!r}")
    return fast


def radical_kernel(lam: float, *, with_linear_factor: bool = False):
    """Integrand 1/sqrt(-(1+lam*x)(1+lam*x+4x^2)[*(1-4x)]), guarded near ends."""

    def g(x: float) -> float:
        u = 1.0 + lam * x
        r = -u * (u + 4.0 * x * x)
        if with_linear_factor:
            r *= 1.0 - 4.0 * x
        if r <= 0.0:
            # reachable only by rounding within a few ulp of an endpoint,
            # where the double-exponential weight is negligible anyway
            return 0.0
        return 1.0 / math.sqrt(r)

    return g


def integrate_derivative_kernel(lam: float, *, with_linear_factor: bool = False, tol: float = 1e-13):
    """Tanh-sinh integral of the radical kernel between consecutive roots.

    For lam <= -5 the interval is [x0, x1]; for lam > 5 it is [x2, x0].  The
    radicand is taken in the factored form ``4|lam|`` times the three root
    distances, and each half is integrated in its distance-to-endpoint
    coordinate, so the inverse-square-root endpoints are resolved down to the
    last representable double instead of flooring near sqrt(machine epsilon).
    Returns the summed :class:`QuadratureResult` of the two halves.
    """
    lam = float(lam)
    x0, x1, x2 = cubic_singularities(lam)
    if lam <= -5.0:
        if with_linear_factor:
            raise ValueError("the (1-4x) factor is only used on the positive side")
        a, b = x0, x1
        c = 4.0 * abs(lam)
        third_a = x2 - a  # distance from the left endpoint to the far root
        third_b = x2 - b

        def fac_left(s: float) -> float:  # x = a + s
            return c * s * ((b - a) - s) * (third_a - s)

        def fac_right(s: float) -> float:  # x = b - s
            return c * ((b - a) - s) * s * (third_b + s)

        lin_left = lin_right = None
    elif lam > 5.0:
        a, b = x2, x0
        c = 4.0 * lam
        third_a = a - x1
        third_b = b - x1

        def fac_left(s: float) -> float:  # x = a + s
            return c * s * ((b - a) - s) * (third_a + s)

        def fac_right(s: float) -> float:  # x = b - s
            return c * ((b - a) - s) * s * (third_b - s)

        if with_linear_factor:
            la, lb = 1.0 - 4.0 * a, 1.0 - 4.0 * b

            def lin_left(s: float) -> float:
                return la - 4.0 * s

            def lin_right(s: float) -> float:
                return lb + 4.0 * s

        else:
            lin_left = lin_right = None
    else:
        raise UnsupportedRegimeError("the kernel integral is used for lam <= -5 or lam > 5")

    def make_g(fac, lin):
        def g(s: float) -> float:
            r = fac(s)
            if lin is not None:
                r *= lin(s)
            return 1.0 / math.sqrt(r) if r > 0.0 else 0.0

        return g

    half = 0.5 * (b - a)
    left = tanh_sinh(make_g(fac_left, lin_left), 0.0, half, tol)
    right = tanh_sinh(make_g(fac_right, lin_right), 0.0, half, tol)
    return QuadratureResult(
        value=left.value + right.value,
        error_estimate=left.error_estimate + right.error_estimate,
        nodes=left.nodes + right.nodes,
        converged=left.converged and right.converged,
    )


def _check_radicand_positive(g, a: float, b: float) -> None:
    mid = 0.5 * (a + b)
    if g(mid) <= 0.0:
        raise NumericalError("radicand is not positive at the midpoint of the integration interval")


def dq_dlambda_closed(lam: float) -> float:
    """Derivative of the shifted hyperelliptic measure via elliptic integrals.

    lam < -5: ``-(1/pi) * int_{x0}^{x1} dx/sqrt(-(1+lam x)(1+lam x+4x^2))``.
    lam > 13: ``(1/2pi)`` times the sum of the integrals over [x2, x0] of the
    same kernel and of the kernel with the extra ``(1-4x)`` factor.
    """
    lam = float(lam)
    if lam < -5.0:
        x0, x1, _ = cubic_singularities(lam)
        _check_radicand_positive(radical_kernel(lam), x0, x1)
        val = integrate_derivative_kernel(lam).value
        return -val / math.pi
    if lam > 13.0:
        x0, _, x2 = cubic_singularities(lam)
        _check_radicand_positive(radical_kernel(lam), x2, x0)
        _check_radicand_positive(radical_kernel(lam, with_linear_factor=True), x2, x0)
        val = integrate_derivative_kernel(lam).value + integrate_derivative_kernel(lam, with_linear_factor=True).value
        return val / (2.0 * math.pi)
    raise UnsupportedRegimeError("the closed form holds for lam < -5 or lam > 13 only")


def dq_dlambda_fd(lam: float, h: float | None = None) -> float:
    """Central finite difference of the measure itself (independent oracle)."""
    from .measures import q_measure  # late import: measures sits above this module

    lam = float(lam)
    h = DEFAULTS.fd_step if h is None else float(h)
    if h <= 0.0:
        raise ValueError("h must be positive")
    lo, hi = lam - h, lam + h
    if not (hi <= -4.0 or lo >= 13.0):
        raise ValueError("finite difference would straddle the supported regimes")
    qp = q_measure(hi, tol=1e-12)
    qm = q_measure(lo, tol=1e-12)
    return (qp.value - qm.value) / (2.0 * h)
