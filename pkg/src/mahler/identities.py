"""Verification harness: every supported identity as a pass/fail check.

Each check produces a :class:`VerificationReport` carrying both sides, the
signed residual, the tolerance it was held to, and the combined a posteriori
error estimate of the quantities involved.  Reports are plain data and
serialize to one JSON object per line; a run of checks is always returned
sorted by (identity_id, parameter, detail) so repeated runs emit identical
bytes.

Identity ids:

* ``boyd``: m(Q_k) = 2 m(P_{k-4}) for 0 <= k <= 4 and m(Q_k) = m(P_{k-4})
  for k <= -1;
* ``main_neg`` / ``main_pos``: q(lam) = r(lam) for lam <= -5 and
  q(lam) = (r(lam) + p(lam))/2 for lam >= 13;
* ``derivative_neg`` / ``derivative_pos``: the same relations for the
  lambda-derivatives on the open ranges;
* ``J1``/``J2``/``J3``: the elliptic integrals between consecutive
  singularities against pi times the closed-form derivatives;
* ``hyp_transform_1`` / ``hyp_transform_2``: the two Gauss hypergeometric
  transformations, on mu-grids;
* ``branch_bounds``: |y-| <= 1 <= |y+| along the curve x(t);
* ``substitution``: the exact change of variables linking the shifted
  hyperelliptic member to its quadratic model;
* ``singularity_order``: the ordering of the cubic singularities and their
  z-images;
* ``asymptotic_gap``: measures approach log|lam|, with shrinking gap.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .measures import branch_extremes, mahler_jensen_2var, p_measure, q_measure, r_measure
from .poly import FamilySpec, make_family
from .poly import verify_substitution as _substitution_residual
from .specfun import (
    dp_dlambda,
    dq_dlambda_closed,
    dr_dlambda,
    gauss_2f1_agm,
    gauss_2f1_series,
    integrate_derivative_kernel,
    singular_points,
)

__all__ = [
    "VerificationReport",
    "verify_boyd",
    "verify_main",
    "verify_derivatives",
    "verify_J",
    "verify_hyp_transforms",
    "verify_branch_bounds",
    "verify_substitution_identity",
    "verify_singularity_order",
    "asymptotic_gap",
    "run_suite",
    "reports_to_jsonl",
    "summary_table",
    "SUITE_NAMES",
    "DEFAULT_TOLERANCES",
    "DEFAULT_PARAMS",
]

# measure-level checks stack two quadratures, derivative/integral checks one,
# special-function checks none; tolerances split accordingly
DEFAULT_TOLERANCES = {
    "boyd": 1e-7,
    "main": 1e-7,
    "derivatives": 1e-8,
    "J": 1e-9,
    "hyp": 1e-12,
    "branches": 1e-10,
    "substitution": 1e-12,
    "singularities": 0.0,
    "asymptotics": 1.0,
}

DEFAULT_PARAMS = {
    "main": (-5.0, -6.0, -8.0, -10.0, -20.0, 13.0, 14.0, 16.0, 20.0, 50.0),
    "boyd": (-3, -2, -1, 0, 1, 2, 3, 4),
    "derivatives": (-6.0, -8.0, -12.0, 14.0, 16.0, 25.0),
    "J1": (13.5, 16.0, 25.0),
    "J2": (-6.0, -8.0, -12.0),
    "J3": (13.5, 16.0, 25.0),
    "hyp_grid": 20,
    "branches": (13.0, 20.0, -4.0, -5.0, -10.0),
    "singularities": (-5.01, -6.0, -20.0, 13.01, 16.0, 50.0),
    "asymptotics_pos": (16.0, 32.0, 64.0, 128.0),
    "asymptotics_neg": (-8.0, -16.0, -32.0, -64.0, -128.0),
    "substitution": (13.0, -6.0, 0.5),
}

SUITE_NAMES = (
    "all",
    "main",
    "boyd",
    "derivatives",
    "J",
    "hyp",
    "branches",
    "singularities",
    "asymptotics",
    "substitution",
)


@dataclass(frozen=True)
class VerificationReport:
    identity_id: str
    parameter: float
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool
    error_estimate: float = 0.0
    detail: str = ""

    def to_json_line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, allow_nan=False)


def _report(identity_id, parameter, lhs, rhs, residual, tolerance, *, error_estimate=0.0, detail="", passed=None):
    if passed is None:
        passed = abs(residual) <= tolerance
    return VerificationReport(
        identity_id=identity_id,
        parameter=float(parameter),
        lhs=float(lhs),
        rhs=float(rhs),
        residual=float(residual),
        tolerance=float(tolerance),
        passed=bool(passed),
        error_estimate=float(error_estimate),
        detail=detail,
    )


def verify_boyd(k: int, *, tol: float | None = None) -> VerificationReport:
    """m(Q_k) against m(P_{k-4}), with factor 2 on 0 <= k <= 4."""
    kf = float(k)
    if not kf.is_integer():
        raise ValueError("k must be an integer")
    k = int(kf)
    if k > 4:
        raise ValueError("the relation is stated for k <= 4")
    tol = DEFAULT_TOLERANCES["boyd"] if tol is None else float(tol)
    factor = 2.0 if k >= 0 else 1.0
    mq = mahler_jensen_2var(make_family(FamilySpec("Q", k)))
    mp_ = p_measure(k - 4)
    lhs = mq.value
    rhs = factor * mp_.value
    return _report(
        "boyd", k, lhs, rhs, lhs - rhs, tol,
        error_estimate=mq.error_estimate + factor * mp_.error_estimate,
        detail=f"factor={int(factor)}",
    )


def verify_main(lam: float, *, tol: float | None = None) -> VerificationReport:
    """q(lam) against r(lam) (lam <= -5) or (r(lam)+p(lam))/2 (lam >= 13)."""
    lam = float(lam)
    tol = DEFAULT_TOLERANCES["main"] if tol is None else float(tol)
    if lam <= -5.0:
        q = q_measure(lam)
        r = r_measure(lam)
        return _report(
            "main_neg", lam, q.value, r.value, q.value - r.value, tol,
            error_estimate=q.error_estimate + r.error_estimate,
        )
    if lam >= 13.0:
        q = q_measure(lam)
        r = r_measure(lam)
        p = p_measure(lam)
        rhs = 0.5 * (r.value + p.value)
        return _report(
            "main_pos", lam, q.value, rhs, q.value - rhs, tol,
            error_estimate=q.error_estimate + 0.5 * (r.error_estimate + p.error_estimate),
        )
    raise ValueError("the relation is stated for lam <= -5 or lam >= 13")


def verify_derivatives(lam: float, *, tol: float | None = None) -> VerificationReport:
    """dq/dlam against dr/dlam (lam < -5) or (dr+dp)/2 (lam > 13), open ranges."""
    lam = float(lam)
    tol = DEFAULT_TOLERANCES["derivatives"] if tol is None else float(tol)
    if lam < -5.0:
        lhs = dq_dlambda_closed(lam)
        rhs = dr_dlambda(lam)
        return _report("derivative_neg", lam, lhs, rhs, lhs - rhs, tol)
    if lam > 13.0:
        lhs = dq_dlambda_closed(lam)
        rhs = 0.5 * (dr_dlambda(lam) + dp_dlambda(lam))
        return _report("derivative_pos", lam, lhs, rhs, lhs - rhs, tol)
    raise ValueError("the derivative relation holds on the open ranges lam < -5 and lam > 13")


def verify_J(lam: float, which: str, *, tol: float | None = None) -> VerificationReport:
    """One elliptic integral between singularities against its closed form.

    ``J1`` (lam > 5): kernel with the extra (1-4x) factor over [x2, x0],
    equal to pi * dp/dlam.  ``J3`` (lam > 5): plain kernel over [x2, x0],
    equal to pi * dr/dlam.  ``J2`` (lam < -5): plain kernel over [x0, x1],
    equal to pi * |dr/dlam|.
    """
    lam = float(lam)
    if which not in ("J1", "J2", "J3"):
        raise ValueError("which must be J1, J2 or J3")
    tol = DEFAULT_TOLERANCES["J"] if tol is None else float(tol)
    if which in ("J1", "J3"):
        if lam <= 5.0:
            raise ValueError(f"{which} requires lam > 5")
        res = integrate_derivative_kernel(lam, with_linear_factor=(which == "J1"))
        rhs = math.pi * (dp_dlambda(lam) if which == "J1" else dr_dlambda(lam))
    else:
        if lam >= -5.0:
            raise ValueError("J2 requires lam < -5")
        res = integrate_derivative_kernel(lam)
        rhs = math.pi * abs(dr_dlambda(lam))
    return _report(which, lam, res.value, rhs, res.value - rhs, tol, error_estimate=res.error_estimate)


def verify_hyp_transforms(grid_size: int = 20, *, tol: float | None = None) -> tuple[VerificationReport, VerificationReport]:
    """Max residual of the two hypergeometric transformations over mu-grids.

    Transformation 1 runs on mu in (0, 1/2); transformation 2 alternates the
    grid over (-1/2, 0) and (0, 1/2).  Each report carries both sides at the
    worst grid point.
    """
    if grid_size < 5:
        raise ValueError("grid_size must be at least 5")
    tol = DEFAULT_TOLERANCES["hyp"] if tol is None else float(tol)

    worst1 = (0.0, 1.0, 1.0)
    for j in range(1, grid_size + 1):
        mu = 0.5 * j / (grid_size + 1)
        lhs = gauss_2f1_agm(mu**3 * (2.0 + mu) / (1.0 + 2.0 * mu)) / math.sqrt(1.0 + 2.0 * mu)
        den = 1.0 + 4.0 * mu + mu * mu
        rhs = gauss_2f1_series(1.0 / 3.0, 2.0 / 3.0, 1.0, 27.0 * mu * (1.0 + mu) ** 4 / (2.0 * den**3)) / den
        if abs(lhs - rhs) >= abs(worst1[1] - worst1[2]):
            worst1 = (mu, lhs, rhs)
    rep1 = _report(
        "hyp_transform_1", grid_size, worst1[1], worst1[2], worst1[1] - worst1[2], tol,
        detail=f"worst_mu={worst1[0]!r}",
    )

    worst2 = (0.0, 1.0, 1.0)
    for j in range(1, grid_size + 1):
        mu = 0.5 * j / (grid_size + 1)
        if j % 2:
            mu = -mu
        m4 = mu**4
        lhs = gauss_2f1_agm(-m4 / (1.0 - m4)) / math.sqrt(1.0 - m4)
        rhs = gauss_2f1_series(0.5, 0.5, 1.0, 4.0 * mu * mu / (1.0 + mu * mu) ** 2) / (1.0 + mu * mu)
        if abs(lhs - rhs) >= abs(worst2[1] - worst2[2]):
            worst2 = (mu, lhs, rhs)
    rep2 = _report(
        "hyp_transform_2", grid_size, worst2[1], worst2[2], worst2[1] - worst2[2], tol,
        detail=f"worst_mu={worst2[0]!r}",
    )
    return rep1, rep2


def verify_branch_bounds(lam: float, n: int | None = None, *, tol: float | None = None) -> VerificationReport:
    """Grid check of |y-| <= 1 <= |y+| along x(t), lam >= 13 or lam <= -4.

    For lam >= 13 the minimum of |y+| must additionally sit at t = 0; a
    violation there adds 1 to the residual so the report fails.
    """
    lam = float(lam)
    if not (lam >= 13.0 or lam <= -4.0):
        raise ValueError("branch bounds are claimed for lam >= 13 or lam <= -4")
    tol = DEFAULT_TOLERANCES["branches"] if tol is None else float(tol)
    ex = branch_extremes(lam, n)
    violation = max(ex.max_abs_y_minus - 1.0, 1.0 - ex.min_abs_y_plus, 0.0)
    detail = f"t_max_minus={ex.arg_t_at_extremes[0]!r},t_min_plus={ex.arg_t_at_extremes[1]!r}"
    if lam >= 13.0 and ex.arg_t_at_extremes[1] != 0.0:
        violation += 1.0
        detail += ",min_not_at_zero"
    return _report(
        "branch_bounds", lam, ex.max_abs_y_minus, ex.min_abs_y_plus, violation, tol, detail=detail,
    )


def verify_substitution_identity(lam: float, samples: int = 100, *, seed: int = 0, tol: float | None = None) -> VerificationReport:
    """Numeric residual of the change-of-variables identity (plus exact check)."""
    tol = DEFAULT_TOLERANCES["substitution"] if tol is None else float(tol)
    residual = _substitution_residual(lam, samples, seed=seed)
    return _report("substitution", float(lam), residual, 0.0, residual, tol, detail=f"samples={samples}")


def verify_singularity_order(lam: float, *, tol: float | None = None) -> VerificationReport:
    """Strict orderings of the cubic singularities and their z-images."""
    lam = float(lam)
    tol = DEFAULT_TOLERANCES["singularities"] if tol is None else float(tol)
    prof = singular_points(lam)  # raises UnsupportedRegimeError in the gap
    if prof.regime == "neg":
        z1, z2, z3, z4 = prof.z_points
        margins = [prof.x0, prof.x1 - prof.x0, 0.25 - prof.x1, prof.x2 - 1.0,
                   z1, z2 - z1, z3 - z2, z4 - z3, 1.0 - z4]
    else:
        z1, z2 = prof.z_points
        margins = [-2.0 - prof.x1, prof.x2 + 2.0, prof.x0 - prof.x2, -prof.x0, z2 - z1]
    worst = min(margins)
    return _report(
        "singularity_order", lam, worst, 0.0, max(0.0, -worst), tol,
        detail=prof.regime,
    )


def asymptotic_gap(lams, *, tol: float | None = None) -> list[VerificationReport]:
    """Gaps measure - log|lam| along a |lam|-increasing, single-sign list.

    Each (family, lam) entry passes when its gap is at most 1 in absolute
    value and no larger in magnitude than at the previous lam, so the list
    witnesses both boundedness and decay.
    """
    lams = [float(v) for v in lams]
    if len(lams) < 2:
        raise ValueError("need at least two lambda values")
    if not (all(v <= -5.0 for v in lams) or all(v >= 13.0 for v in lams)):
        raise ValueError("entries must all satisfy lam <= -5 or all lam >= 13")
    if not all(abs(a) < abs(b) for a, b in zip(lams, lams[1:])):
        raise ValueError("entries must be strictly increasing in |lam|")
    tol = DEFAULT_TOLERANCES["asymptotics"] if tol is None else float(tol)
    prev = {"q": math.inf, "r": math.inf, "p": math.inf}
    reports = []
    for lam in lams:
        vals = {
            "q": q_measure(lam).value,
            "r": r_measure(lam).value,
            "p": p_measure(lam).value,
        }
        ref = math.log(abs(lam))
        for fam in ("q", "r", "p"):
            gap = vals[fam] - ref
            ok = abs(gap) <= tol and abs(gap) <= prev[fam] + 1e-12
            reports.append(
                _report("asymptotic_gap", lam, vals[fam], ref, gap, tol, detail=fam, passed=ok)
            )
            prev[fam] = abs(gap)
    return reports


# -- suite driver ------------------------------------------------------------


def _sort_reports(reports: list[VerificationReport]) -> list[VerificationReport]:
    return sorted(reports, key=lambda r: (r.identity_id, r.parameter, r.detail))


def run_suite(
    suite: str,
    *,
    lambdas=None,
    ks=None,
    grid: int | None = None,
    n: int | None = None,
    samples: int | None = None,
    seed: int = 0,
    tolerances: dict[str, float] | None = None,
) -> list[VerificationReport]:
    """Run one named suite (or ``all``) and return sorted reports.

    ``lambdas``/``ks``/``grid``/``n``/``samples`` override the documented
    defaults; ``tolerances`` overrides per-suite tolerances by name.
    """
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITE_NAMES}")
    if suite == "all" and (lambdas or ks):
        raise ValueError("parameter overrides apply to individual suites, not to 'all'")
    tolerances = tolerances or {}

    def tol_for(name):
        return tolerances.get(name)

    reports: list[VerificationReport] = []
    if suite in ("all", "main"):
        for lam in (lambdas if (lambdas and suite != "all") else DEFAULT_PARAMS["main"]):
            reports.append(verify_main(lam, tol=tol_for("main")))
    if suite in ("all", "boyd"):
        for k in (ks if (ks and suite != "all") else DEFAULT_PARAMS["boyd"]):
            reports.append(verify_boyd(k, tol=tol_for("boyd")))
    if suite in ("all", "derivatives"):
        for lam in (lambdas if (lambdas and suite != "all") else DEFAULT_PARAMS["derivatives"]):
            reports.append(verify_derivatives(lam, tol=tol_for("derivatives")))
    if suite in ("all", "J"):
        if lambdas and suite != "all":
            for lam in lambdas:
                which = "J2" if lam < 0 else "J3"
                reports.append(verify_J(lam, which, tol=tol_for("J")))
                if lam > 5:
                    reports.append(verify_J(lam, "J1", tol=tol_for("J")))
        else:
            for which in ("J1", "J2", "J3"):
                for lam in DEFAULT_PARAMS[which]:
                    reports.append(verify_J(lam, which, tol=tol_for("J")))
    if suite in ("all", "hyp"):
        reports.extend(verify_hyp_transforms(grid or DEFAULT_PARAMS["hyp_grid"], tol=tol_for("hyp")))
    if suite in ("all", "branches"):
        for lam in (lambdas if (lambdas and suite != "all") else DEFAULT_PARAMS["branches"]):
            reports.append(verify_branch_bounds(lam, n, tol=tol_for("branches")))
    if suite in ("all", "singularities"):
        for lam in (lambdas if (lambdas and suite != "all") else DEFAULT_PARAMS["singularities"]):
            reports.append(verify_singularity_order(lam, tol=tol_for("singularities")))
    if suite in ("all", "asymptotics"):
        if lambdas and suite != "all":
            reports.extend(asymptotic_gap(lambdas, tol=tol_for("asymptotics")))
        else:
            reports.extend(asymptotic_gap(DEFAULT_PARAMS["asymptotics_pos"], tol=tol_for("asymptotics")))
            reports.extend(asymptotic_gap(DEFAULT_PARAMS["asymptotics_neg"], tol=tol_for("asymptotics")))
    if suite in ("all", "substitution"):
        for lam in (lambdas if (lambdas and suite != "all") else DEFAULT_PARAMS["substitution"]):
            reports.append(
                verify_substitution_identity(lam, samples or 100, seed=seed, tol=tol_for("substitution"))
            )
    return _sort_reports(reports)


def reports_to_jsonl(reports) -> str:
    return "".join(r.to_json_line() + "\n" for r in reports)


def summary_table(reports) -> str:
    """Human-readable fixed-width summary."""
    lines = [f"{'identity':<18} {'parameter':>10} {'residual':>13} {'tolerance':>10} status"]
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        lines.append(
            f"{r.identity_id:<18} {r.parameter:>10.4g} {r.residual:>13.3e} {r.tolerance:>10.1e} {status}"
        )
    npass = sum(1 for r in reports if r.passed)
    lines.append(f"{npass}/{len(reports)} checks passed")
    return "\n".join(lines) + "\n"
