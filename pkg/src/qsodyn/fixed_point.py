"""Fixed points of the family.

The fixed-point system reduces to a scalar equation in ``x3``.  Eliminating
``x1`` from the first equation gives ``x2`` as a function of ``x3`` (and
symmetrically ``x1`` from the second), so a fixed point is a root of

    r(x3) = x1(x3) + x2(x3) + x3 - 1

on the interval where both branches are nonnegative.  ``r`` is a positive
multiple of ``f(x) - x`` where ``f`` is the convex increasing function used in
the uniqueness argument, hence exactly one sign change for ``e < 1``.

The branch values are computed in the rationalised form

    x2 = 2 (1 - x - c x^2) / (sqrt(h(x)) + 2x + 1)

which equals ``(-2x - 1 + sqrt(h)) / (2 alpha)`` for ``alpha > 0`` and the
rational expression ``(1 - x - c x^2) / (2x + 1)`` at ``alpha = 0``, so one
code path serves all four parameter cases without cancellation as
``alpha -> 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .core import SimplexPoint
from .errors import (
    DomainViolation,
    NoRootBracketed,
    OutOfRange,
    ToleranceNotReached,
)
from .family import EPS_PARAM, FamilyParams, apply_array

TOL_FP = 1e-10
BISECT_XTOL = 1e-14
NEWTON_POLISH_STEPS = 3
SCAN_POINTS = 2000
_DOMAIN_SLACK = 1e-14


class SolverCase(str, enum.Enum):
    CASE1_GENERAL = "Case1_general"
    CASE2_ALPHA_ONLY = "Case2_alpha_only"
    CASE3_A_ONLY = "Case3_a_only"
    CASE4_CLOSED_FORM = "Case4_closed_form"
    E1_DOUBLE = "E1_double"


def branch_upper(coef: float) -> float:
    """Right end ``(sqrt(1 + 4 coef) - 1) / (2 coef)`` of a branch domain; 1 at ``coef = 0``."""
    return 2.0 / (math.sqrt(1.0 + 4.0 * coef) + 1.0)


def admissible_interval(p: FamilyParams) -> tuple[float, float]:
    """Intersection of the domains on which both ``x1(x3)`` and ``x2(x3)`` are >= 0."""
    return 0.0, min(branch_upper(p.c), branch_upper(p.d))


def _branch(weight, coef, x):
    # weight multiplies the square in the equation being solved, coef the x3^2 term
    h = 4.0 * (1.0 - weight * coef) * x * x + 4.0 * (1.0 - weight) * x + 1.0 + 4.0 * weight
    return 2.0 * (1.0 - x - coef * x * x) / (np.sqrt(h) + 2.0 * x + 1.0)


def _branch_prime(weight, coef, x):
    h = 4.0 * (1.0 - weight * coef) * x * x + 4.0 * (1.0 - weight) * x + 1.0 + 4.0 * weight
    dh = 8.0 * (1.0 - weight * coef) * x + 4.0 * (1.0 - weight)
    sh = np.sqrt(h)
    num = 2.0 * (1.0 - x - coef * x * x)
    dnum = 2.0 * (-1.0 - 2.0 * coef * x)
    den = sh + 2.0 * x + 1.0
    dden = dh / (2.0 * sh) + 2.0
    return (dnum * den - num * dden) / (den * den)


def _check_domain(x3: float, upper: float, name: str) -> None:
    if not (-_DOMAIN_SLACK <= x3 <= upper + _DOMAIN_SLACK):
        raise DomainViolation(f"x3 = {x3!r} outside the {name} domain [0, {upper!r}]")


def x2_of_x3(p: FamilyParams, x3: float) -> float:
    """Nonnegative solution ``x2`` of the first fixed-point equation given ``x3``."""
    _check_domain(x3, branch_upper(p.c), "x2(x3)")
    return float(_branch(p.alpha, p.c, x3))


def x1_of_x3(p: FamilyParams, x3: float) -> float:
    """Nonnegative solution ``x1`` of the second fixed-point equation given ``x3``."""
    _check_domain(x3, branch_upper(p.d), "x1(x3)")
    return float(_branch(p.a, p.d, x3))


def scalar_residual(p: FamilyParams, x3):
    """``x1(x3) + x2(x3) + x3 - 1``; vectorised, no domain checks."""
    return _branch(p.a, p.d, x3) + _branch(p.alpha, p.c, x3) + x3 - 1.0


def scalar_residual_prime(p: FamilyParams, x3):
    return _branch_prime(p.a, p.d, x3) + _branch_prime(p.alpha, p.c, x3) + 1.0


def reduced_f(p: FamilyParams, x: float) -> float:
    """The scalar function whose fixed point is ``x3*`` when ``alpha, a > 0``.

    Evaluated literally as
    ``(alpha sqrt(g) + a sqrt(h) - alpha - a - 2 alpha a) / (2 (alpha + a - alpha a))``
    with ``g`` built from ``(a, d)`` and ``h`` from ``(alpha, c)``.
    """
    if p.alpha == 0.0 or p.a == 0.0:
        raise DomainViolation("reduced_f needs alpha != 0 and a != 0")
    _, upper = admissible_interval(p)
    _check_domain(x, upper, "admissible")
    a, al, c, d = p.a, p.alpha, p.c, p.d
    g = 4 * (1 - a * d) * x * x + 4 * (1 - a) * x + 1 + 4 * a
    h = 4 * (1 - al * c) * x * x + 4 * (1 - al) * x + 1 + 4 * al
    return (al * math.sqrt(g) + a * math.sqrt(h) - al - a - 2 * al * a) / (
        2 * (al + a - al * a)
    )


def branch_curves(p: FamilyParams, x):
    """The two curves ``F+`` and ``F-`` for ``alpha != 0, a = 0``.

    A fixed point's ``x3`` satisfies ``F+(x3) = x3`` or ``F-(x3) = x3``.
    Returns ``(F_plus, F_minus)`` with NaN where the curves are not real.
    This is a cross-check only; :func:`find_fixed_points` never uses it.

    The expression is rewritten in terms of
    ``m = (1 - x - c x^2) / (sqrt(h) + 2x + 1)``, after which ``alpha`` cancels:
    ``F± = (1 - 2m ± sqrt((1 - 2m)^2 - 2 (2 - d) m)) / (2 - d)``.
    """
    if p.alpha == 0.0 or p.a != 0.0:
        raise DomainViolation("branch curves are defined for alpha != 0, a = 0")
    x = np.asarray(x, dtype=float)
    m = 0.5 * _branch(p.alpha, p.c, x)
    s = 1.0 - 2.0 * m
    q = s * s - 2.0 * (2.0 - p.d) * m
    with np.errstate(invalid="ignore"):
        root = np.where(q >= 0.0, np.sqrt(np.where(q >= 0.0, q, 0.0)), np.nan)
    return (s + root) / (2.0 - p.d), (s - root) / (2.0 - p.d)


def closed_form_x3(e: float) -> float:
    return (3.0 - math.sqrt(5.0 - 4.0 * e)) / (2.0 * (1.0 + e))


def closed_form_fixed_point(d: float, e: float) -> SimplexPoint:
    """Unique fixed point for ``alpha = a = 0`` and ``e < 1``.

    ``x3*`` solves ``x = (1 - x)^2 + e x^2``; with it the first two equations
    are linear and give ``x1* = (3 x3* - 1)(c + 2 d x3*) / (5 + e - 12 x3*)``.
    """
    if not (0.0 <= e < 1.0 - EPS_PARAM):
        raise OutOfRange(f"e = {e!r} must lie in [0, 1)")
    if not (0.0 <= d <= 1.0 - e + EPS_PARAM):
        raise OutOfRange(f"d = {d!r} must lie in [0, 1 - e]")
    c = max(0.0, 1.0 - d - e)
    x3 = closed_form_x3(e)
    x1 = (3.0 * x3 - 1.0) * (c + 2.0 * d * x3) / (5.0 + e - 12.0 * x3)
    x2 = 1.0 - x1 - x3
    return SimplexPoint(x1, x2, x3)


def expanded_x1_variant(d: float, e: float, linear_d_coef: float) -> float:
    """An expanded closed form for ``x1*`` with the linear coefficient of ``d`` supplied.

    Kept only so the test-suite can show that neither candidate coefficient
    (``24`` or ``25``) is a fixed point.
    """
    s = math.sqrt(5.0 - 4.0 * e)
    num = (
        7
        + linear_d_coef * d
        - 2 * e
        - 19 * d * e
        - 5 * e * e
        + 2 * e * e * d
        + (3 - 11 * d + 4 * d * e + 3 * d * d) * s
    )
    den = 2 * (1 + e) * (-13 + 6 * s + 6 * e + e * e)
    return num / den


def fixed_point_residual(p: FamilyParams, x: SimplexPoint) -> float:
    v = x.as_array()
    return float(np.max(np.abs(apply_array(p, v) - v)))


def _bracket(p: FamilyParams, lo: float, hi: float, exclude_hi: bool) -> tuple[float, float] | float:
    """Return a sign-change bracket ``(l, h)`` with ``r(l) > 0 >= r(h)``, or an exact root."""
    r_lo = float(scalar_residual(p, lo))
    if r_lo == 0.0:
        return lo
    if not exclude_hi:
        r_hi = float(scalar_residual(p, hi))
        if r_hi == 0.0:
            return hi
        if r_lo > 0.0 > r_hi:
            return lo, hi
    grid = np.linspace(lo, hi, SCAN_POINTS + 1)
    if exclude_hi:
        grid = grid[:-1]
    vals = scalar_residual(p, grid)
    idx = np.flatnonzero((vals[:-1] > 0.0) & (vals[1:] <= 0.0))
    if idx.size == 0:
        raise NoRootBracketed(
            f"no sign change of the scalar residual on [{lo}, {hi}] for {p.to_dict()}"
        )
    k = int(idx[0])
    if vals[k + 1] == 0.0:
        return float(grid[k + 1])
    return float(grid[k]), float(grid[k + 1])


def solve_x3(p: FamilyParams, exclude_hi: bool = False) -> float:
    """Root of the scalar residual: bisection to width 1e-14, then Newton polish.

    ``exclude_hi`` skips the right endpoint, used at ``e = 1`` where
    ``x3 = 1`` is a second root that must not be returned.
    """
    lo, hi = admissible_interval(p)
    br = _bracket(p, lo, hi, exclude_hi)
    if isinstance(br, float):
        return br
    left, right = br
    x = bisect(lambda t: float(scalar_residual(p, t)), left, right, xtol=BISECT_XTOL)
    rx = abs(float(scalar_residual(p, x)))
    for _ in range(NEWTON_POLISH_STEPS):
        slope = float(scalar_residual_prime(p, x))
        if slope == 0.0 or not math.isfinite(slope):
            break
        cand = x - float(scalar_residual(p, x)) / slope
        if not (left <= cand <= right):
            break
        rc = abs(float(scalar_residual(p, cand)))
        if rc > rx:
            break
        x, rx = cand, rc
    return x


def _point_from_x3(p: FamilyParams, x3: float) -> SimplexPoint:
    x1 = float(_branch(p.a, p.d, x3))
    x2 = float(_branch(p.alpha, p.c, x3))
    return SimplexPoint.from_seq((x1, x2, x3))


@dataclass(frozen=True)
class FixedPointReport:
    points: tuple[SimplexPoint, ...]
    residuals: tuple[float, ...]
    solver_case: SolverCase
    tol: float = TOL_FP

    def __post_init__(self) -> None:
        if len(self.points) not in (1, 2) or len(self.points) != len(self.residuals):
            raise ValueError("a report holds one or two points with one residual each")
        for r in self.residuals:
            if not r <= self.tol:
                raise ToleranceNotReached(f"residual {r!r} exceeds tol {self.tol!r}")

    def to_dict(self) -> dict:
        return {
            "points": [pt.to_list() for pt in self.points],
            "residuals": list(self.residuals),
            "solver_case": self.solver_case.value,
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "FixedPointReport":
        return cls(
            points=tuple(SimplexPoint.from_seq(pt) for pt in obj["points"]),
            residuals=tuple(float(r) for r in obj["residuals"]),
            solver_case=SolverCase(obj["solver_case"]),
            tol=float(obj["tol"]),
        )

    def check(self, p: FamilyParams) -> None:
        """Re-verify the report against ``p``: count of points and residuals."""
        expected = 2 if p.is_e1() else 1
        if len(self.points) != expected:
            raise ValueError(f"expected {expected} fixed point(s), report has {len(self.points)}")
        for pt in self.points:
            r = fixed_point_residual(p, pt)
            if r > self.tol:
                raise ToleranceNotReached(f"{pt} has residual {r!r}")


def _case_of(p: FamilyParams) -> SolverCase:
    if p.alpha != 0.0 and p.a != 0.0:
        return SolverCase.CASE1_GENERAL
    if p.alpha != 0.0:
        return SolverCase.CASE2_ALPHA_ONLY
    if p.a != 0.0:
        return SolverCase.CASE3_A_ONLY
    return SolverCase.CASE4_CLOSED_FORM


def find_fixed_points(p: FamilyParams, tol_fp: float = TOL_FP) -> FixedPointReport:
    """All fixed points of the operator on the simplex.

    One point for ``e < 1``; for ``e = 1`` (within 1e-12) the vertex
    ``(0, 0, 1)`` is returned as a second point.
    """
    if not tol_fp > 0.0:
        raise OutOfRange(f"tol_fp must be positive, got {tol_fp!r}")
    case = _case_of(p)
    points: list[SimplexPoint] = []
    if p.is_e1():
        if case is SolverCase.CASE4_CLOSED_FORM:
            points.append(SimplexPoint(0.25, 0.25, 0.5))
        else:
            points.append(_point_from_x3(p, solve_x3(p, exclude_hi=True)))
        points.append(SimplexPoint(0.0, 0.0, 1.0))
        case = SolverCase.E1_DOUBLE
    elif case is SolverCase.CASE4_CLOSED_FORM:
        points.append(closed_form_fixed_point(p.d, p.e))
    else:
        points.append(_point_from_x3(p, solve_x3(p)))

    residuals = tuple(fixed_point_residual(p, pt) for pt in points)
    for pt, r in zip(points, residuals):
        if r > tol_fp:
            raise ToleranceNotReached(
                f"fixed point {pt.to_list()} has residual {r!r} > {tol_fp!r}"
            )
    return FixedPointReport(tuple(points), residuals, case, tol_fp)


__all__ = [
    "SolverCase",
    "FixedPointReport",
    "admissible_interval",
    "branch_curves",
    "branch_upper",
    "closed_form_fixed_point",
    "closed_form_x3",
    "find_fixed_points",
    "fixed_point_residual",
    "expanded_x1_variant",
    "reduced_f",
    "scalar_residual",
    "solve_x3",
    "x1_of_x3",
    "x2_of_x3",
]
