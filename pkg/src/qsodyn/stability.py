"""Linear stability of fixed points.

The Jacobian of the reduced map ``(x1, x2) -> (x1', x2')`` has trace
``2 (e x3 - 1)`` on the simplex, so its eigenvalues are
``e x3 - 1 ± sqrt(D)`` with

    D = (e x3 - 1)^2 + 4 e x3^2
        + 4 [(b beta - 1) x1 x2 + (a (1 - c) - 1) x1 x3 + (alpha (1 - d) - 1) x2 x3].

The fixed point is then classified by comparing ``D`` with the thresholds
``-1 + (1 - e x3)^2``, ``0``, ``e^2 x3^2`` and ``(2 - e x3)^2``, which is the
ten-row table encoded in :func:`classify`.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import SimplexPoint
from .errors import NotAFixedPoint
from .family import FamilyParams
from .fixed_point import TOL_FP, fixed_point_residual

EPS_HYP = 1e-9
SPECTRAL_TOL = 1e-9


class StabilityClass(str, enum.Enum):
    REPELLING = "repelling"
    ATTRACTING = "attracting"
    SADDLE = "saddle"
    NONHYPERBOLIC = "nonhyperbolic"


# class implied by each row of the table, rows numbered 1..10
TABLE_CLASS = {
    1: StabilityClass.REPELLING,
    2: StabilityClass.NONHYPERBOLIC,
    3: StabilityClass.ATTRACTING,
    4: StabilityClass.NONHYPERBOLIC,
    5: StabilityClass.ATTRACTING,
    6: StabilityClass.ATTRACTING,
    7: StabilityClass.NONHYPERBOLIC,
    8: StabilityClass.SADDLE,
    9: StabilityClass.NONHYPERBOLIC,
    10: StabilityClass.REPELLING,
}


def jacobian_at(p: FamilyParams, x: SimplexPoint) -> np.ndarray:
    """Jacobian of the reduced 2D map at ``x``."""
    return jacobian_xy(p, x.x1, x.x2)


def jacobian_xy(p: FamilyParams, x1: float, x2: float) -> np.ndarray:
    """As :func:`jacobian_at` but from raw ``(x1, x2)``; no simplex check."""
    x3 = 1.0 - x1 - x2
    return np.array(
        [
            [-2.0 * p.c * x3 - 2.0 * x2, 2.0 * (p.alpha - 1.0) * x2 + 2.0 * (1.0 - p.c) * x3],
            [2.0 * (p.a - 1.0) * x1 + 2.0 * (1.0 - p.d) * x3, -2.0 * p.d * x3 - 2.0 * x1],
        ]
    )


def _discriminant_formula(p: FamilyParams, x: SimplexPoint) -> float:
    x1, x2, x3 = x.as_tuple()
    e = p.e
    return (
        (e * x3 - 1.0) ** 2
        + 4.0 * e * x3 * x3
        + 4.0
        * (
            (p.b * p.beta - 1.0) * x1 * x2
            + (p.a * (1.0 - p.c) - 1.0) * x1 * x3
            + (p.alpha * (1.0 - p.d) - 1.0) * x2 * x3
        )
    )


def _require_fixed(p: FamilyParams, x: SimplexPoint, tol_fp: float) -> float:
    r = fixed_point_residual(p, x)
    if r > tol_fp:
        raise NotAFixedPoint(f"{x.to_list()} has residual {r!r} > {tol_fp!r}")
    return r


def discriminant(p: FamilyParams, xstar: SimplexPoint, tol_fp: float = TOL_FP) -> float:
    _require_fixed(p, xstar, tol_fp)
    return _discriminant_formula(p, xstar)


def eigenvalues_from_jacobian(jac: np.ndarray) -> tuple[complex, complex]:
    """Closed-form 2x2 eigenvalues ``tr/2 ± sqrt(tr^2/4 - det)``, ``+`` root first."""
    half_tr = 0.5 * (jac[0, 0] + jac[1, 1])
    det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
    root = cmath.sqrt(half_tr * half_tr - det)
    return complex(half_tr + root), complex(half_tr - root)


def eigenvalues_from_discriminant(p: FamilyParams, x: SimplexPoint, D: float) -> tuple[complex, complex]:
    t = p.e * x.x3 - 1.0
    root = cmath.sqrt(D)
    return complex(t + root), complex(t - root)


@dataclass(frozen=True)
class StabilityReport:
    point: SimplexPoint
    jacobian: tuple[tuple[float, float], tuple[float, float]]
    D: float
    eigenvalues: tuple[complex, complex]
    moduli: tuple[float, float]
    cls: StabilityClass
    table_row: int | None
    threshold_distance: float
    eps_hyp: float = EPS_HYP

    def __post_init__(self) -> None:
        if self.table_row is not None and TABLE_CLASS[self.table_row] is not self.cls:
            raise ValueError(f"row {self.table_row} does not imply class {self.cls.value}")
        m, eps = self.moduli, self.eps_hyp
        if self.cls is StabilityClass.ATTRACTING and not max(m) < 1.0 + eps:
            raise ValueError("attracting point with a modulus >= 1")
        if self.cls is StabilityClass.REPELLING and not min(m) > 1.0 - eps:
            raise ValueError("repelling point with a modulus <= 1")
        if self.cls is StabilityClass.SADDLE and not (min(m) < 1.0 < max(m)):
            raise ValueError("saddle without moduli on both sides of 1")
        if self.cls is StabilityClass.NONHYPERBOLIC and not min(abs(v - 1.0) for v in m) <= 2 * eps:
            raise ValueError("nonhyperbolic point without a modulus near 1")

    def to_dict(self) -> dict:
        return {
            "point": self.point.to_list(),
            "jacobian": [list(r) for r in self.jacobian],
            "D": self.D,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "moduli": list(self.moduli),
            "class": self.cls.value,
            "table_row": self.table_row,
            "threshold_distance": self.threshold_distance,
            "eps_hyp": self.eps_hyp,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "StabilityReport":
        return cls(
            point=SimplexPoint.from_seq(obj["point"]),
            jacobian=tuple(tuple(float(v) for v in row) for row in obj["jacobian"]),
            D=float(obj["D"]),
            eigenvalues=tuple(complex(re, im) for re, im in obj["eigenvalues"]),
            moduli=tuple(float(v) for v in obj["moduli"]),
            cls=StabilityClass(obj["class"]),
            table_row=obj["table_row"],
            threshold_distance=float(obj["threshold_distance"]),
            eps_hyp=float(obj.get("eps_hyp", EPS_HYP)),
        )


def table_row(D: float, ex3: float, eps_hyp: float = EPS_HYP) -> tuple[int, float]:
    """Select the table row for discriminant ``D`` and ``e x3``.

    Equality rows are matched with a band of width ``eps_hyp`` measured on the
    eigenvalue modulus (not on ``D``) so the row always agrees with the moduli.
    Returns ``(row, distance)`` where ``distance`` is the gap between the
    relevant modulus and 1.
    """
    t = ex3 - 1.0
    if D < 0.0:
        mod = math.sqrt(t * t - D)
        dist = abs(mod - 1.0)
        if dist <= eps_hyp:
            return 2, dist
        return (1 if mod > 1.0 else 3), dist
    s = math.sqrt(D)
    d_minus = abs(s - ex3)  # |lambda_-| - 1
    d_plus = abs(s - (2.0 - ex3))  # lambda_+ - 1
    dist = min(d_minus, d_plus)
    if s <= eps_hyp and ex3 <= eps_hyp:
        return 4, min(dist, abs(t + 1.0))
    if D == 0.0:
        return 5, dist
    if d_minus <= eps_hyp:
        return 7, d_minus
    if d_plus <= eps_hyp:
        return 9, d_plus
    if s < ex3:
        return 6, dist
    if s < 2.0 - ex3:
        return 8, dist
    return 10, dist


def class_from_moduli(moduli: tuple[float, float], eps_hyp: float = EPS_HYP) -> StabilityClass:
    """Classification straight from the definitions, independent of the table."""
    if any(abs(m - 1.0) <= eps_hyp for m in moduli):
        return StabilityClass.NONHYPERBOLIC
    if all(m < 1.0 for m in moduli):
        return StabilityClass.ATTRACTING
    if all(m > 1.0 for m in moduli):
        return StabilityClass.REPELLING
    return StabilityClass.SADDLE


def classify(
    p: FamilyParams,
    xstar: SimplexPoint,
    eps_hyp: float = EPS_HYP,
    tol_fp: float = TOL_FP,
    force: bool = False,
) -> StabilityReport:
    """Eigenvalues, discriminant and table row at a fixed point.

    With ``force=True`` a non-fixed point is accepted; the report then has
    ``table_row=None`` and the class comes from the moduli alone.
    """
    is_fixed = True
    try:
        _require_fixed(p, xstar, tol_fp)
    except NotAFixedPoint:
        if not force:
            raise
        is_fixed = False

    jac = jacobian_at(p, xstar)
    D = _discriminant_formula(p, xstar)
    half_tr = 0.5 * (jac[0, 0] + jac[1, 1])
    det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
    D_jac = half_tr * half_tr - det
    if abs(D_jac - D) > SPECTRAL_TOL * max(1.0, abs(D)):
        raise ArithmeticError(
            f"discriminant formula {D!r} disagrees with Jacobian spectrum {D_jac!r}"
        )
    lam = eigenvalues_from_discriminant(p, xstar, D)
    moduli = (abs(lam[0]), abs(lam[1]))
    ex3 = p.e * xstar.x3

    if is_fixed:
        row, dist = table_row(D, ex3, eps_hyp)
        cls = TABLE_CLASS[row]
    else:
        row = None
        dist = min(abs(m - 1.0) for m in moduli)
        cls = class_from_moduli(moduli, eps_hyp)
    return StabilityReport(
        point=xstar,
        jacobian=((float(jac[0, 0]), float(jac[0, 1])), (float(jac[1, 0]), float(jac[1, 1]))),
        D=float(D),
        eigenvalues=lam,
        moduli=moduli,
        cls=cls,
        table_row=row,
        threshold_distance=float(dist),
        eps_hyp=eps_hyp,
    )
