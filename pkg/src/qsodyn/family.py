"""The four-parameter quasi-strictly non-Volterra operator.

    x1' = alpha*x2^2 + c*x3^2 + 2*x2*x3
    x2' = a*x1^2 + d*x3^2 + 2*x1*x3
    x3' = b*x1^2 + beta*x2^2 + e*x3^2 + 2*x1*x2

with a + b = 1, alpha + beta = 1 and c + d + e = 1, all coefficients in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import EPS_SIMPLEX, QsoTensor, SimplexPoint, validate_tensor
from .errors import ConstraintViolation, OutOfRange, ParseError

EPS_PARAM = 1e-12


def parse_number(text: str | float | int) -> float:
    """Parse ``"0.375"``, ``"3/8"`` or a number. Rationals are exact until the final cast."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse {text!r} as a decimal or rational number") from exc


@dataclass(frozen=True)
class FamilyParams:
    """Free parameters ``(a, alpha, c, d)``; ``b``, ``beta`` and ``e`` are derived."""

    a: float
    alpha: float
    c: float
    d: float

    def __post_init__(self) -> None:
        for name in ("a", "alpha", "c", "d"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise OutOfRange(f"{name} = {v} is not finite")
            if v < 0.0 or v > 1.0:
                raise OutOfRange(f"{name} = {v!r} outside [0, 1]")
        if self.c + self.d > 1.0 + EPS_PARAM:
            raise ConstraintViolation(
                f"c + d + e = 1 needs c + d <= 1, got c + d = {self.c + self.d!r}"
            )

    @property
    def b(self) -> float:
        return 1.0 - self.a

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha

    @property
    def e(self) -> float:
        return max(0.0, 1.0 - self.c - self.d)

    def is_e1(self, eps: float = EPS_PARAM) -> bool:
        return abs(self.e - 1.0) <= eps

    def to_dict(self) -> dict:
        return {"a": self.a, "alpha": self.alpha, "c": self.c, "d": self.d, "e": self.e}

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.alpha, self.c, self.d, self.e)


def make_params(a, alpha, c=None, d=None, e=None) -> FamilyParams:
    """Build validated parameters; at most one of ``c``, ``d``, ``e`` may be omitted.

    Values may be numbers or decimal/rational strings. When all three of
    ``c, d, e`` are given their sum is checked against 1 rather than trusted.
    """
    vals = {
        k: (None if v is None else parse_number(v))
        for k, v in dict(a=a, alpha=alpha, c=c, d=d, e=e).items()
    }
    for k, v in vals.items():
        if v is None:
            continue
        if not math.isfinite(v):
            raise OutOfRange(f"{k} = {v} is not finite")
        if v < 0.0 or v > 1.0:
            raise OutOfRange(f"{k} = {v!r} outside [0, 1]")
    if vals["a"] is None or vals["alpha"] is None:
        raise ConstraintViolation("a and alpha are required")

    missing = [k for k in ("c", "d", "e") if vals[k] is None]
    if len(missing) > 1:
        raise ConstraintViolation(f"c + d + e = 1 is underdetermined: {missing} missing")
    if missing == ["c"]:
        vals["c"] = 1.0 - vals["d"] - vals["e"]
    elif missing == ["d"]:
        vals["d"] = 1.0 - vals["c"] - vals["e"]
    elif missing == ["e"]:
        vals["e"] = 1.0 - vals["c"] - vals["d"]

    c_, d_, e_ = vals["c"], vals["d"], vals["e"]
    if abs(c_ + d_ + e_ - 1.0) > EPS_PARAM or min(c_, d_, e_) < -EPS_PARAM:
        raise ConstraintViolation(
            f"c + d + e = 1 with c, d, e >= 0 fails: c={c_!r}, d={d_!r}, e={e_!r}"
        )
    return FamilyParams(vals["a"], vals["alpha"], max(c_, 0.0), max(d_, 0.0))


def apply(p: FamilyParams, x: SimplexPoint) -> SimplexPoint:
    x1, x2, x3 = x.as_tuple()
    y1 = p.alpha * x2 * x2 + p.c * x3 * x3 + 2.0 * x2 * x3
    y2 = p.a * x1 * x1 + p.d * x3 * x3 + 2.0 * x1 * x3
    y3 = p.b * x1 * x1 + p.beta * x2 * x2 + p.e * x3 * x3 + 2.0 * x1 * x2
    return SimplexPoint.from_seq((y1, y2, y3), eps=10 * EPS_SIMPLEX)


def apply_array(p: FamilyParams, x: np.ndarray) -> np.ndarray:
    """Vectorised :func:`apply` over the last axis of ``x``; no simplex checks."""
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return np.stack(
        [
            p.alpha * x2 * x2 + p.c * x3 * x3 + 2.0 * x2 * x3,
            p.a * x1 * x1 + p.d * x3 * x3 + 2.0 * x1 * x3,
            p.b * x1 * x1 + p.beta * x2 * x2 + p.e * x3 * x3 + 2.0 * x1 * x2,
        ],
        axis=-1,
    )


def to_tensor(p: FamilyParams) -> QsoTensor:
    t = np.zeros((3, 3, 3))
    # coordinate 1
    t[1, 1, 0] = p.alpha
    t[2, 2, 0] = p.c
    t[1, 2, 0] = t[2, 1, 0] = 1.0
    # coordinate 2
    t[0, 0, 1] = p.a
    t[2, 2, 1] = p.d
    t[0, 2, 1] = t[2, 0, 1] = 1.0
    # coordinate 3
    t[0, 0, 2] = p.b
    t[1, 1, 2] = p.beta
    t[2, 2, 2] = p.e
    t[0, 1, 2] = t[1, 0, 2] = 1.0
    return validate_tensor(t)


def phi(e, x):
    """Third-coordinate map ``(1 - x)^2 + e x^2``; accepts scalars or arrays."""
    return (1.0 - x) ** 2 + e * x * x


def phi_prime(e, x):
    return 2.0 * (1.0 + e) * x - 2.0


def reduced_2d(p: FamilyParams, x1, x2):
    """The operator written in ``(x1, x2)`` after eliminating ``x3 = 1 - x1 - x2``."""
    c, d = p.c, p.d
    y1 = (
        c
        - 2 * c * x1
        + c * x1 * x1
        + 2 * (c - 1) * x1 * x2
        + 2 * (1 - c) * x2
        + (p.alpha + c - 2) * x2 * x2
    )
    y2 = (
        d
        - 2 * d * x2
        + d * x2 * x2
        + 2 * (d - 1) * x1 * x2
        + 2 * (1 - d) * x1
        + (p.a + d - 2) * x1 * x1
    )
    return y1, y2
