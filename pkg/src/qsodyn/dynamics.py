"""Trajectories, limit sets and periodic points.

For ``alpha = a = 0`` the third coordinate evolves on its own under
``phi(x) = (1 - x)^2 + e x^2`` and the first two follow linearly, which is
what makes the 2-cycle and the ``e = 1`` limits computable in closed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from . import kernels
from .core import EPS_SIMPLEX, SimplexPoint
from .errors import OutOfRange, UndefinedTheta
from .family import EPS_PARAM, FamilyParams, apply_array, make_params, phi, reduced_2d
from .fixed_point import closed_form_x3
from .stability import jacobian_xy

TOL_ORBIT = 1e-9
MAX_ITER = 10**6
WINDOW = 8
# a polished 2-cycle point may not move further than this from the iterate
_POLISH_MAX_SHIFT = 1e-6
_FIRST_BACKOFF = 64

V1 = make_params(0.0, 0.0, 0.0, 0.0)


class Verdict(str, enum.Enum):
    FIXED_POINT = "ConvergesToFixedPoint"
    TWO_CYCLE = "ConvergesTo2Cycle"
    UNDECIDED = "Undecided"


def _sup(u, v) -> float:
    return float(np.max(np.abs(np.asarray(u, dtype=float) - np.asarray(v, dtype=float))))


def trajectory_array(p: FamilyParams, x0: SimplexPoint, n: int) -> np.ndarray:
    """Iterates ``x^(0..n)`` as an ``(n + 1, 3)`` array.

    Each image is divided by its coordinate sum. The sum map is ``s -> s^2``,
    so without this rounding errors in the sum double at every step.
    """
    if n < 0:
        raise OutOfRange(f"n must be >= 0, got {n}")
    return kernels.trajectory(p.a, p.alpha, p.c, p.d, p.e, x0.as_tuple(), int(n))


def trajectory(p: FamilyParams, x0: SimplexPoint, n: int) -> list[SimplexPoint]:
    return [SimplexPoint.from_seq(row) for row in trajectory_array(p, x0, n)]


@dataclass(frozen=True)
class OrbitReport:
    """Outcome of :func:`omega_limit`.

    For a 2-cycle the witness is ordered ``(even limit, odd limit)``: the first
    point is approached along even iterates ``x^(2k)``.
    """

    verdict: Verdict
    witness: tuple[SimplexPoint, ...]
    iterations_used: int
    final_gap: float
    tol: float = TOL_ORBIT

    def __post_init__(self) -> None:
        n = {Verdict.FIXED_POINT: 1, Verdict.TWO_CYCLE: 2, Verdict.UNDECIDED: 1}[self.verdict]
        if len(self.witness) != n:
            raise ValueError(f"{self.verdict.value} needs {n} witness point(s)")

    def check(self, p: FamilyParams) -> None:
        """Verify the witness invariants under ``p``."""
        w = self.witness[0].as_array()
        vw = apply_array(p, w)
        if self.verdict is Verdict.FIXED_POINT and _sup(vw, w) > self.tol:
            raise ValueError(f"fixed-point witness has residual {_sup(vw, w)!r}")
        if self.verdict is Verdict.TWO_CYCLE:
            if _sup(apply_array(p, vw), w) > self.tol:
                raise ValueError("2-cycle witness is not 2-periodic")
            if not _sup(vw, w) > self.tol:
                raise ValueError("2-cycle witness is a fixed point")

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": [w.to_list() for w in self.witness],
            "iterations_used": self.iterations_used,
            "final_gap": self.final_gap,
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "OrbitReport":
        return cls(
            verdict=Verdict(obj["verdict"]),
            witness=tuple(SimplexPoint.from_seq(w) for w in obj["witness"]),
            iterations_used=int(obj["iterations_used"]),
            final_gap=float(obj["final_gap"]),
            tol=float(obj["tol"]),
        )


def _reduced_sq(p: FamilyParams, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``R(R(y)) - y`` and its Jacobian for the reduced 2D map ``R``."""
    r1 = np.array(reduced_2d(p, y[0], y[1]))
    r2 = np.array(reduced_2d(p, r1[0], r1[1]))
    jac = jacobian_xy(p, r1[0], r1[1]) @ jacobian_xy(p, y[0], y[1])
    return r2 - y, jac - np.eye(2)


def _polish_two_cycle(p: FamilyParams, x: tuple[float, float, float]) -> np.ndarray | None:
    """Newton on ``V(V(y)) = y`` from ``x``; ``None`` unless it lands on a true 2-cycle.

    Least squares handles the singular Jacobian on a curve of 2-periodic
    points (``e = 1``). Landing on a fixed point means the candidate was a
    slowly oscillating approach to that fixed point, not a cycle.
    """
    y = np.array(x[:2], dtype=float)
    start = y.copy()
    for _ in range(30):
        g, jac = _reduced_sq(p, y)
        if not np.all(np.isfinite(g)):
            return None
        if np.max(np.abs(g)) < 1e-16:
            break
        step = np.linalg.lstsq(jac, -g, rcond=None)[0]
        y = y + step
        if np.max(np.abs(step)) < 1e-17:
            break
    if _sup(y, start) > _POLISH_MAX_SHIFT:
        return None
    pt = np.array([y[0], y[1], 1.0 - y[0] - y[1]])
    return pt


def omega_limit(
    p: FamilyParams,
    x0: SimplexPoint,
    max_iter: int = MAX_ITER,
    tol_orbit: float = TOL_ORBIT,
    window: int = WINDOW,
) -> OrbitReport:
    """Detect whether the trajectory of ``x0`` settles on a fixed point or a 2-cycle.

    A fixed point is declared after ``window`` consecutive steps with
    ``|x^(n+1) - x^(n)| < tol_orbit``. A run of small 2-step gaps only makes a
    2-cycle candidate, which is confirmed by Newton refinement and rejected
    if it collapses onto a fixed point; the candidate check then backs off
    geometrically so slow oscillating convergence is not misreported.
    """
    v0 = x0.as_array()
    r0 = _sup(apply_array(p, v0), v0)
    if r0 <= tol_orbit:
        return OrbitReport(Verdict.FIXED_POINT, (x0,), 0, r0, tol_orbit)

    prev, cur = None, x0.as_tuple()
    n = 0
    count1 = count2 = 0
    cycle_after = 0
    backoff = _FIRST_BACKOFF
    g1 = math.inf
    while n < max_iter:
        event, steps, prev, cur, count1, count2, g1, g2 = kernels.advance(
            p.a, p.alpha, p.c, p.d, p.e,
            prev, cur, max_iter - n, tol_orbit, window, count1, count2, cycle_after,
        )
        n += steps
        if event == 1:
            w = SimplexPoint.from_seq(prev)
            return OrbitReport(Verdict.FIXED_POINT, (w,), n - 1, g1, tol_orbit)
        if event == 2:
            pt = _polish_two_cycle(p, cur)
            if pt is not None:
                img = apply_array(p, pt)
                gap1 = _sup(img, pt)
                gap2 = _sup(apply_array(p, img), pt)
                if gap1 > tol_orbit and gap2 <= tol_orbit:
                    a, b = SimplexPoint.from_seq(pt), SimplexPoint.from_seq(img)
                    pair = (a, b) if n % 2 == 0 else (b, a)
                    return OrbitReport(Verdict.TWO_CYCLE, pair, n, gap2, tol_orbit)
            cycle_after = backoff
            backoff *= 2
            continue
        break
    return OrbitReport(Verdict.UNDECIDED, (SimplexPoint.from_seq(cur),), n, g1, tol_orbit)


@dataclass(frozen=True)
class Phi2Points:
    """Fixed points of ``phi o phi``: ``x3*`` plus the 2-cycle pair when it exists."""

    e: float
    x3star: float
    xbar3: float | None
    xbarbar3: float | None

    @property
    def distinct(self) -> bool:
        return self.xbar3 is not None and self.e < 0.25


def phi2_fixed_points(e: float) -> Phi2Points:
    """``x3*`` and, for ``e <= 1/4``, ``(1 ± sqrt(1 - 4e)) / (2 (1 + e))``.

    At ``e = 1/4`` the pair coincides with ``x3* = 2/5``; for ``e > 1/4`` it
    is absent.
    """
    if not (0.0 <= e < 1.0):
        raise OutOfRange(f"e = {e!r} must lie in [0, 1)")
    x3 = closed_form_x3(e)
    if e > 0.25:
        return Phi2Points(e, x3, None, None)
    q = math.sqrt(1.0 - 4.0 * e)
    return Phi2Points(e, x3, (1.0 + q) / (2.0 * (1.0 + e)), (1.0 - q) / (2.0 * (1.0 + e)))


@dataclass(frozen=True)
class TwoCycle:
    xbar: SimplexPoint
    xbarbar: SimplexPoint

    def to_dict(self) -> dict:
        return {"xbar": self.xbar.to_list(), "xbarbar": self.xbarbar.to_list()}

    @classmethod
    def from_dict(cls, obj: dict) -> "TwoCycle":
        return cls(SimplexPoint.from_seq(obj["xbar"]), SimplexPoint.from_seq(obj["xbarbar"]))

    def check(self, p: FamilyParams, tol: float = 1e-10) -> None:
        a, b = self.xbar.as_array(), self.xbarbar.as_array()
        if _sup(apply_array(p, a), b) > tol or _sup(apply_array(p, b), a) > tol:
            raise ValueError("points are not exchanged by the operator")


def two_cycle_points(c: float, d: float, e: float) -> TwoCycle:
    """The 2-cycle of the ``alpha = a = 0`` operator for ``0 <= e < 1/4``.

    ``xbar`` carries ``x3 = (1 + sqrt(1 - 4e)) / (2 (1 + e))``. With
    ``q = sqrt(1 - 4e)`` and ``K = 2 (1 - e)^2 (1 + e)``:

        xbar1    = (2de + (1 - e - 2e^2) c + (2de - c(1 + e)) q) / K
        xbarbar1 = (2de + (1 - e - 2e^2) c - (2de - c(1 + e)) q) / K

    and the second coordinates follow by exchanging ``c`` and ``d``.
    """
    if not (0.0 <= e < 0.25):
        raise OutOfRange(f"e = {e!r} must lie in [0, 1/4)")
    if min(c, d) < 0.0 or abs(c + d + e - 1.0) > EPS_PARAM:
        raise OutOfRange(f"need c, d >= 0 and c + d + e = 1, got c={c!r}, d={d!r}, e={e!r}")
    q = math.sqrt(1.0 - 4.0 * e)
    k = 2.0 * (1.0 - e) ** 2 * (1.0 + e)
    lin = 1.0 - e - 2.0 * e * e

    def pair(u: float, w: float) -> tuple[float, float]:
        base = 2.0 * w * e + lin * u
        slope = 2.0 * w * e - u * (1.0 + e)
        return (base + slope * q) / k, (base - slope * q) / k

    xb1, xbb1 = pair(c, d)
    xb2, xbb2 = pair(d, c)
    xb3 = (1.0 + q) / (2.0 * (1.0 + e))
    xbb3 = (1.0 - q) / (2.0 * (1.0 + e))
    return TwoCycle(
        SimplexPoint.from_seq((xb1, xb2, xb3), eps=10 * EPS_SIMPLEX),
        SimplexPoint.from_seq((xbb1, xbb2, xbb3), eps=10 * EPS_SIMPLEX),
    )


@dataclass(frozen=True)
class ConjugacyData:
    """Affine map ``h(x) = h_a x + h_b`` with ``h(phi(x)) = mu h(x) (1 - h(x))``."""

    e: float
    mu: float
    h_a: float
    h_b: float

    def h(self, x):
        return self.h_a * x + self.h_b

    def h_inv(self, y):
        return (y - self.h_b) / self.h_a

    def logistic(self, y):
        return self.mu * y * (1.0 - y)

    def residual(self, grid) -> float:
        grid = np.asarray(grid, dtype=float)
        return float(np.max(np.abs(self.h(phi(self.e, grid)) - self.logistic(self.h(grid)))))

    def to_dict(self) -> dict:
        return {"e": self.e, "mu": self.mu, "h_a": self.h_a, "h_b": self.h_b}

    @classmethod
    def from_dict(cls, obj: dict) -> "ConjugacyData":
        return cls(float(obj["e"]), float(obj["mu"]), float(obj["h_a"]), float(obj["h_b"]))


def logistic_conjugacy(e: float) -> ConjugacyData:
    """Conjugate ``phi`` to the logistic map with ``mu = 1 + sqrt(5 - 4e)``.

    Matching coefficients of ``h(phi(x))`` and ``mu h(x)(1 - h(x))``:
    ``x^2`` gives ``h_a = -(1 + e) / mu``, ``x`` gives ``h_b = (mu + 2) / (2 mu)``,
    and the constant term must then agree on its own, which is asserted.
    """
    if not (0.0 <= e <= 1.0):
        raise OutOfRange(f"e = {e!r} must lie in [0, 1]")
    mu = 1.0 + math.sqrt(5.0 - 4.0 * e)
    h_a = -(1.0 + e) / mu
    h_b = (mu + 2.0) / (2.0 * mu)
    const_gap = (h_a + h_b) - mu * h_b * (1.0 - h_b)
    if abs(const_gap) > 1e-12:
        raise ArithmeticError(f"constant terms disagree by {const_gap!r}")
    return ConjugacyData(e, mu, h_a, h_b)


@dataclass(frozen=True)
class Theta:
    """Ratio ``x1 / x2`` identifying the invariant set ``M_theta`` at ``e = 1``."""

    value: float
    normalized: float

    def contains(self, x: SimplexPoint, tol: float = 1e-12) -> bool:
        if self.normalized == 0.0:
            return abs(x.x1 * x.x2) <= tol
        t = self.normalized
        return abs(x.x1 - t * x.x2) <= tol or abs(x.x2 - t * x.x1) <= tol


def theta_of(x0: SimplexPoint) -> Theta:
    x1, x2 = x0.x1, x0.x2
    if x1 == 0.0 and x2 == 0.0:
        raise UndefinedTheta("x1 = x2 = 0, the point is the vertex (0, 0, 1)")
    value = math.inf if x2 == 0.0 else x1 / x2
    if value == 0.0 or math.isinf(value):
        return Theta(value, 0.0)
    return Theta(value, min(value, 1.0 / value))


@dataclass(frozen=True)
class E1Prediction:
    absorbed: bool
    even_limit: SimplexPoint
    odd_limit: SimplexPoint
    theta: float | None

    def to_dict(self) -> dict:
        return {
            "absorbed": self.absorbed,
            "even_limit": self.even_limit.to_list(),
            "odd_limit": self.odd_limit.to_list(),
            "theta": None if self.theta is None or math.isinf(self.theta) else self.theta,
            "theta_infinite": self.theta is not None and math.isinf(self.theta),
        }


_E1_CHECK_STEPS = 50


def predict_e1_limit(x0: SimplexPoint) -> E1Prediction:
    """Even/odd limits of a trajectory of the ``e = 1`` operator (``alpha = a = 0``).

    Starts with ``x3 in {0, 1}`` are absorbed at ``(0, 0, 1)``. Otherwise the
    ratio of the first two coordinates alternates between ``theta`` and
    ``1/theta`` while ``x3 -> 1/2``. Which limit belongs to even steps is
    decided against a short run of the real trajectory.
    """
    vertex = SimplexPoint(0.0, 0.0, 1.0)
    if x0.x3 == 0.0 or x0.x3 == 1.0:
        return E1Prediction(True, vertex, vertex, None)
    theta = theta_of(x0)
    s = x0.x1 + x0.x2
    # theta / (2 (theta + 1)) written without theta so theta = inf needs no special case
    first = SimplexPoint(x0.x1 / (2.0 * s), x0.x2 / (2.0 * s), 0.5)
    second = SimplexPoint(first.x2, first.x1, 0.5)
    run = trajectory_array(V1, x0, _E1_CHECK_STEPS)
    even_end = run[_E1_CHECK_STEPS]
    if _sup(even_end, first.as_array()) <= _sup(even_end, second.as_array()):
        even, odd = first, second
    else:
        even, odd = second, first
    return E1Prediction(False, even, odd, theta.value)


def invariant_line_x1_recursion(p: FamilyParams, x1_n: float) -> float:
    """One step of ``x1`` on the invariant line ``x3 = x3*`` (``alpha = a = 0``)."""
    if p.alpha != 0.0 or p.a != 0.0:
        raise OutOfRange("the invariant-line recursion needs alpha = a = 0")
    if not p.e < 1.0:
        raise OutOfRange("the invariant-line recursion needs e < 1")
    x3 = closed_form_x3(p.e)
    if not (-EPS_SIMPLEX <= x1_n <= 1.0 - x3 + EPS_SIMPLEX):
        raise OutOfRange(f"x1 = {x1_n!r} outside [0, {1.0 - x3!r}]")
    return x3 * (2.0 - (2.0 - p.c) * x3 - 2.0 * x1_n)


def invariant_line_fixed_x1(p: FamilyParams) -> float:
    """Fixed point of the affine recursion, ``x3 (2 - (2 - c) x3) / (1 + 2 x3)``."""
    x3 = closed_form_x3(p.e)
    return x3 * (2.0 - (2.0 - p.c) * x3) / (1.0 + 2.0 * x3)


def phi_iterate(e: float, x, n: int):
    for _ in range(n):
        x = phi(e, x)
    return x


def periodic_points_phi(e: float, n: int, grid: int = 10_000) -> list[float]:
    """Roots of ``phi^n(x) = x`` on ``[0, 1]`` found by a grid scan plus bisection.

    A falsification scan: roots of even multiplicity that do not change sign
    can be missed.
    """
    xs = np.linspace(0.0, 1.0, grid + 1)
    vals = phi_iterate(e, xs, n) - xs
    roots: list[float] = []
    for k in range(grid):
        lo, hi = vals[k], vals[k + 1]
        if lo == 0.0:
            roots.append(float(xs[k]))
        elif lo * hi < 0.0:
            roots.append(
                bisect(lambda t: float(phi_iterate(e, t, n) - t), xs[k], xs[k + 1], xtol=1e-15)
            )
    if vals[-1] == 0.0:
        roots.append(1.0)
    out: list[float] = []
    for r in sorted(roots):
        if not out or r - out[-1] > 1e-9:
            out.append(r)
    return out

