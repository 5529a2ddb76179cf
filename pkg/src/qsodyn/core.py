"""General quadratic stochastic operators on the 2-simplex.

A QSO is given by a heredity tensor ``p[i][j][k]`` (probability that parents
of types ``i`` and ``j`` produce offspring of type ``k``) and acts by

    (V x)_k = sum_{i,j} p[i][j][k] * x_i * x_j.

Indices are 0-based internally; every message and report uses 1-based
coordinates.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AsymmetricCoefficient,
    NegativeCoefficient,
    ParseError,
    RowSumViolation,
    SimplexViolation,
)

EPS_SIMPLEX = 1e-12
EPS_COEFF = 1e-12
DIM = 3


@dataclass(frozen=True)
class SimplexPoint:
    """A point ``(x1, x2, x3)`` of the 2-simplex."""

    x1: float
    x2: float
    x3: float

    def __post_init__(self) -> None:
        check_simplex(self.as_tuple(), EPS_SIMPLEX)

    @classmethod
    def from_seq(
        cls,
        values: Iterable[float],
        eps: float = EPS_SIMPLEX,
        renormalize: bool = False,
    ) -> "SimplexPoint":
        vals = [float(v) for v in values]
        if len(vals) != DIM:
            raise SimplexViolation(f"expected 3 coordinates, got {len(vals)}")
        if renormalize:
            total = math.fsum(vals)
            if not total > 0.0 or not math.isfinite(total):
                raise SimplexViolation(f"cannot renormalize, coordinate sum is {total}")
            vals = [v / total for v in vals]
        check_simplex(vals, eps)
        return cls(*vals)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    def to_list(self) -> list[float]:
        return list(self.as_tuple())

    def distance(self, other: "SimplexPoint") -> float:
        """Sup-norm distance."""
        return max(abs(a - b) for a, b in zip(self.as_tuple(), other.as_tuple()))


def check_simplex(values: Sequence[float], eps: float = EPS_SIMPLEX) -> None:
    for i, v in enumerate(values, start=1):
        if not math.isfinite(v):
            raise SimplexViolation(f"x{i} = {v} is not finite")
        if v < -eps:
            raise SimplexViolation(f"x{i} = {v!r} is negative")
    total = math.fsum(values)
    if abs(total - 1.0) > eps:
        raise SimplexViolation(f"coordinates sum to {total!r}, not 1")


class OperatorClass(str, enum.Enum):
    VOLTERRA = "Volterra"
    STRICTLY_NON_VOLTERRA = "StrictlyNonVolterra"
    QUASI_STRICTLY_NON_VOLTERRA = "QuasiStrictlyNonVolterra"
    OTHER = "Other"


@dataclass(frozen=True, eq=False)
class QsoTensor:
    """Validated heredity tensor. Build it with :func:`validate_tensor`."""

    p: np.ndarray

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QsoTensor) and bool(np.array_equal(self.p, other.p))

    def __hash__(self) -> int:
        return hash(self.p.tobytes())

    def to_json(self) -> dict:
        return {"p": self.p.tolist()}


def validate_tensor(raw, eps: float = EPS_COEFF) -> QsoTensor:
    """Check nonnegativity, symmetry and stochasticity of a 3x3x3 array.

    Both halves of each symmetric pair must agree within ``eps``; the stored
    tensor is then their average so that it is exactly symmetric.
    """
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"tensor is not a numeric array: {exc}") from exc
    if arr.shape != (DIM, DIM, DIM):
        raise ParseError(f"tensor must have shape (3, 3, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParseError("tensor contains non-finite entries")

    for i, j, k in np.ndindex(arr.shape):
        if arr[i, j, k] < -eps:
            raise NegativeCoefficient(
                f"p[{i + 1}][{j + 1}][{k + 1}] = {arr[i, j, k]!r} < 0"
            )
    for i, j, k in np.ndindex(arr.shape):
        if i < j and abs(arr[i, j, k] - arr[j, i, k]) > eps:
            raise AsymmetricCoefficient(
                f"p[{i + 1}][{j + 1}][{k + 1}] = {arr[i, j, k]!r} but "
                f"p[{j + 1}][{i + 1}][{k + 1}] = {arr[j, i, k]!r}"
            )
    arr = 0.5 * (arr + arr.transpose(1, 0, 2))
    for i, j in np.ndindex(DIM, DIM):
        s = math.fsum(arr[i, j, :])
        if abs(s - 1.0) > eps:
            raise RowSumViolation(
                f"sum over k of p[{i + 1}][{j + 1}][k] is {s!r}, not 1"
            )
    arr = np.clip(arr, 0.0, None)
    arr.setflags(write=False)
    return QsoTensor(arr)


def apply_tensor(t: QsoTensor, x: SimplexPoint) -> SimplexPoint:
    v = x.as_array()
    out = np.einsum("ijk,i,j->k", t.p, v, v)
    # no eps slack beyond accumulated rounding
    return SimplexPoint.from_seq(out, eps=10 * EPS_SIMPLEX)


def _coordinate_is_strict(p: np.ndarray, k: int) -> bool:
    """Coordinate k never repeats a parent type: p[i][j][k] = 0 whenever k in {i, j}."""
    return all(p[i, j, k] == 0.0 for i, j in np.ndindex(DIM, DIM) if k in (i, j))


def classify_operator(t: QsoTensor) -> OperatorClass:
    """Classify by the exact zero pattern of the tensor."""
    p = t.p
    volterra = all(
        p[i, j, k] == 0.0 for i, j, k in np.ndindex(p.shape) if k not in (i, j)
    )
    if volterra:
        return OperatorClass.VOLTERRA
    strict = [_coordinate_is_strict(p, k) for k in range(DIM)]
    if all(strict):
        return OperatorClass.STRICTLY_NON_VOLTERRA
    if strict[0] and strict[1] and not strict[2]:
        return OperatorClass.QUASI_STRICTLY_NON_VOLTERRA
    return OperatorClass.OTHER


def load_tensor(path: str | Path) -> QsoTensor:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(obj, dict) or "p" not in obj:
        raise ParseError(f'{path}: expected a JSON object with key "p"')
    return validate_tensor(obj["p"])


def dump_tensor(t: QsoTensor, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(t.to_json(), fh)
        fh.write("\n")
