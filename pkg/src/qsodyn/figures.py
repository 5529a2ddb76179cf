"""Plot data for the branch-curve and eigenvalue-versus-e figures.

Only numbers are produced; drawing is left to whatever plotting tool reads
the CSV.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import OutOfRange, RegimeMismatch
from .family import FamilyParams, make_params
from .fixed_point import branch_curves, branch_upper, find_fixed_points
from .stability import classify

FIGURES = ("fig1", "fig2", "fig3")
DEFAULT_GRID = 1000
# e range for fig3; stops short of e = 1 where a second fixed point appears
FIG3_E_MAX = 0.999


def default_params(which: str) -> FamilyParams:
    """Default parameters for each figure; c and d split ``1 - e`` evenly."""
    if which == "fig1":
        return make_params(0, "1/10000", 0, 0)
    if which == "fig2":
        return make_params(0, "1/10000", "0.41", "0.41")
    if which == "fig3":
        return make_params(0, 0, 0.5, 0.5)
    raise OutOfRange(f"unknown figure {which!r}; expected one of {', '.join(FIGURES)}")


def _branch_rows(p: FamilyParams, grid: int) -> list[tuple[float, ...]]:
    if p.alpha == 0.0 or p.a != 0.0:
        raise RegimeMismatch(
            f"branch curves need alpha != 0 and a = 0, got alpha={p.alpha!r}, a={p.a!r}"
        )
    xs = np.linspace(0.0, branch_upper(p.c), grid)
    fp, fm = branch_curves(p, xs)
    keep = np.isfinite(fp) & np.isfinite(fm)
    return [(float(x), float(u), float(v), float(x)) for x, u, v in zip(xs[keep], fp[keep], fm[keep])]


def _eigen_rows(p: FamilyParams, grid: int, e_max: float) -> list[tuple[float, ...]]:
    if p.alpha != 0.0 or p.a != 0.0:
        raise RegimeMismatch(f"fig3 needs alpha = a = 0, got alpha={p.alpha!r}, a={p.a!r}")
    total = p.c + p.d
    share = 0.5 if total == 0.0 else p.c / total
    rows = []
    for e in np.linspace(0.0, e_max, grid):
        e = float(e)
        c = share * (1.0 - e)
        q = make_params(0.0, 0.0, c, None, e)
        rep = classify(q, find_fixed_points(q).points[0])
        rows.append((e, rep.moduli[0], rep.moduli[1]))
    return rows


def emit_figure_data(
    which: str, params: FamilyParams | None = None, grid: int = DEFAULT_GRID
) -> tuple[tuple[str, ...], list[tuple[float, ...]]]:
    """Header and rows for one figure.

    ``fig1``/``fig2`` give ``x, F_plus, F_minus, diagonal`` on the admissible
    ``x3`` interval, dropping points where the curves are not real. ``fig3``
    gives the eigenvalue moduli at the fixed point for ``e`` in
    ``[0, 0.999]``, keeping the ratio ``c : d`` of ``params``.
    """
    if grid < 2:
        raise OutOfRange(f"grid must be >= 2, got {grid}")
    p = default_params(which) if params is None else params
    if which in ("fig1", "fig2"):
        rows = _branch_rows(p, grid)
        header = ("x", "F_plus", "F_minus", "diagonal")
    elif which == "fig3":
        rows = _eigen_rows(p, grid, FIG3_E_MAX)
        header = ("e", "abs_lambda1", "abs_lambda2")
    else:
        raise OutOfRange(f"unknown figure {which!r}; expected one of {', '.join(FIGURES)}")
    assert all(math.isfinite(v) for row in rows for v in row)
    return header, rows
