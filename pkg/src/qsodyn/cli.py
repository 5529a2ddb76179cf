"""Command-line front end.

Every subcommand writes one JSON document or one CSV table. Failures exit
nonzero and write a JSON object ``{"error": <type>, "message": <text>}`` to
stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .core import SimplexPoint, classify_operator, load_tensor
from .errors import ParseError, QsoError
from .family import FamilyParams, make_params, parse_number, to_tensor
from .fixed_point import TOL_FP, find_fixed_points
from .stability import EPS_HYP, classify
from . import dynamics, figures

TOL_ENV = "QSO_DYN_TOL"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4


class IoError(QsoError):
    """Reading input or writing output failed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would print usage and exit 2
        raise ParseError(message)


@dataclass
class RunConfig:
    command: str
    params: FamilyParams | None
    tol: float | None
    out: str | None
    fmt: str
    args: argparse.Namespace = field(repr=False)


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def parse_point(text: str, renormalize: bool = False) -> SimplexPoint:
    parts = [s for s in text.split(",") if s.strip()]
    if len(parts) != 3:
        raise ParseError(f"expected x1,x2,x3 but got {text!r}")
    return SimplexPoint.from_seq([parse_number(s) for s in parts], renormalize=renormalize)


def _default_tol(fallback: float) -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw == "":
        return fallback
    tol = parse_number(raw)
    if not tol > 0.0:
        raise ParseError(f"{TOL_ENV} must be positive, got {raw!r}")
    return tol


def _params_from(args) -> FamilyParams:
    return make_params(args.a, args.alpha, args.c, args.d, args.e)


def _add_params(sp: argparse.ArgumentParser, required: bool = True) -> None:
    g = sp.add_argument_group("operator parameters (decimal or rational, e.g. 5/8)")
    g.add_argument("--a", required=required)
    g.add_argument("--alpha", required=required)
    g.add_argument("--c")
    g.add_argument("--d")
    g.add_argument("--e")


def _add_out(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", help="write to this file instead of stdout")


def _add_x0(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--x0", required=True, help="start point x1,x2,x3")
    sp.add_argument(
        "--renormalize", action="store_true", help="divide x0 by its coordinate sum first"
    )


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qsodyn", description="Dynamics of a quasi-strictly non-Volterra QSO on the 2-simplex.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("validate", help="check parameters or a tensor file and classify the operator")
    _add_params(sp, required=False)
    sp.add_argument("--tensor", help='JSON file {"p": [[[...]]]}')
    _add_out(sp)

    sp = sub.add_parser("fixed-point", help="fixed points and residuals")
    _add_params(sp)
    sp.add_argument("--tol", type=parse_number)
    _add_out(sp)

    sp = sub.add_parser("classify", help="stability of every fixed point")
    _add_params(sp)
    sp.add_argument("--tol", type=parse_number)
    sp.add_argument("--eps-hyp", type=parse_number, default=EPS_HYP)
    _add_out(sp)

    sp = sub.add_parser("sweep", help="fixed point and eigenvalues along one parameter (CSV)")
    _add_params(sp)
    sp.add_argument("--param", required=True, choices=("a", "alpha", "c", "d", "e"))
    sp.add_argument("--from", dest="start", required=True, type=parse_number)
    sp.add_argument("--to", dest="stop", required=True, type=parse_number)
    sp.add_argument("--steps", required=True, type=int)
    sp.add_argument("--tol", type=parse_number)
    _add_out(sp)

    sp = sub.add_parser("trajectory", help="iterates x^(0..n) (CSV)")
    _add_params(sp)
    _add_x0(sp)
    sp.add_argument("--n", required=True, type=int)
    _add_out(sp)

    sp = sub.add_parser("orbit", help="omega-limit verdict for one start")
    _add_params(sp)
    _add_x0(sp)
    sp.add_argument("--max-iter", type=int, default=dynamics.MAX_ITER)
    sp.add_argument("--tol", type=parse_number)
    sp.add_argument("--window", type=int, default=dynamics.WINDOW)
    _add_out(sp)

    sp = sub.add_parser("two-cycle", help="closed-form 2-cycle for alpha = a = 0, e < 1/4")
    sp.add_argument("--c", required=True)
    sp.add_argument("--d", required=True)
    _add_out(sp)

    sp = sub.add_parser("conjugacy", help="affine conjugacy of x3 -> (1-x3)^2 + e x3^2 to the logistic map")
    sp.add_argument("--e", required=True, type=parse_number)
    _add_out(sp)

    sp = sub.add_parser("predict-e1", help="limits of a trajectory when e = 1")
    _add_x0(sp)
    _add_out(sp)

    sp = sub.add_parser("figure", help="plot data (CSV)")
    sp.add_argument("which", choices=figures.FIGURES)
    _add_params(sp, required=False)
    sp.add_argument("--grid", type=int, default=figures.DEFAULT_GRID)
    _add_out(sp)
    return ap


def build_config(argv: Sequence[str] | None) -> RunConfig:
    args = build_parser().parse_args(argv)
    params = None
    if args.command == "sweep" and getattr(args, args.param) is None:
        # the swept parameter seeds the base point from its first value
        setattr(args, args.param, repr(args.start))
    if args.command in ("fixed-point", "classify", "sweep", "trajectory", "orbit"):
        params = _params_from(args)
    elif args.command in ("validate", "figure") and args.a is not None:
        params = _params_from(args)
    fallback = dynamics.TOL_ORBIT if args.command == "orbit" else TOL_FP
    tol = getattr(args, "tol", None)
    if tol is None:
        tol = _default_tol(fallback)
    fmt = "csv" if args.command in ("sweep", "trajectory", "figure") else "json"
    return RunConfig(args.command, params, tol, getattr(args, "out", None), fmt, args)


# --- commands; each returns the text to write -----------------------------


def _cmd_validate(cfg: RunConfig) -> str:
    a = cfg.args
    if a.tensor is not None and cfg.params is not None:
        raise ParseError("give either --tensor or operator parameters, not both")
    if a.tensor is not None:
        try:
            t = load_tensor(a.tensor)
        except OSError as exc:
            raise IoError(str(exc)) from exc
        return to_json({"valid": True, "operator_class": classify_operator(t).value, "source": "tensor"})
    if cfg.params is None:
        raise ParseError("validate needs --tensor or --a/--alpha with two of --c/--d/--e")
    cls = classify_operator(to_tensor(cfg.params))
    return to_json({"valid": True, "operator_class": cls.value, "params": cfg.params.to_dict(), "source": "params"})


def _cmd_fixed_point(cfg: RunConfig) -> str:
    rep = find_fixed_points(cfg.params, tol_fp=cfg.tol)
    return to_json(rep.to_dict())


def _cmd_classify(cfg: RunConfig) -> str:
    rep = find_fixed_points(cfg.params, tol_fp=cfg.tol)
    out = [classify(cfg.params, pt, eps_hyp=cfg.args.eps_hyp, tol_fp=cfg.tol).to_dict() for pt in rep.points]
    return to_json({"params": cfg.params.to_dict(), "solver_case": rep.solver_case.value, "fixed_points": out})


def swept_params(base: FamilyParams, param: str, value: float) -> FamilyParams:
    """``base`` with one parameter replaced.

    Sweeping ``e`` keeps the ratio ``c : d`` (an even split when ``c = d = 0``);
    sweeping ``c`` or ``d`` keeps the other one and lets ``e`` absorb the change.
    """
    a, alpha, c, d = base.a, base.alpha, base.c, base.d
    if param == "a":
        return make_params(value, alpha, c, d)
    if param == "alpha":
        return make_params(a, value, c, d)
    if param == "c":
        return make_params(a, alpha, value, d)
    if param == "d":
        return make_params(a, alpha, c, value)
    share = 0.5 if c + d == 0.0 else c / (c + d)
    c_new = share * (1.0 - value)
    return make_params(a, alpha, c_new, None, value)


SWEEP_COLUMNS = ("x3", "re_lambda1", "im_lambda1", "abs_lambda1", "abs_lambda2", "class")


def sweep_rows(base: FamilyParams, param: str, values, tol: float = TOL_FP) -> list[tuple]:
    rows = []
    for v in values:
        p = swept_params(base, param, float(v))
        for pt in find_fixed_points(p, tol_fp=tol).points:
            r = classify(p, pt, tol_fp=tol)
            lam = r.eigenvalues[0]
            rows.append((float(v), pt.x3, lam.real, lam.imag, r.moduli[0], r.moduli[1], r.cls.value))
    return rows


def _cmd_sweep(cfg: RunConfig) -> str:
    a = cfg.args
    if a.steps < 1:
        raise ParseError(f"--steps must be >= 1, got {a.steps}")
    values = np.linspace(a.start, a.stop, a.steps) if a.steps > 1 else np.array([a.start])
    rows = sweep_rows(cfg.params, a.param, values, cfg.tol)
    return to_csv((a.param,) + SWEEP_COLUMNS, rows)


def _cmd_trajectory(cfg: RunConfig) -> str:
    a = cfg.args
    x0 = parse_point(a.x0, a.renormalize)
    arr = dynamics.trajectory_array(cfg.params, x0, a.n)
    return to_csv(("n", "x1", "x2", "x3"), [(k, *map(float, row)) for k, row in enumerate(arr)])


def _cmd_orbit(cfg: RunConfig) -> str:
    a = cfg.args
    x0 = parse_point(a.x0, a.renormalize)
    rep = dynamics.omega_limit(cfg.params, x0, max_iter=a.max_iter, tol_orbit=cfg.tol, window=a.window)
    return to_json(rep.to_dict())


def _cmd_two_cycle(cfg: RunConfig) -> str:
    c, d = parse_number(cfg.args.c), parse_number(cfg.args.d)
    return to_json(dynamics.two_cycle_points(c, d, 1.0 - c - d).to_dict())


def _cmd_conjugacy(cfg: RunConfig) -> str:
    return to_json(dynamics.logistic_conjugacy(cfg.args.e).to_dict())


def _cmd_predict_e1(cfg: RunConfig) -> str:
    x0 = parse_point(cfg.args.x0, cfg.args.renormalize)
    return to_json(dynamics.predict_e1_limit(x0).to_dict())


def _cmd_figure(cfg: RunConfig) -> str:
    header, rows = figures.emit_figure_data(cfg.args.which, cfg.params, cfg.args.grid)
    return to_csv(header, rows)


COMMANDS: dict[str, Callable[[RunConfig], str]] = {
    "validate": _cmd_validate,
    "fixed-point": _cmd_fixed_point,
    "classify": _cmd_classify,
    "sweep": _cmd_sweep,
    "trajectory": _cmd_trajectory,
    "orbit": _cmd_orbit,
    "two-cycle": _cmd_two_cycle,
    "conjugacy": _cmd_conjugacy,
    "predict-e1": _cmd_predict_e1,
    "figure": _cmd_figure,
}


def run(cfg: RunConfig, stdout=None) -> int:
    text = COMMANDS[cfg.command](cfg)
    if cfg.out is None:
        (stdout or sys.stdout).write(text)
        return EXIT_OK
    try:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return EXIT_OK


def _report_error(exc: BaseException, stderr) -> None:
    stderr.write(to_json({"error": type(exc).__name__, "message": str(exc)}))


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        return run(build_config(argv), stdout)
    except ParseError as exc:
        _report_error(exc, stderr)
        return EXIT_USAGE
    except IoError as exc:
        _report_error(exc, stderr)
        return EXIT_IO
    except QsoError as exc:
        _report_error(exc, stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001 - still emit a machine-readable object
        _report_error(exc, stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
