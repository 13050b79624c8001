"""Command line: ``multiroot solve|table|basin``.

Exit status: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import basins as B
from . import convergence as C
from .methods import DONG_SIGNS, KINDS, MethodSpec, UnsupportedMethodError
from .problems import UnknownProblemError, get_problem, problem_registry
from .scalar import DOUBLE, ScalarParseError, format_scalar, make_scalar, parse_precision

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    problem: Optional[str] = None
    method: str = "mpp"
    m: Optional[int] = None
    gamma: float = -1.0
    dong_sign: str = "corrected-minus"
    x0: Optional[str] = None
    precision: object = 100
    iterations: Optional[int] = None
    tol_step: float = 0.0
    tol_residual: float = 0.0
    tol: float = B.DEFAULT_TOL
    grid: list = field(default_factory=lambda: [-3.0, 3.0, -3.0, 3.0])
    size: list = field(default_factory=lambda: [256, 256])
    out: Optional[str] = None
    format: Optional[str] = None
    methods: list = field(default_factory=lambda: list(C.TABLE_METHODS))
    problems: list = field(default_factory=lambda: list(C.TABLE_PROBLEMS))
    starts: str = "table"


def _csv_list(text):
    return [t for t in (s.strip() for s in text.split(",")) if t]


def _size(text):
    parts = text.lower().split("x")
    try:
        vals = [int(v) for v in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from None
    if len(vals) == 1:
        vals *= 2
    if len(vals) != 2 or min(vals) < 1:
        raise argparse.ArgumentTypeError(f"bad size {text!r}")
    return vals


def _grid(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("grid is re_min,re_max,im_min,im_max")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multiroot", description="Root finders for multiple zeros.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dump-config", action="store_true", help="print the resolved configuration as JSON and exit")
    common.add_argument("--out", help="output file (default: stdout, or <problem>_<method>_<w>x<h>.ppm for basin)")

    method = argparse.ArgumentParser(add_help=False)
    method.add_argument("--method", default="mpp", choices=KINDS)
    method.add_argument("--m", type=int, help="multiplicity (default: the problem's)")
    method.add_argument("--gamma", type=float, default=-1.0, help="Chun's parameter")
    method.add_argument("--dong-sign", default="corrected-minus", choices=DONG_SIGNS)

    s = sub.add_parser("solve", parents=[common, method], help="iterate one method on one problem")
    s.add_argument("--problem", required=True)
    s.add_argument("--x0")
    s.add_argument("--iters", type=int, default=10)
    s.add_argument("--precision", default="100", help='decimal digits or "double"')
    s.add_argument("--tol-step", type=float, default=0.0)
    s.add_argument("--tol-residual", type=float, default=0.0)

    t = sub.add_parser("table", parents=[common], help="errors, COC and ACOC for the test problems")
    t.add_argument("--precision", default="100")
    t.add_argument("--methods", type=_csv_list, default=list(C.TABLE_METHODS))
    t.add_argument("--method", dest="methods", type=lambda v: [v], help="single method (same as --methods)")
    t.add_argument("--problems", type=_csv_list, default=list(C.TABLE_PROBLEMS))
    t.add_argument("--problem", dest="problems", type=lambda v: [v])
    t.add_argument("--iters", type=int, default=C.TABLE_ITERATIONS)
    t.add_argument("--starts", choices=("table", "default"), default="table",
                   help="table: starting points that reproduce the reference table; default: nominal x0")
    t.add_argument("--format", choices=("text", "csv"), default="text")

    b = sub.add_parser("basin", parents=[common, method], help="render a basin-of-attraction image")
    b.add_argument("--problem", required=True)
    b.add_argument("--iters", type=int, default=B.DEFAULT_CAP, help="iteration cap per pixel")
    b.add_argument("--tol", type=float, default=B.DEFAULT_TOL, help="distance to a root counted as converged")
    b.add_argument("--grid", type=_grid, default=[-3.0, 3.0, -3.0, 3.0], help="re_min,re_max,im_min,im_max")
    b.add_argument("--size", type=_size, default=[256, 256], help="N or WxH")
    b.add_argument("--precision", default=DOUBLE, help="basins are always computed in double precision")
    b.add_argument("--format", choices=("ppm",), default="ppm")
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for key in ("problem", "method", "m", "gamma", "dong_sign", "x0", "tol_step", "tol_residual", "tol",
                "grid", "size", "out", "format", "methods", "problems", "starts"):
        if hasattr(args, key) and getattr(args, key) is not None:
            setattr(cfg, key, getattr(args, key))
    cfg.iterations = args.iters
    try:
        cfg.precision = parse_precision(args.precision)
    except ScalarParseError as exc:
        raise UsageError(str(exc)) from None
    if cfg.command == "basin" and cfg.precision != DOUBLE:
        raise UsageError("basin rendering runs in double precision only")
    names = [cfg.problem] if cfg.command != "table" else cfg.problems
    for name in names:
        try:
            p = get_problem(name)
        except UnknownProblemError as exc:
            raise UsageError(exc.args[0]) from None
    if cfg.command == "table":
        bad = [mk for mk in cfg.methods if mk not in KINDS]
        if bad:
            raise UsageError(f"unknown method(s): {', '.join(bad)}")
        if cfg.precision == DOUBLE or cfg.precision < 60:
            raise UsageError("table needs --precision >= 60")
    else:
        if cfg.m is None:
            cfg.m = p.multiplicity
        if cfg.command == "basin" and not p.complex_plane:
            raise UsageError(f"{p.name} is a real problem; basin needs one of "
                             + ", ".join(q.name for q in problem_registry() if q.complex_plane))
    if cfg.iterations is not None and cfg.iterations < 1:
        raise UsageError("--iters must be >= 1")
    return cfg


def _spec(cfg: RunConfig) -> MethodSpec:
    try:
        return MethodSpec(cfg.method, cfg.m, cfg.gamma, cfg.dong_sign)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, cfg: RunConfig, out):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def run_solve(cfg: RunConfig, out=sys.stdout) -> int:
    p = get_problem(cfg.problem)
    spec = _spec(cfg)
    try:
        x0 = make_scalar(cfg.x0 if cfg.x0 is not None else p.default_start, cfg.precision)
    except ScalarParseError as exc:
        raise UsageError(str(exc)) from None
    root = p.roots(cfg.precision)[0]
    try:
        trace = C.iterate(p, spec, x0, cfg.iterations, cfg.tol_step, cfg.tol_residual, root=root)
    except UnsupportedMethodError as exc:
        raise UsageError(str(exc)) from None
    # the error column is relative to the nearest known root
    roots = p.roots(cfg.precision)
    if len(roots) > 1:
        root = min(roots, key=lambda r: abs(trace.iterates[-1] - r))
        trace.errors = [abs(x - root) for x in trace.iterates]
    rep = C.report(trace)
    lines = [f"problem {p.name}: {p.formula}, m = {p.multiplicity}",
             f"method {spec.label()}  precision {cfg.precision}",
             f"root {format_scalar(root, 20)}"]
    for n, (x, e) in enumerate(zip(trace.iterates, trace.errors)):
        lines.append(f"x{n} = {format_scalar(x, 30)}")
        lines.append(f"err{n} = {C.mantissa_format(e)}")
    term = trace.termination
    if trace.failed:
        term += f" ({trace.failure_flag} at step {trace.failed_step})"
    lines.append(f"termination: {term} after {trace.steps} iterations")
    lines.append(f"COC: {C.round4(rep.coc) or C.DASH}")
    lines.append(f"ACOC: {C.round4(rep.acoc) or C.DASH}")
    _emit("\n".join(lines) + "\n", cfg, out)
    return EXIT_FAIL if trace.failed else EXIT_OK


def run_table(cfg: RunConfig, out=sys.stdout) -> int:
    cells = C.table1(cfg.precision, cfg.problems, cfg.methods, cfg.iterations, cfg.starts)
    text = C.table_csv(cells) if cfg.format == "csv" else C.table_text(cells)
    try:
        _emit(text, cfg, out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK if all(c.complete for c in cells) else EXIT_FAIL


def run_basin(cfg: RunConfig, out=sys.stdout) -> int:
    p = get_problem(cfg.problem)
    spec = _spec(cfg)
    try:
        grid = B.GridSpec(*cfg.grid, width=cfg.size[0], height=cfg.size[1])
        img = B.render(p, spec, grid, cap=cfg.iterations, tol=cfg.tol)
    except (ValueError, UnsupportedMethodError) as exc:
        raise UsageError(str(exc)) from None
    try:
        path = B.write_ppm(img, cfg.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    counts = " ".join(f"{k}={v}" for k, v in img.counts().items())
    out.write(f"{p.name} {spec.label()} {grid.width}x{grid.height}: {counts} -> {path}\n")
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        if args.dump_config:
            out.write(json.dumps(asdict(cfg), sort_keys=True) + "\n")
            return EXIT_OK
        return {"solve": run_solve, "table": run_table, "basin": run_basin}[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"multiroot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
