"""Iteration driver, convergence-order estimates and the error table."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any, Optional, Sequence

from . import methods as M
from .problems import TABLE_PROBLEMS, Problem, get_problem
from .scalar import DomainError, parse_precision, to_precision

MAX_ITERS = "max-iters"
STEP_TOL = "step-tolerance"
RESIDUAL_TOL = "residual-tolerance"
FAILURE = "failure"

TABLE_METHODS = ("mpp", "osada", "dong", "chun")
TABLE_ITERATIONS = 4
DASH = "—"
# errors within 10**(margin - digits) * |root| are treated as resolved
PRECISION_MARGIN = 5


@dataclass
class IterationTrace:
    problem: str
    method: M.MethodSpec
    iterates: list = field(default_factory=list)
    errors: Optional[list] = None
    termination: str = MAX_ITERS
    failure_flag: Optional[str] = None
    failed_step: Optional[int] = None

    @property
    def steps(self) -> int:
        return len(self.iterates) - 1

    @property
    def failed(self) -> bool:
        return self.termination == FAILURE


@dataclass
class ConvergenceReport:
    trace: IterationTrace
    coc: Any = None
    acoc: Any = None


def _residual(p: Problem, x):
    try:
        return abs(p.f(x))
    except (DomainError, ValueError, ZeroDivisionError):
        return None


def iterate(p: Problem, spec: M.MethodSpec, x0, max_iter: int = 3, tol_step=0, tol_residual=0,
            root=None) -> IterationTrace:
    """Run ``spec`` from ``x0`` for at most ``max_iter`` steps.

    Stops early when a step is shorter than ``tol_step``, when |f| drops below
    ``tol_residual`` or reaches exactly zero, or when a step fails. Failures
    are recorded in the trace, never raised.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    trace = IterationTrace(p.name, spec, [x0])
    if root is not None:
        trace.errors = [abs(x0 - root)]

    def stop_at(x, n):
        r = _residual(p, x)
        if r is None:
            trace.termination, trace.failure_flag, trace.failed_step = FAILURE, M.DOMAIN_ERROR, n
            return True
        if r == 0 or r < tol_residual:
            trace.termination = RESIDUAL_TOL
            return True
        return False

    if stop_at(x0, 0):
        return trace
    x = x0
    for n in range(1, max_iter + 1):
        out = M.step(p, spec, x)
        if not out.ok:
            trace.termination, trace.failure_flag, trace.failed_step = FAILURE, out.flag, n
            return trace
        trace.iterates.append(out.next)
        if root is not None:
            trace.errors.append(abs(out.next - root))
        if abs(out.next - x) < tol_step:
            trace.termination = STEP_TOL
            return trace
        x = out.next
        if stop_at(x, n):
            return trace
    trace.termination = MAX_ITERS
    return trace


def _ln(x):
    ctx = getattr(x, "context", None)
    return ctx.ln(x) if ctx is not None else math.log(x)


def _errors_of(trace, root):
    if root is not None:
        return [abs(x - root) for x in trace.iterates]
    return trace.errors


def coc(trace_or_errors, root=None):
    """Computational order of convergence from the last three errors.

    Accepts a trace (with ``root`` or recorded errors) or a plain sequence of
    error magnitudes. Returns None when undefined.
    """
    if isinstance(trace_or_errors, IterationTrace):
        e = _errors_of(trace_or_errors, root)
    else:
        e = list(trace_or_errors)
    if e is None or len(e) < 3:
        return None
    e0, e1, e2 = e[-3:]
    if e0 == 0 or e1 == 0 or e2 == 0:
        return None
    den = _ln(e1 / e0)
    if den == 0:
        return None
    return _ln(e2 / e1) / den


def acoc(trace_or_iterates):
    """Approximated order from the last four iterates; None when undefined."""
    xs = trace_or_iterates.iterates if isinstance(trace_or_iterates, IterationTrace) else list(trace_or_iterates)
    if len(xs) < 4:
        return None
    x0, x1, x2, x3 = xs[-4:]
    d1, d2, d3 = abs(x1 - x0), abs(x2 - x1), abs(x3 - x2)
    if d1 == 0 or d2 == 0 or d3 == 0:
        return None
    den = _ln(d2 / d1)
    if den == 0:
        return None
    return _ln(d3 / d2) / den


def _resolved_length(iterates, errors) -> int:
    """Number of leading iterates whose error is above the rounding floor.

    Errors within ``10**(PRECISION_MARGIN - digits) * max(1, |x|)`` carry no
    order information, so the estimates stop before them.
    """
    x = iterates[-1]
    ctx = getattr(x, "context", None)
    if ctx is not None:
        floor = ctx.mpf(10) ** (PRECISION_MARGIN - ctx.dps) * max(1, abs(x))
    else:
        floor = 10.0 ** (PRECISION_MARGIN - 15) * max(1.0, abs(x))
    n = len(errors)
    while n > 0 and errors[n - 1] <= floor:
        n -= 1
    return n


def report(trace: IterationTrace, root=None) -> ConvergenceReport:
    """COC and ACOC of a trace, ignoring iterates at the rounding floor."""
    errors = _errors_of(trace, root)
    if errors is None:
        return ConvergenceReport(trace, None, acoc(trace))
    n = _resolved_length(trace.iterates, errors)
    return ConvergenceReport(trace, coc(errors[:n]), acoc(trace.iterates[: n + 1]))


# --- formatting ---------------------------------------------------------


def mantissa_format(x, digits: int = 3, mode: str = "truncate") -> str:
    """``0.dddE-k`` mantissa/exponent notation, e.g. ``0.656e-1``.

    ``mode`` is ``"truncate"`` (drop extra digits) or ``"round"``
    (round half-up).
    """
    if x is None:
        return DASH
    d = Decimal(_decimal_str(x))
    if d == 0:
        return "0"
    d = abs(d)
    exp = d.adjusted() + 1  # d = 0.xxx * 10**exp
    mant = d.scaleb(-exp)
    q = Decimal(1).scaleb(-digits)
    rounding = "ROUND_DOWN" if mode == "truncate" else "ROUND_HALF_UP"
    mant = mant.quantize(q, rounding=rounding)
    if mant >= 1:
        mant, exp = (mant / 10).quantize(q, rounding=rounding), exp + 1
    return f"{mant}e{exp}"


def _decimal_str(x) -> str:
    ctx = getattr(x, "context", None)
    if ctx is not None:
        return ctx.nstr(x, ctx.dps + 5, min_fixed=1, max_fixed=0)
    return repr(float(x))


def round4(x) -> Optional[str]:
    """Half-even rounding to four decimals."""
    if x is None:
        return None
    return str(Decimal(_decimal_str(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


# --- the error table ----------------------------------------------------


@dataclass
class TableCell:
    problem: str
    method: str
    precision: int
    trace: IterationTrace
    errors: list
    coc: Any
    acoc: Any

    @property
    def complete(self) -> bool:
        return not self.trace.failed and len(self.errors) >= 3


def _table_cell(pname: str, kind: str, precision: int, iterations: int, starts: str) -> TableCell:
    p = get_problem(pname)
    spec = M.MethodSpec(kind, p.multiplicity)
    start = p.table_start if (starts == "table" and p.table_start) else p.default_start
    x0 = to_precision(start, precision)
    root = p.roots(precision)[0]
    tr = iterate(p, spec, x0, iterations, root=root)
    rep = report(tr, root)
    return TableCell(pname, kind, precision, tr, tr.errors[1:], rep.coc, rep.acoc)


def table1(precision=100, problems: Sequence[str] = TABLE_PROBLEMS, methods: Sequence[str] = TABLE_METHODS,
           iterations: int = TABLE_ITERATIONS, starts: str = "table", workers: int = 1) -> list[TableCell]:
    """Errors |x1-r|, |x2-r|, |x3-r| with COC and ACOC for every
    (problem, method) pair.

    Runs ``iterations`` steps from each problem's table start. COC uses the
    last three nonzero errors, ACOC the last four iterates up to the first one
    that hits the root exactly. ``starts="default"`` uses the nominal starting
    points instead.
    """
    precision = parse_precision(precision)
    if precision == "double" or precision < 60:
        raise ValueError("table needs at least 60 digits")
    jobs = [(pn, mk) for pn in problems for mk in methods]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            cells = list(ex.map(lambda j: _table_cell(j[0], j[1], precision, iterations, starts), jobs))
    else:
        cells = [_table_cell(pn, mk, precision, iterations, starts) for pn, mk in jobs]
    return cells


CSV_COLUMNS = ["problem", "method", "precision_digits", "err1", "err2", "err3", "coc", "acoc", "termination"]


def _full(x) -> str:
    if x is None:
        return DASH
    ctx = getattr(x, "context", None)
    if ctx is not None:
        return ctx.nstr(x, ctx.dps)
    return repr(x)


def _termination(cell: TableCell) -> str:
    t = cell.trace
    if t.failed:
        return f"{FAILURE}({t.failure_flag}@{t.failed_step})"
    return t.termination


def table_csv(cells: Sequence[TableCell]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in cells:
        errs = [_full(c.errors[i]) if i < len(c.errors) else DASH for i in range(3)]
        w.writerow([c.problem, c.method, c.precision, *errs, _full(c.coc), _full(c.acoc), _termination(c)])
    return buf.getvalue()


def table_text(cells: Sequence[TableCell]) -> str:
    """Aligned text table, one block per problem."""
    out = []
    by_problem: dict[str, list[TableCell]] = {}
    for c in cells:
        by_problem.setdefault(c.problem, []).append(c)
    for pname, row in by_problem.items():
        p = get_problem(pname)
        start = p.table_start or p.default_start
        out.append(f"{pname}(x) = {p.formula},  m = {p.multiplicity},  x0 = {start}")
        header = ["" ] + [c.method for c in row]
        lines = [header]
        for i in range(3):
            lines.append([f"|x{i + 1}-x*|"] + [
                mantissa_format(c.errors[i]) if i < len(c.errors) else f"{DASH} {_termination(c)}" for c in row])
        lines.append(["COC"] + [round4(c.coc) or DASH for c in row])
        lines.append(["ACOC"] + [round4(c.acoc) or DASH for c in row])
        widths = [max(len(r[k]) for r in lines) for k in range(len(header))]
        for r in lines:
            out.append("  ".join(s.ljust(wd) for s, wd in zip(r, widths)).rstrip())
        out.append("")
    return "\n".join(out)
