"""Scalar backends.

Two kinds of numbers flow through the steppers:

* mpmath ``mpf``/``mpc`` values bound to a private :class:`MPContext` with a
  fixed number of decimal digits (the table pipeline, 100 digits by default);
* hardware doubles, either plain Python ``float``/``complex`` (scalar use,
  exceptions on poles and domain violations) or numpy ``complex128`` arrays
  (the basin renderer, non-finite values instead of exceptions).

Problem functions never import a math module directly; they ask
:func:`ops_for` for the operations matching their argument.
"""

from __future__ import annotations

import cmath
import functools
import math
import re
from typing import Any, Union

import numpy as np
from mpmath.ctx_mp import MPContext
from mpmath.libmp import repr_dps

DOUBLE = "double"
DEFAULT_DIGITS = 100

Precision = Union[int, str]


class ScalarParseError(ValueError):
    """Raised for a malformed numeric literal."""


class DomainError(ArithmeticError):
    """Raised when a function is evaluated outside its domain (log of a
    non-positive real, a pole)."""


@functools.lru_cache(maxsize=None)
def mp_context(digits: int) -> MPContext:
    """Independent mpmath context with ``digits`` significant decimal digits.

    Contexts are cached, so every call with the same digits returns the same
    object and values produced at equal precision share one context.
    """
    if digits < 1:
        raise ValueError(f"precision must be positive, got {digits}")
    ctx = MPContext()
    ctx.dps = digits
    return ctx


def parse_precision(value: Precision) -> Precision:
    """Normalise ``100``, ``"100"`` or ``"double"``."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in (DOUBLE, "hardware-double", "float64"):
            return DOUBLE
        try:
            value = int(text)
        except ValueError:
            raise ScalarParseError(f"bad precision {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ScalarParseError(f"bad precision {value!r}")
    return value


_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"^({_REAL})$")
_COMPLEX_RE = re.compile(rf"^({_REAL})([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?[ij]$")
_PURE_IMAG_RE = re.compile(rf"^({_REAL})?[ij]$|^([+-])[ij]$")


def _split_literal(text: str) -> tuple[str, str | None]:
    """Split a literal into (real part, imaginary part or None) as strings."""
    s = re.sub(r"\s*([+-])\s*", r"\1", text.strip())
    if not s:
        raise ScalarParseError("empty literal")
    if _REAL_RE.match(s):
        return s, None
    m = _COMPLEX_RE.match(s)
    if m:
        re_part, sign, im_mag = m.group(1), m.group(2), m.group(3) or "1"
        return re_part, sign + im_mag
    m = _PURE_IMAG_RE.match(s)
    if m:
        if m.group(2):
            return "0", m.group(2) + "1"
        coeff = m.group(1)
        if coeff in (None, "", "+"):
            coeff = "1"
        elif coeff == "-":
            coeff = "-1"
        return "0", coeff
    raise ScalarParseError(f"malformed numeric literal {text!r}")


def make_scalar(text: str, precision: Precision = DEFAULT_DIGITS) -> Any:
    """Parse a decimal real literal or an ``a+bi`` complex literal.

    >>> make_scalar("-3+3i", "double")
    (-3+3j)
    """
    precision = parse_precision(precision)
    re_part, im_part = _split_literal(str(text))
    if precision == DOUBLE:
        if im_part is None:
            return float(re_part)
        return complex(float(re_part), float(im_part))
    ctx = mp_context(precision)
    if im_part is None:
        return ctx.mpf(re_part)
    return ctx.mpc(ctx.mpf(re_part), ctx.mpf(im_part))


def format_scalar(x: Any, digits: int | None = None) -> str:
    """Print a scalar so that :func:`make_scalar` at the same precision
    reads it back to the identical value."""
    ctx = getattr(x, "context", None)
    if ctx is not None:
        n = digits or repr_dps(ctx.prec)
        if isinstance(x, ctx.mpc):
            sign = "-" if x.imag < 0 else "+"
            return f"{ctx.nstr(x.real, n)}{sign}{ctx.nstr(abs(x.imag), n)}i"
        return ctx.nstr(x, n)
    if isinstance(x, complex):
        sign = "-" if math.copysign(1.0, x.imag) < 0 else "+"
        return f"{x.real!r}{sign}{abs(x.imag)!r}i"
    return repr(float(x))


def precision_of(x: Any) -> Precision:
    ctx = getattr(x, "context", None)
    if ctx is not None:
        return ctx.dps
    return DOUBLE


def is_complex(x: Any) -> bool:
    ctx = getattr(x, "context", None)
    if ctx is not None:
        return isinstance(x, ctx.mpc)
    if isinstance(x, np.ndarray):
        return np.iscomplexobj(x)
    return isinstance(x, (complex, np.complexfloating))


def is_finite(x: Any) -> bool:
    ctx = getattr(x, "context", None)
    if ctx is not None:
        return bool(ctx.isfinite(x))
    if isinstance(x, np.ndarray):
        return bool(np.all(np.isfinite(x)))
    return cmath.isfinite(x)


class MPOps:
    """Elementary functions at the precision of one mpmath context."""

    def __init__(self, ctx: MPContext):
        self.ctx = ctx
        self.pi = ctx.pi

    def convert(self, v):
        return self.ctx.convert(v)

    def exp(self, x):
        return self.ctx.exp(x)

    def sin(self, x):
        return self.ctx.sin(x)

    def cos(self, x):
        return self.ctx.cos(x)

    def sqrt(self, x):
        return self.ctx.sqrt(x)

    def log(self, x):
        if isinstance(x, self.ctx.mpf) and x <= 0:
            raise DomainError(f"log of non-positive real {self.ctx.nstr(x, 8)}")
        if x == 0:
            raise DomainError("log(0)")
        return self.ctx.ln(x)


class PythonOps:
    """Hardware doubles via :mod:`math`/:mod:`cmath`; raises on bad input."""

    pi = math.pi

    @staticmethod
    def convert(v):
        return v if isinstance(v, complex) else float(v)

    @staticmethod
    def _pick(x):
        return cmath if isinstance(x, complex) else math

    def exp(self, x):
        try:
            return self._pick(x).exp(x)
        except OverflowError as exc:
            raise DomainError(str(exc)) from None

    def sin(self, x):
        return self._pick(x).sin(x)

    def cos(self, x):
        return self._pick(x).cos(x)

    def sqrt(self, x):
        if not isinstance(x, complex) and x < 0:
            raise DomainError("sqrt of negative real")
        return self._pick(x).sqrt(x)

    def log(self, x):
        if not isinstance(x, complex) and x <= 0:
            raise DomainError(f"log of non-positive real {x!r}")
        if x == 0:
            raise DomainError("log(0)")
        return self._pick(x).log(x)


class NumpyOps:
    """Vectorised doubles. Failures surface as inf/nan, never as exceptions."""

    pi = math.pi

    @staticmethod
    def convert(v):
        return v

    exp = staticmethod(np.exp)
    sin = staticmethod(np.sin)
    cos = staticmethod(np.cos)
    sqrt = staticmethod(np.sqrt)
    log = staticmethod(np.log)


PYTHON_OPS = PythonOps()
NUMPY_OPS = NumpyOps()


def ops_for(x: Any):
    """The operation set matching the representation of ``x``."""
    ctx = getattr(x, "context", None)
    if isinstance(ctx, MPContext):
        return MPOps(ctx)
    if isinstance(x, (np.ndarray, np.generic)):
        return NUMPY_OPS
    return PYTHON_OPS


def to_precision(v: Any, precision: Precision, complex_: bool = False) -> Any:
    """Convert an exact-ish Python value (int, str, float) to the backend."""
    precision = parse_precision(precision)
    if precision == DOUBLE:
        return complex(v) if complex_ else (v if isinstance(v, complex) else float(v))
    ctx = mp_context(precision)
    if isinstance(v, str):
        return make_scalar(v, precision)
    if complex_ or isinstance(v, complex):
        return ctx.mpc(v)
    return ctx.convert(v)
