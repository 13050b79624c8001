"""One-step iteration maps for multiple roots.

Six schemes are available under short names:

========  ===========================================================
mnewton   modified Newton, x - m f/f'  (order 2)
pp        two-stage Potra-Ptak (order 3 for simple roots)
mpp       Potra-Ptak modified for a root of known multiplicity m
osada     Osada's method (uses f'')
dong      Dong's two-stage method
chun      Chun's one-parameter family (uses f'', default gamma = -1)
========  ===========================================================

The maps are written once and work for mpmath scalars, Python doubles and
numpy arrays. :func:`step` wraps a map for scalar use and turns arithmetic
failures into :class:`StepOutcome` flags; :func:`apply_map` is the raw
vectorised form used by the basin renderer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .problems import Problem
from .scalar import DomainError, is_finite, mp_context, ops_for, parse_precision, to_precision

KINDS = ("mnewton", "pp", "mpp", "osada", "dong", "chun")
DONG_SIGNS = ("corrected-minus", "as-printed-plus")

OK = "ok"
DERIVATIVE_ZERO = "derivative-zero"
DOMAIN_ERROR = "domain-error"
NONFINITE = "nonfinite"


class UnsupportedMethodError(ValueError):
    """The method cannot be applied to this problem or multiplicity."""


class InconsistentMultiplicityError(ValueError):
    pass


class _DerivativeZero(ArithmeticError):
    pass


@dataclass(frozen=True)
class MethodSpec:
    kind: str
    m: int = 1
    gamma: float = -1.0
    dong_sign: str = "corrected-minus"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown method {self.kind!r}; known: {', '.join(KINDS)}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"multiplicity must be a positive integer, got {self.m!r}")
        if not np.isfinite(self.gamma):
            raise ValueError("gamma must be finite")
        if self.dong_sign not in DONG_SIGNS:
            raise ValueError(f"dong_sign must be one of {DONG_SIGNS}")

    @property
    def needs_second_derivative(self) -> bool:
        return self.kind in ("osada", "chun")

    def label(self) -> str:
        extra = ""
        if self.kind == "chun" and self.gamma != -1:
            extra = f",gamma={self.gamma:g}"
        if self.kind == "dong" and self.dong_sign != "corrected-minus":
            extra = ",plus"
        return f"{self.kind}(m={self.m}{extra})"


@dataclass(frozen=True)
class MethodCoefficients:
    """Integer constants of the modified Potra-Ptak step.

    ``a = (mu-1) mu**mu``, ``b = mu**mu`` and ``m_pow_m = m**m`` with
    ``mu = m - 1`` and ``0**0 = 1``.
    """

    m: int
    a: int
    b: int
    m_pow_m: int

    @property
    def mu(self) -> int:
        return self.m - 1


def coefficients(m: int) -> MethodCoefficients:
    if m < 1:
        raise ValueError("m must be >= 1")
    mu = m - 1
    b = mu**mu  # Python defines 0**0 == 1
    return MethodCoefficients(m=m, a=(mu - 1) * b, b=b, m_pow_m=m**m)


@dataclass(frozen=True)
class StepOutcome:
    next: Any
    intermediate: Optional[Any] = None
    flag: str = OK

    @property
    def ok(self) -> bool:
        return self.flag == OK


def _div(num, den):
    if not isinstance(den, np.ndarray) and den == 0:
        raise _DerivativeZero
    return num / den


def _gamma(spec: MethodSpec, x):
    g = spec.gamma
    if float(g).is_integer():
        return int(g)
    return ops_for(x).convert(g)


def _map_mnewton(p, spec, x):
    return x - spec.m * _div(p.f(x), p.df(x)), None


def _map_pp(p, spec, x):
    fx, dfx = p.f(x), p.df(x)
    y = x - _div(fx, dfx)
    return x - _div(fx + p.f(y), dfx), y


def _map_mpp(p, spec, x):
    c = coefficients(spec.m)
    fx, dfx = p.f(x), p.df(x)
    y = x - _div(fx, dfx)
    fy = p.f(y)
    return x + _div(spec.m * (c.a * fx - c.m_pow_m * fy), c.b * dfx), y


def _map_osada(p, spec, x):
    m = spec.m
    fx, dfx, d2fx = p.f(x), p.df(x), p.d2f(x)
    return x - (m * (m + 1) // 2) * _div(fx, dfx) + (m - 1) ** 2 * _div(dfx, 2 * d2fx), None


def _dong_constants(spec, x):
    m = spec.m
    if m == 1:
        raise UnsupportedMethodError("Dong's method needs m >= 2: (1 - 1/sqrt(m))**(1-m) is 0**0 at m = 1")
    o = ops_for(x)
    r = o.sqrt(o.convert(m)) if not isinstance(x, np.ndarray) else np.sqrt(float(m))
    return r, m * (1 - 1 / r) ** (1 - m)


def _map_dong(p, spec, x):
    r, k = _dong_constants(spec, x)
    fx, dfx = p.f(x), p.df(x)
    u = r * _div(fx, dfx)
    y = x - u if spec.dong_sign == "corrected-minus" else x + u
    return y - k * _div(p.f(y), dfx), y


def _map_chun(p, spec, x):
    m, g = spec.m, _gamma(spec, x)
    fx, dfx, d2fx = p.f(x), p.df(x), p.d2f(x)
    c1 = m * ((2 * g - 1) * m + 3 - 2 * g)
    c2 = g * (m - 1) ** 2
    c3 = (1 - g) * m * m
    u = _div(fx, dfx)
    return x - c1 * u / 2 + c2 * _div(dfx, d2fx) / 2 - c3 * u * u * d2fx / dfx / 2, None


_MAPS = {
    "mnewton": _map_mnewton,
    "pp": _map_pp,
    "mpp": _map_mpp,
    "osada": _map_osada,
    "dong": _map_dong,
    "chun": _map_chun,
}


def _check_supported(p: Problem, spec: MethodSpec):
    if spec.needs_second_derivative and p.d2f is None:
        raise UnsupportedMethodError(f"{spec.kind} needs a second derivative, {p.name} has none")
    if spec.kind == "dong" and spec.m == 1:
        raise UnsupportedMethodError("Dong's method needs m >= 2")


def step(p: Problem, spec: MethodSpec, x) -> StepOutcome:
    """Apply one step of ``spec`` to the scalar ``x``.

    Arithmetic failures come back as flags; a method that does not apply to
    the problem at all raises :class:`UnsupportedMethodError`.
    """
    _check_supported(p, spec)
    try:
        nxt, y = _MAPS[spec.kind](p, spec, x)
    except _DerivativeZero:
        return StepOutcome(x, None, DERIVATIVE_ZERO)
    except (DomainError, ValueError, OverflowError) as exc:
        if isinstance(exc, UnsupportedMethodError):
            raise
        return StepOutcome(x, None, DOMAIN_ERROR)
    except ZeroDivisionError:
        return StepOutcome(x, None, DERIVATIVE_ZERO)
    if not is_finite(nxt):
        return StepOutcome(nxt, y, NONFINITE)
    return StepOutcome(nxt, y, OK)


def step_modified_newton(p, spec, x):
    return step(p, _as(spec, "mnewton"), x)


def step_potra_ptak(p, x):
    return step(p, MethodSpec("pp", 1), x)


def step_modified_potra_ptak(p, spec, x):
    return step(p, _as(spec, "mpp"), x)


def step_osada(p, spec, x):
    return step(p, _as(spec, "osada"), x)


def step_dong(p, spec, x):
    return step(p, _as(spec, "dong"), x)


def step_chun(p, spec, x):
    return step(p, _as(spec, "chun"), x)


def _as(spec, kind):
    if isinstance(spec, int):
        return MethodSpec(kind, spec)
    if spec.kind != kind:
        return MethodSpec(kind, spec.m, spec.gamma, spec.dong_sign)
    return spec


def apply_map(p: Problem, spec: MethodSpec, z: np.ndarray) -> np.ndarray:
    """Vectorised step on a numpy array; failures show up as inf/nan."""
    _check_supported(p, spec)
    with np.errstate(all="ignore"):
        return _MAPS[spec.kind](p, spec, z)[0]


def asymptotic_error_constant(p: Problem, m: Optional[int] = None, precision=100, root=None):
    """Constant C in e_{n+1} = C e_n**3 for the modified Potra-Ptak step.

    ``C = ((m+2) c1**2 - 2 (m-1) c2) / (2 m**2)`` where
    ``c_i = f^(m+i)(r) m! / (f^(m)(r) (m+i)!)`` are ratios of Taylor
    coefficients at the root; these are obtained by mpmath's numerical
    differentiation at elevated precision.
    """
    m = p.multiplicity if m is None else m
    precision = parse_precision(precision)
    ctx = mp_context(precision)
    r = p.roots(precision)[0] if root is None else to_precision(root, precision)
    a = ctx.taylor(p.f, r, m + 2)
    tiny = ctx.mpf(10) ** (-(ctx.dps // 3))
    scale = max(abs(v) for v in a)
    if abs(a[m]) <= tiny * scale:
        raise InconsistentMultiplicityError(f"f^({m}) vanishes at the root of {p.name}")
    if any(abs(v) > tiny * abs(a[m]) for v in a[:m]):
        raise InconsistentMultiplicityError(f"{p.name} has a zero of order below {m} at the root")
    c1, c2 = a[m + 1] / a[m], a[m + 2] / a[m]
    return ((m + 2) * c1**2 - 2 * (m - 1) * c2) / (2 * m**2)
