"""Registry of test problems with hand-coded derivatives.

Every function here is generic: it works on mpmath numbers, Python
floats/complex and numpy arrays alike, because the elementary functions are
looked up through :func:`multiroot.scalar.ops_for`.

Real problems ``f1``..``f5`` come with a known multiple root and a starting
point; complex problems ``p1``, ``p2``, ``p3`` and the powered variants
``p1pow5``, ``p2pow3``, ``p1pow2`` are used for basin pictures.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .scalar import DOUBLE, DomainError, Precision, mp_context, ops_for, parse_precision, to_precision

Fn = Callable[[Any], Any]


class UnknownProblemError(KeyError):
    pass


def _guarded(fn: Fn) -> Fn:
    # poles raise ZeroDivisionError in scalar arithmetic; report them as domain errors
    @functools.wraps(fn)
    def wrapper(x):
        try:
            return fn(x)
        except ZeroDivisionError:
            raise DomainError(f"pole of {fn.__name__}") from None

    return wrapper


@dataclass(frozen=True)
class Problem:
    """A scalar equation f(x) = 0 with known roots of a common multiplicity.

    ``roots`` and ``default_start`` are callables/literals rather than numbers
    because they have to be materialised at the caller's precision.
    """

    name: str
    f: Fn
    df: Fn
    d2f: Optional[Fn]
    multiplicity: int
    root_values: Callable[[Precision], list]
    default_start: str
    domain_note: str = ""
    complex_plane: bool = False
    # starting point that reproduces the reference error table, when it differs
    table_start: Optional[str] = None
    formula: str = field(default="", compare=False)

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    def roots(self, precision: Precision = 100) -> list:
        return self.root_values(parse_precision(precision))

    def start(self, precision: Precision = 100):
        return to_precision(self.default_start, precision)

    @property
    def has_second_derivative(self) -> bool:
        return self.d2f is not None


def power_of(g: Fn, dg: Fn, d2g: Fn, k: int) -> tuple[Fn, Fn, Fn]:
    """f = g**k together with its first two derivatives."""

    def f(x):
        return g(x) ** k

    def df(x):
        return k * g(x) ** (k - 1) * dg(x)

    def d2f(x):
        gx, dgx = g(x), dg(x)
        if k == 1:
            return d2g(x)
        return k * (k - 1) * gx ** (k - 2) * dgx * dgx + k * gx ** (k - 1) * d2g(x)

    return f, df, d2f


# --- real test problems -------------------------------------------------


def _g1(x):
    o = ops_for(x)
    return o.log(1 + x * x) + o.exp(x * x - 3 * x) * o.sin(x)


def _dg1(x):
    o = ops_for(x)
    e = o.exp(x * x - 3 * x)
    return 2 * x / (1 + x * x) + e * ((2 * x - 3) * o.sin(x) + o.cos(x))


def _d2g1(x):
    o = ops_for(x)
    e = o.exp(x * x - 3 * x)
    s, c = o.sin(x), o.cos(x)
    q = 1 + x * x
    a = 2 * x - 3
    return (2 - 2 * x * x) / (q * q) + e * ((a * a + 1) * s + 2 * a * c)


def _g2(x):
    return x**3 + ops_for(x).log(1 + x)


def _dg2(x):
    return 3 * x * x + 1 / (1 + x)


def _d2g2(x):
    return 6 * x - 1 / ((1 + x) * (1 + x))


def _f3(x):
    o = ops_for(x)
    x6 = x**6
    return (x6 - 8) ** 2 * o.log(x6 - 7)


def _df3(x):
    o = ops_for(x)
    x6 = x**6
    u, v = x6 - 8, x6 - 7
    du = 6 * x**5
    return 2 * u * du * o.log(v) + u * u * du / v


def _d2f3(x):
    o = ops_for(x)
    x6 = x**6
    u, v = x6 - 8, x6 - 7
    du, d2u = 6 * x**5, 30 * x**4
    L = o.log(v)
    return 2 * du * du * L + 2 * u * d2u * L + 4 * u * du * du / v + u * u * (d2u * v - du * du) / (v * v)


def _g4(x):
    o = ops_for(x)
    return o.log(x * x - x + 1) + 4 * o.sin(x - 1)


def _dg4(x):
    o = ops_for(x)
    return (2 * x - 1) / (x * x - x + 1) + 4 * o.cos(x - 1)


def _d2g4(x):
    o = ops_for(x)
    q = x * x - x + 1
    return (2 * q - (2 * x - 1) ** 2) / (q * q) - 4 * o.sin(x - 1)


def _f5_parts(x):
    o = ops_for(x)
    w = o.pi / 3
    L = o.log(x - 2)
    ex = o.exp(x - 3)
    return o, w, L, ex, o.sin(w * x), o.cos(w * x)


def _f5(x):
    _, _, L, ex, s, _ = _f5_parts(x)
    return L * L * (ex - 1) * s


def _df5(x):
    _, w, L, ex, s, c = _f5_parts(x)
    return 2 * L / (x - 2) * (ex - 1) * s + L * L * ex * s + L * L * (ex - 1) * w * c


def _d2f5(x):
    _, w, L, ex, s, c = _f5_parts(x)
    r = 1 / (x - 2)
    a, da, d2a = L * L, 2 * L * r, 2 * r * r - 2 * L * r * r
    b, db = ex - 1, ex
    sc, dsc, d2sc = s, w * c, -w * w * s
    return (
        d2a * b * sc
        + a * db * sc
        + a * b * d2sc
        + 2 * (da * db * sc + da * b * dsc + a * db * dsc)
    )


# --- complex test problems ----------------------------------------------


def _p1(z):
    return z + 1 / z


def _dp1(z):
    return 1 - 1 / (z * z)


def _d2p1(z):
    return 2 / (z * z * z)


def _p2(z):
    return z**3 + 1


def _dp2(z):
    return 3 * z * z


def _d2p2(z):
    return 6 * z


def _p3(z):
    return z**5 + 1 / z


def _dp3(z):
    return 5 * z**4 - 1 / (z * z)


def _d2p3(z):
    return 20 * z**3 + 2 / z**3


# --- roots --------------------------------------------------------------


def _real_roots(*values):
    def roots(precision):
        return [to_precision(v, precision) for v in values]

    return roots


def _sqrt2_root(precision):
    if precision == DOUBLE:
        return [2**0.5]
    return [mp_context(precision).sqrt(2)]


def _unit_roots(numerators, denominator):
    """exp(i*pi*k/denominator) for k in numerators, ordered as given."""

    def roots(precision):
        if precision == DOUBLE:
            import cmath

            return [cmath.exp(1j * cmath.pi * k / denominator) for k in numerators]
        ctx = mp_context(precision)
        return [ctx.expjpi(ctx.mpf(k) / denominator) for k in numerators]

    return roots


def _exact_unit_roots(precision):
    # p1 roots +-i are exact; avoid cos(pi/2) round-off
    if precision == DOUBLE:
        return [complex(0, -1), complex(0, 1)]
    ctx = mp_context(precision)
    return [ctx.mpc(0, -1), ctx.mpc(0, 1)]


def _cube_roots_minus_one(precision):
    if precision == DOUBLE:
        h = 3**0.5 / 2
        return [complex(0.5, -h), complex(0.5, h), complex(-1.0, 0.0)]
    ctx = mp_context(precision)
    h = ctx.sqrt(3) / 2
    return [ctx.mpc(0.5, -h), ctx.mpc(0.5, h), ctx.mpc(-1, 0)]


def _build() -> dict[str, Problem]:
    probs = []

    f1, df1, d2f1 = power_of(_g1, _dg1, _d2g1, 6)
    probs.append(Problem("f1", f1, df1, d2f1, 6, _real_roots(0), "0.3",
                         domain_note="entire on the reals", table_start="0.35",
                         formula="(ln(1+x^2) + exp(x^2-3x) sin x)^6"))
    f2, df2, d2f2 = power_of(_g2, _dg2, _d2g2, 7)
    probs.append(Problem("f2", f2, df2, d2f2, 7, _real_roots(0), "0.2",
                         domain_note="requires x > -1",
                         formula="(x^3 + ln(1+x))^7"))
    probs.append(Problem("f3", _f3, _df3, _d2f3, 3, _sqrt2_root, "1.5",
                         domain_note="requires x^6 > 7",
                         formula="(x^6-8)^2 ln(x^6-7)"))
    f4, df4, d2f4 = power_of(_g4, _dg4, _d2g4, 10)
    probs.append(Problem("f4", f4, df4, d2f4, 10, _real_roots(1), "1.2",
                         domain_note="entire on the reals",
                         formula="(ln(x^2-x+1) + 4 sin(x-1))^10"))
    probs.append(Problem("f5", _f5, _df5, _d2f5, 4, _real_roots(3), "3.1",
                         domain_note="requires x > 2", table_start="3.2",
                         formula="ln(x-2)^2 (exp(x-3)-1) sin(pi x/3)"))

    sixth_roots = _unit_roots([-5, -3, -1, 1, 3, 5], 6)
    probs.append(Problem("p1", _p1, _dp1, _d2p1, 1, _exact_unit_roots, "1+1i",
                         domain_note="pole at 0", complex_plane=True, formula="z + 1/z"))
    probs.append(Problem("p2", _p2, _dp2, _d2p2, 1, _cube_roots_minus_one, "1+1i",
                         complex_plane=True, formula="z^3 + 1"))
    probs.append(Problem("p3", _p3, _dp3, _d2p3, 1, sixth_roots, "1+1i",
                         domain_note="pole at 0", complex_plane=True, formula="z^5 + 1/z"))
    for base, k, roots, note, text in [
        ("p1", 5, _exact_unit_roots, "pole at 0", "(z + 1/z)^5"),
        ("p2", 3, _cube_roots_minus_one, "", "(z^3 + 1)^3"),
        ("p1", 2, _exact_unit_roots, "pole at 0", "(z + 1/z)^2"),
    ]:
        g, dg, d2g = {"p1": (_p1, _dp1, _d2p1), "p2": (_p2, _dp2, _d2p2)}[base]
        f, df, d2f = power_of(g, dg, d2g, k)
        probs.append(Problem(f"{base}pow{k}", f, df, d2f, k, roots, "1+1i",
                             domain_note=note, complex_plane=True, formula=text))

    out = {}
    for p in probs:
        out[p.name] = Problem(
            p.name, _guarded(p.f), _guarded(p.df), _guarded(p.d2f) if p.d2f else None,
            p.multiplicity, p.root_values, p.default_start, p.domain_note,
            p.complex_plane, p.table_start, p.formula,
        )
    return out


_REGISTRY = _build()

TABLE_PROBLEMS = ("f1", "f2", "f3", "f4", "f5")


def problem_registry() -> list[Problem]:
    return list(_REGISTRY.values())


def get_problem(name: str) -> Problem:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownProblemError(f"unknown problem {name!r}; known: {', '.join(_REGISTRY)}") from None


def pure_power(m: int) -> Problem:
    """f(x) = x**m, the canonical multiplicity-m test."""

    def f(x):
        return x**m

    def df(x):
        return m * x ** (m - 1)

    def d2f(x):
        return m * (m - 1) * x ** (m - 2) if m > 1 else 0 * x

    return Problem(f"x^{m}", f, df, d2f, m, _real_roots(0), "1", formula=f"x^{m}")
