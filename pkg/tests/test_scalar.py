import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiroot.problems import get_problem
from multiroot.scalar import (
    DOUBLE,
    DomainError,
    ScalarParseError,
    format_scalar,
    make_scalar,
    mp_context,
    ops_for,
    parse_precision,
)


def test_decimal_literal_is_correctly_rounded():
    x = make_scalar("0.3", 100)
    assert x.context.dps == 100
    assert x == mp_context(100).mpf(3) / 10
    assert x != mp_context(100).mpf(0.3)  # not the binary double 0.3


def test_f3_start():
    assert make_scalar("1.5", 100) == mp_context(100).mpf(3) / 2


@pytest.mark.parametrize(
    "text, expected",
    [
        ("-3+3i", complex(-3, 3)),
        ("2.5-0.5i", complex(2.5, -0.5)),
        ("1e-3+2e1j", complex(1e-3, 20)),
        ("i", 1j),
        ("-i", -1j),
        ("4i", 4j),
        ("+7", 7.0),
        (".5", 0.5),
    ],
)
def test_double_literals(text, expected):
    assert make_scalar(text, DOUBLE) == expected


def test_complex_literal_high_precision():
    z = make_scalar("-3+3i", 50)
    ctx = mp_context(50)
    assert isinstance(z, ctx.mpc)
    assert z == ctx.mpc(-3, 3)


@pytest.mark.parametrize("bad", ["", "abc", "1..2", "3+", "1+2k", "--1", "1 2"])
def test_malformed_literals(bad):
    with pytest.raises(ScalarParseError):
        make_scalar(bad, 30)


@pytest.mark.parametrize("bad", ["0", "-4", "lots", 2.5])
def test_bad_precision(bad):
    with pytest.raises(ScalarParseError):
        parse_precision(bad)


@settings(max_examples=60, deadline=None)
@given(st.decimals(allow_nan=False, allow_infinity=False, places=30), st.sampled_from([20, 50, 100]))
def test_round_trip(d, digits):
    x = make_scalar(str(d), digits)
    assert make_scalar(format_scalar(x), digits) == x


@settings(max_examples=60, deadline=None)
@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_round_trip_complex(a, b):
    for prec in (DOUBLE, 40):
        z = make_scalar(f"{a!r}{'+' if b >= 0 else '-'}{abs(b)!r}i", prec)
        assert make_scalar(format_scalar(z), prec) == z


def test_log_domain_is_reported():
    for x in (make_scalar("-1", 30), -1.0, 0.0):
        with pytest.raises(DomainError):
            ops_for(x).log(x)
    # complex arguments use the principal branch
    assert ops_for(-1 + 0j).log(-1 + 0j) == pytest.approx(3.141592653589793j)


def test_precision_monotonicity():
    f1 = get_problem("f1").f
    a = f1(make_scalar("0.3", 50))
    b = f1(make_scalar("0.3", 100))
    ctx = mp_context(100)
    assert abs(ctx.mpf(a) - b) <= abs(b) * ctx.mpf(10) ** -45
