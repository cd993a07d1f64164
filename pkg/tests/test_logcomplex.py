"""Log-magnitude/phase arithmetic used by the block evaluators."""
import cmath
import math

import pytest

from idmps.logcomplex import LogComplex


def close(lc, val, tol=1e-13):
    return abs(lc.value - val) <= tol * max(1.0, abs(val))


def test_round_trip():
    for v in (1.0, -2.5, 3j, 0.7 - 0.2j, 1e-200, 1e200):
        assert close(LogComplex.from_value(v), v)


def test_zero_and_one():
    assert LogComplex.zero().is_zero
    assert LogComplex.zero().value == 0.0
    assert close(LogComplex.one(), 1.0)


def test_mul_div_pow_neg():
    a = LogComplex.from_value(2.0 + 1.0j)
    b = LogComplex.from_value(-0.3 + 0.8j)
    assert close(a * b, (2 + 1j) * (-0.3 + 0.8j))
    assert close(a / b, (2 + 1j) / (-0.3 + 0.8j))
    assert close(a ** 3, (2 + 1j) ** 3)
    assert close(-a, -(2 + 1j))
    assert close(a * 2.0, 2 * (2 + 1j))
    assert close(3.0 * a, 3 * (2 + 1j))


def test_add_sub():
    a = LogComplex.from_value(1.5 - 0.5j)
    b = LogComplex.from_value(0.25 + 2.0j)
    assert close(a + b, 1.75 + 1.5j)
    assert close(a - b, 1.25 - 2.5j)


def test_add_factors_out_large_logs():
    # both addends overflow complex doubles; the sum must still carry the log
    a = LogComplex(800.0, 0.0)
    b = LogComplex(800.0, math.pi)
    c = LogComplex(799.0, 0.0)
    s = a + b + c
    assert s.log == pytest.approx(799.0, abs=1e-12)


def test_exact_cancellation_returns_zero():
    a = LogComplex.from_value(1.0)
    s = a + (-a)
    assert s.is_zero


def test_zero_propagation():
    z = LogComplex.zero()
    a = LogComplex.from_value(3.0)
    assert (z * a).is_zero
    assert (z / a).is_zero
    assert close(z + a, 3.0)
    with pytest.raises(ZeroDivisionError):
        a / z


def test_huge_log_value_is_inf():
    v = LogComplex(1e4, 0.0).value
    assert math.isinf(abs(v))


def test_phase_reduction():
    a = LogComplex(0.0, 2 * math.pi * 1e6 + 0.25)
    assert cmath.phase(a.value) == pytest.approx(0.25, abs=1e-8)
