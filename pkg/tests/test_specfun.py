import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uehling import bickley_ki, k0, k1, k_nu_derivative, ki_recurrence_next
from uehling.errors import DomainError


def test_fixture_parity(reference_values, cfg):
    fns = {"k0": lambda n, x: k0(x, cfg), "k1": lambda n, x: k1(x, cfg), "ki": lambda n, x: bickley_ki(n, x, cfg)}
    assert len(reference_values) > 80
    for fn, n, x, value, tol in reference_values:
        got = fns[fn](n, x).value
        assert abs(got - value) <= tol, (fn, n, x, got, value)


@pytest.mark.parametrize(
    "fn,x,expected",
    [(k0, 1.0, 0.4210244382), (k0, 2.0, 0.1138938727), (k1, 1.0, 0.6019072302)],
)
def test_quoted_values(fn, x, expected):
    assert fn(x).value == pytest.approx(expected, abs=5e-11)


def test_k0_asymptotics():
    x = 50.0
    ratio = k0(x).value * math.exp(x) * math.sqrt(2 * x / math.pi)
    # leading term alone is only good to 1/(8x)
    assert ratio == pytest.approx(1.0, abs=1 / (8 * x) + 1e-4)
    series, term = 0.0, 1.0
    for k in range(8):
        series += term
        term *= -((2 * k + 1) ** 2) / ((k + 1) * 8 * x)
    assert ratio == pytest.approx(series, abs=1e-8)


def test_k1_pole():
    assert 1e-4 * k1(1e-4).value == pytest.approx(1.0, abs=1e-6)


def test_underflow_policy():
    res = k0(750.0)
    assert res.value == 0.0 and res.underflowed
    assert bickley_ki(3, 700.0).underflowed
    assert not k0(699.0).underflowed and k0(699.0).value > 0


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_k_domain(x):
    with pytest.raises(DomainError):
        k0(x)
    with pytest.raises(DomainError):
        k1(x)


def test_bickley_domain():
    with pytest.raises(DomainError):
        bickley_ki(-1, 1.0)
    with pytest.raises(DomainError):
        bickley_ki(0, 0.0)
    with pytest.raises(DomainError):
        bickley_ki(1.5, 1.0)


@pytest.mark.parametrize("n,expected", [(1, math.pi / 2), (2, 1.0), (3, math.pi / 4), (4, 2.0 / 3.0)])
def test_bickley_at_zero(n, expected):
    assert bickley_ki(n, 0.0).value == pytest.approx(expected, abs=1e-14)


def test_ki0_is_k0():
    for x in (1e-3, 0.3, 4.0, 40.0):
        assert bickley_ki(0, x).value == k0(x).value


def test_result_invariants():
    for n in range(5):
        for x in (0.0, 0.5, 30.0):
            if n == 0 and x == 0:
                continue
            res = bickley_ki(n, x)
            assert res.abs_error_estimate >= 0
            assert math.isfinite(res.value)
            assert not res.underflowed


GRID = np.geomspace(0.01, 20, 40)


@pytest.mark.parametrize("n", range(5))
def test_positive_and_decreasing(n):
    vals = [bickley_ki(n, x).value for x in GRID]
    assert all(v > 0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_ordering_in_n():
    for x in GRID:
        vals = [bickley_ki(n, x).value for n in range(6)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n", range(4))
def test_derivative_chain(n):
    # d/dx Ki_{n+1}(x) = -Ki_n(x)
    for x in np.geomspace(0.1, 10, 12):
        h = 1e-4 * x
        f = lambda s: bickley_ki(n + 1, s).value
        fd = (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)
        assert fd == pytest.approx(-bickley_ki(n, x).value, rel=1e-7)


def test_recurrence_at_zero():
    # any K0 value: its coefficient is x = 0
    assert ki_recurrence_next(2, 0.0, 123.0, math.pi / 2, 1.0) == pytest.approx(math.pi / 4, abs=1e-15)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("x", [1.0, *np.geomspace(0.01, 20, 15)])
def test_recurrence_closure(n, x):
    ki = [bickley_ki(m, x).value for m in range(n - 2, n + 2)]
    assert ki_recurrence_next(n, x, *ki[:3]) == pytest.approx(ki[3], rel=1e-10)


def test_recurrence_domain():
    with pytest.raises(DomainError):
        ki_recurrence_next(1, 1.0, 0, 0, 0)


def test_k_nu_derivative_value():
    expected = -k1(2.0).value - 2 * k0(2.0).value
    assert k_nu_derivative(1, 2.0, 1.0) == pytest.approx(expected, rel=1e-15)
    # -K1(2) - 2 K0(2) from the 100-digit series oracle
    assert k_nu_derivative(1, 2.0, 1.0) == pytest.approx(-0.36765362731558937, abs=1e-14)


def test_k_nu_derivative_fd():
    b, r, h = 2.0, 1.0, 1e-5
    fd = (k1(b * (r + h)).value - k1(b * (r - h)).value) / (2 * h)
    assert k_nu_derivative(1, b, r) == pytest.approx(fd, abs=1e-8)


def test_k_nu_derivative_order_two():
    b, r, h = 1.5, 0.8, 1e-4
    k2 = lambda s: k0(s).value + 2 / s * k1(s).value
    fd = (k2(b * (r + h)) - k2(b * (r - h))) / (2 * h)
    assert k_nu_derivative(2, b, r) == pytest.approx(fd, rel=1e-7)


def test_k_nu_derivative_decay_and_domain():
    assert abs(k_nu_derivative(1, 2.0, 400.0)) == 0.0
    with pytest.raises(DomainError):
        k_nu_derivative(1, -2.0, 1.0)
    with pytest.raises(DomainError):
        k_nu_derivative(0, 2.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1e-3, max_value=50.0))
def test_wronskian(x):
    # I0 K1 + I1 K0 = 1/x; I1 = I0' by central difference is enough at 1e-7
    i0 = np.i0(x)
    h = 1e-6 * max(x, 1.0)
    i1 = (np.i0(x + h) - np.i0(x - h)) / (2 * h)
    lhs = i0 * k1(x).value + i1 * k0(x).value
    assert lhs * x == pytest.approx(1.0, rel=1e-7)
