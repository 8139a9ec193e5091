from __future__ import annotations

import random
from math import comb

import pytest
import sympy

from siegeldual.errors import ZeroDenominatorIdentically
from siegeldual.exact import QQ, FieldValue, FiniteField, Poly, RationalFunctionField, theta_shift
from siegeldual.exact import poly as P
from siegeldual.exact.series import _shift_fraction, theta_shift_fraction

from .helpers import random_T_function

K = RationalFunctionField(QQ, "theta")
F = RationalFunctionField(K, "T")
TH = K.gen("theta")


def test_linear_case():
    s = theta_shift(F("T - theta"), 4)
    assert s.kappa == 0
    assert s.coefficients() == {1: K(1)}


def test_inverse_examples():
    s = theta_shift(F("1/T"), 3)
    assert [s[i] for i in range(4)] == [TH**-1, -TH**-2, TH**-3, -TH**-4]
    s2 = theta_shift(F("T^-2"), 2)
    assert [s2[i] for i in range(3)] == [TH**-2, -2 * TH**-3, 3 * TH**-4]


@pytest.mark.parametrize("j", range(1, 9))
def test_negative_power_formula(j):
    s = theta_shift(F(f"T^-{j}"), 8)
    for i in range(9):
        assert s[i] == (-1) ** i * comb(j + i - 1, i) * TH ** (-(j + i))


def test_pole_order():
    s = theta_shift(F("1/(T - theta)^3 + T"), 2)
    assert s.kappa == 3 and s.valuation == -3
    assert s[-3] == K(1)
    with pytest.raises(ValueError):
        theta_shift(F("1/(T - theta)^3"), -4)


def test_multiplicative_random():
    rng = random.Random(11)
    for _ in range(30):
        f, g = random_T_function(rng), random_T_function(rng)
        prod = theta_shift(f, 6) * theta_shift(g, 6)
        assert theta_shift(f * g, 6).truncate(prod.order) == prod


def test_multiplicative_nested_coefficients():
    # T-coefficients that are themselves fractions in theta
    rng = random.Random(12)
    for _ in range(30):
        f = FieldValue(F, F.random(rng, 2, num_degree=1, den_degree=1))
        g = FieldValue(F, F.random(rng, 2, num_degree=1, den_degree=1))
        prod = theta_shift(f, 6) * theta_shift(g, 6)
        assert theta_shift(f * g, 6).truncate(prod.order) == prod


def test_fast_paths_match_generic():
    rng = random.Random(13)
    th = K.generators()["theta"]
    for _ in range(40):
        f = random_T_function(rng, degree=2, bound=2)
        num, den = f.raw
        assert theta_shift(f, 5) == _shift_fraction(K, num, den, th, 5)
        a, b = theta_shift(f, 5), theta_shift(random_T_function(rng, 2, 2), 5)
        prod = a * b
        assert prod.coeffs == P.mul_trunc(K, a.coeffs, b.coeffs, prod.order - prod.start + 1)


def test_against_sympy_series():
    T, N, th = sympy.symbols("T N theta")
    for text in ("(T^2 + 1)/(T - theta)", "T/(T^2 - theta^2)", "(theta*T + 3)/(T + 1)^2"):
        ours = theta_shift(F(text), 3)
        expr = sympy.sympify(text.replace("^", "**"), {"T": T, "theta": th}).subs(T, th + N)
        ser = sympy.series(expr, N, 0, 4).removeO()
        for j in range(ours.valuation, 4):
            want = sympy.simplify(ser.coeff(N, j))
            got = sympy.sympify(str(ours[j]).replace("^", "**"), {"theta": th})
            assert sympy.simplify(got - want) == 0


def test_finite_coefficients():
    Kp = RationalFunctionField(FiniteField(5), "theta")
    Fp = RationalFunctionField(Kp, "T")
    s = theta_shift(Fp("1/T"), 5)
    th = Kp.gen("theta")
    assert all(s[i] == (-1) ** i * th ** (-(i + 1)) for i in range(6))


def test_zero_denominator():
    with pytest.raises(ZeroDenominatorIdentically):
        theta_shift_fraction(Poly(K, [1], "T"), Poly(K, [], "T"), 3)


def test_zero_function():
    s = theta_shift(F(0), 3)
    assert s.is_zero() and s.kappa == 0


def test_needs_theta():
    with pytest.raises(ValueError):
        theta_shift(RationalFunctionField(QQ, "T")("1/T"), 3)
