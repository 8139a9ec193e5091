from __future__ import annotations

import pickle
import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from siegeldual.errors import DivisionByZero, MixedFields, ParseError
from siegeldual.exact import (
    QQ,
    FieldValue,
    FiniteField,
    RationalFunctionField,
    default_modulus,
    field_from_json,
    field_from_name,
)
from siegeldual.exact import poly as P

from .helpers import FIELDS


def test_rational_examples():
    assert QQ("2/3") + QQ("1/6") == QQ("5/6")
    assert str(QQ("4/6")) == "2/3"
    assert QQ(-3) / 6 == QQ("-1/2")


def test_f9_example():
    F9 = FiniteField(3, 2, (1, 0, 1))
    x = F9.gen("x")
    assert x * x == F9(-1) == F9(2)


def test_ratfunc_example():
    F = RationalFunctionField(QQ)
    assert F("(theta^2 - 1)/(theta - 1)") == F("theta + 1")
    v = F("(2*theta + 2)/(4*theta - 4)")
    assert v.denominator.coeffs[-1] == 1  # monic denominator
    assert str(v) == "((1/2)*theta + 1/2)/(theta - 1)"


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_axioms_randomized(name):
    F = FIELDS[name]
    rng = random.Random(name)
    for _ in range(1000):
        a, b, c = (FieldValue(F, F.random(rng)) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == F(0)
        assert a + F(0) == a and a * F(1) == a
        if not a.is_zero():
            assert a * a.inv() == F(1)
            assert (b / a) * a == b


@given(st.fractions(), st.fractions())
def test_rationals_match_fraction(a, b):
    x, y = QQ(str(a)), QQ(str(b))
    assert str(x + y) == str(a + b).replace(" ", "")
    assert x * y == QQ(str(a * b))
    if b:
        assert x / y == QQ(str(a / b))


def _sympy_gf(F, payload):
    X = sympy.Symbol("x")
    coeffs = payload if isinstance(payload, tuple) else (payload,)
    return sympy.Poly(sum(c * X**i for i, c in enumerate(coeffs)), X, modulus=F.p)


@pytest.mark.parametrize("p,e", [(2, 3), (3, 2), (5, 2), (7, 1)])
def test_finite_field_against_sympy(p, e):
    F = FiniteField(p, e)
    X = sympy.Symbol("x")
    mod = sympy.Poly(sum(c * X**i for i, c in enumerate(F.modulus)), X, modulus=p)
    elems = F.elements()
    for a, b in product(elems[:9], elems[-9:]):
        got = _sympy_gf(F, F.mul(a, b))
        want = (_sympy_gf(F, a) * _sympy_gf(F, b)).rem(mod)
        assert got == want


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27])
def test_frobenius_exhaustive(q):
    F = field_from_name(f"q{q}")
    p = F.p
    vals = [FieldValue(F, a) for a in F.elements()]
    frob = {v: v**p for v in vals}
    assert all(v**q == v for v in vals)
    assert len(set(frob.values())) == len(vals)  # bijective
    prime = [F(i) for i in range(p)]
    assert all(frob[c] == c for c in prime)
    for a in vals[:12]:
        for b in vals[-12:]:
            assert frob[a + b] == frob[a] + frob[b]
            assert frob[a * b] == frob[a] * frob[b]


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (2, 4)])
def test_default_modulus_primitive(p, e):
    F = FiniteField(p, e)
    assert F.modulus == default_modulus(p, e)
    x = F.gen("x")
    order = next(k for k in range(1, F.q) if x**k == F(1))
    assert order == F.q - 1


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FiniteField(3, 2, (2, 0, 1))  # x^2 - 1
    with pytest.raises(ValueError):
        FiniteField(6)


def _sympy_expr(v, t):
    return sympy.sympify(str(v).replace("^", "**"), {"theta": t})


def test_ratfunc_against_sympy():
    F = RationalFunctionField(QQ)
    t = sympy.Symbol("theta")
    rng = random.Random(7)
    for _ in range(25):
        a, b = FieldValue(F, F.random(rng, 3)), FieldValue(F, F.random(rng, 3))
        sa, sb = _sympy_expr(a, t), _sympy_expr(b, t)
        for ours, theirs in ((a * b, sa * sb), (a + b, sa + sb), (a - b, sa - sb)):
            num, den = sympy.fraction(sympy.cancel(theirs))
            # reduced forms agree up to the unit normalising our denominator
            assert sympy.degree(den, t) == ours.denominator.degree
            assert sympy.cancel(_sympy_expr(ours, t) - theirs) == 0
        if not b.is_zero():
            assert sympy.cancel(_sympy_expr(a / b, t) - sa / sb) == 0


def test_errors():
    F5 = FiniteField(5)
    with pytest.raises(MixedFields):
        QQ(1) + F5(1)
    with pytest.raises(DivisionByZero):
        QQ(1) / QQ(0)
    with pytest.raises(DivisionByZero):
        F5(0).inv()
    with pytest.raises(ParseError):
        QQ("1 +")
    with pytest.raises(ParseError):
        QQ("theta")
    with pytest.raises(ParseError):
        RationalFunctionField(QQ)("2 $ 3")


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_format_parse_roundtrip(name):
    F = FIELDS[name]
    rng = random.Random(name + "rt")
    for _ in range(200):
        v = FieldValue(F, F.random(rng, 3))
        assert F(str(v)) == v
        assert pickle.loads(pickle.dumps(v)) == v


@pytest.mark.parametrize("name", ["rationals", "Q", "q5", "q9", "q13t", "Qt", "q4"])
def test_field_names_and_json(name):
    F = field_from_name(name)
    assert field_from_json(F.to_json()) == F


def test_tower_field():
    inner = RationalFunctionField(QQ, "s")
    outer = RationalFunctionField(inner, "theta")
    s, th = outer.gen("s"), outer.gen("theta")
    v = (s * th + 1) / (th - s)
    assert outer(str(v)) == v
    assert (v * (th - s)) == s * th + 1
    with pytest.raises(ValueError):
        RationalFunctionField(inner, "s")


def test_poly_gcd_against_sympy():
    X = sympy.Symbol("x")
    rng = random.Random(3)
    for _ in range(50):
        a = P.strip(QQ, [QQ.random(rng, 4) for _ in range(rng.randint(1, 5))])
        b = P.strip(QQ, [QQ.random(rng, 4) for _ in range(rng.randint(1, 5))])
        c = P.strip(QQ, [QQ.random(rng, 4) for _ in range(rng.randint(1, 3))])
        if not a or not b or not c:
            continue
        pa, pb = P.mul(QQ, a, c), P.mul(QQ, b, c)
        g = P.gcd(QQ, pa, pb)
        sa = sympy.Poly([sympy.Rational(str(x)) for x in reversed(pa)], X)
        sb = sympy.Poly([sympy.Rational(str(x)) for x in reversed(pb)], X)
        sg = sympy.gcd(sa, sb).monic()
        assert [sympy.Rational(str(x)) for x in reversed(g)] == sg.all_coeffs()


def test_poly_divmod_identity():
    rng = random.Random(4)
    F = FiniteField(7)
    for _ in range(100):
        a = P.strip(F, [F.random(rng) for _ in range(rng.randint(0, 7))])
        b = P.strip(F, [F.random(rng) for _ in range(rng.randint(1, 4))])
        if not b:
            continue
        q, r = P.divmod_(F, a, b)
        assert P.add(F, P.mul(F, q, b), r) == a
        assert P.degree(r) < P.degree(b)


def _rand_poly(rng, deg, digits=6):
    return P.strip(QQ, [QQ.coerce(f"{rng.randint(-10**digits, 10**digits)}/{rng.randint(1, 10**(digits // 2))}")
                        for _ in range(deg + 1)])


def _euclid(a, b):
    while b:
        a, b = b, P.divmod_(QQ, a, b)[1]
    return P.monic(QQ, a)


@pytest.mark.parametrize("seed", range(6))
def test_modular_gcd_matches_euclid(seed):
    rng = random.Random(seed)
    for _ in range(8):
        c = _rand_poly(rng, rng.randint(0, 8), 3)
        a = P.mul(QQ, _rand_poly(rng, rng.randint(9, 14), 3), c)
        b = P.mul(QQ, _rand_poly(rng, rng.randint(9, 14), 3), c)
        if seed % 2:
            a = P.mul(QQ, a, P.mul(QQ, c, c))
        g, ca, cb = P.gcd_cofactors(QQ, a, b)
        assert g == _euclid(a, b) == P.gcd(QQ, a, b)
        assert P.mul(QQ, g, ca) == a and P.mul(QQ, g, cb) == b


def test_gcd_of_multiple():
    rng = random.Random(9)
    a = _rand_poly(rng, 12)
    b = P.mul(QQ, a, _rand_poly(rng, 10))
    assert P.gcd(QQ, a, b) == P.monic(QQ, a)


def test_long_rational_product_matches_schoolbook():
    rng = random.Random(10)
    for _ in range(200):
        a, b = _rand_poly(rng, rng.randint(0, 25), 20), _rand_poly(rng, rng.randint(0, 25), 20)
        want = [QQ.zero] * (len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                want[i + j] += x * y
        assert P.mul(QQ, a, b) == tuple(want)
