"""Exact coefficient fields: rationals, finite fields F_{p^e}, and rational
function fields K(t) over any of these (towers allowed).

Every field exposes raw arithmetic on canonical payloads (``add``, ``mul``,
``inv`` ...) that the polynomial and matrix code uses directly, plus
:class:`FieldValue`, the user-facing immutable element type.
"""

from __future__ import annotations

import re
from functools import cached_property, lru_cache
from typing import Any

import gmpy2
from gmpy2 import mpq

from ..errors import DivisionByZero, MixedFields, ParseError
from . import poly as P

_SIMPLE_ATOM = re.compile(r"^(\d+|[A-Za-z_]\w*(\^\d+)?)$")
_PRODUCT = re.compile(r"^(\d+|[A-Za-z_]\w*(\^\d+)?)(\*([A-Za-z_]\w*(\^\d+)?))?$")


class Field:
    """Base class; subclasses define ``key`` and the raw operations."""

    has_sign = False
    key: tuple

    # raw interface -----------------------------------------------------
    zero: Any
    one: Any

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def is_one(self, a) -> bool:
        return a == self.one

    def from_int(self, n: int):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def format_atom(self, a) -> str:
        s = self.format(a)
        return s if _SIMPLE_ATOM.match(s) else f"({s})"

    def generators(self) -> dict[str, Any]:
        return {}

    def random(self, rng, bound: int = 2):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @property
    def characteristic(self) -> int:
        raise NotImplementedError

    # user-facing -------------------------------------------------------
    def coerce(self, x):
        """Raw payload for ``x`` (a FieldValue of this field, an int, or a string)."""
        if isinstance(x, FieldValue):
            if x.field != self:
                raise MixedFields(f"value of {x.field} used in {self}")
            return x.raw
        if isinstance(x, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            from .parse import parse_raw

            return parse_raw(self, x)
        return self._coerce_other(x)

    def _coerce_other(self, x):
        raise TypeError(f"cannot interpret {x!r} in {self}")

    def __call__(self, x=0) -> FieldValue:
        return FieldValue(self, self.coerce(x))

    def gen(self, name: str) -> FieldValue:
        try:
            return FieldValue(self, self.generators()[name])
        except KeyError:
            raise ParseError(f"{self} has no generator named {name!r}") from None

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __reduce__(self):
        return (field_from_json, (self.to_json(),))


class Rationals(Field):
    has_sign = True
    key = ("rationals",)
    zero = mpq(0)
    one = mpq(1)

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    neg = staticmethod(lambda a: -a)
    mul = staticmethod(lambda a, b: a * b)

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of 0 in Q")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by 0 in Q")
        return a / b

    def is_zero(self, a):
        return not a

    def is_one(self, a):
        return a == 1

    def from_int(self, n):
        return mpq(n)

    def _coerce_other(self, x):
        try:
            return mpq(x)
        except (TypeError, ValueError):
            return super()._coerce_other(x)

    def format(self, a):
        return str(a)

    def format_atom(self, a):
        s = str(a)
        return s if _SIMPLE_ATOM.match(s) else f"({s})"

    def random(self, rng, bound=2):
        return mpq(rng.randint(-bound, bound), rng.randint(1, max(1, bound)))

    def to_json(self):
        return {"kind": "rationals"}

    @property
    def characteristic(self):
        return 0

    def __repr__(self):
        return "QQ"


def _is_irreducible(prime: FiniteField, f: tuple) -> bool:
    """Ben-Or test: ``gcd(x^{p^i} - x, f) = 1`` for ``i <= deg f / 2``."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    p = prime.p
    x = (prime.zero, prime.one)
    h = x
    for _ in range(d // 2):
        h = P.pow_mod(prime, h, p, f)
        if len(P.gcd(prime, P.sub(prime, h, x), f)) > 1:
            return False
    return True


def _is_primitive(prime: FiniteField, f: tuple) -> bool:
    q = prime.p ** (len(f) - 1)
    order = q - 1
    x = (prime.zero, prime.one)
    for r in _prime_factors(order):
        if P.pow_mod(prime, x, order // r, f) == (prime.one,):
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic primitive polynomial of degree ``e`` over F_p.

    Coefficients are returned lowest degree first, leading 1 included.
    """
    prime = FiniteField(p)
    for n in range(p**e):
        low = [(n // p**i) % p for i in range(e)]
        f = tuple(low) + (1,)
        if _is_irreducible(prime, f) and _is_primitive(prime, f):
            return f
    raise AssertionError("no primitive polynomial found")


class FiniteField(Field):
    """F_p (payload: int in [0, p)) or F_p[x]/(modulus) (payload: tuple of e ints)."""

    def __init__(self, p: int, e: int = 1, modulus=None):
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be positive")
        self.p, self.e = int(p), int(e)
        self.q = self.p**self.e
        if e == 1:
            self.modulus = (0, 1)
            self.zero, self.one = 0, 1
        else:
            mod = tuple(int(c) % p for c in modulus) if modulus is not None else default_modulus(p, e)
            if len(mod) != e + 1 or mod[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {e}")
            if not _is_irreducible(self.prime, mod):
                raise ValueError(f"modulus {mod} is reducible over F_{p}")
            self.modulus = mod
            self.zero = (0,) * e
            self.one = (1,) + (0,) * (e - 1)
        self.key = ("finite", self.p, self.e, self.modulus)

    @cached_property
    def prime(self) -> FiniteField:
        return self if self.e == 1 else FiniteField(self.p)

    # raw ops
    def add(self, a, b):
        p = self.p
        if self.e == 1:
            return (a + b) % p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        if self.e == 1:
            return (a - b) % p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        if self.e == 1:
            return -a % p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        p = self.p
        if self.e == 1:
            return a * b % p
        e = self.e
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        mod = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(e):
                    prod[k - e + j] -= c * mod[j]
        return tuple(c % p for c in prod[:e])

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero(f"inverse of 0 in {self}")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self.power(a, self.q - 2)

    def power(self, a, n: int):
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def from_int(self, n):
        if self.e == 1:
            return n % self.p
        return (n % self.p,) + (0,) * (self.e - 1)

    def _coerce_other(self, x):
        if self.e > 1 and isinstance(x, (tuple, list)) and len(x) == self.e:
            return tuple(int(c) % self.p for c in x)
        return super()._coerce_other(x)

    def format(self, a):
        if self.e == 1:
            return str(a)
        return P.format_poly(self.prime, P.strip(self.prime, a), "x")

    def generators(self):
        if self.e == 1:
            return {}
        return {"x": (0, 1) + (0,) * (self.e - 2)}

    def elements(self):
        if self.e == 1:
            return list(range(self.p))
        p, e = self.p, self.e
        return [tuple((n // p**i) % p for i in range(e)) for n in range(self.q)]

    def random(self, rng, bound=2):
        if self.e == 1:
            return rng.randrange(self.p)
        return tuple(rng.randrange(self.p) for _ in range(self.e))

    def to_json(self):
        d = {"kind": "finite", "p": self.p, "e": self.e}
        if self.e > 1:
            d["modulus"] = list(self.modulus)
        return d

    @property
    def characteristic(self):
        return self.p

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}; {P.format_poly(self.prime, self.modulus, 'x')})"


class RationalFunctionField(Field):
    """K(var) with payload ``(num, den)``: coprime polynomials, ``den`` monic."""

    def __init__(self, base: Field, var: str = "theta"):
        if not re.match(r"^[A-Za-z_]\w*$", var):
            raise ValueError(f"bad variable name {var!r}")
        if var in base.generators() or (isinstance(base, FiniteField) and var == "x" and base.e > 1):
            raise ValueError(f"variable {var!r} already used by base field {base}")
        self.base, self.var = base, var
        self.has_sign = base.has_sign
        self._den1 = (base.one,)
        self.zero = ((), self._den1)
        self.one = ((base.one,), self._den1)
        self.key = ("ratfunc", base.key, var)

    def _make(self, num, den):
        b = self.base
        if not num:
            return self.zero
        if not den:
            raise DivisionByZero(f"zero denominator in {self}")
        if len(den) > 1:
            _, num, den = P.gcd_cofactors(b, num, den)
        lead = den[-1]
        if not b.is_one(lead):
            li = b.inv(lead)
            num = P.scale(b, num, li)
            den = P.scale(b, den, li)
        return (num, den)

    def lift(self, c):
        """Embed a raw payload of the base field."""
        return (P.strip(self.base, (c,)), self._den1)

    def add(self, a, b):
        fb = self.base
        (n1, d1), (n2, d2) = a, b
        if not n1:
            return b
        if not n2:
            return a
        if d1 == d2:
            num = P.add(fb, n1, n2)
            if len(d1) == 1:
                return (num, d1) if num else self.zero
            return self._make(num, d1)
        return self._make(P.add(fb, P.mul(fb, n1, d2), P.mul(fb, n2, d1)), P.mul(fb, d1, d2))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return (P.neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        fb = self.base
        (n1, d1), (n2, d2) = a, b
        if not n1 or not n2:
            return self.zero
        if len(d1) == 1 and len(d2) == 1:
            return (P.mul(fb, n1, n2), d1)
        # cross-cancel so the product is already reduced
        if len(d2) > 1:
            _, n1, d2 = P.gcd_cofactors(fb, n1, d2)
        if len(d1) > 1:
            _, n2, d1 = P.gcd_cofactors(fb, n2, d1)
        num, den = P.mul(fb, n1, n2), P.mul(fb, d1, d2)
        lead = den[-1]
        if not fb.is_one(lead):
            li = fb.inv(lead)
            num, den = P.scale(fb, num, li), P.scale(fb, den, li)
        return (num, den)

    def inv(self, a):
        num, den = a
        if not num:
            raise DivisionByZero(f"inverse of 0 in {self}")
        fb = self.base
        li = fb.inv(num[-1])
        return (P.scale(fb, den, li), P.scale(fb, num, li))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return not a[0]

    def is_one(self, a):
        return a == self.one

    def from_int(self, n):
        return self.lift(self.base.from_int(n))

    def _coerce_other(self, x):
        if isinstance(x, P.Poly) and x.field == self.base:
            return (x.coeffs, self._den1)
        return self.lift(self.base.coerce(x))

    def format(self, a):
        num, den = a
        b = self.base
        ns = P.format_poly(b, num, self.var)
        if len(den) == 1:
            return ns
        ds = P.format_poly(b, den, self.var)
        if not _PRODUCT.match(ns.lstrip("-")):
            ns = f"({ns})"
        if not _SIMPLE_ATOM.match(ds):
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def generators(self):
        gens = {name: self.lift(g) for name, g in self.base.generators().items()}
        gens[self.var] = ((self.base.zero, self.base.one), self._den1)
        return gens

    def random(self, rng, bound=2, num_degree=None, den_degree=None):
        b = self.base
        nd = bound if num_degree is None else num_degree
        dd = bound if den_degree is None else den_degree
        num = P.strip(b, [b.random(rng, bound) for _ in range(rng.randint(0, nd) + 1)])
        k = rng.randint(0, dd)
        den = tuple(b.random(rng, bound) for _ in range(k)) + (b.one,)
        return self._make(num, den)

    def to_json(self):
        return {"kind": "ratfunc", "base": self.base.to_json(), "var": self.var}

    @property
    def characteristic(self):
        return self.base.characteristic

    def __repr__(self):
        return f"{self.base!r}({self.var})"


class FieldValue:
    """Immutable element of an exact field; equality is structural."""

    __slots__ = ("field", "raw")

    def __init__(self, field: Field, raw):
        self.field = field
        self.raw = raw

    def _raw_of(self, other):
        if isinstance(other, FieldValue):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            return other.raw
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        o = self._raw_of(other)
        if o is None:
            return NotImplemented
        return FieldValue(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._raw_of(other)
        if o is None:
            return NotImplemented
        return FieldValue(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._raw_of(other)
        if o is None:
            return NotImplemented
        return FieldValue(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._raw_of(other)
        if o is None:
            return NotImplemented
        return FieldValue(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._raw_of(other)
        if o is None:
            return NotImplemented
        return FieldValue(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._raw_of(other)
        if o is None:
            return NotImplemented
        return FieldValue(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return FieldValue(self.field, self.field.neg(self.raw))

    def __pos__(self):
        return self

    def inv(self) -> FieldValue:
        return FieldValue(self.field, self.field.inv(self.raw))

    def __pow__(self, n: int):
        f = self.field
        base = self.raw if n >= 0 else f.inv(self.raw)
        n = abs(n)
        result = f.one
        while n:
            if n & 1:
                result = f.mul(result, base)
            base = f.mul(base, base)
            n >>= 1
        return FieldValue(f, result)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldValue):
            return self.field == other.field and self.raw == other.raw
        o = self._raw_of(other)
        if o is None:
            return NotImplemented
        return self.raw == o

    def __hash__(self):
        return hash((self.field, self.raw))

    @property
    def numerator(self) -> P.Poly:
        f = self.field
        if not isinstance(f, RationalFunctionField):
            raise TypeError("numerator is only defined for rational function fields")
        return P.Poly(f.base, self.raw[0], f.var, raw=True)

    @property
    def denominator(self) -> P.Poly:
        f = self.field
        if not isinstance(f, RationalFunctionField):
            raise TypeError("denominator is only defined for rational function fields")
        return P.Poly(f.base, self.raw[1], f.var, raw=True)

    def __str__(self):
        return self.field.format(self.raw)

    def __repr__(self):
        return f"{self.field!r}({self})"

    def __reduce__(self):
        return (_rebuild_value, (self.field.to_json(), str(self)))


def _rebuild_value(spec, text):
    return field_from_json(spec)(text)


QQ = Rationals()


def field_from_json(spec: dict) -> Field:
    kind = spec.get("kind")
    if kind == "rationals":
        return QQ
    if kind == "finite":
        return FiniteField(int(spec["p"]), int(spec.get("e", 1)), spec.get("modulus"))
    if kind == "ratfunc":
        return RationalFunctionField(field_from_json(spec["base"]), spec.get("var", "theta"))
    raise ValueError(f"unknown field kind {kind!r}")


_NAME = re.compile(r"^(?:(?P<q>Q|QQ|rationals)|(?:q|F|GF)(?P<n>\d+))(?P<t>t|\(theta\))?$")


def field_from_name(name: str) -> Field:
    """Short names: ``rationals``/``Q``, ``q5`` (F_5), ``q9`` (F_9), and a
    trailing ``t`` for the rational function field in ``theta`` over it,
    e.g. ``Qt`` or ``q13t``."""
    m = _NAME.match(name.strip())
    if not m:
        raise ValueError(f"unknown field name {name!r}")
    if m["q"]:
        base: Field = QQ
    else:
        q = int(m["n"])
        base = _finite_from_order(q)
    return RationalFunctionField(base, "theta") if m["t"] else base


def _finite_from_order(q: int) -> FiniteField:
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return FiniteField(p, e)
    raise ValueError(f"{q} is not a prime power")


def parse_field(spec) -> Field:
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, str):
        return field_from_name(spec)
    return field_from_json(spec)
