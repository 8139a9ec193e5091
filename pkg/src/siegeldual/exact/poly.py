"""Dense univariate polynomials over an exact field.

Low-level helpers work on tuples of raw field payloads, lowest degree first,
with no trailing zeros (the zero polynomial is ``()``).  :class:`Poly` wraps
such a tuple together with its coefficient field and a variable name.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING, Iterable, Sequence

import gmpy2

from ..errors import DivisionByZero, MixedFields

if TYPE_CHECKING:
    from .fields import Field


def strip(field: Field, coeffs: Iterable) -> tuple:
    c = list(coeffs)
    is_zero = field.is_zero
    while c and is_zero(c[-1]):
        c.pop()
    return tuple(c)


def degree(p: Sequence) -> int:
    return len(p) - 1


def valuation(field: Field, p: Sequence) -> int | None:
    for i, a in enumerate(p):
        if not field.is_zero(a):
            return i
    return None


def add(field: Field, p: Sequence, q: Sequence) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    fadd = field.add
    out = list(p)
    for i, b in enumerate(q):
        out[i] = fadd(out[i], b)
    if len(p) == len(q):
        return strip(field, out)
    return tuple(out)


def neg(field: Field, p: Sequence) -> tuple:
    return tuple(field.neg(a) for a in p)


def sub(field: Field, p: Sequence, q: Sequence) -> tuple:
    return add(field, p, neg(field, q))


def scale(field: Field, p: Sequence, c) -> tuple:
    if field.is_zero(c):
        return ()
    mul = field.mul
    return tuple(mul(a, c) for a in p)


def mul(field: Field, p: Sequence, q: Sequence) -> tuple:
    if not p or not q:
        return ()
    if field.key == ("rationals",):
        if min(len(p), len(q)) >= _INTEGER_MUL_MIN:
            return _mul_rational(p, q)
        # gmpy2 operators directly, skipping the field's method dispatch
        out = [field.zero] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a:
                for j, b in enumerate(q):
                    out[i + j] += a * b
        return tuple(out)
    fadd, fmul, is_zero = field.add, field.mul, field.is_zero
    out = [field.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = fadd(out[i + j], fmul(a, b))
    # integral domain: the leading product is nonzero
    return tuple(out)


_INTEGER_MUL_MIN = 6
_MODULAR_MIN = 8


def _integer_form(p: Sequence) -> tuple[list, object]:
    den = gmpy2.mpz(1)
    for c in p:
        den = gmpy2.lcm(den, gmpy2.denom(c))
    return [gmpy2.numer(c) * (den // gmpy2.denom(c)) for c in p], den


def _mul_rational(p: Sequence, q: Sequence) -> tuple:
    """Product over Q by Kronecker substitution: clear denominators, pack each
    polynomial into one big integer, multiply once and unpack signed digits."""
    a, da = _integer_form(p)
    b, db = _integer_form(q)
    bits = (max(abs(x) for x in a).bit_length() + max(abs(x) for x in b).bit_length()
            + min(len(a), len(b)).bit_length() + 2)
    pack_a = gmpy2.mpz(0)
    for x in reversed(a):
        pack_a = (pack_a << bits) + x
    pack_b = gmpy2.mpz(0)
    for x in reversed(b):
        pack_b = (pack_b << bits) + x
    prod = pack_a * pack_b
    mask = (gmpy2.mpz(1) << bits) - 1
    half = gmpy2.mpz(1) << (bits - 1)
    den = da * db
    out = []
    for _ in range(len(a) + len(b) - 1):
        digit = prod & mask
        prod >>= bits
        if digit >= half:
            digit -= mask + 1
            prod += 1
        out.append(gmpy2.mpq(digit, den))
    return tuple(out)


def mul_trunc(field: Field, p: Sequence, q: Sequence, n: int) -> tuple:
    """Product of ``p`` and ``q`` keeping only the coefficients below ``n``."""
    if not p or not q or n <= 0:
        return ()
    fadd, fmul, is_zero = field.add, field.mul, field.is_zero
    out = [field.zero] * min(n, len(p) + len(q) - 1)
    for i, a in enumerate(p[:n]):
        if is_zero(a):
            continue
        for j, b in enumerate(q[: n - i]):
            out[i + j] = fadd(out[i + j], fmul(a, b))
    return strip(field, out)


def divmod_(field: Field, p: Sequence, q: Sequence) -> tuple[tuple, tuple]:
    if not q:
        raise DivisionByZero("polynomial division by zero")
    if len(p) < len(q):
        return (), tuple(p)
    fsub, fmul = field.sub, field.mul
    lead_inv = field.inv(q[-1])
    rem = list(p)
    dq = len(q) - 1
    quo = [field.zero] * (len(p) - dq)
    if field.key == ("rationals",):
        for k in range(len(p) - 1 - dq, -1, -1):
            c = rem[k + dq] * lead_inv
            quo[k] = c
            if c:
                for j, b in enumerate(q):
                    rem[k + j] -= c * b
        return tuple(quo), strip(field, rem[:dq])
    for k in range(len(p) - 1 - dq, -1, -1):
        c = fmul(rem[k + dq], lead_inv)
        quo[k] = c
        if field.is_zero(c):
            continue
        for j, b in enumerate(q):
            rem[k + j] = fsub(rem[k + j], fmul(c, b))
    return tuple(quo), strip(field, rem[:dq])


def exact_div(field: Field, p: Sequence, q: Sequence) -> tuple:
    quo, rem = divmod_(field, p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quo


def monic(field: Field, p: Sequence) -> tuple:
    if not p or field.is_one(p[-1]):
        return tuple(p)
    return scale(field, p, field.inv(p[-1]))


def gcd(field: Field, p: Sequence, q: Sequence) -> tuple:
    """Monic gcd (``gcd(0, 0) = 0``).

    Over Q with both degrees above 8 this uses the modular algorithm,
    otherwise the Euclidean algorithm.
    """
    a, b = tuple(p), tuple(q)
    if min(len(a), len(b)) > _MODULAR_MIN and field.key == ("rationals",):
        return _gcd_rational(field, a, b)[0]
    while b:
        a, b = b, divmod_(field, a, b)[1]
    return monic(field, a)


def gcd_cofactors(field: Field, p: Sequence, q: Sequence) -> tuple[tuple, tuple, tuple]:
    """``(g, p / g, q / g)`` with ``g`` the monic gcd of nonzero ``p`` and ``q``."""
    a, b = tuple(p), tuple(q)
    if min(len(a), len(b)) > _MODULAR_MIN and field.key == ("rationals",):
        return _gcd_rational(field, a, b)
    g = gcd(field, a, b)
    if len(g) == 1:
        return g, a, b
    return g, exact_div(field, a, g), exact_div(field, b, g)


# -- modular gcd over Q --------------------------------------------------

_PRIMES: list[int] = []


def _prime(i: int) -> int:
    while len(_PRIMES) <= i:
        _PRIMES.append(int(gmpy2.next_prime(_PRIMES[-1] if _PRIMES else 2**31 - 2**20)))
    return _PRIMES[i]


def _primitive_integer(p: Sequence) -> tuple[list, object]:
    """Primitive integer polynomial ``A`` and rational ``c`` with ``p = c * A``."""
    den = gmpy2.mpz(1)
    for c in p:
        den = gmpy2.lcm(den, gmpy2.denom(c))
    ints = [gmpy2.numer(c) * (den // gmpy2.denom(c)) for c in p]
    g = gmpy2.mpz(0)
    for c in ints:
        g = gmpy2.gcd(g, c)
    return [c // g for c in ints], gmpy2.mpq(g, den)


def _rem_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    low = b[:db]
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * inv % p
        if c:
            a[k:k + db] = [(x - c * y) % p for x, y in zip(a[k:k + db], low)]
    a = a[:db]
    while a and not a[-1]:
        a.pop()
    return a


def _gcd_mod(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _rem_mod(a, b, p)
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _quotient(g: list, a: list) -> list | None:
    """``a / g`` in Z[x] or ``None``; ``g`` is primitive, so quotients stay integral."""
    a = list(a)
    dg = len(g) - 1
    lead = g[-1]
    quo = [gmpy2.mpz(0)] * (len(a) - dg)
    for k in range(len(a) - 1 - dg, -1, -1):
        c, r = divmod(a[k + dg], lead)
        if r:
            return None
        quo[k] = c
        if c:
            a[k:k + dg + 1] = [x - c * y for x, y in zip(a[k:k + dg + 1], g)]
    return None if any(a[:dg]) else quo


def _gcd_rational(field: Field, a: tuple, b: tuple) -> tuple[tuple, tuple, tuple]:
    """Modular gcd over Q with cofactors: gcds modulo word-size primes, combined
    by Chinese remaindering until stable, then confirmed by exact division."""
    (A, ca), (B, cb) = _primitive_integer(a), _primitive_integer(b)
    gamma = gmpy2.gcd(A[-1], B[-1])
    best = min(len(A), len(B)) + 1
    H: list = []
    M = 1
    i = 0
    while True:
        p = _prime(i)
        i += 1
        if A[-1] % p == 0 or B[-1] % p == 0:
            continue
        g = _gcd_mod([int(x % p) for x in A], [int(x % p) for x in B], p)
        if len(g) == 1:
            return (field.one,), a, b
        if len(g) > best:
            continue  # unlucky prime
        gp = int(gamma % p)
        g = [x * gp % p for x in g]
        if len(g) < best:
            best, H, M = len(g), g, p
            continue
        # Chinese remaindering in the symmetric range
        inv = pow(M, -1, p)
        new = [h + M * ((x - h) * inv % p) for h, x in zip(H, g)]
        M *= p
        half = M // 2
        new = [x - M if x > half else x for x in new]
        stable = new == H
        H = new
        if stable:
            c = 0
            for x in H:
                c = gmpy2.gcd(c, x)
            G = [gmpy2.mpz(x) // c for x in H]
            qa = _quotient(G, A)
            qb = _quotient(G, B) if qa is not None else None
            if qb is not None:
                lead = G[-1]
                g_monic = tuple(gmpy2.mpq(x, lead) for x in G)
                sa, sb = ca * lead, cb * lead
                return g_monic, tuple(x * sa for x in qa), tuple(x * sb for x in qb)


def is_one(field: Field, p: Sequence) -> bool:
    return len(p) == 1 and field.is_one(p[0])


def evaluate(field: Field, p: Sequence, x):
    acc = field.zero
    for a in reversed(p):
        acc = field.add(field.mul(acc, x), a)
    return acc


def taylor_shift(field: Field, p: Sequence, c) -> tuple:
    """Coefficients of ``p(c + N)`` as a polynomial in ``N``."""
    out: tuple = ()
    lin = strip(field, (c, field.one))
    for a in reversed(p):
        out = add(field, mul(field, out, lin), (a,) if not field.is_zero(a) else ())
    return out


def series_inverse(field: Field, p: Sequence, n: int) -> tuple:
    """First ``n`` coefficients of ``1/p`` as a power series; needs ``p[0] != 0``."""
    if not p or field.is_zero(p[0]):
        raise DivisionByZero("power series with zero constant term is not invertible")
    inv0 = field.inv(p[0])
    out = []
    for k in range(n):
        acc = field.one if k == 0 else field.zero
        for j in range(1, min(k, len(p) - 1) + 1):
            acc = field.sub(acc, field.mul(p[j], out[k - j]))
        out.append(field.mul(acc, inv0))
    return tuple(out)


def pow_mod(field: Field, base: Sequence, e: int, modulus: Sequence) -> tuple:
    result: tuple = (field.one,)
    b = divmod_(field, base, modulus)[1]
    while e:
        if e & 1:
            result = divmod_(field, mul(field, result, b), modulus)[1]
        b = divmod_(field, mul(field, b, b), modulus)[1]
        e >>= 1
    return result


_SIMPLE = re.compile(r"^(\d+|[A-Za-z_]\w*(\^\d+)?)$")


def format_poly(field: Field, p: Sequence, var: str) -> str:
    """Render in the canonical grammar, highest degree first."""
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        a = p[k]
        if field.is_zero(a):
            continue
        s = field.format(a)
        if k == 0:
            terms.append(s)
            continue
        mono = var if k == 1 else f"{var}^{k}"
        sign = ""
        if field.has_sign and s.startswith("-") and _SIMPLE.match(s[1:]):
            sign, s = "-", s[1:]
        if s == "1":
            terms.append(sign + mono)
        else:
            atom = s if _SIMPLE.match(s) else f"({s})"
            terms.append(f"{sign}{atom}*{mono}")
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


class Poly:
    """Immutable polynomial with coefficients in ``field``."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: Field, coeffs: Iterable = (), var: str = "N", raw: bool = False):
        self.field = field
        if raw:
            self.coeffs = strip(field, coeffs)
        else:
            self.coeffs = strip(field, (field.coerce(c) for c in coeffs))
        self.var = var

    @classmethod
    def monomial(cls, field: Field, k: int, coeff=None, var: str = "N") -> Poly:
        c = field.one if coeff is None else field.coerce(coeff)
        return cls(field, (field.zero,) * k + (c,), var, raw=True)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def valuation(self) -> int | None:
        return valuation(self.field, self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int):
        from .fields import FieldValue

        raw = self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero
        return FieldValue(self.field, raw)

    def _other(self, other) -> tuple:
        if isinstance(other, Poly):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            return other.coeffs
        c = self.field.coerce(other)
        return strip(self.field, (c,))

    def __add__(self, other):
        return Poly(self.field, add(self.field, self.coeffs, self._other(other)), self.var, raw=True)

    __radd__ = __add__

    def __sub__(self, other):
        return Poly(self.field, sub(self.field, self.coeffs, self._other(other)), self.var, raw=True)

    def __rsub__(self, other):
        return Poly(self.field, sub(self.field, self._other(other), self.coeffs), self.var, raw=True)

    def __neg__(self):
        return Poly(self.field, neg(self.field, self.coeffs), self.var, raw=True)

    def __mul__(self, other):
        return Poly(self.field, mul(self.field, self.coeffs, self._other(other)), self.var, raw=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly(self.field, (self.field.one,), self.var, raw=True)
        for _ in range(e):
            out = out * self
        return out

    def __divmod__(self, other):
        q, r = divmod_(self.field, self.coeffs, self._other(other))
        return Poly(self.field, q, self.var, raw=True), Poly(self.field, r, self.var, raw=True)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def truncate(self, n: int) -> Poly:
        return Poly(self.field, self.coeffs[:n], self.var, raw=True)

    def __call__(self, x):
        from .fields import FieldValue

        return FieldValue(self.field, evaluate(self.field, self.coeffs, self.field.coerce(x)))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        try:
            return self.coeffs == self._other(other)
        except (MixedFields, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __str__(self):
        return format_poly(self.field, self.coeffs, self.var)

    def __repr__(self):
        return f"Poly({self}, over {self.field})"
