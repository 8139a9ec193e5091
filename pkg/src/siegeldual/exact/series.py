"""Truncated Laurent series in N and the theta-shift of rational functions of T."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MixedFields, ZeroDenominatorIdentically
from . import poly as P
from .fields import Field, FieldValue, RationalFunctionField


@dataclass(frozen=True)
class LaurentSeries:
    """``sum_{j >= start} coeffs[j - start] * N^j``, exact through exponent ``order``.

    ``coeffs`` holds raw payloads of ``field``; the first one is nonzero
    unless the series is zero (then ``coeffs == ()``).
    """

    field: Field
    start: int
    coeffs: tuple
    order: int
    var: str = "N"

    def __post_init__(self):
        f = self.field
        c = list(self.coeffs[: max(0, self.order - self.start + 1)])
        start = self.start
        while c and f.is_zero(c[0]):
            c.pop(0)
            start += 1
        while c and f.is_zero(c[-1]):
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "start", start if c else self.order + 1)

    @property
    def valuation(self) -> int | None:
        return self.start if self.coeffs else None

    @property
    def kappa(self) -> int:
        """Pole order: ``max(0, -valuation)``."""
        return max(0, -self.start) if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, j: int) -> FieldValue:
        if j > self.order:
            raise IndexError(f"coefficient of N^{j} lies beyond the truncation order {self.order}")
        k = j - self.start
        raw = self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero
        return FieldValue(self.field, raw)

    def coefficients(self) -> dict[int, FieldValue]:
        return {self.start + k: FieldValue(self.field, c) for k, c in enumerate(self.coeffs)
                if not self.field.is_zero(c)}

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if other.field != self.field:
            raise MixedFields(f"{self.field} vs {other.field}")
        order = min(self.order + other.start, other.order + self.start)
        if self.is_zero() or other.is_zero():
            return LaurentSeries(self.field, order + 1, (), order, self.var)
        start = self.start + other.start
        if isinstance(self.field, RationalFunctionField):
            coeffs = _mul_trunc_fraction_free(self.field, self.coeffs, other.coeffs, order - start + 1)
        else:
            coeffs = P.mul_trunc(self.field, self.coeffs, other.coeffs, order - start + 1)
        return LaurentSeries(self.field, start, coeffs, order, self.var)

    def truncate(self, order: int) -> LaurentSeries:
        return LaurentSeries(self.field, self.start, self.coeffs, min(order, self.order), self.var)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field == other.field and self.order == other.order
                and self.coeffs == other.coeffs and (not self.coeffs or self.start == other.start))

    def __hash__(self):
        return hash((self.field, self.order, self.coeffs, self.start))

    def __str__(self):
        terms = []
        for j, c in self.coefficients().items():
            mono = "" if j == 0 else (self.var if j == 1 else f"{self.var}^{j}")
            s = str(c)
            body = s if not mono else (mono if s == "1" else f"({s})*{mono}")
            terms.append(body)
        head = " + ".join(terms) if terms else "0"
        return f"{head} + O({self.var}^{self.order + 1})"


def theta_shift(f: FieldValue, order: int, theta: str = "theta") -> LaurentSeries:
    """Expand ``f(theta + N)`` as a Laurent series in ``N`` through ``N^order``.

    ``f`` lives in K(T) where K has a generator named ``theta``.  The
    numerator and denominator are Taylor-shifted to polynomials in N, the
    common power of N is split off, and the unit part of the denominator
    is inverted as a truncated power series.
    """
    F = f.field
    if not isinstance(F, RationalFunctionField):
        raise TypeError("theta_shift expects an element of a rational function field K(T)")
    K = F.base
    th = K.generators().get(theta)
    if th is None:
        raise ValueError(f"coefficient field {K!r} has no generator {theta!r}")
    num, den = f.raw
    if isinstance(K, RationalFunctionField) and K.var == theta:
        return _shift_fraction_free(K, num, den, order)
    return _shift_fraction(K, num, den, th, order)


def theta_shift_fraction(num: P.Poly, den: P.Poly, order: int, theta: str = "theta") -> LaurentSeries:
    """Same as :func:`theta_shift` for an unreduced pair ``num/den`` of polynomials in T."""
    if num.field != den.field:
        raise MixedFields(f"{num.field} vs {den.field}")
    K = num.field
    th = K.generators().get(theta)
    if th is None:
        raise ValueError(f"coefficient field {K!r} has no generator {theta!r}")
    if isinstance(K, RationalFunctionField) and K.var == theta:
        return _shift_fraction_free(K, num.coeffs, den.coeffs, order)
    return _shift_fraction(K, num.coeffs, den.coeffs, th, order)


def _common_denominator(B: Field, values) -> tuple[list, tuple]:
    common: tuple = (B.one,)
    for _, d in values:
        if len(d) > 1:
            common = P.mul(B, common, P.gcd_cofactors(B, common, d)[2])
    return [P.mul(B, n, P.exact_div(B, common, d)) for n, d in values], common


def _prefix_numerators(B: Field, values):
    """Yield ``(nums, den)`` where ``den`` is the lcm of the first k+1 denominators.

    ``nums[i]`` is the i-th numerator rescaled to ``den``.
    """
    nums: list = []
    den: tuple = (B.one,)
    for n, d in values:
        extra = P.gcd_cofactors(B, den, d)[2] if len(d) > 1 else (B.one,)
        if len(extra) > 1:
            nums = [P.mul(B, x, extra) for x in nums]
            den = P.mul(B, den, extra)
        nums.append(P.mul(B, n, P.exact_div(B, den, d)))
        yield nums, den


def _reduce_split(B: Field, num, da, db):
    """Reduced ``num / (da * db)`` using two gcds of half the size."""
    if not num:
        return ((), (B.one,))
    for part in (0, 1):
        d = da if part == 0 else db
        if len(d) > 1:
            _, num, d = P.gcd_cofactors(B, num, d)
        if part == 0:
            da = d
        else:
            db = d
    den = P.mul(B, da, db)
    li = B.inv(den[-1])
    return (P.scale(B, num, li), P.scale(B, den, li))


def _mul_trunc_fraction_free(K: RationalFunctionField, p, q, n: int) -> tuple:
    """``mul_trunc`` over K = B(t), reducing each output coefficient once."""
    B = K.base
    if n <= 0 or not p or not q:
        return ()
    size = min(n, len(p) + len(q) - 1)
    zero = K.zero
    pa = list(p[:size]) + [zero] * (size - len(p))
    qb = list(q[:size]) + [zero] * (size - len(q))
    out = []
    for k, ((a, da), (b, db)) in enumerate(zip(_prefix_numerators(B, pa), _prefix_numerators(B, qb))):
        acc: tuple = ()
        for i in range(k + 1):
            if a[i] and b[k - i]:
                acc = P.add(B, acc, P.mul(B, a[i], b[k - i]))
        out.append(_reduce_split(B, acc, da, db))
    return P.strip(K, out)


class _PolyRing:
    """Just enough of the field interface for polynomials in theta over ``base``."""

    def __init__(self, base: Field):
        self.base = base
        self.key = ("polyring", base.key)
        self.zero = ()
        self.one = (base.one,)

    def add(self, a, b):
        return P.add(self.base, a, b)

    def sub(self, a, b):
        return P.sub(self.base, a, b)

    def mul(self, a, b):
        return P.mul(self.base, a, b)

    def is_zero(self, a):
        return not a


def _shift_fraction_free(K: RationalFunctionField, num, den, order: int) -> LaurentSeries:
    """Fraction-free variant for K = B(theta): work in B[theta], reduce once per coefficient.

    With ``d = d_0 + d_1 N + ...`` the inverse series is ``q_i / d_0^(i+1)`` where
    ``q_0 = 1`` and ``q_i = -sum_j d_j q_(i-j) d_0^(j-1)``, so no gcd is needed
    until the final coefficients are formed.
    """
    if not den:
        raise ZeroDenominatorIdentically("denominator is the zero polynomial")
    if not num:
        return LaurentSeries(K, order + 1, (), order)
    B = K.base
    A = _PolyRing(B)
    cleared, _ = _common_denominator(B, list(num) + list(den))
    th = (B.zero, B.one)
    ns = P.taylor_shift(A, P.strip(A, cleared[: len(num)]), th)
    ds = P.taylor_shift(A, P.strip(A, cleared[len(num):]), th)
    vn, vd = P.valuation(A, ns), P.valuation(A, ds)
    val = vn - vd
    if order < -max(0, -val):
        raise ValueError(f"order {order} is below the pole order {-val}")
    count = order - val + 1
    if count <= 0:
        return LaurentSeries(K, order + 1, (), order)
    n, d = ns[vn:], ds[vd:]
    powers = [A.one]
    for _ in range(count):
        powers.append(P.mul(B, powers[-1], d[0]))
    dw = [P.mul(B, d[j], powers[j - 1]) for j in range(1, min(count, len(d)))]
    nw = [P.mul(B, n[a], powers[a]) for a in range(min(count, len(n)))]
    q = [A.one]
    for i in range(1, count):
        acc: tuple = ()
        for j in range(1, min(i, len(dw)) + 1):
            acc = P.add(B, acc, P.mul(B, dw[j - 1], q[i - j]))
        q.append(P.neg(B, acc))
    coeffs = []
    for i in range(count):
        acc = ()
        for a in range(min(i, len(nw) - 1) + 1):
            acc = P.add(B, acc, P.mul(B, nw[a], q[i - a]))
        coeffs.append(_reduce_power(B, acc, powers[i + 1], d[0]))
    return LaurentSeries(K, val, tuple(coeffs), order)


def _reduce_power(B: Field, num, den, base):
    """Reduced ``num/den`` for ``den`` a positive power of ``base``.

    Every common factor divides ``base``, so only small gcds are needed.
    """
    if not num:
        return ((), (B.one,))
    r = P.monic(B, base)  # gcd(den, base) while den is still a full power
    while len(r) > 1:
        g = P.gcd(B, num, r)
        if len(g) == 1:
            break
        num, den = P.exact_div(B, num, g), P.exact_div(B, den, g)
        r = P.gcd(B, den, base)
    li = B.inv(den[-1])
    return (P.scale(B, num, li), P.scale(B, den, li))


def _shift_fraction(K: Field, num, den, th, order: int) -> LaurentSeries:
    if not den:
        raise ZeroDenominatorIdentically("denominator is the zero polynomial")
    if not num:
        return LaurentSeries(K, order + 1, (), order)
    ns = P.taylor_shift(K, num, th)
    ds = P.taylor_shift(K, den, th)
    vn, vd = P.valuation(K, ns), P.valuation(K, ds)
    val = vn - vd
    if order < -max(0, -val):
        raise ValueError(f"order {order} is below the pole order {-val}")
    count = order - val + 1
    if count <= 0:
        return LaurentSeries(K, order + 1, (), order)
    inv = P.series_inverse(K, ds[vd:], count)
    coeffs = P.mul_trunc(K, ns[vn:], inv, count)
    return LaurentSeries(K, val, coeffs, order)
