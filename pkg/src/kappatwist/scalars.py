"""Exact rationals and truncated power series in one deformation parameter.

The coefficient ring of every other module.  Rationals are ``gmpy2.mpq``
(always reduced, positive denominator).  A :class:`Series` is a dense list
of ``N + 1`` rationals and all arithmetic is done modulo ``lam**(N+1)``.
"""

from fractions import Fraction

from gmpy2 import mpq

from .errors import MismatchedOrder, NonzeroConstantTerm, NotInvertible

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


def rat(x):
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to a Rational."""
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            p, q = x.split("/")
            return mpq(int(p), int(q))
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return mpq(x)


def fmt_rat(q):
    """Render a rational as ``"p/q"`` (denominator always written)."""
    q = mpq(q)
    return "%d/%d" % (q.numerator, q.denominator)


# --- raw coefficient tuples -------------------------------------------------
# Hot paths pass bare tuples around; Series wraps them for the public API.

def zeros(N):
    return (ZERO,) * (N + 1)


def unit(N):
    return (ONE,) + (ZERO,) * N


def valuation(c):
    """Index of the first nonzero coefficient, or ``len(c)`` for zero."""
    for i, x in enumerate(c):
        if x:
            return i
    return len(c)


def monomial(N, k, value=ONE):
    """``value * lam**k`` as a raw tuple (zero if ``k > N``)."""
    out = [ZERO] * (N + 1)
    if k <= N:
        out[k] = mpq(value)
    return tuple(out)


class Series:
    """Truncated power series ``sum_k coeffs[k] * lam**k`` modulo ``lam**(N+1)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order=None):
        c = [rat(x) for x in coeffs]
        if order is not None:
            if len(c) > order + 1:
                c = c[: order + 1]
            c.extend([ZERO] * (order + 1 - len(c)))
        if not c:
            raise ValueError("a Series needs at least the constant coefficient")
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs):
        s = cls.__new__(cls)
        s.coeffs = coeffs
        return s

    @classmethod
    def zero(cls, N):
        return cls._raw(zeros(N))

    @classmethod
    def one(cls, N):
        return cls._raw(unit(N))

    @classmethod
    def const(cls, value, N):
        return cls._raw(monomial(N, 0, rat(value)))

    @classmethod
    def lam(cls, N, k=1, value=1):
        """``value * lam**k``; vanishes when ``k > N``."""
        return cls._raw(monomial(N, k, rat(value)))

    @property
    def order(self):
        return len(self.coeffs) - 1

    def valuation(self):
        return valuation(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, Series):
            return Series.const(other, self.order)
        if other.order != self.order:
            raise MismatchedOrder(
                "truncation orders differ: %d vs %d" % (self.order, other.order))
        return other

    def __add__(self, other):
        other = self._check(other)
        return Series._raw(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Series._raw(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Series._raw(tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, Series):
            q = rat(other)
            return Series._raw(tuple(a * q for a in self.coeffs))
        other = self._check(other)
        return Series._raw(series_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inv()
        q = rat(other)
        return Series._raw(tuple(a / q for a in self.coeffs))

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        out = Series.one(self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, type(ZERO))):
            return self.coeffs == monomial(self.order, 0, rat(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def inv(self):
        return series_inv(self)

    def exp(self):
        return series_exp(self)

    def __repr__(self):
        return "Series(%s)" % self.pretty()

    def pretty(self, symbol="lam"):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            s = fmt_rat(c).replace("/1", "") if c.denominator == 1 else fmt_rat(c)
            if k == 0:
                parts.append(s)
            elif k == 1:
                parts.append("%s*%s" % (s, symbol))
            else:
                parts.append("%s*%s^%d" % (s, symbol, k))
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"order": self.order, "coeffs": [fmt_rat(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        coeffs = [rat(c) for c in data["coeffs"]]
        if len(coeffs) != data["order"] + 1:
            raise ValueError("coefficient list length does not match order")
        return cls._raw(tuple(coeffs))


def series_mul(a, b, budget=None):
    """Product of raw coefficient tuples, truncated at index ``budget``.

    The result always has the length of ``a``; entries above ``budget`` are zero.
    """
    n = len(a)
    top = n - 1 if budget is None else budget
    out = [ZERO] * n
    for i in range(top + 1):
        ai = a[i]
        if not ai:
            continue
        for j in range(top + 1 - i):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return tuple(out)


def series_arith(a, b, op):
    """Exact ``add``/``sub``/``mul`` of two series of equal order."""
    if a.order != b.order:
        raise MismatchedOrder("truncation orders differ: %d vs %d" % (a.order, b.order))
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError("unknown op %r" % (op,))


def series_inv(a):
    c = a.coeffs
    if not c[0]:
        raise NotInvertible("constant term is zero")
    N = len(c) - 1
    inv0 = 1 / c[0]
    out = [inv0] + [ZERO] * N
    for k in range(1, N + 1):
        acc = ZERO
        for j in range(1, k + 1):
            acc += c[j] * out[k - j]
        out[k] = -acc * inv0
    return Series._raw(tuple(out))


def series_exp(a):
    c = a.coeffs
    if c[0]:
        raise NonzeroConstantTerm("exp needs a series without constant term")
    N = len(c) - 1
    out = Series.one(N)
    term = Series.one(N)
    for k in range(1, N + 1):
        term = term * a / k
        out = out + term
    return out
