"""Exact coefficient domains.

Two principal ideal domains are supported as coefficient rings: the ring of
integers (``ZZ``, elements are Python ints) and the ring of univariate
polynomials in ``t`` with rational coefficients (``QQ_T``, elements are dense
tuples of :class:`fractions.Fraction`, lowest degree first, no trailing
zeros).  Their fraction fields (``QQ`` and rational functions in ``t``) carry
the intermediate computations that need exact division.

All elements are immutable and hashable; every operation is a pure function
on the domain object, so shared values are safe to use concurrently.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd
from typing import Any, Tuple

try:  # GMP-backed integers are a large constant-factor win when available
    from gmpy2 import mpz as _mpz, gcd as _gmp_gcd, gcdext as _gmp_gcdext

    _HAVE_GMP = True
except ImportError:  # pragma: no cover - plain ints work, just slower
    _mpz = int
    _HAVE_GMP = False


class ExactDivisionError(ArithmeticError):
    """Exact division was requested but the divisor does not divide."""


def _int_xgcd(a, b):
    if _HAVE_GMP:
        g, u, v = _gmp_gcdext(_mpz(a), _mpz(b))
        return g, u, v
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# dense t-polynomial helpers (tuples of Fraction, lowest degree first)

def _tp_trim(c: list) -> tuple:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _tp_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return _tp_trim(out)


def _tp_neg(a: tuple) -> tuple:
    return tuple(-v for v in a)


def _tp_mul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return _tp_trim(out)


def _tp_divmod(a: tuple, b: tuple) -> Tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("t-polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    db = len(b) - 1
    while len(r) >= len(b):
        while r and not r[-1]:
            r.pop()
        if len(r) < len(b):
            break
        k = len(r) - 1 - db
        c = r[-1] * inv
        q[k] = c
        for j, v in enumerate(b):
            r[k + j] -= c * v
        r.pop()
    return _tp_trim(q), _tp_trim(r)


def _tp_gcd(a: tuple, b: tuple) -> tuple:
    while b:
        a, b = b, _tp_divmod(a, b)[1]
    if a and a[-1] != 1:
        inv = 1 / a[-1]
        a = tuple(v * inv for v in a)
    return a


def _tp_str(a: tuple) -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        if k == 0:
            term = str(c)
        else:
            v = "t" if k == 1 else f"t^{k}"
            term = v if c == 1 else (f"-{v}" if c == -1 else f"{c}*{v}")
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        out += " - " + term[1:] if term.startswith("-") else " + " + term
    return out


class Domain:
    """Interface shared by all coefficient domains."""

    name: str = "?"
    is_field: bool = False
    native: bool = False  # elements support +, -, * directly (ints, Fractions)
    zero: Any = None
    one: Any = None

    def is_zero(self, a) -> bool:
        return a == self.zero

    def is_one(self, a) -> bool:
        return a == self.one

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def exact_div(self, a, b):
        """a / b, raising :class:`ExactDivisionError` if b does not divide a."""
        raise NotImplementedError

    def divides(self, d, a) -> bool:
        try:
            self.exact_div(a, d)
            return True
        except ExactDivisionError:
            return False

    def gcd(self, a, b):
        raise NotImplementedError

    def xgcd(self, a, b):
        """(g, u, v) with g = u*a + v*b and g the canonical gcd."""
        raise NotImplementedError

    def lcm(self, a, b):
        if self.is_zero(a) or self.is_zero(b):
            return self.zero
        return self.exact_div(self.mul(a, b), self.gcd(a, b))

    def canonical_unit(self, a):
        """Unit u such that a / u is the canonical associate of a."""
        raise NotImplementedError

    def normalize(self, a):
        """(u, c) with a = u*c, u a unit and c the canonical associate."""
        if self.is_zero(a):
            return self.one, a
        u = self.canonical_unit(a)
        return u, self.exact_div(a, u)

    def from_int(self, n: int):
        raise NotImplementedError

    def pow(self, a, n: int):
        r = self.one
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def reduce_quotient(self, c, m):
        """q such that c - q*m is the canonical small residue (q may be 0).

        Euclidean reduction step used to keep Groebner coefficients small:
        symmetric remainders over the integers, degree-reducing division over
        QQ[t], exact quotients over fields.
        """
        raise NotImplementedError

    def size_hint(self, a) -> int:
        """Comparable size used to pick the best Euclidean reducer."""
        raise NotImplementedError

    def weight_hint(self, a) -> int:
        """Rough bit weight of an element, used for interreduction triggers."""
        return 1

    def fraction_field(self) -> "Domain":
        raise NotImplementedError

    def sort_key(self, a):
        raise NotImplementedError

    def str_of(self, a) -> str:
        return str(a)

    def is_composite_str(self, a) -> bool:
        """True if the rendering of ``a`` needs parentheses inside a product."""
        return False

    def __repr__(self):
        return self.name


class IntegerRing(Domain):
    """Arbitrary-precision integers, GMP-backed when gmpy2 is available."""

    name = "ZZ"
    native = True
    zero = _mpz(0)
    one = _mpz(1)

    def is_unit(self, a):
        return a == 1 or a == -1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in ZZ")
        q, r = divmod(a, b)
        if r:
            raise ExactDivisionError(f"{b} does not divide {a} in ZZ")
        return q

    def divides(self, d, a):
        if d == 0:
            return a == 0
        return a % d == 0

    def gcd(self, a, b):
        if _HAVE_GMP:
            return _gmp_gcd(a, b)
        return _int_gcd(a, b)

    def xgcd(self, a, b):
        return _int_xgcd(a, b)

    def canonical_unit(self, a):
        return self.one if a >= 0 else -self.one

    def from_int(self, n):
        return _mpz(n)

    def fraction_field(self):
        return QQ

    def to_fraction(self, a):
        return Fraction(a)

    def sort_key(self, a):
        return (a,)

    def reduce_quotient(self, c, m):
        q, r = divmod(c, m)
        if 2 * abs(r) > abs(m):
            q += 1 if m > 0 else -1
        return q

    def size_hint(self, a):
        return abs(a)

    def weight_hint(self, a):
        return abs(a).bit_length()


class RationalField(Domain):
    name = "QQ"
    is_field = True
    native = True
    zero = Fraction(0)
    one = Fraction(1)

    def is_zero(self, a):
        return not a

    def is_unit(self, a):
        return bool(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def exact_div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero in QQ")
        return a / b

    def divides(self, d, a):
        return bool(d) or not a

    def gcd(self, a, b):
        if not a and not b:
            return self.zero
        return self.one

    def xgcd(self, a, b):
        if a:
            return self.one, 1 / a, self.zero
        if b:
            return self.one, self.zero, 1 / b
        return self.zero, self.zero, self.zero

    def canonical_unit(self, a):
        return a if a else self.one

    def from_int(self, n):
        return Fraction(n)

    def fraction_field(self):
        return self

    def num_den(self, a):
        """Numerator and denominator of ``a`` over ZZ."""
        return a.numerator, a.denominator

    def base_ring(self):
        return ZZ

    def from_base(self, a):
        return Fraction(a)

    def sort_key(self, a):
        return (a,)

    def reduce_quotient(self, c, m):
        return c / m

    def size_hint(self, a):
        return 1


class RationalPolyRing(Domain):
    """Univariate polynomials in ``t`` over the rationals: a Euclidean PID.

    Elements are dense tuples of Fraction, lowest degree first, with no
    trailing zeros; the canonical associate is monic.
    """

    name = "QQ[t]"
    zero = ()
    one = (Fraction(1),)

    def is_zero(self, a):
        return not a

    def is_unit(self, a):
        return len(a) == 1

    def add(self, a, b):
        return _tp_add(a, b)

    def sub(self, a, b):
        return _tp_add(a, _tp_neg(b))

    def mul(self, a, b):
        return _tp_mul(a, b)

    def neg(self, a):
        return _tp_neg(a)

    def exact_div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero in QQ[t]")
        q, r = _tp_divmod(a, b)
        if r:
            raise ExactDivisionError("inexact division in QQ[t]")
        return q

    def gcd(self, a, b):
        return _tp_gcd(a, b)

    def xgcd(self, a, b):
        r0, r1 = a, b
        u0, u1 = self.one, self.zero
        v0, v1 = self.zero, self.one
        while r1:
            q, r = _tp_divmod(r0, r1)
            r0, r1 = r1, r
            u0, u1 = u1, _tp_add(u0, _tp_neg(_tp_mul(q, u1)))
            v0, v1 = v1, _tp_add(v0, _tp_neg(_tp_mul(q, v1)))
        if r0 and r0[-1] != 1:
            c = (1 / r0[-1],)
            r0, u0, v0 = _tp_mul(c, r0), _tp_mul(c, u0), _tp_mul(c, v0)
        return r0, u0, v0

    def canonical_unit(self, a):
        return (a[-1],)

    def from_int(self, n):
        return (Fraction(n),) if n else ()

    def from_fractions(self, coeffs):
        return _tp_trim([Fraction(c) for c in coeffs])

    def fraction_field(self):
        return QQ_T_FRAC

    def to_fraction(self, a):
        return QQ_T_FRAC.from_base(a)

    def sort_key(self, a):
        return (len(a),) + a

    def reduce_quotient(self, c, m):
        return _tp_divmod(c, m)[0]

    def size_hint(self, a):
        return len(a)

    def weight_hint(self, a):
        w = 0
        for c in a:
            w += abs(c.numerator).bit_length() + c.denominator.bit_length()
        return w

    def str_of(self, a):
        return _tp_str(a)

    def is_composite_str(self, a):
        if len(a) > 1:
            return True
        return bool(a) and a[0] < 0


class FractionField(Domain):
    """Field of fractions over a PID; elements are normalized (num, den) pairs."""

    is_field = True

    def __init__(self, base: Domain):
        self.base = base
        self.name = f"Frac({base.name})"
        self.zero = (base.zero, base.one)
        self.one = (base.one, base.one)

    def _make(self, num, den):
        base = self.base
        if base.is_zero(den):
            raise ZeroDivisionError(f"zero denominator in {self.name}")
        if base.is_zero(num):
            return self.zero
        g = base.gcd(num, den)
        if not base.is_one(g):
            num = base.exact_div(num, g)
            den = base.exact_div(den, g)
        u = base.canonical_unit(den)
        if not base.is_one(u):
            num = base.exact_div(num, u)
            den = base.exact_div(den, u)
        return num, den

    def from_base(self, a):
        return (a, self.base.one)

    def num_den(self, a):
        return a

    def base_ring(self):
        return self.base

    def is_zero(self, a):
        return self.base.is_zero(a[0])

    def is_unit(self, a):
        return not self.base.is_zero(a[0])

    def add(self, a, b):
        base = self.base
        return self._make(
            base.add(base.mul(a[0], b[1]), base.mul(b[0], a[1])),
            base.mul(a[1], b[1]),
        )

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        base = self.base
        return self._make(base.mul(a[0], b[0]), base.mul(a[1], b[1]))

    def neg(self, a):
        return (self.base.neg(a[0]), a[1])

    def inv(self, a):
        if self.base.is_zero(a[0]):
            raise ZeroDivisionError(f"inverse of zero in {self.name}")
        return self._make(a[1], a[0])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def exact_div(self, a, b):
        if self.is_zero(b):
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return self.div(a, b)

    def divides(self, d, a):
        return not self.is_zero(d) or self.is_zero(a)

    def gcd(self, a, b):
        if self.is_zero(a) and self.is_zero(b):
            return self.zero
        return self.one

    def xgcd(self, a, b):
        if not self.is_zero(a):
            return self.one, self.inv(a), self.zero
        if not self.is_zero(b):
            return self.one, self.zero, self.inv(b)
        return self.zero, self.zero, self.zero

    def canonical_unit(self, a):
        return a if not self.is_zero(a) else self.one

    def from_int(self, n):
        return (self.base.from_int(n), self.base.one)

    def fraction_field(self):
        return self

    def sort_key(self, a):
        return self.base.sort_key(a[0]) + self.base.sort_key(a[1])

    def reduce_quotient(self, c, m):
        return self.div(c, m)

    def size_hint(self, a):
        return 1

    def str_of(self, a):
        num = self.base.str_of(a[0])
        if self.base.is_one(a[1]):
            return num
        den = self.base.str_of(a[1])
        if self.base.is_composite_str(a[0]):
            num = f"({num})"
        if self.base.is_composite_str(a[1]):
            den = f"({den})"
        return f"{num}/{den}"

    def is_composite_str(self, a):
        return not self.base.is_one(a[1]) or self.base.is_composite_str(a[0])


ZZ = IntegerRing()
QQ = RationalField()
QQ_T = RationalPolyRing()
QQ_T_FRAC = FractionField(QQ_T)

RING_BY_NAME = {"ZZ": ZZ, "QQt": QQ_T, "QQ_t": QQ_T}
