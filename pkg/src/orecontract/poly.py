"""Univariate polynomials and rational functions over a coefficient domain.

``Poly`` is dense, immutable, lowest degree first, with no trailing zero
coefficient (the zero polynomial has an empty coefficient tuple).  Content
and primitive part follow the canonical-associate conventions of the domain:
positive content over the integers, monic content over ``QQ[t]``.

``RatFunc`` is a reduced fraction of two polynomials over the same ring and
models elements of the rational-function field in ``x``.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, List, NamedTuple, Sequence, Tuple

from .domains import Domain, ExactDivisionError, QQ, ZZ


class Poly:
    __slots__ = ("coeffs", "dom")

    def __init__(self, coeffs: Iterable, dom: Domain, trusted: bool = False):
        if trusted:
            self.coeffs = tuple(coeffs)
        else:
            c = list(coeffs)
            while c and dom.is_zero(c[-1]):
                c.pop()
            self.coeffs = tuple(c)
        self.dom = dom

    # -- construction -------------------------------------------------
    @staticmethod
    def zero(dom: Domain) -> "Poly":
        return Poly((), dom, trusted=True)

    @staticmethod
    def const(c, dom: Domain) -> "Poly":
        if dom.is_zero(c):
            return Poly.zero(dom)
        return Poly((c,), dom, trusted=True)

    @staticmethod
    def one(dom: Domain) -> "Poly":
        return Poly.const(dom.one, dom)

    @staticmethod
    def x(dom: Domain, degree: int = 1, coeff=None) -> "Poly":
        c = dom.one if coeff is None else coeff
        if dom.is_zero(c):
            return Poly.zero(dom)
        return Poly((dom.zero,) * degree + (c,), dom, trusted=True)

    @staticmethod
    def from_int_list(ints: Sequence[int], dom: Domain) -> "Poly":
        return Poly([dom.from_int(n) for n in ints], dom)

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree in x; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.dom.is_one(self.coeffs[0])

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        if not self.coeffs:
            return self.dom.zero
        return self.coeffs[-1]

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.dom.zero

    def constant_value(self):
        """The domain element of a constant polynomial."""
        if len(self.coeffs) > 1:
            raise ValueError("polynomial is not constant")
        return self.coeffs[0] if self.coeffs else self.dom.zero

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.dom is other.dom
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dom.name, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def sort_key(self):
        key = (len(self.coeffs),)
        for c in self.coeffs:
            key += self.dom.sort_key(c)
        return key

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        dom = self.dom
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        if dom.native:
            for i, v in enumerate(b):
                out[i] = out[i] + v
        else:
            for i, v in enumerate(b):
                out[i] = dom.add(out[i], v)
        return Poly(out, dom)

    def __sub__(self, other: "Poly") -> "Poly":
        dom = self.dom
        a, b = self.coeffs, other.coeffs
        out = list(a) + [dom.zero] * (len(b) - len(a))
        if dom.native:
            for i, v in enumerate(b):
                out[i] = out[i] - v
        else:
            for i, v in enumerate(b):
                out[i] = dom.sub(out[i], v)
        return Poly(out, dom)

    def __neg__(self) -> "Poly":
        dom = self.dom
        if dom.native:
            return Poly(tuple(-c for c in self.coeffs), dom, trusted=True)
        return Poly(tuple(dom.neg(c) for c in self.coeffs), dom, trusted=True)

    def __mul__(self, other: "Poly") -> "Poly":
        dom = self.dom
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(dom)
        out = [dom.zero] * (len(a) + len(b) - 1)
        if dom.native:
            for i, u in enumerate(a):
                if u:
                    for j, v in enumerate(b):
                        out[i + j] += u * v
        else:
            for i, u in enumerate(a):
                if dom.is_zero(u):
                    continue
                for j, v in enumerate(b):
                    out[i + j] = dom.add(out[i + j], dom.mul(u, v))
        return Poly(out, dom, trusted=True)

    def scale(self, c) -> "Poly":
        dom = self.dom
        if dom.is_zero(c):
            return Poly.zero(dom)
        if dom.native:
            return Poly(tuple(c * v for v in self.coeffs), dom, trusted=True)
        return Poly(tuple(dom.mul(c, v) for v in self.coeffs), dom, trusted=True)

    def times_x_power(self, k: int) -> "Poly":
        if not self.coeffs or k == 0:
            return self
        return Poly((self.dom.zero,) * k + self.coeffs, self.dom, trusted=True)

    def sub_scaled_shift(self, c, k: int, other: "Poly") -> "Poly":
        """self - c * x^k * other, in one pass."""
        dom = self.dom
        out = list(self.coeffs)
        need = k + len(other.coeffs)
        if len(out) < need:
            out.extend([dom.zero] * (need - len(out)))
        if dom.native:
            for j, v in enumerate(other.coeffs):
                out[k + j] -= c * v
        else:
            for j, v in enumerate(other.coeffs):
                out[k + j] = dom.sub(out[k + j], dom.mul(c, v))
        return Poly(out, dom)

    def pow(self, n: int) -> "Poly":
        r = Poly.one(self.dom)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    # -- structure -----------------------------------------------------
    def content(self):
        """Gcd of the coefficients in R, canonically normalized; content(0) = 0."""
        dom = self.dom
        g = dom.zero
        for c in self.coeffs:
            g = dom.gcd(g, c)
            if dom.is_one(g):
                return g
        return g

    def content_primitive(self) -> Tuple[object, "Poly"]:
        """(c, g) with self = c*g and g primitive; (0, 0) for the zero polynomial."""
        dom = self.dom
        if not self.coeffs:
            return dom.zero, self
        c = self.content()
        if dom.is_one(c):
            return c, self
        g = Poly(tuple(dom.exact_div(v, c) for v in self.coeffs), dom, trusted=True)
        return c, g

    def primitive(self) -> "Poly":
        return self.content_primitive()[1]

    def monic_normalized(self) -> "Poly":
        """Divide by the canonical unit of the leading coefficient."""
        if not self.coeffs:
            return self
        dom = self.dom
        u = dom.canonical_unit(self.lc())
        if dom.is_one(u):
            return self
        return Poly(tuple(dom.exact_div(v, u) for v in self.coeffs), self.dom, trusted=True)

    def derivative(self) -> "Poly":
        dom = self.dom
        out = [
            dom.mul(dom.from_int(k), self.coeffs[k])
            for k in range(1, len(self.coeffs))
        ]
        return Poly(out, dom)

    def compose_x_plus(self, j: int) -> "Poly":
        """Substitute x -> x + j for an integer shift j."""
        if j == 0 or not self.coeffs:
            return self
        dom = self.dom
        n = len(self.coeffs)
        out = [dom.zero] * n
        for k in range(n - 1, -1, -1):
            c = self.coeffs[k]
            if dom.is_zero(c):
                continue
            # c * (x + j)^k added via binomial expansion
            jp = dom.one
            for i in range(k, -1, -1):
                term = dom.mul(c, dom.mul(dom.from_int(comb(k, k - i)), jp))
                out[i] = dom.add(out[i], term)
                jp = dom.mul(jp, dom.from_int(j))
        return Poly(out, dom)

    def eval_fraction(self, v):
        """Evaluate at a Fraction/number; coefficients must accept * and +."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def map_domain(self, dom2: Domain, embed) -> "Poly":
        return Poly([embed(c) for c in self.coeffs], dom2)

    def to_field(self) -> "Poly":
        field = self.dom.fraction_field()
        if self.dom is ZZ:
            return Poly([QQ.from_int(c) for c in self.coeffs], QQ)
        return self.map_domain(field, field.from_base)

    def __repr__(self):
        return f"Poly({poly_str(self, 'x')!r})"


def poly_str(p: Poly, var: str) -> str:
    """Canonical rendering: decreasing degree, explicit ``*`` and ``^``."""
    dom = p.dom
    if p.is_zero():
        return "0"
    parts: List[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if dom.is_zero(c):
            continue
        cs = dom.str_of(c)
        if dom.is_composite_str(c):
            cs = f"({cs})"
        if k == 0:
            term = cs
        else:
            v = var if k == 1 else f"{var}^{k}"
            if dom.is_one(c):
                term = v
            elif cs == "-1":
                term = f"-{v}"
            else:
                term = f"{cs}*{v}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


# ---------------------------------------------------------------------------
# division and gcd in R[x]

def pseudo_divide(f: Poly, g: Poly) -> Tuple[object, Poly, Poly]:
    """Pseudo-division: s*f = q*g + h with deg h < deg g and s a power of lc(g).

    Only as many factors of lc(g) are accumulated as elimination steps are
    actually performed, so exact divisions stay exact (s = 1 when g is monic).
    """
    dom = f.dom
    if g.is_zero():
        raise ZeroDivisionError("pseudo-division by the zero polynomial")
    if f.degree < g.degree:
        return dom.one, Poly.zero(dom), f
    b = g.lc()
    s = dom.one
    q = Poly.zero(dom)
    h = f
    while not h.is_zero() and h.degree >= g.degree:
        k = h.degree - g.degree
        c = h.lc()
        # scale the running identity by b, then eliminate the head of h
        s = dom.mul(s, b)
        q = q.scale(b)
        h = h.scale(b)
        q = q + Poly.x(dom, k, c)
        h = h.sub_scaled_shift(c, k, g)
    return s, q, h


def exact_div_poly(f: Poly, g: Poly) -> Poly:
    """f / g in R[x]; raises ExactDivisionError when g does not divide f."""
    dom = f.dom
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero():
        return f
    s, q, h = pseudo_divide(f, g)
    if not h.is_zero():
        raise ExactDivisionError("inexact polynomial division")
    sc = Poly.const(s, dom)
    out = []
    for c in q.coeffs:
        out.append(dom.exact_div(c, s))
    return Poly(out, dom)


def divides_poly(g: Poly, f: Poly) -> bool:
    """True iff g divides f in R[x]."""
    if g.is_zero():
        return f.is_zero()
    try:
        exact_div_poly(f, g)
        return True
    except ExactDivisionError:
        return False


def _int_gcd_one_certificate(f: Poly, g: Poly) -> bool:
    """Certify gcd(f, g) = 1 over ZZ[x] by coprime evaluations.

    A common divisor d takes values d(a) dividing gcd(f(a), g(a)); if those
    are 1 at more than 2*min(deg f, deg g) points, |d(a)| <= 1 that often
    forces d constant, and the unit content closes the argument.
    """
    from math import gcd as intgcd

    needed = 2 * min(f.degree, g.degree) + 1
    hits = 0
    a = 0
    for tried in range(3 * needed + 8):
        va = f.eval_fraction(a)
        wa = g.eval_fraction(a)
        if va and wa and intgcd(va, wa) == 1:
            hits += 1
            if hits >= needed:
                return True
        a = -a + (1 if a <= 0 else 0)
    return False


def gcd_poly(f: Poly, g: Poly) -> Poly:
    """Gcd in R[x] via contents and a primitive remainder sequence."""
    dom = f.dom
    if f.is_zero():
        return g.monic_normalized() if dom.is_field else _canonical(g)
    if g.is_zero():
        return f.monic_normalized() if dom.is_field else _canonical(f)
    if dom.is_field:
        a, b = f, g
        while not b.is_zero():
            a, b = b, quo_rem_field(a, b)[1]
        return a.monic_normalized()
    if dom is ZZ and f.degree > 0 and g.degree > 0 and _int_gcd_one_certificate(f, g):
        return Poly.one(dom)
    cf, pf = f.content_primitive()
    cg, pg = g.content_primitive()
    c = dom.gcd(cf, cg)
    while not pg.is_zero():
        _, _, h = pseudo_divide(pf, pg)
        pf, pg = pg, h.primitive()
    pf = pf.monic_normalized()
    return pf.scale(c)


def lcm_poly(f: Poly, g: Poly) -> Poly:
    if f.is_zero() or g.is_zero():
        return Poly.zero(f.dom)
    h = exact_div_poly(f * g, gcd_poly(f, g))
    return _canonical(h)


def _canonical(f: Poly) -> Poly:
    """Associate with canonical content sign/leading normalization."""
    c, p = f.content_primitive()
    return p.monic_normalized().scale(c)


def quo_rem_field(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    """Euclidean division over a field coefficient domain."""
    dom = f.dom
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    inv = dom.inv(g.lc())
    q = Poly.zero(dom)
    h = f
    while not h.is_zero() and h.degree >= g.degree:
        c = dom.mul(h.lc(), inv)
        k = h.degree - g.degree
        q = q + Poly.x(dom, k, c)
        h = h.sub_scaled_shift(c, k, g)
    return q, h


# ---------------------------------------------------------------------------
# rational functions in x

class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            if num.is_zero():
                den = Poly.one(num.dom)
            else:
                g = gcd_poly(num, den)
                if not g.is_one():
                    num = exact_div_poly(num, g)
                    den = exact_div_poly(den, g)
                dom = num.dom
                u = dom.canonical_unit(den.lc())
                if not dom.is_one(u):
                    num = Poly(
                        tuple(dom.exact_div(c, u) for c in num.coeffs), dom, trusted=True
                    )
                    den = Poly(
                        tuple(dom.exact_div(c, u) for c in den.coeffs), dom, trusted=True
                    )
        self.num = num
        self.den = den

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, Poly.one(p.dom), reduced=True)

    @staticmethod
    def zero(dom: Domain) -> "RatFunc":
        return RatFunc(Poly.zero(dom), Poly.one(dom), reduced=True)

    @staticmethod
    def one(dom: Domain) -> "RatFunc":
        return RatFunc(Poly.one(dom), Poly.one(dom), reduced=True)

    @property
    def dom(self) -> Domain:
        return self.num.dom

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduced=True)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def inv(self) -> "RatFunc":
        return RatFunc(self.den, self.num)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den, self.den * other.num)

    def mul_poly(self, p: Poly) -> "RatFunc":
        return RatFunc(self.num * p, self.den)

    def compose_x_plus(self, j: int) -> "RatFunc":
        return RatFunc(self.num.compose_x_plus(j), self.den.compose_x_plus(j))

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def as_poly(self) -> Poly:
        if not self.den.is_one():
            raise ExactDivisionError("rational function is not polynomial")
        return self.num

    def __repr__(self):
        return f"RatFunc({poly_str(self.num, 'x')} / {poly_str(self.den, 'x')})"


def ratfunc_str(r: RatFunc, var: str) -> str:
    num = poly_str(r.num, var)
    if r.den.is_one():
        return num
    den = poly_str(r.den, var)
    return f"({num})/({den})"


# ---------------------------------------------------------------------------
# extended gcd over the fraction field

class ExtendedGcd(NamedTuple):
    s: Poly  # d * (monic gcd over the fraction field), an element of R[x]
    cofactors: Tuple[Poly, ...]  # sum(cofactors[i] * gens[i]) == s, over R[x]
    clearing: object  # the denominator-clearing constant d in R


def extended_gcd_over_fraction_field(gens: Sequence[Poly]) -> ExtendedGcd:
    """Generator of the extension ideal of ``gens`` in Q_R[x], with cofactors.

    Runs the extended Euclidean algorithm over the fraction field, producing
    the monic gcd s' and Bezout cofactors, then clears denominators by the lcm
    d of all cofactor denominators: sum(c_i * gens_i) = d*s' with c_i in R[x].
    """
    gens = list(gens)
    if not gens:
        raise ValueError("extended gcd of an empty generator list")
    dom = gens[0].dom
    nz = [(i, g) for i, g in enumerate(gens) if not g.is_zero()]
    if not nz:
        raise ValueError("extended gcd of all-zero generators")
    field = dom.fraction_field()

    fgens = [g.to_field() for g in gens]
    # fold a running (gcd, cofactor row) through the nonzero generators
    i0, _ = nz[0]
    r0 = fgens[i0]
    row0 = [Poly.zero(field) for _ in gens]
    row0[i0] = Poly.one(field)
    for i, _ in nz[1:]:
        r1 = fgens[i]
        row1 = [Poly.zero(field) for _ in gens]
        row1[i] = Poly.one(field)
        while not r1.is_zero():
            q, rem = quo_rem_field(r0, r1)
            r0, r1 = r1, rem
            row0, row1 = row1, [a - q * b for a, b in zip(row0, row1)]
    u = field.inv(field.canonical_unit(r0.lc()))
    r0 = r0.scale(u)
    row0 = [p.scale(u) for p in row0]

    # clear denominators of the cofactors
    d = dom.one
    for p in row0:
        for c in p.coeffs:
            _, den = field.num_den(c)
            d = dom.lcm(d, den)
    cofactors = []
    dd = field.from_base(d) if field is not QQ else QQ.from_int(d)
    for p in row0:
        coeffs = []
        for c in p.coeffs:
            num, den = field.num_den(field.mul(dd, c))
            if not dom.is_one(den):
                raise AssertionError("denominator clearing failed")
            coeffs.append(num)
        cofactors.append(Poly(coeffs, dom))
    s_coeffs = []
    for c in r0.coeffs:
        num, den = field.num_den(field.mul(dd, c))
        if not dom.is_one(den):
            raise AssertionError("clearing constant does not clear the gcd")
        s_coeffs.append(num)
    s = Poly(s_coeffs, dom)
    return ExtendedGcd(s, tuple(cofactors), d)
