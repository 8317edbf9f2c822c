"""Ore operators over R[x] and over the rational functions Q_R(x).

Supported commutation rules, with D the operator symbol and x the variable:

* shift:        D*x = (x+1)*D          (sigma(x) = x+1, delta = 0)
* differential: D*x = x*D + 1          (sigma = id, delta = d/dx)

Operators are dense in D.  ``OreOperator`` has polynomial coefficients,
``RatOreOperator`` rational-function coefficients; both are immutable.
"""

from __future__ import annotations

from typing import Callable, List, Sequence, Tuple

from .domains import Domain, ZZ
from .poly import Poly, RatFunc, exact_div_poly, gcd_poly, lcm_poly, poly_str, ratfunc_str

SHIFT = "shift"
DIFFERENTIAL = "diff"


class OreAlgebra:
    """A shift or differential Ore algebra over a fixed coefficient ring."""

    __slots__ = ("kind", "var", "dom")

    def __init__(self, kind: str, var: str, dom: Domain):
        if kind not in (SHIFT, DIFFERENTIAL):
            raise ValueError(f"unsupported algebra kind {kind!r}")
        self.kind = kind
        self.var = var
        self.dom = dom

    @property
    def dvar(self) -> str:
        return "D" + self.var

    def __eq__(self, other):
        return (
            isinstance(other, OreAlgebra)
            and self.kind == other.kind
            and self.var == other.var
            and self.dom is other.dom
        )

    def __hash__(self):
        return hash((self.kind, self.var, self.dom.name))

    def __repr__(self):
        rule = "Dx=(x+1)D" if self.kind == SHIFT else "Dx=xD+1"
        return f"OreAlgebra({self.kind}:{self.var}, {self.dom.name}, {rule})"

    # -- sigma and delta -------------------------------------------------
    def sigma_poly(self, f: Poly, j: int = 1) -> Poly:
        if self.kind == SHIFT:
            return f.compose_x_plus(j)
        return f

    def sigma_rat(self, r: RatFunc, j: int = 1) -> RatFunc:
        if self.kind == SHIFT:
            return r.compose_x_plus(j)
        return r

    def delta_poly(self, f: Poly) -> Poly:
        if self.kind == SHIFT:
            return Poly.zero(self.dom)
        return f.derivative()

    def delta_rat(self, r: RatFunc) -> RatFunc:
        if self.kind == SHIFT:
            return RatFunc.zero(self.dom)
        return r.derivative()


def apply_sigma_power(algebra: OreAlgebra, f: Poly, j: int) -> Poly:
    """sigma^j applied to a polynomial; j may be negative."""
    return algebra.sigma_poly(f, j)


def shift_algebra(dom: Domain = ZZ, var: str = "n") -> OreAlgebra:
    return OreAlgebra(SHIFT, var, dom)


def differential_algebra(dom: Domain = ZZ, var: str = "x") -> OreAlgebra:
    return OreAlgebra(DIFFERENTIAL, var, dom)


def _check_same_algebra(a: OreAlgebra, b: OreAlgebra):
    if a != b:
        raise ValueError(f"algebra mismatch: {a!r} vs {b!r}")


class _OpBase:
    """Shared dense-in-D behaviour for the two operator flavours."""

    __slots__ = ("coeffs", "algebra")
    _zero_coeff: Callable
    _is_zero_coeff: Callable

    def __init__(self, coeffs, algebra: OreAlgebra, trusted: bool = False):
        if trusted:
            self.coeffs = tuple(coeffs)
        else:
            c = list(coeffs)
            while c and self._is_zero_coeff(c[-1]):
                c.pop()
            self.coeffs = tuple(c)
        self.algebra = algebra

    @property
    def order(self) -> int:
        """Degree in D; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            raise ValueError("leading coefficient of the zero operator")
        return self.coeffs[-1]

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self._zero_coeff()

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.algebra == other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((type(self).__name__, self.algebra, self.coeffs))

    def __add__(self, other):
        _check_same_algebra(self.algebra, other.algebra)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return type(self)(out, self.algebra)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(tuple(-c for c in self.coeffs), self.algebra, trusted=True)


class OreOperator(_OpBase):
    """Operator with polynomial coefficients, lowest D-power first."""

    def _zero_coeff(self):
        return Poly.zero(self.algebra.dom)

    @staticmethod
    def _is_zero_coeff(c) -> bool:
        return c.is_zero()

    @staticmethod
    def zero(algebra: OreAlgebra) -> "OreOperator":
        return OreOperator((), algebra, trusted=True)

    @staticmethod
    def one(algebra: OreAlgebra) -> "OreOperator":
        return OreOperator((Poly.one(algebra.dom),), algebra, trusted=True)

    @staticmethod
    def d(algebra: OreAlgebra) -> "OreOperator":
        return OreOperator((Poly.zero(algebra.dom), Poly.one(algebra.dom)), algebra)

    @staticmethod
    def from_poly(p: Poly, algebra: OreAlgebra) -> "OreOperator":
        return OreOperator((p,), algebra)

    def scale_poly(self, p: Poly) -> "OreOperator":
        if p.is_zero():
            return OreOperator.zero(self.algebra)
        return OreOperator(tuple(c * p for c in self.coeffs), self.algebra, trusted=True)

    def scale_const(self, c) -> "OreOperator":
        return self.scale_poly(Poly.const(c, self.algebra.dom))

    def d_shift(self, j: int) -> "OreOperator":
        """Left multiplication by D^j."""
        alg = self.algebra
        coeffs = list(self.coeffs)
        for _ in range(j):
            out = [Poly.zero(alg.dom)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                out[i + 1] = out[i + 1] + alg.sigma_poly(c)
                d = alg.delta_poly(c)
                if not d.is_zero():
                    out[i] = out[i] + d
            coeffs = out
        return OreOperator(coeffs, alg)

    def __mul__(self, other: "OreOperator") -> "OreOperator":
        _check_same_algebra(self.algebra, other.algebra)
        alg = self.algebra
        res = OreOperator.zero(alg)
        cur = other
        for i, p in enumerate(self.coeffs):
            if i > 0:
                cur = cur.d_shift(1)
            if not p.is_zero():
                res = res + cur.scale_poly(p)
        return res

    def to_rational(self) -> "RatOreOperator":
        return RatOreOperator(
            tuple(RatFunc.from_poly(c) for c in self.coeffs), self.algebra, trusted=True
        )

    def r_content(self):
        """Gcd in R of the contents of all coefficients."""
        dom = self.algebra.dom
        g = dom.zero
        for c in self.coeffs:
            g = dom.gcd(g, c.content())
            if dom.is_one(g):
                break
        return g

    def r_primitive_part(self) -> "OreOperator":
        dom = self.algebra.dom
        g = self.r_content()
        if dom.is_zero(g) or dom.is_one(g):
            return self
        return OreOperator(
            tuple(
                Poly(tuple(dom.exact_div(v, g) for v in c.coeffs), dom, trusted=True)
                for c in self.coeffs
            ),
            self.algebra,
            trusted=True,
        )

    def poly_content(self) -> Poly:
        """Gcd in R[x] of all coefficients."""
        g = Poly.zero(self.algebra.dom)
        for c in self.coeffs:
            g = gcd_poly(g, c)
            if g.is_one():
                break
        return g

    def normalized(self) -> "OreOperator":
        """R-content removed and leading unit canonicalized."""
        op = self.r_primitive_part()
        if op.is_zero():
            return op
        dom = self.algebra.dom
        u = dom.canonical_unit(op.lc().lc())
        if dom.is_one(u):
            return op
        return OreOperator(
            tuple(
                Poly(tuple(dom.exact_div(v, u) for v in c.coeffs), dom, trusted=True)
                for c in op.coeffs
            ),
            self.algebra,
            trusted=True,
        )

    def __repr__(self):
        return f"OreOperator({operator_str(self)})"


class RatOreOperator(_OpBase):
    """Operator with rational-function coefficients."""

    def _zero_coeff(self):
        return RatFunc.zero(self.algebra.dom)

    @staticmethod
    def _is_zero_coeff(c) -> bool:
        return c.is_zero()

    @staticmethod
    def zero(algebra: OreAlgebra) -> "RatOreOperator":
        return RatOreOperator((), algebra, trusted=True)

    def scale_rat(self, r: RatFunc) -> "RatOreOperator":
        if r.is_zero():
            return RatOreOperator.zero(self.algebra)
        return RatOreOperator(
            tuple(c * r for c in self.coeffs), self.algebra, trusted=True
        )

    def d_shift(self, j: int) -> "RatOreOperator":
        alg = self.algebra
        coeffs = list(self.coeffs)
        for _ in range(j):
            out = [RatFunc.zero(alg.dom)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                out[i + 1] = out[i + 1] + alg.sigma_rat(c)
                d = alg.delta_rat(c)
                if not d.is_zero():
                    out[i] = out[i] + d
            coeffs = out
        return RatOreOperator(coeffs, alg)

    def __mul__(self, other: "RatOreOperator") -> "RatOreOperator":
        _check_same_algebra(self.algebra, other.algebra)
        alg = self.algebra
        res = RatOreOperator.zero(alg)
        cur = other
        for i, p in enumerate(self.coeffs):
            if i > 0:
                cur = cur.d_shift(1)
            if not p.is_zero():
                res = res + cur.scale_rat(p)
        return res

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)

    def as_operator(self) -> OreOperator:
        return OreOperator(
            tuple(c.as_poly() for c in self.coeffs), self.algebra, trusted=True
        )

    def __repr__(self):
        return f"RatOreOperator({operator_str(self)})"


def rquo_rrem(F: RatOreOperator, G: RatOreOperator) -> Tuple[RatOreOperator, RatOreOperator]:
    """Right division in Q_R(x)[D]: F = Q*G + R with ord(R) < ord(G)."""
    _check_same_algebra(F.algebra, G.algebra)
    if G.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    alg = F.algebra
    glc = G.lc()
    q_coeffs: List[RatFunc] = []
    R = F
    while not R.is_zero() and R.order >= G.order:
        k = R.order - G.order
        c = R.lc() / alg.sigma_rat(glc, k)
        # R -= c * D^k * G
        R = R - G.d_shift(k).scale_rat(c)
        while len(q_coeffs) <= k:
            q_coeffs.append(RatFunc.zero(alg.dom))
        q_coeffs[k] = q_coeffs[k] + c
        if not R.is_zero() and R.order >= G.order + k:
            raise AssertionError("right division failed to reduce the order")
    return RatOreOperator(q_coeffs, alg), R


def rrem(F: RatOreOperator, G: RatOreOperator) -> RatOreOperator:
    """Right remainder of F by G."""
    return rquo_rrem(F, G)[1]


def rrem_op(F: OreOperator, G: OreOperator) -> RatOreOperator:
    return rrem(F.to_rational(), G.to_rational())


def clear_denominators(P: RatOreOperator) -> Tuple[Poly, OreOperator]:
    """(b, P') with P' = b*P polynomial and b the lcm of the denominators."""
    dom = P.algebra.dom
    b = Poly.one(dom)
    for c in P.coeffs:
        b = lcm_poly(b, c.den)
    coeffs = []
    for c in P.coeffs:
        coeffs.append(c.num * exact_div_poly(b, c.den))
    return b, OreOperator(coeffs, P.algebra)


def _is_atomic(s: str) -> bool:
    """No top-level '+', '-', or '/' outside parentheses, nor a leading sign."""
    if s.startswith("-"):
        return False
    depth = 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-":
            return False
    return True


def _wrap(s: str) -> str:
    return s if _is_atomic(s) else f"({s})"


def operator_str(op) -> str:
    """Canonical rendering, decreasing D-powers, coefficients parenthesized."""
    alg = op.algebra
    if op.is_zero():
        return "0"
    var, dvar = alg.var, alg.dvar
    parts: List[str] = []
    for i in range(op.order, -1, -1):
        c = op.coeff(i)
        if isinstance(c, RatFunc):
            if c.is_zero():
                continue
            cs = ratfunc_str(c, var)
            one_like = c.is_polynomial() and c.num.is_one()
            neg_one = c.is_polynomial() and (-c.num).is_one()
        else:
            if c.is_zero():
                continue
            cs = poly_str(c, var)
            one_like = c.is_one()
            neg_one = (-c).is_one()
        if i == 0:
            term = cs
        else:
            dpart = dvar if i == 1 else f"{dvar}^{i}"
            if one_like:
                term = dpart
            elif neg_one:
                term = f"-{dpart}"
            else:
                term = f"{_wrap(cs)}*{dpart}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-") and not term.startswith("-("):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out
