"""Closure operations for P-recursive sequences over the integers.

Provides annihilators of products of two P-recursive sequences (linear
algebra over Q(n) on the shifted-product ansatz), of factorial-scaled
sequences, and the combined check of the minimal-leading-coefficient
property for products n! * a_n * b_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .budget import StepBudget, ensure_budget
from .desing import CompleteDesingResult, completely_desingularize
from .domains import ZZ
from .ore import OreAlgebra, OreOperator, shift_algebra
from .poly import Poly, RatFunc, exact_div_poly, gcd_poly, lcm_poly


class UnsupportedShapeError(ValueError):
    """Input recurrence does not have the shape an operation requires."""


@dataclass(frozen=True)
class PRecurrence:
    """A P-recursive sequence given by its annihilator in the shift algebra.

    ``back_shift`` records the substitution n -> n + order used to turn a
    backward recurrence ("n a_n = ...") into the forward operator, so that
    reports can translate results back to that convention.
    """

    annihilator: OreOperator
    initial_values: Optional[Tuple[Fraction, ...]] = None
    back_shift: int = 0

    def __post_init__(self):
        op = self.annihilator
        if op.algebra.kind != "shift":
            raise UnsupportedShapeError("P-recurrences live in a shift algebra")
        if op.order < 1:
            raise UnsupportedShapeError("annihilator must have positive order")
        if self.initial_values is not None and len(self.initial_values) < op.order:
            raise UnsupportedShapeError(
                "need at least as many initial values as the order"
            )

    @property
    def order(self) -> int:
        return self.annihilator.order


def from_backward_coeffs(coeffs: Dict[int, Poly], algebra: OreAlgebra,
                         initial_values: Optional[Sequence[Fraction]] = None
                         ) -> PRecurrence:
    """Recurrence sum_k c_k(n) * a[n-k] = 0 as a forward-shift annihilator."""
    if not coeffs:
        raise UnsupportedShapeError("empty recurrence")
    m = max(coeffs)
    if m < 1 or 0 not in coeffs or coeffs[0].is_zero():
        raise UnsupportedShapeError("recurrence must relate a[n] to earlier terms")
    ops = [Poly.zero(algebra.dom)] * (m + 1)
    for k, c in coeffs.items():
        ops[m - k] = c.compose_x_plus(m)
    op = OreOperator(ops, algebra)
    iv = tuple(Fraction(v) for v in initial_values) if initial_values is not None else None
    return PRecurrence(op, iv, back_shift=m)


def _primitive_normalized(op: OreOperator) -> OreOperator:
    """Divide out the full R[x]-content and canonicalize the leading unit."""
    g = op.poly_content()
    if not (g.is_one() or g.is_zero()):
        op = OreOperator([exact_div_poly(c, g) for c in op.coeffs], op.algebra)
    return op.normalized()


def _shift_reduction_rows(A: OreOperator, count: int) -> List[Tuple[RatFunc, ...]]:
    """Row s expresses a_{n+s} over the basis a_n, ..., a_{n+p-1} in Q(n)."""
    alg = A.algebra
    dom = alg.dom
    p = A.order
    rows: List[Tuple[RatFunc, ...]] = []
    for s in range(min(p, count)):
        unit = [RatFunc.zero(dom)] * p
        unit[s] = RatFunc.one(dom)
        rows.append(tuple(unit))
    for s in range(p, count):
        # recurrence at n + s - p: e_p a_{n+s} = -sum e_i a_{n+s-p+i}
        lead = RatFunc.from_poly(alg.sigma_poly(A.lc(), s - p))
        acc = [RatFunc.zero(dom)] * p
        for i in range(p):
            ci = A.coeff(i)
            if ci.is_zero():
                continue
            c = RatFunc.from_poly(alg.sigma_poly(ci, s - p)) / lead
            prev = rows[s - p + i]
            for j in range(p):
                if not prev[j].is_zero():
                    acc[j] = acc[j] - c * prev[j]
        rows.append(tuple(acc))
    return rows


def product_annihilator(A: PRecurrence, B: PRecurrence, *,
                        budget: Optional[StepBudget] = None) -> PRecurrence:
    """Annihilator of the termwise product of the two sequences.

    Shifted products a_{n+s} b_{n+s} are expressed over the pq tensor basis
    a_{n+i} b_{n+j}; the first linear dependence over Q(n) gives the
    recurrence, whose denominators are then cleared into Z[n][D].
    """
    alg = A.annihilator.algebra
    if alg != B.annihilator.algebra:
        raise ValueError("recurrences must live in the same shift algebra")
    dom = alg.dom
    p, q = A.order, B.order
    dim = p * q
    rows_a = _shift_reduction_rows(A.annihilator, dim + 1)
    rows_b = _shift_reduction_rows(B.annihilator, dim + 1)

    # row-reduce the kron vectors, tracking combinations over the inputs
    pivots: List[Tuple[int, List[RatFunc], Dict[int, RatFunc]]] = []
    for s in range(dim + 1):
        vec = [RatFunc.zero(dom)] * dim
        for i in range(p):
            ai = rows_a[s][i]
            if ai.is_zero():
                continue
            for j in range(q):
                bj = rows_b[s][j]
                if not bj.is_zero():
                    vec[i * q + j] = ai * bj
        combo: Dict[int, RatFunc] = {s: RatFunc.one(dom)}
        for piv, pvec, pcombo in pivots:
            c = vec[piv]
            if c.is_zero():
                continue
            for t in range(dim):
                if not pvec[t].is_zero():
                    vec[t] = vec[t] - c * pvec[t]
            for key, val in pcombo.items():
                combo[key] = combo.get(key, RatFunc.zero(dom)) - c * val
        nz = next((t for t in range(dim) if not vec[t].is_zero()), None)
        if nz is None:
            # dependence found: sum combo[k] * c_{n+k} = 0
            den = Poly.one(dom)
            for val in combo.values():
                den = lcm_poly(den, val.den)
            coeffs = [Poly.zero(dom)] * (s + 1)
            for k, val in combo.items():
                coeffs[k] = val.num * exact_div_poly(den, val.den)
            op = _primitive_normalized(OreOperator(coeffs, alg))
            return PRecurrence(op, _merged_initials(A, B, op.order))
        inv = vec[nz].inv()
        pvec = [v * inv for v in vec]
        pcombo = {k: v * inv for k, v in combo.items()}
        pivots.append((nz, pvec, pcombo))
    raise AssertionError("no dependence found within the tensor dimension")


def _merged_initials(A: PRecurrence, B: PRecurrence, order: int):
    if A.initial_values is None or B.initial_values is None:
        return None
    terms_a = unroll(A, order)
    terms_b = unroll(B, order)
    return tuple(x * y for x, y in zip(terms_a, terms_b))


def factorial_scale(A: PRecurrence, *, scale_initials: bool = True) -> PRecurrence:
    """Annihilator of n! * a_n from an annihilator of a_n.

    If sum e_i(n) a_{n+i} = 0 then sum e_i(n) (n+k)!/(n+i)! v_{n+i} = 0 for
    v_n = n! a_n; the cofactors (n+i+1)...(n+k) are polynomials, the order
    and the leading coefficient are unchanged.
    """
    op = A.annihilator
    alg = op.algebra
    dom = alg.dom
    k = op.order
    coeffs = []
    for i in range(k + 1):
        factor = Poly.one(dom)
        for j in range(i + 1, k + 1):
            factor = factor * Poly.from_int_list([j, 1], dom)
        coeffs.append(op.coeff(i) * factor)
    out = _primitive_normalized(OreOperator(coeffs, alg))
    iv = None
    if scale_initials and A.initial_values is not None:
        fact = 1
        vals = []
        for n, v in enumerate(A.initial_values):
            if n > 0:
                fact *= n
            vals.append(v * fact)
        iv = tuple(vals)
    return PRecurrence(out, iv, back_shift=A.back_shift)


def unroll(rec: PRecurrence, count: int) -> List[Fraction]:
    """First ``count`` terms of the sequence, exactly, from the initial values."""
    if rec.initial_values is None:
        raise ValueError("unrolling needs initial values")
    op = rec.annihilator
    p = op.order
    vals = [Fraction(v) for v in rec.initial_values[:p]]
    while len(vals) < count:
        n = len(vals) - p
        lead = op.lc().eval_fraction(Fraction(n))
        if lead == 0:
            raise ZeroDivisionError(
                f"leading coefficient vanishes at n = {n}; cannot unroll"
            )
        acc = Fraction(0)
        for i in range(p):
            acc += Fraction(op.coeff(i).eval_fraction(Fraction(n))) * vals[n + i]
        vals.append(-acc / lead)
    return vals[:count]


def annihilates(op: OreOperator, terms: Sequence[Fraction]) -> bool:
    """Check that the operator kills the given initial segment of a sequence."""
    r = op.order
    for n in range(len(terms) - r):
        acc = Fraction(0)
        for i in range(r + 1):
            acc += Fraction(op.coeff(i).eval_fraction(Fraction(n))) * terms[n + i]
        if acc != 0:
            return False
    return True


@dataclass
class KrattenthalerVerdict:
    holds: bool
    operator: OreOperator  # the completely desingularized annihilator
    order: int
    lc: Poly
    backward_coeffs: Tuple[Poly, ...]  # alpha_1, ..., alpha_order
    product: PRecurrence  # annihilator of n! a_n b_n before desingularization
    result: CompleteDesingResult


def check_krattenthaler(A: PRecurrence, B: PRecurrence, *,
                        budget: Optional[StepBudget] = None) -> KrattenthalerVerdict:
    """Certify whether n! a_n b_n again satisfies "n c_n = ..." over Z[n].

    Both inputs must come from backward recurrences with leading coefficient
    of primitive part n + order.  The product annihilator is factorial-scaled
    and completely desingularized; the verdict holds exactly when the minimal
    leading coefficient is n + order with content 1.
    """
    budget = ensure_budget(budget)
    for rec in (A, B):
        lead = rec.annihilator.lc()
        expect = Poly.from_int_list([rec.order, 1], rec.annihilator.algebra.dom)
        if lead.primitive() != expect:
            raise UnsupportedShapeError(
                "annihilator leading coefficient must have primitive part "
                f"n + {rec.order}"
            )
    product = factorial_scale(product_annihilator(A, B, budget=budget))
    res = completely_desingularize(product.annihilator, budget=budget)
    dom = product.annihilator.algebra.dom
    target = Poly.from_int_list([res.order, 1], dom)
    holds = res.f == target
    alphas = []
    for j in range(1, res.order + 1):
        c = res.F.coeff(res.order - j).compose_x_plus(-res.order)
        alphas.append(-c)
    return KrattenthalerVerdict(
        holds=holds, operator=res.F, order=res.order, lc=res.f,
        backward_coeffs=tuple(alphas), product=product, result=res,
    )
