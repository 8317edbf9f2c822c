"""Complete desingularization, removability queries, and primitivity.

A completely desingularized operator has a leading coefficient whose degree
is minimal inside the contraction ideal and whose content divides the
content of every desingularized operator's leading coefficient.  It is read
off the reduced basis of the top coefficient ideal once the contraction
ideal is known, with cofactor tracing to produce the operator itself.

Removability of a factor p of lc(L) is decided by searching the coefficient
ideals order by order; a constant non-unit factor of an R-primitive operator
is non-removable unconditionally (a Gauss-lemma argument), which gives a
search-free certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .budget import StepBudget, ensure_budget
from .contraction import (
    CoefficientIdeal,
    ContractionBasis,
    SubmoduleBasis,
    coefficient_ideal,
    contract,
    stabilization_check,
    submodule_basis,
)
from .modgb import groebner, minimal_degree_element
from .ore import OreOperator, RatOreOperator, rquo_rrem
from .poly import Poly, divides_poly, exact_div_poly, gcd_poly


@dataclass
class CompleteDesingResult:
    """Operator of minimal leading degree and minimal leading content."""

    F: OreOperator
    order: int
    f: Poly  # lc(F), minimal-degree element of the top coefficient ideal
    content: object  # content of f in R
    primitive_part: Poly  # g with sigma^(r - order)(f) = content * g
    cofactors: Tuple[Tuple[OreOperator, Poly], ...]  # (basis element, multiplier)
    contraction: ContractionBasis
    submodule: SubmoduleBasis


@dataclass
class RemovabilityReport:
    p: Poly
    verdict: str  # "removable" | "non-removable" | "unknown"
    order: Optional[int] = None
    witness: Optional[RatOreOperator] = None  # the p-removing operator
    removed: Optional[OreOperator] = None  # witness * L, inside R[x][D]
    w: Optional[Poly] = None
    v: Optional[Poly] = None
    primitivity_gcd: object = None  # set for the constant-factor certificate
    searched_orders: int = 0


def is_r_primitive(L: OreOperator) -> Tuple[bool, object]:
    """Whether the R-contents of the coefficients have unit gcd; returns the gcd."""
    if L.is_zero():
        raise ValueError("primitivity of the zero operator is undefined")
    g = L.r_content()
    return L.algebra.dom.is_unit(g), g


def completely_desingularize(L: OreOperator, *,
                             budget: Optional[StepBudget] = None,
                             bound: Optional[int] = None) -> CompleteDesingResult:
    """Minimal-degree, minimal-content desingularization of L.

    Runs the contraction, takes the highest order l among its generators,
    rebuilds a basis of M_l, and combines the order-l elements through the
    reduced basis of their leading-coefficient ideal.
    """
    budget = ensure_budget(budget)
    con = contract(L, bound, budget=budget)
    alg = L.algebra
    dom = alg.dom
    r = L.order
    ell = max(g.order for g in con.generators)

    if ell in con.submodule_cache:
        M = con.submodule_cache[ell]
    elif ell == con.k:
        M = con.submodule
    else:
        M = submodule_basis(L, ell, budget=budget)
        con.submodule_cache[ell] = M
    if not stabilization_check(L, ell, budget=budget,
                               submodule_cache=con.submodule_cache,
                               ideal_cache=con.ideal_cache):
        raise AssertionError(
            "contraction basis order did not stabilize; cannot certify complete "
            "desingularization"
        )

    top = [B for B in M.operators if B.order == ell]
    if not top:
        raise AssertionError("submodule basis has no element of the top order")
    lcs = [B.lc() for B in top]
    G = groebner(lcs, rank=1, dom=dom, budget=budget)
    f, trace_row = minimal_degree_element(G)

    # minimality certificates
    degs = [g.components[0].degree for g in G.generators]
    if f.degree != min(degs):
        raise AssertionError("minimal-degree element selection failed")
    c_f, _ = f.content_primitive()
    for g in G.generators:
        p = g.components[0]
        if p.degree == f.degree and not dom.divides(c_f, p.content()):
            raise AssertionError("content minimality violated inside the reduced basis")

    F = OreOperator.zero(alg)
    cof = []
    for u, B in zip(trace_row, top):
        if not u.is_zero():
            F = F + B.scale_poly(u)
        cof.append((B, u))
    if F.order != ell or F.lc() != f:
        raise AssertionError("cofactor combination lost the leading coefficient")

    shifted = alg.sigma_poly(f, r - ell)
    content, g = shifted.content_primitive()
    if content != c_f:
        # sigma is an R-automorphism, so it preserves canonical contents
        raise AssertionError("content changed under the sigma shift")

    return CompleteDesingResult(
        F=F, order=ell, f=f, content=c_f, primitive_part=g,
        cofactors=tuple(cof), contraction=con, submodule=M,
    )


def content_of_desing_ideal(L: OreOperator, *,
                            budget: Optional[StepBudget] = None):
    """Generator of the ideal of contents of desingularized leading coefficients."""
    return completely_desingularize(L, budget=budget).content


def _lowest_terms(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    g = gcd_poly(num, den)
    if not g.is_one():
        num = exact_div_poly(num, g)
        den = exact_div_poly(den, g)
    return num, den


def is_removable(L: OreOperator, p: Poly, max_order: Optional[int] = None, *,
                 budget: Optional[StepBudget] = None,
                 force_search: bool = False) -> RemovabilityReport:
    """Search for a p-removing operator of order up to ``max_order``.

    A removing operator P of order k satisfies P*L in R[x][D] and
    sigma^(-k)(lc(P*L)) = (w / (v*p)) * lc(L) with gcd(w, p) = 1.  For a
    constant non-unit p and R-primitive L the answer is "non-removable"
    without search.
    """
    alg = L.algebra
    dom = alg.dom
    r = L.order
    if r < 1:
        raise ValueError("removability needs an operator of positive order")
    if p.is_zero() or not divides_poly(p, L.lc()):
        raise ValueError("candidate factor must divide the leading coefficient")
    budget = ensure_budget(budget)
    if max_order is None:
        max_order = L.lc().degree + r

    if p.is_constant():
        pc = p.constant_value()
        if dom.is_unit(pc):
            # a unit is trivially removable at order 0 by its inverse
            inv = dom.exact_div(dom.one, pc)
            removed = OreOperator(tuple(c.scale(inv) for c in L.coeffs), alg)
            # identity: sigma^0(lc(P*L)) = (1 / (1 * p)) * lc(L)
            one = Poly.one(dom)
            return RemovabilityReport(
                p=p, verdict="removable", order=0,
                witness=_const_witness(alg, inv),
                removed=removed, w=one, v=one)
        primitive, g = is_r_primitive(L)
        if primitive and not force_search:
            return RemovabilityReport(
                p=p, verdict="non-removable", primitivity_gcd=g)

    sub_cache: Dict[int, SubmoduleBasis] = {}
    lcL = L.lc()
    for k in range(max_order + 1):
        M = submodule_basis(L, r + k, budget=budget)
        sub_cache[r + k] = M
        I = coefficient_ideal(M, budget=budget)
        if not I.gb.generators:
            continue
        nz_index = [i for i, gpoly in enumerate(I.generators) if not gpoly.is_zero()]
        for j, gen in enumerate(I.gb.generators):
            ell = gen.components[0]
            ell0 = alg.sigma_poly(ell, -k)
            w, v = _lowest_terms(p * ell0, lcL)
            if not gcd_poly(w, p).is_one():
                continue
            # build the member of M_{r+k} with leading coefficient ell
            B = OreOperator.zero(alg)
            for t, u in enumerate(I.gb.trace[j]):
                if not u.is_zero():
                    B = B + M.operators[nz_index[t]].scale_poly(u)
            if B.order != r + k or B.lc() != ell:
                raise AssertionError("trace combination lost the leading coefficient")
            # verify v * p * sigma^(-k)(lc B) == w * lc(L)
            if v * p * ell0 != w * lcL:
                raise AssertionError("removability witness identity failed")
            Q, rem = rquo_rrem(B.to_rational(), L.to_rational())
            if not rem.is_zero():
                raise AssertionError("witness is not a left multiple of L")
            return RemovabilityReport(
                p=p, verdict="removable", order=k, witness=Q, removed=B,
                w=w, v=v, searched_orders=k + 1)
    return RemovabilityReport(p=p, verdict="unknown", searched_orders=max_order + 1)


def _const_witness(alg, inv) -> RatOreOperator:
    from .poly import RatFunc

    return RatOreOperator((RatFunc.from_poly(Poly.const(inv, alg.dom)),), alg)
