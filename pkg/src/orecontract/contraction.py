"""Contraction of the left ideal of an Ore operator to R[x][D].

Pipeline: right remainders of D^i by L give a linear system over R[x] whose
syzygies are exactly the members of the contraction ideal of order at most k
(the submodule M_k); the ideal of their k-th coefficients (I_k) detects
stabilization and yields a desingularized operator via an extended gcd over
the fraction field; saturating R[x][D]*M_k by the content of that operator's
leading coefficient produces a basis of the full contraction ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .budget import ResourceLimitError, StepBudget, ensure_budget
from .domains import Domain
from .modgb import GroebnerBasis, ModuleElement, groebner, ideal_equal, kernel, span_equal
from .ore import OreAlgebra, OreOperator, RatOreOperator, clear_denominators, rquo_rrem
from .ore_gb import SaturationResult, saturate_by_constant
from .poly import (
    ExtendedGcd,
    Poly,
    RatFunc,
    exact_div_poly,
    extended_gcd_over_fraction_field,
    gcd_poly,
    lcm_poly,
    quo_rem_field,
)


class StabilizationCapError(ResourceLimitError):
    """Iterative deepening hit the hard order cap without stabilizing."""


@dataclass
class SubmoduleBasis:
    """Generators of M_k = {P in cont(L) : ord(P) <= k} as an R[x]-module."""

    k: int
    operators: Tuple[OreOperator, ...]
    matrix: Tuple[Tuple[Poly, ...], ...]  # (k+1) x r over R[x], row i ~ rrem(D^i, L)
    L: OreOperator
    clearing: Tuple[Poly, ...]  # per-column denominator multipliers

    def as_module_elements(self) -> List[ModuleElement]:
        dom = self.L.algebra.dom
        out = []
        for op in self.operators:
            comps = [op.coeff(i) for i in range(self.k + 1)]
            out.append(ModuleElement(comps))
        return out


@dataclass
class CoefficientIdeal:
    """I_k: the ideal of k-th coefficients of members of M_k."""

    k: int
    generators: Tuple[Poly, ...]
    gb: GroebnerBasis


@dataclass
class DesingCertificate:
    """A desingularized operator with its exact-division witnesses.

    The witness identity is const_a * lc(L) = const_b * removed_factor *
    sigma^(r-k)(s), all over R[x].
    """

    T: OreOperator
    k: int
    s: Poly
    content: object
    primitive_part: Poly
    removed_factor: Poly
    const_a: object
    const_b: object
    cofactors: Tuple[Poly, ...]  # over the submodule basis operators
    extended: ExtendedGcd


@dataclass
class ContractionBasis:
    generators: Tuple[OreOperator, ...]
    certificate: DesingCertificate
    constant: object
    k: int
    submodule: SubmoduleBasis
    saturation: SaturationResult
    submodule_cache: Dict[int, SubmoduleBasis] = field(default_factory=dict)
    ideal_cache: Dict[int, CoefficientIdeal] = field(default_factory=dict)


def build_system(L: OreOperator, k: int, *, budget: Optional[StepBudget] = None
                 ) -> Tuple[Tuple[Tuple[Poly, ...], ...], Tuple[Poly, ...]]:
    """The (k+1) x r matrix of cleared right remainders rrem(D^i, L).

    Denominators are cleared per column (each column j is scaled by the lcm
    of its denominators); diagonal column scaling leaves the syzygy module
    untouched, so (z_k, ..., z_0) A = 0 over R[x] holds exactly for the
    coefficient vectors of members of M_k.  Returns the matrix rows and the
    tuple of column multipliers.
    """
    r = L.order
    if r < 1:
        raise ValueError("operator must have positive order")
    if k < r:
        raise ValueError(f"order bound {k} is below the operator order {r}")
    alg = L.algebra
    dom = alg.dom
    Lr = L.to_rational()

    rem_rows: List[List[RatFunc]] = []
    cur = RatOreOperator((RatFunc.one(dom),), alg)  # rrem(D^0, L) = 1
    for i in range(k + 1):
        if i > 0:
            cur = cur.d_shift(1)
            if cur.order >= r:
                # one elimination step brings the order back below r
                c = cur.lc() / alg.sigma_rat(Lr.lc(), cur.order - r)
                cur = cur - Lr.d_shift(cur.order - r).scale_rat(c)
        rem_rows.append([cur.coeff(j) for j in range(r)])

    col_mult = []
    for j in range(r):
        d = Poly.one(dom)
        for row in rem_rows:
            d = lcm_poly(d, row[j].den)
        col_mult.append(d)
    rows = []
    for row in rem_rows:
        rows.append(tuple(
            c.num * exact_div_poly(col_mult[j], c.den) for j, c in enumerate(row)
        ))
    return tuple(rows), tuple(col_mult)


def submodule_basis(L: OreOperator, k: int, *, budget: Optional[StepBudget] = None,
                    seed_ops: Optional[Tuple[OreOperator, ...]] = None
                    ) -> SubmoduleBasis:
    """An R[x]-generating set of M_k via the syzygy module of the system.

    ``seed_ops`` may hold known members of M_k (for instance a basis of a
    lower submodule and its D-shifts); their coefficient vectors are fed to
    the kernel computation as verified seed syzygies.
    """
    rows, d = build_system(L, k, budget=budget)
    if k == L.order:
        # M_r consists of the R[x]-multiples of L divided by the common
        # polynomial factor of its coefficients: z_i * lc = z_r * l_i forces
        # z to be a multiple of the primitive coefficient vector.
        g = L.poly_content()
        base = L if g.is_one() or g.is_zero() else OreOperator(
            [exact_div_poly(c, g) for c in L.coeffs], L.algebra)
        return SubmoduleBasis(k, (base.normalized(),), rows, L, d)
    seeds = None
    if seed_ops:
        seeds = []
        for B in seed_ops:
            for op in (B, B.d_shift(1)):
                if 0 <= op.order <= k:
                    seeds.append([op.coeff(i) for i in range(k + 1)])
    syz = kernel(rows, budget=budget, seeds=seeds)
    ops = []
    for z in syz:
        ops.append(OreOperator(z, L.algebra))
    ops.sort(key=lambda op: (op.order, tuple(c.sort_key() for c in op.coeffs)))
    return SubmoduleBasis(k, tuple(ops), rows, L, d)


def coefficient_ideal(M: SubmoduleBasis, *, budget: Optional[StepBudget] = None
                      ) -> CoefficientIdeal:
    """I_k, generated by the k-th coefficients of the submodule generators."""
    dom = M.L.algebra.dom
    gens = tuple(op.coeff(M.k) for op in M.operators)
    nz = [g for g in gens if not g.is_zero()]
    gb = groebner(nz, rank=1, dom=dom, budget=budget)
    return CoefficientIdeal(M.k, gens, gb)


def _sigma_ideal(alg: OreAlgebra, I: CoefficientIdeal, j: int,
                 budget: Optional[StepBudget]) -> GroebnerBasis:
    gens = [alg.sigma_poly(g.components[0], j) for g in I.gb.generators]
    return groebner(gens, rank=1, dom=alg.dom, budget=budget)


def stabilization_check(L: OreOperator, k: int, *,
                        budget: Optional[StepBudget] = None,
                        submodule_cache: Optional[Dict[int, SubmoduleBasis]] = None,
                        ideal_cache: Optional[Dict[int, CoefficientIdeal]] = None
                        ) -> bool:
    """True iff sigma(I_k) = I_{k+1}; then R[x][D]*M_k = R[x][D]*M_{k+1}."""
    if k < L.order:
        raise ValueError("stabilization is only defined from the operator order on")
    ik = _cached_ideal(L, k, budget, submodule_cache, ideal_cache)
    ik1 = _cached_ideal(L, k + 1, budget, submodule_cache, ideal_cache)
    shifted = _sigma_ideal(L.algebra, ik, 1, budget)
    return ideal_equal(shifted, ik1.gb)


def _cached_ideal(L, k, budget, submodule_cache, ideal_cache) -> CoefficientIdeal:
    if ideal_cache is not None and k in ideal_cache:
        return ideal_cache[k]
    if submodule_cache is not None and k in submodule_cache:
        M = submodule_cache[k]
    else:
        seed_ops = None
        if submodule_cache:
            below = [j for j in submodule_cache if j < k]
            if below:
                seed_ops = submodule_cache[max(below)].operators
        M = submodule_basis(L, k, budget=budget, seed_ops=seed_ops)
        if submodule_cache is not None:
            submodule_cache[k] = M
    I = coefficient_ideal(M, budget=budget)
    if ideal_cache is not None:
        ideal_cache[k] = I
    return I


def desingularized_operator(M: SubmoduleBasis, *, budget: Optional[StepBudget] = None
                            ) -> DesingCertificate:
    """Desingularized operator from the minimal-degree coefficient-ideal element.

    The extended Euclidean algorithm over the fraction field, applied to the
    reduced basis of I_k and traced back to the submodule generators, yields
    T with lc(T) = s where s generates the extension of I_k in Q_R[x].
    """
    L = M.L
    alg = L.algebra
    dom = alg.dom
    r = L.order
    I = coefficient_ideal(M, budget=budget)
    if not I.gb.generators:
        raise ValueError("zero coefficient ideal; no desingularized operator")

    gb_polys = [g.components[0] for g in I.gb.generators]
    ext = extended_gcd_over_fraction_field(gb_polys)
    s = ext.s
    # compose the Euclid cofactors (over the reduced basis) with its trace
    # (over the raw generators [D^k]B_i)
    cof = [Poly.zero(dom) for _ in M.operators]
    nz_index = [i for i, g in enumerate(I.generators) if not g.is_zero()]
    for j, e in enumerate(ext.cofactors):
        if e.is_zero():
            continue
        for t, p in enumerate(I.gb.trace[j]):
            if not p.is_zero():
                cof[nz_index[t]] = cof[nz_index[t]] + e * p
    T = OreOperator.zero(alg)
    for c, B in zip(cof, M.operators):
        if not c.is_zero():
            T = T + B.scale_poly(c)
    if T.order != M.k or T.lc() != s:
        raise AssertionError("cofactor combination lost the leading coefficient")

    a, g = s.content_primitive()

    # witness of the removed factor: const_a * lc(L) = const_b * q * sigma^(r-k)(s)
    shifted = alg.sigma_poly(s, r - M.k)
    quot, rem = quo_rem_field(L.lc().to_field(), shifted.to_field())
    if not rem.is_zero():
        raise ValueError(
            "no desingularized operator of this order: shifted minimal leading "
            "coefficient does not divide lc(L)"
        )
    field = dom.fraction_field()
    va = dom.one
    for c in quot.coeffs:
        _, den = field.num_den(c)
        va = dom.lcm(va, den)
    va_f = field.from_base(va)
    cleared = Poly([field.num_den(field.mul(va_f, c))[0] for c in quot.coeffs], dom)
    wb, q = cleared.content_primitive()
    lhs = L.lc().scale(va)
    rhs = (q * shifted).scale(wb)
    if lhs != rhs:
        raise AssertionError("removed-factor witness failed to re-expand")

    return DesingCertificate(
        T=T, k=M.k, s=s, content=a, primitive_part=g,
        removed_factor=q, const_a=va, const_b=wb,
        cofactors=tuple(cof), extended=ext,
    )


def contract(L: OreOperator, bound: Optional[int] = None, *,
             budget: Optional[StepBudget] = None,
             certificate_cap: int = 64) -> ContractionBasis:
    """Basis of cont(L) = Q_R(x)[D]*L intersected with R[x][D].

    Order-bound policy: an explicit ``bound`` wins; otherwise iterative
    deepening from the operator order, stopping at the first k where the
    coefficient ideal stabilizes for two consecutive orders, with a hard cap
    of order + deg(lc) + 4 that fails loudly when exceeded.
    """
    r = L.order
    if r < 1:
        raise ValueError("contraction needs an operator of positive order")
    budget = ensure_budget(budget)
    sub_cache: Dict[int, SubmoduleBasis] = {}
    ideal_cache: Dict[int, CoefficientIdeal] = {}

    if bound is not None:
        if bound < r:
            raise ValueError(f"bound {bound} is below the operator order {r}")
        k = bound
    else:
        cap = r + L.lc().degree + 4
        k = None
        for cand in range(r, cap + 1):
            ok1 = stabilization_check(
                L, cand, budget=budget,
                submodule_cache=sub_cache, ideal_cache=ideal_cache)
            if not ok1:
                continue
            ok2 = stabilization_check(
                L, cand + 1, budget=budget,
                submodule_cache=sub_cache, ideal_cache=ideal_cache)
            if ok2:
                k = cand
                break
        if k is None:
            raise StabilizationCapError(
                f"coefficient ideals did not stabilize up to the cap {cap}"
            )

    if k in sub_cache:
        M = sub_cache[k]
    else:
        M = submodule_basis(L, k, budget=budget)
        sub_cache[k] = M
    cert = desingularized_operator(M, budget=budget)
    sat = saturate_by_constant(
        list(M.operators), cert.content, budget=budget,
        certificate_cap=certificate_cap)
    return ContractionBasis(
        generators=sat.basis.generators,
        certificate=cert,
        constant=cert.content,
        k=k,
        submodule=M,
        saturation=sat,
        submodule_cache=sub_cache,
        ideal_cache=ideal_cache,
    )


def operators_span_equal(ops_a, ops_b, k: int, *,
                         budget: Optional[StepBudget] = None) -> bool:
    """R[x]-module equality of two operator families inside M_k coordinates."""
    def to_elems(ops):
        out = []
        for op in ops:
            if op.order > k:
                raise ValueError("operator order exceeds the module bound")
            out.append(ModuleElement([op.coeff(i) for i in range(k + 1)]))
        return out

    return span_equal(to_elems(ops_a), to_elems(ops_b), budget=budget)
