"""Left Groebner bases in R[x][D] and R[x,y][D] with a central variable y.

Monomials are commutative words x^a y^b D^c; the noncommutativity lives in
the coefficient commutation rule D*x = sigma(x)*D + delta(x).  For the two
supported rules sigma(x) = x + b with unit 1, so the head term of a left
monomial multiple is the exponent sum and the head coefficient is unchanged,
which makes strong Buchberger completion over the PID R carry over verbatim:
S-polynomials clear head-coefficient lcms, G-polynomials produce gcds.

Saturation of a left ideal by a nonzero constant c of R adjoins 1 - c*y and
eliminates y via a block order; the y-free part of the basis generates the
saturation.  Membership certificates (a power c^i pushing an element into the
original ideal, with left cofactors) are produced against a traced basis of
the original generators.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .budget import StepBudget, ensure_budget
from .domains import Domain
from .ore import OreAlgebra, OreOperator, SHIFT
from .poly import Poly

Term = Tuple[int, int, int]  # (x-degree, y-degree, D-degree)


class OreTermOrder:
    """D-major order, optionally with a dominating y block for elimination."""

    def __init__(self, eliminate_y: bool = False):
        self.eliminate_y = eliminate_y

    def key(self, term: Term):
        xd, yd, dd = term
        if self.eliminate_y:
            return (yd, dd, xd)
        return (dd, xd, yd)

    def __eq__(self, other):
        return isinstance(other, OreTermOrder) and self.eliminate_y == other.eliminate_y

    def __hash__(self):
        return hash(("OreTermOrder", self.eliminate_y))


class OrePoly:
    """Element of R[x,y][D] as a term dict; y commutes with everything."""

    __slots__ = ("terms", "algebra", "_dshift")

    def __init__(self, terms: Dict[Term, object], algebra: OreAlgebra, trusted=False):
        if trusted:
            self.terms = terms
        else:
            dom = algebra.dom
            self.terms = {t: c for t, c in terms.items() if not dom.is_zero(c)}
        self.algebra = algebra
        self._dshift = None

    @staticmethod
    def zero(algebra: OreAlgebra) -> "OrePoly":
        return OrePoly({}, algebra, trusted=True)

    @staticmethod
    def one(algebra: OreAlgebra) -> "OrePoly":
        return OrePoly({(0, 0, 0): algebra.dom.one}, algebra, trusted=True)

    @staticmethod
    def from_operator(op: OreOperator, ydeg: int = 0) -> "OrePoly":
        terms = {}
        dom = op.algebra.dom
        for dd, p in enumerate(op.coeffs):
            for xd, c in enumerate(p.coeffs):
                if not dom.is_zero(c):
                    terms[(xd, ydeg, dd)] = c
        return OrePoly(terms, op.algebra, trusted=True)

    def to_operator(self) -> OreOperator:
        alg = self.algebra
        dom = alg.dom
        if any(t[1] for t in self.terms):
            raise ValueError("element still involves the auxiliary variable")
        if not self.terms:
            return OreOperator.zero(alg)
        order = max(t[2] for t in self.terms)
        coeffs = []
        for dd in range(order + 1):
            xs = {xd: c for (xd, yd, d2), c in self.terms.items() if d2 == dd}
            if xs:
                top = max(xs)
                coeffs.append(Poly([xs.get(i, dom.zero) for i in range(top + 1)], dom))
            else:
                coeffs.append(Poly.zero(dom))
        return OreOperator(coeffs, alg)

    def is_zero(self) -> bool:
        return not self.terms

    def is_y_free(self) -> bool:
        return all(t[1] == 0 for t in self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, OrePoly)
            and self.algebra == other.algebra
            and self.terms == other.terms
        )

    def __add__(self, other: "OrePoly") -> "OrePoly":
        dom = self.algebra.dom
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = dom.add(out.get(t, dom.zero), c)
            if dom.is_zero(v):
                out.pop(t, None)
            else:
                out[t] = v
        return OrePoly(out, self.algebra, trusted=True)

    def __sub__(self, other: "OrePoly") -> "OrePoly":
        dom = self.algebra.dom
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = dom.sub(out.get(t, dom.zero), c)
            if dom.is_zero(v):
                out.pop(t, None)
            else:
                out[t] = v
        return OrePoly(out, self.algebra, trusted=True)

    def __neg__(self) -> "OrePoly":
        dom = self.algebra.dom
        return OrePoly(
            {t: dom.neg(c) for t, c in self.terms.items()}, self.algebra, trusted=True
        )

    def scale(self, c) -> "OrePoly":
        dom = self.algebra.dom
        if dom.is_zero(c):
            return OrePoly.zero(self.algebra)
        return OrePoly(
            {t: dom.mul(c, v) for t, v in self.terms.items()}, self.algebra, trusted=True
        )

    def head(self, order: OreTermOrder):
        if not self.terms:
            return None
        t = max(self.terms, key=order.key)
        return t, self.terms[t]

    def _apply_d(self) -> "OrePoly":
        """Left multiplication by D."""
        alg = self.algebra
        dom = alg.dom
        out: Dict[Term, object] = {}
        if alg.kind == SHIFT:
            # D x^a = (x+1)^a D
            for (xd, yd, dd), c in self.terms.items():
                for i in range(xd + 1):
                    t = (i, yd, dd + 1)
                    v = dom.add(out.get(t, dom.zero), dom.mul(c, dom.from_int(comb(xd, i))))
                    if dom.is_zero(v):
                        out.pop(t, None)
                    else:
                        out[t] = v
        else:
            # D x^a = x^a D + a x^(a-1)
            for (xd, yd, dd), c in self.terms.items():
                t = (xd, yd, dd + 1)
                v = dom.add(out.get(t, dom.zero), c)
                if dom.is_zero(v):
                    out.pop(t, None)
                else:
                    out[t] = v
                if xd:
                    t2 = (xd - 1, yd, dd)
                    v2 = dom.add(out.get(t2, dom.zero), dom.mul(c, dom.from_int(xd)))
                    if dom.is_zero(v2):
                        out.pop(t2, None)
                    else:
                        out[t2] = v2
        return OrePoly(out, alg, trusted=True)

    def dshift(self, j: int) -> "OrePoly":
        """D^j * self, memoized per element."""
        if j == 0:
            return self
        if self._dshift is None:
            self._dshift = {0: self}
        cache = self._dshift
        top = max(cache)
        while top < j:
            cache[top + 1] = cache[top]._apply_d()
            top += 1
        return cache[j]

    def lmul_term(self, c, term: Term) -> "OrePoly":
        """c * x^a y^b D^g * self (left multiplication)."""
        a, b, g = term
        h = self.dshift(g)
        dom = self.algebra.dom
        out = {}
        for (xd, yd, dd), v in h.terms.items():
            out[(xd + a, yd + b, dd)] = dom.mul(c, v)
        return OrePoly(out, self.algebra, trusted=True)

    def lmul(self, other: "OrePoly") -> "OrePoly":
        """self * other (full left product)."""
        res = OrePoly.zero(self.algebra)
        for t, c in sorted(self.terms.items()):
            res = res + other.lmul_term(c, t)
        return res

    def sorted_terms(self, order: OreTermOrder):
        return sorted(self.terms.items(), key=lambda tc: order.key(tc[0]), reverse=True)

    def __repr__(self):
        return f"OrePoly({dict(sorted(self.terms.items()))!r})"


def _term_lcm(a: Term, b: Term) -> Term:
    return (max(a[0], b[0]), max(a[1], b[1]), max(a[2], b[2]))


def _term_sub(a: Term, b: Term) -> Term:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _term_divides(a: Term, b: Term) -> bool:
    return a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2]


class _OEntry:
    __slots__ = ("op", "term", "coeff", "cof", "alive", "index")

    def __init__(self, op, term, coeff, cof, index):
        self.op = op
        self.term = term
        self.coeff = coeff
        self.cof = cof
        self.alive = True
        self.index = index


class _OreEngine:
    def __init__(self, algebra: OreAlgebra, order: OreTermOrder, budget: StepBudget,
                 n_inputs: int, trace: bool):
        self.algebra = algebra
        self.dom = algebra.dom
        self.order = order
        self.budget = budget
        self.n_inputs = n_inputs
        self.trace = trace
        self.entries: List[_OEntry] = []
        self.pairs: list = []

    def _unit_normalize(self, op: OrePoly, cof):
        h = op.head(self.order)
        dom = self.dom
        u = dom.canonical_unit(h[1])
        if not dom.is_one(u):
            # u is a unit of R; dividing by it keeps everything in R
            inv_scale = lambda q: OrePoly(
                {t: dom.exact_div(c, u) for t, c in q.terms.items()},
                self.algebra, trusted=True)
            op = inv_scale(op)
            if cof is not None:
                cof = [inv_scale(q) for q in cof]
        return op, cof

    def add(self, op: OrePoly, cof):
        """Insert a basis element; returns retired (op, cof) pairs to reprocess."""
        if op.is_zero():
            return []
        op, cof = self._unit_normalize(op, cof)
        term, coeff = op.head(self.order)
        e = _OEntry(op, term, coeff, cof, len(self.entries))
        dom = self.dom
        retired = []
        for other in self.entries:
            if not other.alive:
                continue
            if _term_divides(term, other.term) and dom.divides(coeff, other.coeff):
                other.alive = False
                retired.append((other.op, other.cof))
                continue
            lcm = _term_lcm(term, other.term)
            heapq.heappush(
                self.pairs, ((self.order.key(lcm), other.index, e.index), other.index, e.index)
            )
        self.entries.append(e)
        return retired

    def process(self, op: OrePoly, cof):
        stack = [(op, cof)]
        while stack:
            cand, cc = stack.pop()
            red, cc = self.top_reduce(cand, cc)
            if red is not None:
                stack.extend(self.add(red, cc))

    def find_reducer(self, term, coeff):
        """Best Euclidean reducer: smallest acting head coefficient."""
        dom = self.dom
        best = None
        best_size = None
        for e in self.entries:
            if e.alive and _term_divides(e.term, term):
                s = dom.size_hint(e.coeff)
                if best is None or s < best_size:
                    best, best_size = e, s
        if best is None:
            return None, None
        q = dom.reduce_quotient(coeff, best.coeff)
        if dom.is_zero(q):
            return None, None
        return best, q

    def top_reduce(self, op: OrePoly, cof):
        while True:
            h = op.head(self.order)
            if h is None:
                return None, cof
            term, coeff = h
            e, q = self.find_reducer(term, coeff)
            if e is None:
                return op, cof
            m = _term_sub(term, e.term)
            op = op - e.op.lmul_term(q, m)
            if cof is not None:
                cof = [a - b.lmul_term(q, m) for a, b in zip(cof, e.cof)]
            self.budget.spend()

    def normal_form(self, op: OrePoly, cofactors_over_entries: bool = False):
        """Full normal form; optionally returns left cofactors per entry index."""
        rem = OrePoly.zero(self.algebra)
        cof: Dict[int, OrePoly] = {} if cofactors_over_entries else None
        while True:
            h = op.head(self.order)
            if h is None:
                break
            term, coeff = h
            e, q = self.find_reducer(term, coeff)
            if e is None:
                mono = OrePoly({term: coeff}, self.algebra, trusted=True)
                rem = rem + mono
                op = op - mono
            else:
                m = _term_sub(term, e.term)
                op = op - e.op.lmul_term(q, m)
                if cof is not None:
                    add = OrePoly({m: q}, self.algebra, trusted=True)
                    cof[e.index] = cof.get(e.index, OrePoly.zero(self.algebra)) + add
                self.budget.spend()
        return rem, cof

    def s_and_g(self, a: _OEntry, b: _OEntry):
        dom = self.dom
        lcm = _term_lcm(a.term, b.term)
        ma, mb = _term_sub(lcm, a.term), _term_sub(lcm, b.term)
        out = []
        l = dom.lcm(a.coeff, b.coeff)
        ca, cb = dom.exact_div(l, a.coeff), dom.exact_div(l, b.coeff)
        sp = a.op.lmul_term(ca, ma) - b.op.lmul_term(cb, mb)
        spc = None
        if self.trace:
            spc = [x.lmul_term(ca, ma) - y.lmul_term(cb, mb) for x, y in zip(a.cof, b.cof)]
        out.append((sp, spc))
        if not (dom.divides(a.coeff, b.coeff) or dom.divides(b.coeff, a.coeff)):
            g, u, v = dom.xgcd(a.coeff, b.coeff)
            gp = a.op.lmul_term(u, ma) + b.op.lmul_term(v, mb)
            gpc = None
            if self.trace:
                gpc = [x.lmul_term(u, ma) + y.lmul_term(v, mb)
                       for x, y in zip(a.cof, b.cof)]
            out.append((gp, gpc))
        return out

    def run(self, gens: Sequence[OrePoly]):
        for i, g in enumerate(gens):
            cof = None
            if self.trace:
                cof = [OrePoly.zero(self.algebra) for _ in range(self.n_inputs)]
                cof[i] = OrePoly.one(self.algebra)
            self.process(g, cof)
        while self.pairs:
            _, i, j = heapq.heappop(self.pairs)
            a, b = self.entries[i], self.entries[j]
            if not (a.alive and b.alive):
                continue
            self.budget.spend()
            for cand, cof in self.s_and_g(a, b):
                self.process(cand, cof)
        return self.finalize()

    def finalize(self):
        dom = self.dom
        alive = [e for e in self.entries if e.alive]
        alive.sort(key=lambda e: (self.order.key(e.term), dom.sort_key(e.coeff), e.index))
        kept: List[_OEntry] = []
        for e in alive:
            if any(
                _term_divides(k.term, e.term) and dom.divides(k.coeff, e.coeff)
                for k in kept
            ):
                e.alive = False
            else:
                kept.append(e)
        for e in kept:
            e.alive = False
            nf, cof = self.normal_form(e.op, cofactors_over_entries=self.trace)
            if self.trace and cof:
                newc = list(e.cof)
                for idx, q in cof.items():
                    other = self.entries[idx]
                    newc = [a + q.lmul(b) for a, b in zip(newc, other.cof)]
                e.cof = newc
            e.op = nf
            e.op, e.cof = self._unit_normalize(e.op, e.cof)
            e.term, e.coeff = e.op.head(self.order)
            e.alive = True
        kept.sort(key=lambda e: (self.order.key(e.term), e.index))
        return kept


class OreIdealBasis:
    """Basis of a left ideal of R[x][D], flagged when it is a Groebner basis."""

    def __init__(self, generators, algebra, order, is_groebner, trace, inputs, engine):
        self.generators: Tuple[OreOperator, ...] = tuple(generators)
        self.algebra = algebra
        self.order = order
        self.is_groebner = is_groebner
        self.trace = trace  # per generator: left cofactors over the inputs
        self.inputs = tuple(inputs)
        self._engine = engine

    def __len__(self):
        return len(self.generators)

    def max_order(self) -> int:
        return max((g.order for g in self.generators), default=-1)

    def reduce(self, F: OreOperator) -> OreOperator:
        rem, _ = self._engine.normal_form(OrePoly.from_operator(F))
        return rem.to_operator()


def left_groebner(gens: Sequence[OreOperator], order: Optional[OreTermOrder] = None,
                  *, budget: Optional[StepBudget] = None, trace: bool = False
                  ) -> OreIdealBasis:
    """Reduced strong left Groebner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens]
    if not gens:
        raise ValueError("left_groebner needs at least one generator")
    algebra = gens[0].algebra
    for g in gens[1:]:
        if g.algebra != algebra:
            raise ValueError("algebra mismatch among generators")
    if order is None:
        order = OreTermOrder()
    budget = ensure_budget(budget)
    engine = _OreEngine(algebra, order, budget, len(gens), trace)
    kept = engine.run([OrePoly.from_operator(g) for g in gens])
    generators = [e.op.to_operator() for e in kept]
    tr = tuple(tuple(e.cof) for e in kept) if trace else None
    return OreIdealBasis(generators, algebra, order, True, tr, gens, engine)


def member(F: OreOperator, B: OreIdealBasis, *, with_cofactors: bool = False,
           budget: Optional[StepBudget] = None):
    """Left-ideal membership of F in the ideal spanned by the basis B.

    Returns a bool, or (bool, cofactors) with F = sum(cofactors[j] * B.generators[j])
    when membership holds and cofactors are requested.
    """
    if not B.is_groebner:
        raise ValueError("membership test requires a Groebner basis")
    op = OrePoly.from_operator(F)
    if not with_cofactors:
        red, _ = B._engine.top_reduce(op, None)
        return red is None
    rem, cof = B._engine.normal_form(op, cofactors_over_entries=True)
    if not rem.is_zero():
        return False, None
    kept = [e for e in B._engine.entries if e.alive]
    cofactors = [OrePoly.zero(B.algebra) for _ in kept]
    pos = {e.index: k for k, e in enumerate(kept)}
    for idx, q in (cof or {}).items():
        cofactors[pos[idx]] = q
    return True, [c.to_operator() for c in cofactors]


def left_ideal_equal(gens_a: Sequence[OreOperator], gens_b: Sequence[OreOperator],
                     *, budget: Optional[StepBudget] = None) -> bool:
    """Equality of the left ideals generated by two sets of operators."""
    A = left_groebner(gens_a, budget=budget)
    Bb = left_groebner(gens_b, budget=budget)
    return all(member(g, Bb) for g in A.generators) and all(
        member(g, A) for g in Bb.generators
    )


@dataclass(frozen=True)
class SaturationProblem:
    """Left ideal generators, a nonzero constant of R, and the central marker y."""

    generators: Tuple[OreOperator, ...]
    constant: object
    aux_var: str = "y"

    def __post_init__(self):
        if not self.generators:
            raise ValueError("saturation needs at least one generator")
        dom = self.generators[0].algebra.dom
        if dom.is_zero(self.constant):
            raise ValueError("saturating constant must be nonzero")


@dataclass
class SaturationCertificate:
    """Witness that constant^power * element lies in the original ideal."""

    element: OreOperator
    power: int
    cofactors: Tuple[OreOperator, ...]  # over the original generators


@dataclass
class SaturationResult:
    basis: OreIdealBasis
    constant: object
    certificates: Tuple[SaturationCertificate, ...]


def saturate_by_constant(gens: Sequence[OreOperator], c, *,
                         budget: Optional[StepBudget] = None,
                         certificate_cap: int = 64) -> SaturationResult:
    """Basis of (left ideal of ``gens``) : c^infinity, with membership certificates."""
    problem = SaturationProblem(tuple(gens), c)
    algebra = problem.generators[0].algebra
    dom = algebra.dom
    budget = ensure_budget(budget)

    base = left_groebner(problem.generators, budget=budget, trace=True)

    if dom.is_unit(c):
        certs = []
        for j, g in enumerate(base.generators):
            cofs = tuple(q.to_operator() for q in base.trace[j])
            certs.append(SaturationCertificate(g, 0, cofs))
        return SaturationResult(base, c, tuple(certs))

    elim = OreTermOrder(eliminate_y=True)
    engine = _OreEngine(algebra, elim, budget, 0, trace=False)
    ygens = [OrePoly.from_operator(g) for g in problem.generators]
    one_minus_cy = OrePoly(
        {(0, 0, 0): dom.one, (0, 1, 0): dom.neg(c)}, algebra
    )
    ygens.append(one_minus_cy)
    kept = engine.run(ygens)
    sat_ops = [e.op.to_operator() for e in kept if e.op.is_y_free()]
    if not sat_ops:
        raise AssertionError("saturation produced an empty basis")

    out_engine = _OreEngine(algebra, OreTermOrder(), budget, 0, trace=False)
    for op in sat_ops:
        out_engine.add(OrePoly.from_operator(op), None)
    out_engine.pairs = []
    basis = OreIdealBasis(
        sat_ops, algebra, OreTermOrder(), True, None, problem.generators, out_engine
    )

    certs = []
    for F in sat_ops:
        found = None
        scaled = F
        for i in range(certificate_cap + 1):
            ok = member(scaled, base, with_cofactors=True)
            if ok[0]:
                # cofactors over the base GB; compose through its trace
                cof_gb = ok[1]
                total = [OrePoly.zero(algebra) for _ in problem.generators]
                for j, q in enumerate(cof_gb):
                    qp = OrePoly.from_operator(q)
                    for t in range(len(total)):
                        total[t] = total[t] + qp.lmul(base.trace[j][t])
                found = SaturationCertificate(
                    F, i, tuple(p.to_operator() for p in total)
                )
                break
            scaled = scaled.scale_const(c)
        if found is None:
            raise AssertionError(
                f"no saturation certificate for an output within c^{certificate_cap}"
            )
        certs.append(found)
    return SaturationResult(basis, c, tuple(certs))
