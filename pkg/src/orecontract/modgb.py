"""Strong Groebner bases over a PID for submodules of free modules R[x]^m.

The coefficient ring R is a PID (integers or QQ[t]), so bases are closed
under both S-polynomials and G-polynomials (gcd combinations of head
coefficients); reduction requires the head coefficient to divide.  This is
enough for decidable membership, syzygy (kernel) computation by elimination,
and cofactor tracing.

Terms of a module element are pairs (position, x-degree).  A term order
assigns each pair a sortable key; position-over-term and term-over-position
orders with configurable position priorities are provided.
"""

from __future__ import annotations

import heapq
from typing import List, Optional, Sequence, Tuple

from .budget import StepBudget, ensure_budget
from .domains import Domain
from .poly import Poly


class TermOrder:
    def key(self, pos: int, deg: int):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))


class PositionOverTerm(TermOrder):
    """Compare positions first (by priority, larger wins), then degree."""

    def __init__(self, priority: Sequence[int]):
        self.priority = tuple(priority)

    def key(self, pos, deg):
        return (self.priority[pos], deg)


class TermOverPosition(TermOrder):
    """Compare degree first, then position priority."""

    def __init__(self, priority: Sequence[int]):
        self.priority = tuple(priority)

    def key(self, pos, deg):
        return (deg, self.priority[pos])


class _BlockOrder(TermOrder):
    """All positions below ``cut`` dominate the rest; lexicographic within."""

    def __init__(self, cut: int):
        self.cut = cut

    def key(self, pos, deg):
        if pos < self.cut:
            return (1, pos, deg)
        return (0, pos, deg)


def pot_order(rank: int) -> PositionOverTerm:
    return PositionOverTerm(range(rank))


class ModuleElement:
    """Element of R[x]^m: a tuple of polynomials over a common ring."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Poly]):
        self.components = tuple(components)
        if not self.components:
            raise ValueError("module element needs at least one component")

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def dom(self) -> Domain:
        return self.components[0].dom

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement([a - b for a, b in zip(self.components, other.components)])

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement([a + b for a, b in zip(self.components, other.components)])

    def scale(self, p: Poly) -> "ModuleElement":
        return ModuleElement([c * p for c in self.components])

    def sort_key(self):
        return tuple(c.sort_key() for c in self.components)

    def __repr__(self):
        return f"ModuleElement({list(self.components)!r})"


def _head(comps: Tuple[Poly, ...], order: TermOrder):
    """(key, pos, deg, coeff) of the largest term, or None for zero."""
    best = None
    for pos, p in enumerate(comps):
        if not p.coeffs:
            continue
        k = order.key(pos, p.degree)
        if best is None or k > best[0]:
            best = (k, pos, p.degree, p.lc())
    return best


def _sub_scaled(comps, q, shift: int, other, touched: Sequence[int]):
    out = list(comps)
    for pos in touched:
        out[pos] = out[pos].sub_scaled_shift(q, shift, other[pos])
    return tuple(out)


class _Entry:
    __slots__ = ("comps", "pos", "deg", "coeff", "touched", "alive", "index", "weight")

    def __init__(self, comps, pos, deg, coeff, index):
        self.comps = comps
        self.pos = pos
        self.deg = deg
        self.coeff = coeff
        self.touched = tuple(i for i, p in enumerate(comps) if p.coeffs)
        self.alive = True
        self.index = index
        self.weight = 0


def _unit_normalize(comps, dom: Domain, order: TermOrder):
    h = _head(comps, order)
    if h is None:
        return comps
    u = dom.canonical_unit(h[3])
    if dom.is_one(u):
        return comps
    out = []
    for p in comps:
        out.append(
            Poly(tuple(dom.exact_div(c, u) for c in p.coeffs), dom, trusted=True)
        )
    return tuple(out)


class _Engine:
    def __init__(self, rank: int, dom: Domain, order: TermOrder, budget: StepBudget,
                 drop_from: Optional[int] = None, content_saturated: bool = False):
        self.rank = rank
        self.dom = dom
        self.order = order
        self.budget = budget
        # in trace mode, elements supported entirely on positions >= drop_from
        # are input syzygies and do not contribute to the real basis
        self.drop_from = drop_from
        # kernel computations work inside the graph module {(z*A | z)}, which
        # is closed under exact division by contents; removing contents there
        # is sound and prevents coefficient blowup
        self.content_saturated = content_saturated
        self.entries: List[_Entry] = []
        self.buckets = {}  # pos -> list of alive entries
        self.pairs: list = []
        self.total_weight = 0
        self.interreduce_mark = 1 << 12

    def _strip_content(self, comps):
        dom = self.dom
        g = dom.zero
        for p in comps:
            for c in p.coeffs:
                g = dom.gcd(g, c)
            if dom.is_one(g):
                return comps
        if dom.is_zero(g) or dom.is_one(g):
            return comps
        return tuple(
            Poly(tuple(dom.exact_div(c, g) for c in p.coeffs), dom, trusted=True)
            for p in comps
        )

    def _weight(self, comps) -> int:
        dom = self.dom
        w = 0
        for p in comps:
            for c in p.coeffs:
                w += dom.weight_hint(c)
        return w

    def add(self, comps):
        """Insert a new basis element; returns retired elements to reprocess."""
        dom = self.dom
        h = _head(comps, self.order)
        if h is None:
            return []
        _, pos, deg, coeff = h
        if self.drop_from is not None and pos >= self.drop_from:
            return []
        comps = _unit_normalize(comps, dom, self.order)
        coeff = comps[pos].lc()
        e = _Entry(comps, pos, deg, coeff, len(self.entries))
        e.weight = self._weight(comps)
        self.total_weight += e.weight
        self.entries.append(e)
        retired = []
        for other in self.buckets.get(pos, ()):
            if not other.alive:
                continue
            # an element whose head the new one strongly divides is redundant;
            # retire it and reprocess its reduction
            if other.deg >= deg and dom.divides(coeff, other.coeff):
                other.alive = False
                self.total_weight -= other.weight
                retired.append(other.comps)
                continue
            lcm_deg = max(deg, other.deg)
            key = (self.order.key(pos, lcm_deg), other.index, e.index)
            heapq.heappush(self.pairs, (key, other.index, e.index))
        self.buckets.setdefault(pos, []).append(e)
        return retired

    def process(self, comps):
        """Fully reduce and insert, draining any retirements this causes.

        Candidates are stored in full normal form so that reducers never
        inject large tails into later reductions.
        """
        stack = [comps]
        while stack:
            cand = stack.pop()
            if self.content_saturated:
                cand = self._strip_content(cand)
            nf, _ = self.normal_form(cand)
            if any(p.coeffs for p in nf):
                if self.content_saturated:
                    nf = self._strip_content(nf)
                stack.extend(self.add(nf))

    def find_reducer(self, pos, deg, coeff):
        """Best Euclidean reducer: smallest head coefficient that acts."""
        dom = self.dom
        best = None
        best_size = None
        for e in self.buckets.get(pos, ()):
            if e.alive and e.deg <= deg:
                s = dom.size_hint(e.coeff)
                if best is None or s < best_size:
                    best, best_size = e, s
        if best is None:
            return None, None
        q = dom.reduce_quotient(coeff, best.coeff)
        if dom.is_zero(q):
            return None, None
        return best, q

    def top_reduce(self, comps):
        budget = self.budget
        while True:
            h = _head(comps, self.order)
            if h is None:
                return None
            _, pos, deg, coeff = h
            e, q = self.find_reducer(pos, deg, coeff)
            if e is None:
                return comps
            comps = _sub_scaled(comps, q, deg - e.deg, e.comps, e.touched)
            budget.spend()

    def normal_form(self, comps, with_cofactors=False, allow_strip=True):
        dom = self.dom
        budget = self.budget
        rem = [Poly.zero(dom)] * len(comps)
        cof = {} if with_cofactors else None
        # in saturated mode (and without cofactor tracking) the whole vector
        # may be divided by its content whenever coefficients grow; dividing
        # never makes an irreducible term reducible, so restarting the scan
        # after a strip is sound
        strip = self.content_saturated and not with_cofactors and allow_strip
        countdown = 32
        work = comps
        while True:
            h = _head(work, self.order)
            if h is None:
                break
            _, pos, deg, coeff = h
            e, q = self.find_reducer(pos, deg, coeff)
            if e is None:
                # head term is irreducible; move it to the remainder
                rem[pos] = rem[pos] + Poly.x(dom, deg, coeff)
                lst = list(work)
                lst[pos] = lst[pos].sub_scaled_shift(coeff, deg, Poly.one(dom))
                work = tuple(lst)
            else:
                work = _sub_scaled(work, q, deg - e.deg, e.comps, e.touched)
                if cof is not None:
                    prev = cof.get(e.index, Poly.zero(dom))
                    cof[e.index] = prev + Poly.x(dom, deg - e.deg, q)
                budget.spend()
                if strip:
                    countdown -= 1
                    if countdown <= 0:
                        countdown = 32
                        merged = tuple(a + b for a, b in zip(rem, work))
                        stripped = self._strip_content(merged)
                        if stripped is not merged:
                            rem = [Poly.zero(dom)] * len(comps)
                            work = stripped
        return tuple(rem), cof

    def s_and_g(self, a: _Entry, b: _Entry):
        dom = self.dom
        deg = max(a.deg, b.deg)
        out = []
        l = dom.lcm(a.coeff, b.coeff)
        ca = dom.exact_div(l, a.coeff)
        cb = dom.exact_div(l, b.coeff)
        sp = _sub_scaled(
            tuple(p.scale(ca).times_x_power(deg - a.deg) for p in a.comps),
            cb, deg - b.deg, b.comps, b.touched,
        )
        out.append(sp)
        if not (dom.divides(a.coeff, b.coeff) or dom.divides(b.coeff, a.coeff)):
            g, u, v = dom.xgcd(a.coeff, b.coeff)
            gp_a = tuple(p.scale(u).times_x_power(deg - a.deg) for p in a.comps)
            gp_b = tuple(p.scale(v).times_x_power(deg - b.deg) for p in b.comps)
            out.append(tuple(x + y for x, y in zip(gp_a, gp_b)))
        return out

    def tail_interreduce(self):
        """Re-reduce every basis tail against the current basis.

        Heads are kept in place (only rescaled by a content strip in
        saturated mode), so pending pair bookkeeping stays valid; tails shrink
        to their normal forms, which is what keeps later reductions small.
        """
        for e in self.entries:
            if not e.alive:
                continue
            e.alive = False
            lst = list(e.comps)
            lst[e.pos] = lst[e.pos].sub_scaled_shift(e.coeff, e.deg, Poly.one(self.dom))
            nf, _ = self.normal_form(tuple(lst), allow_strip=False)
            merged = list(nf)
            merged[e.pos] = merged[e.pos] + Poly.x(self.dom, e.deg, e.coeff)
            comps = tuple(merged)
            if self.content_saturated:
                comps = self._strip_content(comps)
            self.total_weight -= e.weight
            e.comps = comps
            e.coeff = comps[e.pos].lc()
            e.touched = tuple(i for i, p in enumerate(comps) if p.coeffs)
            e.weight = self._weight(comps)
            self.total_weight += e.weight
            e.alive = True
        # drop dead entries from the reducer buckets
        for pos, entries in list(self.buckets.items()):
            self.buckets[pos] = [e for e in entries if e.alive]

    def maybe_interreduce(self):
        if self.total_weight > self.interreduce_mark:
            self.tail_interreduce()
            self.interreduce_mark = max(1 << 12, 2 * self.total_weight)

    def run(self, gens):
        for g in gens:
            self.process(g)
            self.maybe_interreduce()
        while self.pairs:
            _, i, j = heapq.heappop(self.pairs)
            a, b = self.entries[i], self.entries[j]
            if not (a.alive and b.alive):
                continue
            self.budget.spend()
            for cand in self.s_and_g(a, b):
                self.process(cand)
            self.maybe_interreduce()
        return self.finalize()

    def finalize(self):
        # minimalize: drop entries whose head is strongly divisible by a kept one
        dom = self.dom
        alive = [e for e in self.entries if e.alive]
        alive.sort(key=lambda e: (self.order.key(e.pos, e.deg), dom.sort_key(e.coeff), e.index))
        kept: List[_Entry] = []
        for e in alive:
            redundant = any(
                k.pos == e.pos and k.deg <= e.deg and dom.divides(k.coeff, e.coeff)
                for k in kept
            )
            if redundant:
                e.alive = False
            else:
                kept.append(e)
        # tail-reduce each survivor against the others
        for e in kept:
            e.alive = False
            nf, _ = self.normal_form(e.comps)
            e.comps = _unit_normalize(nf, dom, self.order)
            e.touched = tuple(i for i, p in enumerate(e.comps) if p.coeffs)
            e.alive = True
        kept.sort(key=lambda e: (self.order.key(e.pos, e.deg), e.index))
        return kept


class GroebnerBasis:
    """Reduced strong Groebner basis with a cofactor trace over the inputs."""

    def __init__(self, rank, dom, order, generators, trace, inputs, engine):
        self.rank = rank
        self.dom = dom
        self.order = order
        self.generators: Tuple[ModuleElement, ...] = tuple(generators)
        self.trace = trace  # trace[j][i]: generator j over input i
        self.inputs = tuple(inputs)
        self._engine = engine

    def __len__(self):
        return len(self.generators)

    def is_zero_module(self) -> bool:
        return not self.generators

    def heads(self):
        out = []
        for g in self.generators:
            k, pos, deg, coeff = _head(g.components, self.order)
            out.append((pos, deg, coeff))
        return out

    def contains(self, elem: ModuleElement) -> bool:
        red = self._engine.top_reduce(elem.components)
        return red is None

    def reduce(self, elem: ModuleElement) -> ModuleElement:
        nf, _ = self._engine.normal_form(elem.components)
        return ModuleElement(nf)

    def reduce_with_cofactors(self, elem: ModuleElement):
        """(nf, cofactors) with elem = sum(cofactors[j] * generators[j]) + nf."""
        nf, cof = self._engine.normal_form(elem.components, with_cofactors=True)
        cofs = [Poly.zero(self.dom)] * len(self.generators)
        for entry_index, p in (cof or {}).items():
            cofs[entry_index] = p
        return ModuleElement(nf), cofs


def _as_components(g, rank: int, dom: Domain):
    if isinstance(g, ModuleElement):
        return g.components
    if isinstance(g, Poly):
        if rank != 1:
            raise ValueError("bare polynomials only allowed in rank-1 modules")
        return (g,)
    return tuple(g)


def groebner(gens: Sequence, order: Optional[TermOrder] = None, *,
             rank: Optional[int] = None, dom: Optional[Domain] = None,
             budget: Optional[StepBudget] = None) -> GroebnerBasis:
    """Reduced strong Groebner basis of the module generated by ``gens``.

    Accepts ``ModuleElement`` values of a common rank, or bare ``Poly`` values
    for the ideal (rank-1) case.  The returned basis carries a cofactor trace
    expressing each basis element over the inputs.
    """
    gens = list(gens)
    if rank is None or dom is None:
        if not gens:
            raise ValueError("empty generator list needs explicit rank and dom")
        first = gens[0]
        if isinstance(first, Poly):
            rank, dom = 1, first.dom
        else:
            me = first if isinstance(first, ModuleElement) else ModuleElement(first)
            rank, dom = me.rank, me.dom
    if order is None:
        order = pot_order(rank)
    budget = ensure_budget(budget)
    n = len(gens)
    aug_order = _TraceOrder(order, rank, n)
    engine = _Engine(rank + n, dom, aug_order, budget, drop_from=rank)
    aug_gens = []
    inputs = []
    for i, g in enumerate(gens):
        comps = _as_components(g, rank, dom)
        inputs.append(ModuleElement(comps))
        unit = [Poly.zero(dom)] * n
        unit[i] = Poly.one(dom)
        aug_gens.append(comps + tuple(unit))
    kept = engine.run(aug_gens)

    generators = [ModuleElement(e.comps[:rank]) for e in kept]
    trace = [tuple(e.comps[rank:]) for e in kept]

    # expose a plain engine over the real components for reductions
    real_engine = _Engine(rank, dom, order, budget)
    for g in generators:
        real_engine.add(g.components)
    real_engine.pairs = []
    return GroebnerBasis(rank, dom, order, generators, tuple(trace), inputs, real_engine)


class _TraceOrder(TermOrder):
    """Real positions under the user's order; trace positions always smaller."""

    def __init__(self, inner: TermOrder, real_rank: int, n_trace: int):
        self.inner = inner
        self.real_rank = real_rank
        self.n_trace = n_trace

    def key(self, pos, deg):
        if pos < self.real_rank:
            return (1, self.inner.key(pos, deg))
        return (0, (pos, deg))

    def __eq__(self, other):
        return (
            isinstance(other, _TraceOrder)
            and self.inner == other.inner
            and self.real_rank == other.real_rank
        )

    __hash__ = TermOrder.__hash__


def _column_syzygies(vals: List[Poly], dom: Domain, budget: StepBudget
                     ) -> List[Tuple[Poly, ...]]:
    """Generators of {y : sum(y_i * vals_i) = 0} for a list of polynomials."""
    m = len(vals)
    order = _BlockOrder(1)
    engine = _Engine(1 + m, dom, order, budget, content_saturated=True)
    gens = []
    for i, v in enumerate(vals):
        unit = [Poly.zero(dom)] * m
        unit[i] = Poly.one(dom)
        gens.append((v,) + tuple(unit))
    kept = engine.run(gens)
    return [e.comps[1:] for e in kept if e.comps[0].is_zero()]


def kernel(rows: Sequence[Sequence[Poly]], *, budget: Optional[StepBudget] = None,
           seeds: Optional[Sequence[Sequence[Poly]]] = None) -> List[Tuple[Poly, ...]]:
    """Generators of the syzygy module {z : z * A = 0} of the rows of A.

    Works column by column: the solution module starts as the free module
    (plus any verified ``seeds``, which are known syzygies of the full
    matrix) and is intersected with the constraint of each column in turn.
    Each stage is a syzygy computation for a single list of polynomials,
    performed by elimination with a strong Groebner basis; the syzygy module
    is saturated, so every intermediate generator is kept content-primitive.
    Each returned generator is re-checked against the matrix.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return []
    m = len(rows)
    ncols = len(rows[0])
    for row in rows:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    dom = rows[0][0].dom
    budget = ensure_budget(budget)

    def strip(vec):
        g = dom.zero
        for p in vec:
            for c in p.coeffs:
                g = dom.gcd(g, c)
            if dom.is_one(g):
                return vec
        if dom.is_zero(g) or dom.is_one(g):
            return vec
        return tuple(
            Poly(tuple(dom.exact_div(c, g) for c in p.coeffs), dom, trusted=True)
            for p in vec
        )

    gens: List[Tuple[Poly, ...]] = []
    for z in seeds or ():
        z = tuple(z)
        if len(z) != m:
            raise ValueError("seed length does not match the row count")
        for j in range(ncols):
            acc = Poly.zero(dom)
            for i in range(m):
                acc = acc + z[i] * rows[i][j]
            if not acc.is_zero():
                raise ValueError("seed is not a syzygy of the matrix")
        gens.append(strip(z))
    for i in range(m):
        unit = [Poly.zero(dom)] * m
        unit[i] = Poly.one(dom)
        gens.append(tuple(unit))

    def compress(vecs):
        # the constraint module is saturated, so a content-saturated reduced
        # basis of the span is a valid (and canonical) generating set
        if len(vecs) <= 1:
            return list(vecs)
        engine = _Engine(m, dom, pot_order(m), budget, content_saturated=True)
        for v in vecs:
            engine.process(v)
        return [e.comps for e in engine.finalize()]

    for j in range(ncols):
        vals = []
        for z in gens:
            acc = Poly.zero(dom)
            for i in range(m):
                if z[i].coeffs and rows[i][j].coeffs:
                    acc = acc + z[i] * rows[i][j]
            vals.append(acc)
        if all(v.is_zero() for v in vals):
            continue
        new_gens: List[Tuple[Poly, ...]] = []
        for y in _column_syzygies(vals, dom, budget):
            z = [Poly.zero(dom)] * m
            for t, yt in enumerate(y):
                if yt.coeffs:
                    for i in range(m):
                        if gens[t][i].coeffs:
                            z[i] = z[i] + yt * gens[t][i]
            if any(p.coeffs for p in z):
                new_gens.append(strip(tuple(z)))
        gens = compress(new_gens)
        if not gens:
            return []

    syz = []
    seen = set()
    for z in gens:
        for j in range(ncols):
            acc = Poly.zero(dom)
            for i in range(m):
                acc = acc + z[i] * rows[i][j]
            if not acc.is_zero():
                raise AssertionError("syzygy verification failed")
        if z not in seen:
            seen.add(z)
            syz.append(z)
    return syz


def ideal_equal(I: GroebnerBasis, J: GroebnerBasis) -> bool:
    """Mutual membership of two Groebner bases (ideals or modules)."""
    if I.rank != J.rank:
        raise ValueError("rank mismatch between bases")
    if I.order != J.order:
        raise ValueError("term order mismatch between bases")
    return all(J.contains(g) for g in I.generators) and all(
        I.contains(g) for g in J.generators
    )


def span_equal(gens_a: Sequence[ModuleElement], gens_b: Sequence[ModuleElement],
               order: Optional[TermOrder] = None, *,
               budget: Optional[StepBudget] = None) -> bool:
    """Module equality of two generating sets of the same ambient rank."""
    a = [g for g in gens_a if not g.is_zero()]
    b = [g for g in gens_b if not g.is_zero()]
    if not a or not b:
        return not a and not b
    ga = groebner(a, order, budget=budget)
    gb = groebner(b, order, budget=budget)
    return ideal_equal(ga, gb)


def minimal_degree_element(G: GroebnerBasis) -> Tuple[Poly, Tuple[Poly, ...]]:
    """The unique minimal-x-degree element of a reduced rank-1 basis, with trace."""
    if G.rank != 1:
        raise ValueError("minimal degree element is defined for ideals only")
    if not G.generators:
        raise ValueError("zero ideal has no minimal degree element")
    best = None
    for j, g in enumerate(G.generators):
        p = g.components[0]
        key = (p.degree, G.dom.sort_key(p.content()), p.sort_key())
        if best is None or key < best[0]:
            best = (key, j, p)
    _, j, p = best
    return p, G.trace[j]
