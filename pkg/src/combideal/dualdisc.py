"""Instances closed under the dual discriminator.

Such instances are binary and use three kinds of constraint: permutation,
complete and two-fan.  Permutation constraints are chained into CPCs whose
ideals have small bases.  Complete and two-fan constraints generate a pool whose
reduced basis stays inside three small families:

* ``D``: partial domain polynomials ``prod_{a in A} (x_i - a)``
* ``F``: two-fan products ``(x_i - a)(x_j - b)``
* ``L``: lines ``x_i - l(x_j)`` through two points

A fixpoint loop then ties the two halves together.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Iterable, Sequence

from .buchberger import GroebnerBasis, buchberger, reduce_basis
from .csp import Complete, CspInstance, Permutation, Relation, TwoFan, domain_polynomial
from .errors import BudgetExceeded, DomainError, StructuralError
from .poly import GRLEX, Polynomial, coprime, remainder, s_polynomial


class Infeasible(Exception):
    """Raised internally once the instance is known to have no solution."""


def lagrange_interpolate(points: Iterable, nvars: int, var: int) -> Polynomial:
    """The polynomial in ``x_var`` of least degree through ``(u, v)`` pairs."""
    pts = [(Fraction(u), Fraction(v)) for u, v in points]
    xs = [u for u, _ in pts]
    if len(set(xs)) != len(xs):
        raise DomainError("interpolation points repeat a first coordinate")
    x = Polynomial.variable(nvars, var)
    out = Polynomial.zero(nvars)
    for k, (u, v) in enumerate(pts):
        basis = Polynomial.constant(nvars, v)
        for m, (w, _) in enumerate(pts):
            if m != k:
                basis = basis * (x - w).scale(1 / (u - w))
        out = out + basis
    return out


# -- binary constraints ------------------------------------------------------

def binary_tuples(c) -> tuple:
    """``(i, j, tuples)`` for any binary constraint."""
    if isinstance(c, (Permutation, Complete, TwoFan)):
        return c.i, c.j, c.tuples()
    if isinstance(c, Relation) and len(c.scope) == 2:
        return c.scope[0], c.scope[1], c.tuples()
    raise StructuralError(f"not a binary constraint: {c.to_text()}")


def classify_binary(i: int, j: int, tuples) -> object:
    """Recognise a binary relation as complete, permutation or two-fan."""
    tuples = set(tuples)
    di = {u for u, _ in tuples}
    dj = {v for _, v in tuples}
    if tuples == set(product(di, dj)):
        return Complete(i, frozenset(di), j, frozenset(dj))
    if len(di) == len(tuples) == len(dj):
        return Permutation(i, j, tuple(sorted(tuples)))
    for a in sorted(di):
        for b in sorted(dj):
            if tuples == {(a, v) for v in dj} | {(u, b) for u in di}:
                return TwoFan(i, a, frozenset(di), j, b, frozenset(dj))
    raise StructuralError(f"relation on (x{i + 1}, x{j + 1}) is not closed under the dual discriminator")


def binarize(inst: CspInstance) -> CspInstance:
    """Replace every relation by its binary projections, classified.

    A relation preserved by a majority operation is the join of its binary
    projections; this is checked, and a relation that fails it is rejected.
    """
    out = []
    for c in inst.constraints:
        if not isinstance(c, Relation):
            out.append(c)
            continue
        scope, tuples = c.scope, c.tuples()
        if not tuples:
            v = scope[0]
            out.append(Complete(v, frozenset(), scope[-1] if len(scope) > 1 else (v + 1) % inst.n,
                                frozenset()))
            continue
        if len(scope) == 1:
            vals = frozenset(t[0] for t in tuples)
            other = (scope[0] + 1) % inst.n
            if other == scope[0]:
                raise StructuralError("a unary relation needs a second variable to attach to")
            out.append(Complete(scope[0], vals, other, frozenset(inst.domain)))
            continue
        projs = []
        for a, b in combinations(range(len(scope)), 2):
            proj = {(t[a], t[b]) for t in tuples}
            projs.append((a, b, proj))
            out.append(classify_binary(scope[a], scope[b], proj))
        joined = {t for t in product(inst.domain, repeat=len(scope))
                  if all((t[a], t[b]) in proj for a, b, proj in projs)}
        if joined != tuples:
            raise StructuralError(f"relation {c.to_text()!r} is not the join of its binary projections")
    return CspInstance(inst.n, inst.domain, tuple(out))


def arc_consistency(inst: CspInstance):
    """AC-3 over the binary constraints; ``None`` when a domain empties."""
    doms = [set(inst.domain) for _ in range(inst.n)]
    arcs = []
    for c in inst.constraints:
        i, j, tuples = binary_tuples(c)
        arcs.append((i, j, tuples))
        arcs.append((j, i, {(v, u) for u, v in tuples}))
    by_target = {}
    for k, (i, j, _) in enumerate(arcs):
        by_target.setdefault(j, []).append(k)
    queue = deque(range(len(arcs)))
    queued = set(queue)
    while queue:
        k = queue.popleft()
        queued.discard(k)
        i, j, tuples = arcs[k]
        keep = {u for u in doms[i] if any((u, v) in tuples for v in doms[j])}
        if keep != doms[i]:
            doms[i] = keep
            if not keep:
                return None
            for k2 in by_target.get(i, ()):
                if k2 not in queued and arcs[k2][0] != j:
                    queued.add(k2)
                    queue.append(k2)
    return [frozenset(d) for d in doms]


# -- chained permutation constraints -----------------------------------------

@dataclass
class Cpc:
    """A chain of permutation constraints over ``vars``.

    Every variable's value is a function of the representative's value:
    ``bij[v][r]`` is the value of ``x_v`` when ``x_rep = r``, for ``r`` in
    ``S_rep``.
    """

    id: int
    rep: int
    bij: dict = field(default_factory=dict)

    @property
    def vars(self):
        return sorted(self.bij)

    @property
    def rep_values(self):
        return sorted(self.bij[self.rep])

    def allowed(self, v) -> frozenset:
        return frozenset(self.bij[v].values())

    def sigma(self, a, b) -> dict:
        """The bijection from S_a to S_b."""
        return {self.bij[a][r]: self.bij[b][r] for r in self.bij[self.rep]}

    def restrict(self, keep) -> None:
        """Keep only representative values in ``keep``."""
        for v in self.bij:
            self.bij[v] = {r: x for r, x in self.bij[v].items() if r in keep}
        if not self.bij[self.rep]:
            raise Infeasible(f"chain {self.id} has no consistent values left")

    def restrict_var(self, v, values) -> bool:
        """S_v := S_v intersect values, propagated; True if anything shrank."""
        keep = {r for r, x in self.bij[v].items() if x in values}
        if len(keep) == len(self.bij[self.rep]):
            return False
        self.restrict(keep)
        return True

    def relation(self) -> set:
        vs = self.vars
        return {tuple(self.bij[v][r] for v in vs) for r in self.bij[self.rep]}

    def signature(self):
        return tuple((v, tuple(sorted(self.bij[v].items()))) for v in self.vars)


class CpcSet:
    """Disjoint CPCs with a variable index; grows incrementally."""

    def __init__(self):
        self.cpcs = {}
        self.owner = {}
        self._next = 0

    def __iter__(self):
        return iter(sorted(self.cpcs.values(), key=lambda c: c.id))

    def __len__(self):
        return len(self.cpcs)

    def of(self, v):
        cid = self.owner.get(v)
        return None if cid is None else self.cpcs[cid]

    def signature(self):
        return tuple(c.signature() for c in self)

    def add(self, perm: Permutation) -> None:
        """Fold one permutation constraint in: create, expand, combine or update."""
        p, q = perm.i, perm.j
        pi = dict(perm.pairs)
        cp, cq = self.of(p), self.of(q)
        if cp is None and cq is None:
            if not pi:
                raise Infeasible("empty permutation constraint")
            c = Cpc(self._next, p, {p: {a: a for a in pi}, q: dict(pi)})
            self._next += 1
            self.cpcs[c.id] = c
            self.owner[p] = self.owner[q] = c.id
        elif cq is None or cp is None:
            if cp is None:  # orient so that x_p is the chained variable
                p, q, cp = q, p, cq
                pi = {b: a for a, b in pi.items()}
            cp.restrict({r for r, x in cp.bij[p].items() if x in pi})
            cp.bij[q] = {r: pi[x] for r, x in cp.bij[p].items()}
            self.owner[q] = cp.id
        elif cp is not cq:
            s_q = cq.allowed(q)
            cp.restrict({r for r, x in cp.bij[p].items() if x in pi and pi[x] in s_q})
            back = {x: r for r, x in cq.bij[q].items()}
            link = {r: back[pi[x]] for r, x in cp.bij[p].items()}
            cq.restrict(set(link.values()))
            for v, m in cq.bij.items():
                cp.bij[v] = {r: m[link[r]] for r in link}
                self.owner[v] = cp.id
            del self.cpcs[cq.id]
        else:
            cp.restrict({r for r, x in cp.bij[p].items()
                         if x in pi and pi[x] == cp.bij[q][r]})


def normalize_perms(perms: Iterable[Permutation]) -> list:
    """Intersect permutation constraints that share a pair of variables."""
    merged = {}
    for c in perms:
        i, j, pairs = c.i, c.j, set(c.pairs)
        if i > j:
            i, j, pairs = j, i, {(b, a) for a, b in pairs}
        key = (i, j)
        merged[key] = merged[key] & pairs if key in merged else pairs
    return [Permutation(i, j, tuple(sorted(p))) for (i, j), p in sorted(merged.items())]


def build_cpcs(perms: Sequence[Permutation], n: int | None = None, domain=None,
               into: CpcSet | None = None) -> CpcSet | None:
    """Chain permutation constraints; ``None`` if some value set empties."""
    cs = CpcSet() if into is None else into
    try:
        for perm in normalize_perms(perms):
            cs.add(perm)
    except Infeasible:
        return None
    return cs


def cpc_basis(c: Cpc, nvars: int) -> GroebnerBasis:
    """Reduced grlex basis of the ideal of one CPC relation.

    Variables with identical columns are tied by ``x_j - x_k``; the remaining
    representatives get pairwise interpolants plus their value-set polynomials,
    completed by a small Buchberger run.
    """
    reps = c.rep_values
    cols = {v: tuple(c.bij[v][r] for r in reps) for v in c.vars}
    classes = {}
    for v in c.vars:
        classes.setdefault(cols[v], []).append(v)
    same = []
    survivors = []
    for members in classes.values():
        low = max(members)  # the smallest variable in the order x1 > x2 > ...
        survivors.append(low)
        same += [Polynomial.variable(nvars, v) - Polynomial.variable(nvars, low)
                 for v in members if v != low]
    local = [domain_polynomial(nvars, v, cols[v]) for v in survivors]
    for j, k in permutations(sorted(survivors), 2):
        interp = lagrange_interpolate(zip(cols[k], cols[j]), nvars, k)
        local.append(Polynomial.variable(nvars, j) - interp)
    budget = 10 ** 5 * max(1, factorial(len(reps)))
    g_local = reduce_basis(buchberger(local, GRLEX, budget))
    return reduce_basis(list(g_local) + same, GRLEX)


# -- the complete / two-fan pool ----------------------------------------------

def univariate_roots(g: Polynomial, domain) -> frozenset | None:
    """Roots in ``domain`` when ``g`` is monic, univariate and splits there with simple roots."""
    vs = g.variables()
    if len(vs) != 1:
        return None
    (v,) = vs
    roots = frozenset(a for a in domain if g.evaluate(_point(g.nvars, v, a)) == 0)
    if len(roots) != g.degree() or domain_polynomial(g.nvars, v, roots) != g:
        return None
    return roots


def _point(n, v, a):
    pt = [Fraction(0)] * n
    pt[v] = a
    return pt


def classify(g: Polynomial, domain) -> tuple:
    """Family of a monic pool element.

    Returns ``("D", v, roots)``, ``("F", i, a, j, b)``, ``("L", i, j)``,
    ``("1",)`` or ``("?",)``.
    """
    if g.is_constant():
        return ("1",)
    roots = univariate_roots(g, domain)
    if roots is not None:
        return ("D", next(iter(g.variables())), roots)
    vs = sorted(g.variables())
    if len(vs) == 2 and g.degree() == 1:
        return ("L", vs[0], vs[1])
    if len(vs) == 2 and g.degree() == 2:
        i, j = vs
        n = g.nvars
        unit = lambda *ks: tuple(1 if k in ks else 0 for k in range(n))
        if g.coefficient(unit(i, j)) == 1:
            b, a = -g.coefficient(unit(i)), -g.coefficient(unit(j))
            if (Polynomial.variable(n, i) - a) * (Polynomial.variable(n, j) - b) == g:
                return ("F", i, a, j, b)
    return ("?",)


@dataclass
class CfPool:
    """Pool elements and the permutation constraints discovered while reducing them."""

    elements: list
    domain: tuple
    pending: list = field(default_factory=list)


def _line_perm(g: Polynomial, i: int, j: int, doms) -> Permutation:
    pairs = [(u, v) for u in doms[i] for v in doms[j]
             if g.evaluate(_pair_point(g.nvars, i, u, j, v)) == 0]
    return Permutation(i, j, tuple(pairs))


def _pair_point(n, i, u, j, v):
    pt = [Fraction(0)] * n
    pt[i], pt[j] = u, v
    return pt


def cf_basis(pool: CfPool, budget: int = 10 ** 6) -> GroebnerBasis:
    """Reduced grlex basis of the pool's ideal, completed case by case.

    * a domain polynomial on ``x_i`` against a fan ``(x_i - c)(x_j - b)`` with
      ``c`` outside the domain forces ``x_j = b``
    * two fans on the same pair with ``a != c`` and ``b != d`` leave exactly two
      points; the line through them joins the pool and a permutation
      constraint is recorded
    * two fans with ``a == c`` (or ``b == d``) force ``x_i = a`` (or ``x_j = b``)
    * any other overlapping pair takes an ordinary S-polynomial step

    Line elements found in the result are also recorded as permutation
    constraints on ``pool.pending``.
    """
    domain = pool.domain
    n = pool.elements[0].nvars if pool.elements else 0
    elems = []
    alive = []
    pairs = deque()
    counter = [0]

    def add(h):
        h = h.monic(GRLEX)
        if h.is_constant():
            raise Infeasible("pool reduces to a nonzero constant")
        if any(alive[k] and elems[k] == h for k in range(len(elems))):
            return
        for k in range(len(elems)):
            if alive[k]:
                pairs.append((k, len(elems)))
        elems.append(h)
        alive.append(True)

    def live_domains():
        doms = [set(domain) for _ in range(n)]
        for k, g in enumerate(elems):
            if alive[k]:
                tag = classify(g, domain)
                if tag[0] == "D":
                    doms[tag[1]] &= tag[2]
        return doms

    for g in pool.elements:
        if g:
            add(g)
    while pairs:
        k1, k2 = pairs.popleft()
        if not (alive[k1] and alive[k2]):
            continue
        f, g = elems[k1], elems[k2]
        if coprime(f.leading_monomial(GRLEX), g.leading_monomial(GRLEX)):
            continue
        tf, tg = classify(f, domain), classify(g, domain)
        if tf[0] == "F" and tg[0] == "D":
            tf, tg, f, g, k1, k2 = tg, tf, g, f, k2, k1
        if tf[0] == "D" and tg[0] == "F":
            _, v, roots = tf
            _, i, a, j, b = tg
            forced = None
            if v == i and a not in roots:
                forced = Polynomial.variable(n, j) - b
            elif v == j and b not in roots:
                forced = Polynomial.variable(n, i) - a
            if forced is not None:
                alive[k2] = False
                add(forced)
                continue
        if tf[0] == "F" and tg[0] == "F" and (tf[1], tf[3]) == (tg[1], tg[3]):
            _, i, a, j, b = tf
            _, _, c, _, d = tg
            xi, xj = Polynomial.variable(n, i), Polynomial.variable(n, j)
            if a != c and b != d:
                line = (xi - a) - (xj - d).scale(Fraction(c - a) / (b - d))
                for h in (line, (xi - a) * (xi - c), (xj - b) * (xj - d)):
                    add(h)
                pool.pending.append(Permutation(i, j, ((a, d), (c, b))))
                continue
            if a == c and b != d:
                add(xi - a)
                continue
            if b == d and a != c:
                add(xj - b)
                continue
        h = remainder(s_polynomial(f, g, GRLEX), [e for e, ok in zip(elems, alive) if ok],
                      GRLEX, counter)
        if counter[0] > budget:
            raise BudgetExceeded("pool completion exceeded its step budget")
        if h:
            add(h)

    live = [e for e, ok in zip(elems, alive) if ok]
    if not live:
        return GroebnerBasis.build([], GRLEX, n, reduced=True)
    basis = reduce_basis(live, GRLEX)
    doms = live_domains()
    for g in basis:
        tag = classify(g, domain)
        if tag[0] == "1":
            raise Infeasible("pool reduces to 1")
        if tag[0] == "?" and g.degree() != 1:
            raise RuntimeError(f"pool element {g} lies outside the D, F, L families")
        if tag[0] == "L":
            perm = _line_perm(g, tag[1], tag[2], doms)
            if not perm.pairs:
                raise Infeasible(f"line {g} has no point inside the domains")
            pool.pending.append(perm)
    return basis


# -- combined basis ------------------------------------------------------------

@dataclass
class DdState:
    cpcs: CpcSet
    pool: list
    pending: list
    doms: list
    restarts: int = 0


def _restart_budget(inst, cpcs, n):
    k = len(inst.domain)
    family = n * 2 ** k + n * n * k * k + n * n * k ** 4
    return n * k + family + 1


def _fan_oriented(tag, cpcs):
    """Put a chained variable (if any) first: returns (p, a, q, b)."""
    _, i, a, j, b = tag
    if cpcs.of(i) is None and cpcs.of(j) is not None:
        return j, b, i, a
    return i, a, j, b


def combined_basis(inst: CspInstance) -> GroebnerBasis:
    """Grlex Groebner basis of the solution ideal of a dual-discriminator instance.

    The result is the union of the CPC bases and the completed pool; ``{1}``
    for an infeasible instance.
    """
    n = inst.n
    domain = inst.domain
    one = GroebnerBasis.build([Polynomial.constant(n, 1)], GRLEX, n, reduced=True)
    try:
        return _combined(inst, n, domain)
    except Infeasible:
        return one


def _combined(inst, n, domain):
    for c in inst.constraints:
        if not isinstance(c, (Permutation, Complete, TwoFan)):
            raise DomainError(f"the dual-discriminator pipeline does not take {c.kind} constraints; "
                              "binarize relations first")
    doms = arc_consistency(inst)
    if doms is None:
        raise Infeasible("arc consistency emptied a domain")
    perms = [c for c in inst.constraints if isinstance(c, Permutation)]
    cpcs = build_cpcs(perms)
    if cpcs is None:
        raise Infeasible("chaining emptied a value set")
    pool = []
    for c in inst.constraints:
        if isinstance(c, Complete):
            pool += [domain_polynomial(n, c.i, c.di), domain_polynomial(n, c.j, c.dj)]
        elif isinstance(c, TwoFan):
            pool.append((Polynomial.variable(n, c.i) - c.a) * (Polynomial.variable(n, c.j) - c.b))
            pool += [domain_polynomial(n, c.i, c.di), domain_polynomial(n, c.j, c.dj)]
    st = DdState(cpcs, pool, [], [set(d) for d in doms])
    budget = _restart_budget(inst, cpcs, n)

    while True:
        st.restarts += 1
        if st.restarts > budget:
            raise BudgetExceeded(f"fixpoint did not settle within {budget} rounds")
        # value sets: chained variables from their CPC, the rest from AC and the pool
        for c in st.cpcs:
            for v in c.vars:
                c.restrict_var(v, st.doms[v])
        for v in range(n):
            c = st.cpcs.of(v)
            if c is not None:
                st.doms[v] = set(c.allowed(v))
        cf = CfPool([g for g in st.pool if classify(g, domain)[0] != "D"]
                    + [domain_polynomial(n, v, st.doms[v]) for v in range(n)], domain)
        G = cf_basis(cf)
        before = st.cpcs.signature()
        if build_cpcs(cf.pending, into=st.cpcs) is None:
            raise Infeasible("a discovered permutation emptied a value set")
        changed = st.cpcs.signature() != before
        st.pool = list(G)
        # partial domain polynomials shrink value sets
        for g in G:
            tag = classify(g, domain)
            if tag[0] == "D":
                v, roots = tag[1], tag[2]
                if roots != st.doms[v]:
                    st.doms[v] &= roots
                    c = st.cpcs.of(v)
                    if c is not None:
                        c.restrict_var(v, roots)
                    changed = True
        if changed:
            continue
        changed = _process_fans(st, G, n, domain)
        if not changed:
            break

    parts = []
    for c in st.cpcs:
        parts += list(cpc_basis(c, n))
    return GroebnerBasis.build(parts + list(G), GRLEX, n)


def _process_fans(st: DdState, G, n, domain) -> bool:
    """Handle every fan touching a chained variable; True if anything changed."""
    basis = list(G)
    for g in basis:
        tag = classify(g, domain)
        if tag[0] != "F":
            continue
        p, a, q, b = _fan_oriented(tag, st.cpcs)
        ci = st.cpcs.of(p)
        if ci is None:
            continue
        cj = st.cpcs.of(q)
        s_p = ci.allowed(p)
        if cj is ci:
            # both ends on one chain: keep the tuples with x_p = a or x_q = b
            keep = {r for r, x in ci.bij[p].items() if x == a or ci.bij[q][r] == b}
            if len(keep) < len(ci.bij[ci.rep]):
                ci.restrict(keep)
                return True
            continue
        s_q = cj.allowed(q) if cj is not None else frozenset(st.doms[q])
        if a not in s_p:
            st.pool.append(Polynomial.variable(n, q) - b)
            return True
        if b not in s_q:
            st.pool.append(Polynomial.variable(n, p) - a)
            return True
        family = []
        for k in ci.vars:
            ak = ci.bij[k][next(r for r, x in ci.bij[p].items() if x == a)]
            if cj is not None:
                rb = next(r for r, x in cj.bij[q].items() if x == b)
                for l in cj.vars:
                    family.append((Polynomial.variable(n, k) - ak)
                                  * (Polynomial.variable(n, l) - cj.bij[l][rb]))
            else:
                family.append((Polynomial.variable(n, k) - ak) * (Polynomial.variable(n, q) - b))
        family = [h for h in family if h != g]
        if any(remainder(h, basis, GRLEX) for h in family):
            st.pool += family
            return True
    return False


def dualdisc_basis(inst: CspInstance) -> GroebnerBasis:
    """Binarize relations if needed, then :func:`combined_basis`."""
    if any(isinstance(c, Relation) for c in inst.constraints):
        inst = binarize(inst)
    return combined_basis(inst)
