"""Plain Buchberger completion, used as an independent reference engine."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, DomainError
from .poly import (GRLEX, MonomialOrder, Polynomial, coprime, mono_divides, remainder,
                   s_polynomial)

DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class GroebnerBasis:
    """Basis elements sorted by leading monomial (ascending in ``order``).

    ``truncation`` is the degree bound ``d`` when the basis is only the
    degree-<=d slice of a Groebner basis, otherwise ``None``.
    """

    elements: tuple
    order: MonomialOrder
    nvars: int
    reduced: bool = False
    truncation: int | None = None

    @classmethod
    def build(cls, elements, order, nvars, reduced=False, truncation=None):
        uniq = []
        seen = set()
        for g in elements:
            if not g:
                raise DomainError("zero polynomial in a basis")
            if g not in seen:
                seen.add(g)
                uniq.append(g)
        uniq.sort(key=lambda g: (order.key(g.leading_monomial(order)), str(g)))
        return cls(tuple(uniq), order, nvars, reduced, truncation)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def is_unit(self):
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.elements]

    def truncate(self, d: int) -> GroebnerBasis:
        """The degree-<=d slice."""
        return GroebnerBasis.build([g for g in self.elements if g.degree() <= d],
                                   self.order, self.nvars, self.reduced, d)

    def as_set(self):
        return frozenset(self.elements)


def buchberger(generators: Sequence[Polynomial], order: MonomialOrder = GRLEX,
               budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Buchberger's algorithm with a FIFO pair queue.

    Pairs with coprime leading monomials are skipped.  ``budget`` bounds the
    total number of division steps.
    """
    if budget <= 0:
        raise DomainError("budget must be positive")
    gens = [g for g in generators]
    if not gens:
        raise DomainError("no generators")
    nvars = gens[0].nvars
    basis = []
    pairs = deque()
    counter = [0]

    def add(h):
        h = h.monic(order)
        for k in range(len(basis)):
            pairs.append((k, len(basis)))
        basis.append(h)

    for g in gens:
        if not g:
            raise DomainError("zero generator")
        add(g)
    while pairs:
        i, j = pairs.popleft()
        fi, fj = basis[i], basis[j]
        if coprime(fi.leading_monomial(order), fj.leading_monomial(order)):
            continue
        h = remainder(s_polynomial(fi, fj, order), basis, order, counter)
        if counter[0] > budget:
            raise BudgetExceeded(f"Buchberger exceeded {budget} reduction steps "
                                 f"with {len(basis)} basis elements")
        if h:
            if h.is_constant():
                return GroebnerBasis.build([Polynomial.constant(nvars, 1)], order, nvars, True)
            add(h)
    return GroebnerBasis.build(basis, order, nvars)


def reduce_basis(basis: GroebnerBasis | Sequence[Polynomial],
                 order: MonomialOrder | None = None) -> GroebnerBasis:
    """The unique reduced Groebner basis of the ideal spanned by ``basis``.

    The input must already satisfy Buchberger's criterion.
    """
    if isinstance(basis, GroebnerBasis):
        order = basis.order if order is None else order
        elems, nvars, trunc = list(basis.elements), basis.nvars, basis.truncation
    else:
        elems = list(basis)
        order = GRLEX if order is None else order
        nvars = elems[0].nvars if elems else 0
        trunc = None
    elems = [g.monic(order) for g in elems if g]
    if any(g.is_constant() for g in elems):
        return GroebnerBasis.build([Polynomial.constant(nvars, 1)], order, nvars, True, trunc)
    # minimal basis: drop anything whose LM is a multiple of another LM
    elems.sort(key=lambda g: order.key(g.leading_monomial(order)))
    minimal = []
    for g in elems:
        lm = g.leading_monomial(order)
        if not any(mono_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        lm = g.leading_monomial(order)
        tail = g - Polynomial.term(nvars, lm, 1)
        reduced.append(Polynomial.term(nvars, lm, 1) + remainder(tail, others, order))
    return GroebnerBasis.build(reduced, order, nvars, True, trunc)


def is_groebner(elements, order: MonomialOrder | None = None, max_degree: int | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero.

    With ``max_degree`` only pairs whose leading-monomial lcm has degree at most
    ``max_degree`` are checked, which is the criterion for a degree-truncated
    basis under a graded order.
    """
    if isinstance(elements, GroebnerBasis):
        order = elements.order if order is None else order
        elements = list(elements.elements)
    else:
        elements = list(elements)
        order = GRLEX if order is None else order
    return first_failing_pair(elements, order, max_degree) is None


def first_failing_pair(elements, order=GRLEX, max_degree=None):
    """Indices of the first pair whose S-polynomial does not reduce to zero."""
    for j in range(len(elements)):
        for i in range(j):
            mi = elements[i].leading_monomial(order)
            mj = elements[j].leading_monomial(order)
            if coprime(mi, mj):
                continue
            if max_degree is not None and sum(max(a, b) for a, b in zip(mi, mj)) > max_degree:
                continue
            if remainder(s_polynomial(elements[i], elements[j], order), elements, order):
                return i, j
    return None
