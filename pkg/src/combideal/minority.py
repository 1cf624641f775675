"""Boolean minority (GF(2)-linear) instances.

A feasible XOR system in reduced row echelon form gives the lex basis G1
directly: ``x_i - M(f_i)`` for every pivot and ``x_k^2 - x_k`` for every free
variable, where ``M(f)`` is the multilinear polynomial agreeing with the XOR
``f`` on 0/1 points.  :func:`convert` turns that symbolic G1 into the
degree-``d`` slice of the reduced grlex basis without ever expanding G1.

Every polynomial function on the solution set is a rational combination of
Boolean terms ``T(S, p) = xor_{k in S} x_k xor p`` over the free variables.
Processing monomials in increasing grlex order, a monomial is standard exactly
when its product expansion contains a Boolean term not yet seen, and that
term is always the longest one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .buchberger import GroebnerBasis
from .errors import BudgetExceeded, DomainError, StructuralError
from .poly import GRLEX, LEX, Polynomial, mono_divides

EXPAND_THRESHOLD = 20


@dataclass(frozen=True)
class Gf2Equation:
    """``x_lead xor (xor of support) xor parity = 0``."""

    lead: int
    support: frozenset
    parity: int = 0

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        object.__setattr__(self, "parity", int(self.parity) & 1)
        if self.lead in self.support:
            raise StructuralError("the lead variable cannot occur in its own support")

    @property
    def tail(self) -> BooleanTerm:
        """The Boolean function f with ``x_lead = f`` on solutions."""
        return BooleanTerm(self.support, self.parity)


@dataclass(frozen=True)
class Gf2System:
    equations: tuple
    n: int
    rref: bool = True
    var_order: tuple = ()

    def __post_init__(self):
        if not self.var_order:
            object.__setattr__(self, "var_order", tuple(range(self.n)))

    @property
    def leads(self):
        return [eq.lead for eq in self.equations]

    @property
    def free(self):
        leads = set(self.leads)
        return [k for k in range(self.n) if k not in leads]

    def tails(self) -> list:
        """f_i for every variable: the equation tail for pivots, x_i itself otherwise."""
        out = [BooleanTerm((k,), 0) for k in range(self.n)]
        for eq in self.equations:
            out[eq.lead] = eq.tail
        return out

    def satisfied(self, point) -> bool:
        return all((point[e.lead] + sum(point[k] for k in e.support) + e.parity) % 2 == 0
                   for e in self.equations)


class _Infeasible:
    """Marker for an XOR system containing the row 0 = 1."""

    def __repr__(self):
        return "INFEASIBLE"

    def __bool__(self):
        return False


INFEASIBLE = _Infeasible()


def _raw_rows(equations, n):
    rows = []
    for eq in equations:
        if isinstance(eq, Gf2Equation):
            vs, parity = [eq.lead, *eq.support], eq.parity
        elif hasattr(eq, "variables"):
            vs, parity = eq.variables, eq.parity
        else:
            vs, parity = eq
        mask = 0
        for v in vs:
            if not 0 <= v < n:
                raise StructuralError(f"variable index {v} out of range for {n} variables")
            mask ^= 1 << v
        rows.append((mask, int(parity) & 1))
    return rows


def gf2_rref(equations: Iterable, n: int):
    """Gauss-Jordan elimination over GF(2) with columns in index order.

    Accepts :class:`Gf2Equation`, objects with ``variables``/``parity`` or
    ``(variables, parity)`` pairs.  Returns a :class:`Gf2System` whose pivot
    of each row is its smallest variable, or :data:`INFEASIBLE`.
    """
    rows = [r for r in _raw_rows(equations, n) if r != (0, 0)]
    pivots = []
    for col in range(n):
        bit = 1 << col
        hit = next((k for k in range(len(pivots), len(rows)) if rows[k][0] & bit), None)
        if hit is None:
            continue
        top = len(pivots)
        rows[top], rows[hit] = rows[hit], rows[top]
        pm, pp = rows[top]
        for k in range(len(rows)):
            if k != top and rows[k][0] & bit:
                rows[k] = (rows[k][0] ^ pm, rows[k][1] ^ pp)
        pivots.append(col)
    if any(mask == 0 and parity for mask, parity in rows[len(pivots):]):
        return INFEASIBLE
    eqs = []
    for col, (mask, parity) in zip(pivots, rows):
        support = frozenset(k for k in range(n) if mask >> k & 1 and k != col)
        eqs.append(Gf2Equation(col, support, parity))
    return Gf2System(tuple(eqs), n)


# -- lex basis ---------------------------------------------------------------

def multilinear_xor(support: Iterable[int], n: int, parity: int = 0) -> Polynomial:
    """M(f): the multilinear polynomial equal to ``xor(support) xor parity`` on 0/1 points."""
    support = sorted(support)
    terms = {}
    for k in range(1, len(support) + 1):
        c = Fraction((-1) ** (k - 1) * 2 ** (k - 1))
        if parity:
            c = -c
        for sub in combinations(support, k):
            m = [0] * n
            for v in sub:
                m[v] = 1
            terms[tuple(m)] = c
    if parity:
        terms[(0,) * n] = Fraction(1)
    return Polynomial(n, terms)


def lift_equation(eq: Gf2Equation, n: int, expand_threshold: int = EXPAND_THRESHOLD) -> Polynomial:
    """``x_lead - M(f)`` written out in full (2^|support| - 1 product terms)."""
    if len(eq.support) > expand_threshold:
        raise BudgetExceeded(f"support of size {len(eq.support)} exceeds the expansion "
                             f"threshold {expand_threshold}")
    return Polynomial.variable(n, eq.lead) - multilinear_xor(eq.support, n, eq.parity)


@dataclass(frozen=True)
class G1:
    """Symbolic lex basis: pivot equations plus squares of the free variables."""

    equations: tuple
    squares: tuple
    n: int

    def expand(self, expand_threshold: int = EXPAND_THRESHOLD) -> list:
        out = [lift_equation(eq, self.n, expand_threshold) for eq in self.equations]
        for k in self.squares:
            x = Polynomial.variable(self.n, k)
            out.append(x * x - x)
        return out


def build_g1(sys: Gf2System) -> G1:
    if not isinstance(sys, Gf2System) or not sys.rref:
        raise DomainError("build_g1 needs a feasible system in reduced row echelon form")
    return G1(tuple(sys.equations), tuple(sys.free), sys.n)


def lex_basis(sys: Gf2System) -> GroebnerBasis:
    """The reduced lex basis G1, expanded."""
    g1 = build_g1(sys)
    return GroebnerBasis.build(g1.expand(), LEX, sys.n, reduced=True)


# -- Boolean-term algebra ----------------------------------------------------

@dataclass(frozen=True)
class BooleanTerm:
    support: frozenset
    parity: int = 0

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        object.__setattr__(self, "parity", int(self.parity) & 1)

    def __xor__(self, other):
        return BooleanTerm(self.support ^ other.support, self.parity ^ other.parity)

    def evaluate(self, point) -> int:
        return (sum(int(point[k]) for k in self.support) + self.parity) % 2

    def __str__(self):
        parts = [f"x{k + 1}" for k in sorted(self.support)]
        if self.parity or not parts:
            parts.append(str(self.parity))
        return " xor ".join(parts)


@dataclass(frozen=True)
class TermCombination:
    """``constant + sum(coefficient * term)``; constant terms fold into ``constant``.

    ``longest`` marks the XOR of all factors when the combination came from
    :func:`expand_product`.
    """

    terms: dict = field(default_factory=dict)
    constant: Fraction = Fraction(0)
    longest: BooleanTerm | None = field(default=None, compare=False)

    def __post_init__(self):
        terms = {}
        const = Fraction(self.constant)
        for t, c in self.terms.items():
            if not c:
                continue
            if not t.support:
                const += c * t.parity
                continue
            v = terms.get(t, 0) + c
            if v:
                terms[t] = v
            else:
                terms.pop(t, None)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "constant", const)

    def __add__(self, other):
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, 0) + c
        return TermCombination(terms, self.constant + other.constant)

    def scale(self, c):
        c = Fraction(c)
        return TermCombination({t: c * v for t, v in self.terms.items()}, c * self.constant)

    def normalized(self) -> TermCombination:
        """Rewrite every ``T xor 1`` as ``1 - T`` so all terms have parity 0."""
        terms = {}
        const = self.constant
        for t, c in self.terms.items():
            if t.parity:
                const += c
                c = -c
                t = BooleanTerm(t.support, 0)
            terms[t] = terms.get(t, 0) + c
        return TermCombination(terms, const)

    def evaluate(self, point) -> Fraction:
        return self.constant + sum(c * t.evaluate(point) for t, c in self.terms.items())

    def __str__(self):
        parts = [str(self.constant)] if self.constant or not self.terms else []
        for t, c in sorted(self.terms.items(), key=lambda tc: (len(tc[0].support), sorted(tc[0].support))):
            parts.append(f"{c}*({t})")
        return " + ".join(parts)


def expand_product(factors: Sequence[BooleanTerm]) -> TermCombination:
    """f1*f2*...*fm as a combination of Boolean terms.

    The XOR of every nonempty k-subset of the factors gets coefficient
    (-1)^(k-1) / 2^(m-1); this holds because each f is 0/1 valued.
    """
    m = len(factors)
    if m == 0:
        raise DomainError("empty product")
    scale = Fraction(1, 2 ** (m - 1))
    terms = {}
    const = Fraction(0)
    for k in range(1, m + 1):
        c = scale if k % 2 else -scale
        for sub in combinations(factors, k):
            t = sub[0]
            for f in sub[1:]:
                t = t ^ f
            if t.support:
                terms[t] = terms.get(t, 0) + c
            else:
                const += c * t.parity
    longest = factors[0]
    for f in factors[1:]:
        longest = longest ^ f
    return TermCombination(terms, const, longest)


def reduce_monomial(q, sys: Gf2System) -> TermCombination:
    """q|G1, the normal form of monomial ``q`` modulo G1, as Boolean terms."""
    tails = sys.tails()
    factors = [tails[k] for k, e in enumerate(q) for _ in range(e)]
    if not factors:
        return TermCombination({}, Fraction(1))
    return expand_product(factors)


# -- grlex conversion --------------------------------------------------------

def _monomials_of_degree(n, k):
    for combo in combinations_with_replacement(range(n), k):
        m = [0] * n
        for v in combo:
            m[v] += 1
        yield tuple(m)


def _divisors(q):
    out = [()]
    for e in q:
        out = [d + (j,) for d in out for j in range(e + 1)]
    return out


@dataclass
class ConversionState:
    """Standard monomials ``B`` and, for every registered support S, the
    parity-0 Boolean term T(S, 0) written as a combination of ``B``."""

    B: list = field(default_factory=list)
    registry: dict = field(default_factory=dict)
    G2: list = field(default_factory=list)
    ops: int = 0


def convert(sys: Gf2System, d: int, counter: list | None = None) -> GroebnerBasis:
    """Degree-``d`` slice of the reduced grlex basis of the solution ideal.

    Monomials are visited in increasing grlex order, degree 1 first, skipping
    multiples of leading monomials already emitted.  ``counter[0]`` receives
    the number of rational operations spent, for growth measurements.
    """
    if not isinstance(sys, Gf2System) or not sys.rref:
        raise DomainError("convert needs a feasible system in reduced row echelon form")
    if d < 1:
        raise DomainError("the degree bound must be at least 1")
    n = sys.n
    tails = sys.tails()
    st = ConversionState(B=[(0,) * n])
    lms = set()

    for deg in range(1, d + 1):
        queue = sorted(_monomials_of_degree(n, deg), key=GRLEX.key)
        for q in queue:
            if any(dv in lms for dv in _divisors(q)):
                continue
            factors = [tails[k] for k, e in enumerate(q) for _ in range(e)]
            comb = expand_product(factors).normalized()
            st.ops += 2 ** len(factors)
            # accumulate q|G1 over B, leaving out supports not yet registered
            vec = {0: comb.constant} if comb.constant else {}
            fresh = []
            for t, c in comb.terms.items():
                expr = st.registry.get(t.support)
                if expr is None:
                    fresh.append((t.support, c))
                    continue
                for j, v in expr.items():
                    vec[j] = vec.get(j, 0) + c * v
                    st.ops += 1
            if not fresh:
                st.G2.append(_emit(q, vec, st.B, n))
                lms.add(q)
            elif len(fresh) == 1:
                support, c = fresh[0]
                # T(support) = (b_new - vec) / c
                expr = {j: -v / c for j, v in vec.items() if v}
                expr[len(st.B)] = 1 / c
                st.registry[support] = expr
                st.B.append(q)
                st.ops += len(expr)
            else:
                raise RuntimeError(f"monomial {q} introduced {len(fresh)} new Boolean terms")
    if counter is not None:
        counter[0] += st.ops
    return GroebnerBasis.build(st.G2, GRLEX, n, reduced=True, truncation=d)


def _emit(q, vec, B, n) -> Polynomial:
    terms = {q: Fraction(1)}
    for j, v in vec.items():
        if v:
            terms[B[j]] = terms.get(B[j], 0) - v
    return Polynomial(n, terms)


def standard_monomials(sys: Gf2System, d: int) -> list:
    """Standard monomials of degree <= d, grlex increasing."""
    g2 = convert(sys, d)
    lms = g2.leading_monomials()
    out = []
    for deg in range(d + 1):
        for q in sorted(_monomials_of_degree(sys.n, deg), key=GRLEX.key):
            if not any(mono_divides(m, q) for m in lms):
                out.append(q)
    return out


# -- pipeline entry ----------------------------------------------------------

def system_of(inst) -> Gf2System | _Infeasible:
    """RREF of an instance made only of XOR constraints over domain {0, 1}."""
    from .csp import Gf2Linear
    if tuple(inst.domain) != (0, 1):
        raise DomainError("the minority pipeline needs the domain {0, 1}")
    bad = [c for c in inst.constraints if not isinstance(c, Gf2Linear)]
    if bad:
        raise DomainError(f"the minority pipeline only accepts xor constraints, got {bad[0].kind}")
    return gf2_rref(inst.constraints, inst.n)


def minority_basis(inst, d: int) -> GroebnerBasis:
    """Degree-``d`` reduced grlex basis for an XOR instance; ``{1}`` if infeasible."""
    sys = system_of(inst)
    if sys is INFEASIBLE:
        return GroebnerBasis.build([Polynomial.constant(inst.n, 1)], GRLEX, inst.n,
                                   reduced=True, truncation=d)
    return convert(sys, d)
