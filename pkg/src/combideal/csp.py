"""CSP instances, their text format, brute-force solutions and ideal generators.

The combinatorial ideal of an instance is the vanishing ideal of its solution
set, so exhaustive enumeration gives a membership oracle for small instances.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import DomainError, ParseError, StructuralError
from .poly import Polynomial

DEFAULT_CAP = 10 ** 6


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _fmt_set(values) -> str:
    return "{" + ",".join(_fmt(v) for v in sorted(values)) + "}"


@dataclass(frozen=True)
class Gf2Linear:
    """x_{v1} xor ... xor x_{vk} = parity over {0,1}."""

    variables: tuple
    parity: int

    def __post_init__(self):
        # repeated variables cancel in pairs
        odd = sorted(v for v in set(self.variables) if self.variables.count(v) % 2)
        object.__setattr__(self, "variables", tuple(odd))
        object.__setattr__(self, "parity", int(self.parity) & 1)

    kind = "xor"

    @property
    def scope(self):
        return self.variables

    def satisfied(self, values) -> bool:
        s = 0
        for v in self.variables:
            x = values[v]
            if x not in (0, 1):
                return False
            s ^= int(x)
        return s == self.parity

    def to_text(self):
        lhs = " ^ ".join(f"x{v + 1}" for v in self.variables) or "0"
        return f"xor {lhs} = {self.parity}"


@dataclass(frozen=True)
class Permutation:
    """{(a, pi(a)) : a in D_ij} on (x_i, x_j) for a bijection pi."""

    i: int
    j: int
    pairs: tuple

    kind = "perm"

    def __post_init__(self):
        pairs = tuple(sorted((Fraction(a), Fraction(b)) for a, b in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        if self.i == self.j:
            raise StructuralError("permutation constraint on a single variable")
        firsts = [a for a, _ in pairs]
        seconds = [b for _, b in pairs]
        if len(set(firsts)) != len(firsts) or len(set(seconds)) != len(seconds):
            raise StructuralError("permutation constraint pairs are not a bijection")

    @property
    def scope(self):
        return (self.i, self.j)

    @property
    def mapping(self):
        return dict(self.pairs)

    def satisfied(self, values) -> bool:
        return (values[self.i], values[self.j]) in self.pairs

    def tuples(self):
        return set(self.pairs)

    def to_text(self):
        body = ", ".join(f"{_fmt(a)}->{_fmt(b)}" for a, b in self.pairs)
        return f"perm x{self.i + 1} x{self.j + 1} : {body}"


@dataclass(frozen=True)
class Complete:
    """D_i x D_j on (x_i, x_j)."""

    i: int
    di: frozenset
    j: int
    dj: frozenset

    kind = "complete"

    def __post_init__(self):
        object.__setattr__(self, "di", frozenset(Fraction(v) for v in self.di))
        object.__setattr__(self, "dj", frozenset(Fraction(v) for v in self.dj))
        if self.i == self.j:
            raise StructuralError("complete constraint on a single variable")

    @property
    def scope(self):
        return (self.i, self.j)

    def satisfied(self, values) -> bool:
        return values[self.i] in self.di and values[self.j] in self.dj

    def tuples(self):
        return set(product(self.di, self.dj))

    def to_text(self):
        return f"complete x{self.i + 1} {_fmt_set(self.di)} x{self.j + 1} {_fmt_set(self.dj)}"


@dataclass(frozen=True)
class TwoFan:
    """({a} x D_j) union (D_i x {b}) on (x_i, x_j)."""

    i: int
    a: Fraction
    di: frozenset
    j: int
    b: Fraction
    dj: frozenset

    kind = "twofan"

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "di", frozenset(Fraction(v) for v in self.di))
        object.__setattr__(self, "dj", frozenset(Fraction(v) for v in self.dj))
        if self.i == self.j:
            raise StructuralError("two-fan constraint on a single variable")
        if self.a not in self.di or self.b not in self.dj:
            raise StructuralError("two-fan centre values must lie in their value sets")

    @property
    def scope(self):
        return (self.i, self.j)

    def satisfied(self, values) -> bool:
        x, y = values[self.i], values[self.j]
        return (x == self.a and y in self.dj) or (x in self.di and y == self.b)

    def tuples(self):
        return {(self.a, y) for y in self.dj} | {(x, self.b) for x in self.di}

    def to_text(self):
        return (f"twofan x{self.i + 1} {_fmt(self.a)} {_fmt_set(self.di)} "
                f"x{self.j + 1} {_fmt(self.b)} {_fmt_set(self.dj)}")


@dataclass(frozen=True)
class Relation:
    """An explicit relation on an arbitrary scope."""

    scope: tuple
    tuples_: frozenset = field(default_factory=frozenset)

    kind = "rel"

    def __post_init__(self):
        scope = tuple(self.scope)
        if len(set(scope)) != len(scope):
            raise StructuralError("relation scope repeats a variable")
        ts = frozenset(tuple(Fraction(v) for v in t) for t in self.tuples_)
        if any(len(t) != len(scope) for t in ts):
            raise StructuralError("relation tuple length differs from its scope")
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "tuples_", ts)

    def satisfied(self, values) -> bool:
        return tuple(values[v] for v in self.scope) in self.tuples_

    def tuples(self):
        return set(self.tuples_)

    def to_text(self):
        sc = ",".join(f"x{v + 1}" for v in self.scope)
        body = ",".join("(" + ",".join(_fmt(v) for v in t) + ")" for t in sorted(self.tuples_))
        return f"rel ({sc}) : {body}"


@dataclass(frozen=True)
class CspInstance:
    n: int
    domain: tuple = (Fraction(0), Fraction(1))
    constraints: tuple = ()

    def __post_init__(self):
        dom = tuple(sorted({Fraction(v) for v in self.domain}))
        if len(dom) != len(tuple(self.domain)):
            raise StructuralError("domain values must be distinct")
        if not dom:
            raise StructuralError("empty domain")
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.n < 1:
            raise StructuralError("an instance needs at least one variable")
        dset = set(dom)
        for c in self.constraints:
            if any(not 0 <= v < self.n for v in c.scope):
                raise StructuralError(f"constraint {c.to_text()!r} uses a variable outside x1..x{self.n}")
            if isinstance(c, Gf2Linear):
                continue
            values = set()
            if isinstance(c, Permutation):
                values = {v for p in c.pairs for v in p}
            elif isinstance(c, (Complete, TwoFan)):
                values = set(c.di) | set(c.dj)
            elif isinstance(c, Relation):
                values = {v for t in c.tuples_ for v in t}
            if not values <= dset:
                raise StructuralError(f"constraint {c.to_text()!r} uses values outside the domain")

    def kinds(self) -> set:
        return {c.kind for c in self.constraints}

    def to_text(self) -> str:
        lines = [f"vars {self.n}", "domain " + ",".join(_fmt(v) for v in self.domain)]
        lines += [c.to_text() for c in self.constraints]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SolutionSet:
    tuples: tuple
    truncated: bool = False

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, t):
        return tuple(t) in set(self.tuples)


# -- enumeration -------------------------------------------------------------

def enumerate_solutions(inst: CspInstance, cap: int = DEFAULT_CAP) -> SolutionSet:
    """All solutions by backtracking in variable-index order.

    A constraint is checked as soon as the last variable of its scope is
    assigned.  Stops with ``truncated=True`` once more than ``cap`` solutions
    exist.
    """
    if cap < 1:
        raise DomainError("cap must be at least 1")
    n = inst.n
    checks = [[] for _ in range(n)]
    infeasible = False
    for c in inst.constraints:
        if c.scope:
            checks[max(c.scope)].append(c)
        elif not c.satisfied(()):
            infeasible = True
    if infeasible:
        return SolutionSet(())
    out = []
    values = [None] * n
    domain = inst.domain

    def walk(k):
        if k == n:
            out.append(tuple(values))
            return len(out) > cap
        for v in domain:
            values[k] = v
            if all(c.satisfied(values) for c in checks[k]):
                if walk(k + 1):
                    return True
        values[k] = None
        return False

    truncated = walk(0)
    if truncated:
        return SolutionSet(tuple(out[:cap]), True)
    return SolutionSet(tuple(out))


def vanishing_member(f: Polynomial, sols: SolutionSet) -> bool:
    """True iff ``f`` vanishes on every solution, i.e. ``f`` lies in I(Sol)."""
    if sols.truncated:
        raise DomainError("solution set was truncated; it cannot serve as a membership oracle")
    return all(f.evaluate(t) == 0 for t in sols.tuples)


# -- ideal generators --------------------------------------------------------

def domain_polynomial(n: int, k: int, values: Iterable) -> Polynomial:
    """prod_{a in values} (x_k - a)."""
    x = Polynomial.variable(n, k)
    p = Polynomial.constant(n, 1)
    for a in sorted(set(values)):
        p = p * (x - a)
    return p


def _lagrange_factor(n: int, k: int, c: Fraction, domain: Sequence) -> Polynomial:
    """Polynomial in x_k that is 1 at c and 0 at the other domain values."""
    x = Polynomial.variable(n, k)
    p = Polynomial.constant(n, 1)
    for e in domain:
        if e != c:
            p = p * (x - e).scale(1 / (c - e))
    return p


def relation_generators(n: int, scope: Sequence[int], tuples, domain: Sequence) -> list:
    """Point indicators of every domain tuple outside the relation."""
    allowed = set(tuples)
    gens = []
    for t in product(domain, repeat=len(scope)):
        if t in allowed:
            continue
        p = Polynomial.constant(n, 1)
        for k, c in zip(scope, t):
            p = p * _lagrange_factor(n, k, c, domain)
        gens.append(p)
    return gens


def constraint_generators(n: int, c, domain: Sequence) -> list:
    if isinstance(c, Gf2Linear):
        from .minority import Gf2Equation, lift_equation
        if not c.variables:
            return [Polynomial.constant(n, 1)] if c.parity else []
        eq = Gf2Equation(c.variables[0], frozenset(c.variables[1:]), c.parity)
        return [lift_equation(eq, n)]
    if isinstance(c, Permutation):
        from .dualdisc import lagrange_interpolate
        dom_i = [a for a, _ in c.pairs]
        dom_j = [b for _, b in c.pairs]
        interp = lagrange_interpolate(c.pairs, n, c.i)
        return [domain_polynomial(n, c.i, dom_i), domain_polynomial(n, c.j, dom_j),
                Polynomial.variable(n, c.j) - interp]
    if isinstance(c, Complete):
        return [domain_polynomial(n, c.i, c.di), domain_polynomial(n, c.j, c.dj)]
    if isinstance(c, TwoFan):
        fan = (Polynomial.variable(n, c.i) - c.a) * (Polynomial.variable(n, c.j) - c.b)
        return [fan, domain_polynomial(n, c.i, c.di), domain_polynomial(n, c.j, c.dj)]
    if isinstance(c, Relation):
        return relation_generators(n, c.scope, c.tuples_, domain)
    raise StructuralError(f"unknown constraint {c!r}")


def ideal_generators(inst: CspInstance) -> list:
    """Domain polynomials for every variable plus a generating set per constraint."""
    n = inst.n
    gens = [domain_polynomial(n, k, inst.domain) for k in range(n)]
    for c in inst.constraints:
        for g in constraint_generators(n, c, inst.domain):
            if g and g not in gens:
                gens.append(g)
    return gens


# -- text format -------------------------------------------------------------

_INST_TOKEN = re.compile(r"\s*(?:(->)|(x\d+)|(-?\d+(?:/\d+)?)|([A-Za-z_]\w*)|(\S))")


class _LineParser:
    def __init__(self, text, lineno, n):
        self.lineno = lineno
        self.n = n
        self.toks = []
        pos = 0
        while True:
            mt = _INST_TOKEN.match(text, pos)
            if not mt:
                break
            col = mt.start(mt.lastindex) + 1
            kind = ["arrow", "var", "num", "word", "punct"][mt.lastindex - 1]
            self.toks.append((kind, mt.group(mt.lastindex), col))
            pos = mt.end()
        self.pos = 0
        self.end_col = len(text) + 1

    def error(self, msg, col=None):
        if col is None:
            col = self.toks[self.pos][2] if self.pos < len(self.toks) else self.end_col
        return ParseError(msg, self.lineno, col)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, self.end_col)

    def take(self, kind=None, value=None, what=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise self.error(f"expected {what or value or kind}")
        self.pos += 1
        return tok

    def at(self, value):
        return self.peek()[1] == value

    def done(self):
        if self.pos != len(self.toks):
            raise self.error("unexpected trailing input")

    def var(self):
        _, text, col = self.take("var", what="a variable like x1")
        k = int(text[1:])
        if self.n is not None and not 1 <= k <= self.n:
            raise self.error(f"variable {text} outside x1..x{self.n}", col)
        if k < 1:
            raise self.error("variables are numbered from x1", col)
        return k - 1

    def num(self):
        _, text, _ = self.take("num", what="a rational value")
        return Fraction(text)

    def int_(self):
        _, text, col = self.take("num", what="an integer")
        if "/" in text or text.startswith("-"):
            raise self.error("expected a non-negative integer", col)
        return int(text)

    def value_set(self):
        self.take("punct", "{")
        vals = []
        if not self.at("}"):
            vals.append(self.num())
            while self.at(","):
                self.take()
                vals.append(self.num())
        self.take("punct", "}")
        return frozenset(vals)

    def value_tuple(self):
        self.take("punct", "(")
        vals = [self.num()]
        while self.at(","):
            self.take()
            vals.append(self.num())
        self.take("punct", ")")
        return tuple(vals)


def parse_instance(text: str) -> CspInstance:
    """Parse the line-oriented instance format (``#`` starts a comment)."""
    n = None
    domain = None
    constraints = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        p = _LineParser(line, lineno, n)
        _, word, col = p.take("word", what="a declaration keyword")
        if word != "vars" and n is None:
            raise ParseError("'vars n' must come first", lineno, col)
        try:
            if word == "vars":
                if n is not None:
                    raise p.error("duplicate 'vars' declaration", col)
                n = p.int_()
                if n < 1:
                    raise p.error("need at least one variable", col)
            elif word == "domain":
                vals = [p.num()]
                while p.at(","):
                    p.take()
                    vals.append(p.num())
                if len(set(vals)) != len(vals):
                    raise p.error("repeated domain value", col)
                domain = tuple(vals)
            elif word == "xor":
                vs = [p.var()]
                while p.at("^"):
                    p.take()
                    vs.append(p.var())
                p.take("punct", "=")
                rhs = p.int_()
                if rhs not in (0, 1):
                    raise p.error("right-hand side must be 0 or 1")
                constraints.append(Gf2Linear(tuple(vs), rhs))
            elif word == "perm":
                i, j = p.var(), p.var()
                p.take("punct", ":")
                pairs = []
                while True:
                    a = p.num()
                    p.take("arrow", what="'->'")
                    pairs.append((a, p.num()))
                    if not p.at(","):
                        break
                    p.take()
                constraints.append(Permutation(i, j, tuple(pairs)))
            elif word == "complete":
                i = p.var()
                di = p.value_set()
                j = p.var()
                dj = p.value_set()
                constraints.append(Complete(i, di, j, dj))
            elif word == "twofan":
                i = p.var()
                a = p.num()
                di = p.value_set()
                j = p.var()
                b = p.num()
                dj = p.value_set()
                constraints.append(TwoFan(i, a, di, j, b, dj))
            elif word == "rel":
                p.take("punct", "(")
                scope = [p.var()]
                while p.at(","):
                    p.take()
                    scope.append(p.var())
                p.take("punct", ")")
                p.take("punct", ":")
                tuples = []
                if p.peek()[0] is not None:
                    tuples.append(p.value_tuple())
                    while p.at(","):
                        p.take()
                        tuples.append(p.value_tuple())
                constraints.append(Relation(tuple(scope), frozenset(tuples)))
            else:
                raise ParseError(f"unknown declaration {word!r}", lineno, col)
            p.done()
        except StructuralError as exc:
            raise ParseError(str(exc), lineno, 1) from exc
    if n is None:
        raise ParseError("empty instance: missing 'vars n'", 1 if not text else None)
    try:
        return CspInstance(n, domain if domain is not None else (0, 1), tuple(constraints))
    except StructuralError as exc:
        raise ParseError(str(exc)) from exc
