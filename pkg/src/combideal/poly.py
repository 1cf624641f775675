"""Sparse multivariate polynomials over the rationals.

Monomials are exponent tuples of length ``nvars``; variable ``k`` (0-based)
is written ``x<k+1>`` in text.  Coefficients are :class:`fractions.Fraction`
and no floating point is involved anywhere.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DomainError, ParseError, StructuralError

Monomial = tuple


@dataclass(frozen=True)
class MonomialOrder:
    """A lex or grlex order with an optional variable priority.

    ``priority`` lists variable indices from most to least significant; the
    default is x1 > x2 > ... > xn.
    """

    kind: str = "grlex"
    priority: tuple | None = None
    key: Callable = field(init=False, repr=False, compare=False)
    neg_key: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("lex", "grlex"):
            raise DomainError(f"unknown monomial order {self.kind!r}")
        prio = self.priority
        if prio is not None:
            prio = tuple(prio)
            if sorted(prio) != list(range(len(prio))):
                raise DomainError("variable priority must be a permutation")
            if prio == tuple(range(len(prio))):
                prio = None
            object.__setattr__(self, "priority", prio)

        if prio is None:
            if self.kind == "lex":
                key = tuple
                neg = lambda m: tuple(-e for e in m)
            else:
                key = lambda m: (sum(m),) + m
                neg = lambda m: (-sum(m),) + tuple(-e for e in m)
        else:
            if self.kind == "lex":
                key = lambda m: tuple(m[p] for p in prio)
                neg = lambda m: tuple(-m[p] for p in prio)
            else:
                key = lambda m: (sum(m),) + tuple(m[p] for p in prio)
                neg = lambda m: (-sum(m),) + tuple(-m[p] for p in prio)
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "neg_key", neg)

    def __str__(self):
        return self.kind


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")


def compare(a: Monomial, b: Monomial, order: MonomialOrder = GRLEX) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise StructuralError(f"monomials over {len(a)} and {len(b)} variables")
    if order.priority is not None and len(order.priority) != len(a):
        raise StructuralError("order priority does not match variable count")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def _rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    if isinstance(c, float):
        raise DomainError("floating point coefficients are not accepted")
    return Fraction(c)


class Polynomial:
    """Immutable sparse polynomial: a map from monomials to nonzero rationals."""

    __slots__ = ("nvars", "_terms", "_leads", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for m, c in items:
            m = tuple(m)
            if len(m) != nvars:
                raise StructuralError(f"monomial {m} has wrong length for {nvars} variables")
            if any(e < 0 for e in m):
                raise DomainError(f"negative exponent in {m}")
            c = _rational(c) + clean.get(m, 0)
            if c:
                clean[m] = c
            else:
                clean.pop(m, None)
        self.nvars = nvars
        self._terms = clean
        self._leads = {}
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._leads = {}
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars, c):
        c = _rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars, i, power=1):
        if not 0 <= i < nvars:
            raise StructuralError(f"variable index {i} out of range for {nvars} variables")
        m = [0] * nvars
        m[i] = power
        return cls._raw(nvars, {tuple(m): Fraction(1)})

    @classmethod
    def term(cls, nvars, mono, coeff=1):
        return cls(nvars, {tuple(mono): coeff})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def variables(self) -> set:
        out = set()
        for m in self._terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def _lead(self, order):
        lead = self._leads.get(order)
        if lead is None:
            if not self._terms:
                raise DomainError("the zero polynomial has no leading term")
            m = max(self._terms, key=order.key)
            lead = (m, self._terms[m])
            self._leads[order] = lead
        return lead

    def leading_monomial(self, order=GRLEX) -> Monomial:
        return self._lead(order)[0]

    def leading_coefficient(self, order=GRLEX) -> Fraction:
        return self._lead(order)[1]

    def leading_term(self, order=GRLEX):
        return self._lead(order)

    def multideg(self, order=GRLEX) -> Monomial:
        return self._lead(order)[0]

    def sorted_terms(self, order=GRLEX, descending=True):
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=descending)

    def coefficient(self, mono) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise StructuralError(f"point of length {len(point)} for {self.nvars} variables")
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= x ** e
            total += v
        return total

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise StructuralError(f"polynomials over {self.nvars} and {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for m, c in other._terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                del terms[m]
        return Polynomial._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> Polynomial:
        c = _rational(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {m: c * v for m, v in self._terms.items()})

    def mul_term(self, mono, coeff=1) -> Polynomial:
        coeff = _rational(coeff)
        if not coeff:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            self.nvars, {mono_mul(m, mono): c * coeff for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                v = terms.get(m, 0) + c1 * c2
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        return Polynomial._raw(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power")
        out = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def monic(self, order=GRLEX) -> Polynomial:
        lc = self.leading_coefficient(order)
        return self if lc == 1 else self.scale(1 / lc)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.constant(self.nvars, other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.nvars}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def dot(cofactors: Sequence[Polynomial], basis: Sequence[Polynomial], nvars: int) -> Polynomial:
    """Return sum of cofactor_i * basis_i."""
    total = Polynomial.zero(nvars)
    for h, g in zip(cofactors, basis):
        if h:
            total = total + h * g
    return total


# -- division ----------------------------------------------------------------

def _reduce(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder, track: bool):
    for g in basis:
        if g.nvars != f.nvars:
            raise StructuralError("basis and dividend have different variable counts")
        if not g:
            raise DomainError("division by the zero polynomial")
    nvars = f.nvars
    leads = [g.leading_term(order) for g in basis]
    # bitmask of the variables in each leading monomial: a cheap necessary test
    masks = [sum(1 << k for k, e in enumerate(lm) if e) for lm, _ in leads]
    gterms = [list(g._terms.items()) for g in basis]
    neg = order.neg_key

    p = dict(f._terms)
    heap = [(neg(m), m) for m in p]
    heapq.heapify(heap)
    queued = set(p)
    rem = {}
    quots = [{} for _ in basis] if track else None
    steps = 0

    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = p.get(m)
        if c is None:
            continue
        mmask = sum(1 << k for k, e in enumerate(m) if e)
        for idx, (lm, lc) in enumerate(leads):
            if not masks[idx] & ~mmask and all(x <= y for x, y in zip(lm, m)):
                break
        else:
            rem[m] = p.pop(m)
            continue
        steps += 1
        shift = tuple(y - x for x, y in zip(lm, m))
        q = c / lc
        if track:
            quots[idx][shift] = quots[idx].get(shift, 0) + q
        for gm, gc in gterms[idx]:
            nm = tuple(a + b for a, b in zip(gm, shift))
            v = p.get(nm, 0) - q * gc
            if v:
                p[nm] = v
                if nm not in queued:
                    queued.add(nm)
                    heapq.heappush(heap, (neg(nm), nm))
            else:
                p.pop(nm, None)

    remainder = Polynomial._raw(nvars, rem)
    if not track:
        return None, remainder, steps
    quotients = [Polynomial(nvars, {m: c for m, c in q.items() if c}) for q in quots]
    return quotients, remainder, steps


def divide(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = GRLEX):
    """Multivariate division of ``f`` by the ordered list ``basis``.

    At each step the first basis element (in list order) whose leading term
    divides the current leading term is used; a leading term divisible by none
    moves to the remainder.  Returns ``(quotients, remainder)`` with
    ``f == sum(q_i * g_i) + remainder``.
    """
    quotients, remainder, _ = _reduce(f, basis, order, True)
    return quotients, remainder


def remainder(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = GRLEX,
              counter: list | None = None) -> Polynomial:
    """Remainder of :func:`divide` without building quotients.

    When ``counter`` is given, the number of elimination steps is added to
    ``counter[0]``.
    """
    _, rem, steps = _reduce(f, basis, order, False)
    if counter is not None:
        counter[0] += steps
    return rem


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GRLEX) -> Polynomial:
    if not f or not g:
        raise DomainError("S-polynomial of a zero polynomial")
    (mf, cf), (mg, cg) = f.leading_term(order), g.leading_term(order)
    lcm = mono_lcm(mf, mg)
    return f.mul_term(mono_div(lcm, mf), 1 / cf) - g.mul_term(mono_div(lcm, mg), 1 / cg)


# -- text syntax -------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


def format_poly(p: Polynomial, order: MonomialOrder = GRLEX) -> str:
    """Canonical text form, terms in descending ``order``."""
    if not p:
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms(order)):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        mono = format_monomial(m)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if k == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\S))")


class _PolyParser:
    """Recursive descent over ``+ - * / ^ ( )``, integers and ``x<k>``.

    Division is only allowed by a nonzero constant.  Juxtaposition (``3x1``)
    means multiplication.
    """

    def __init__(self, text, nvars, line):
        self.text = text
        self.nvars = nvars
        self.line = line
        self.tokens = []
        pos = 0
        while True:
            mt = _TOKEN.match(text, pos)
            if not mt:
                break
            if mt.group(1) is not None:
                self.tokens.append(("num", int(mt.group(1)), mt.start(1)))
            elif mt.group(2) is not None:
                self.tokens.append(("var", int(mt.group(2)), mt.start(2) - 1))
            elif mt.group(3) is not None:
                ch = mt.group(3)
                if ch not in "+-*/^()":
                    raise self.error(f"unexpected character {ch!r}", mt.start(3))
                self.tokens.append((ch, ch, mt.start(3)))
            pos = mt.end()
        self.pos = 0
        self.maxvar = max((v for kind, v, _ in self.tokens if kind == "var"), default=0)
        if self.nvars is None:
            self.nvars = self.maxvar
        for kind, v, col in self.tokens:
            if kind == "var" and not 1 <= v <= self.nvars:
                raise self.error(f"variable x{v} outside x1..x{self.nvars}", col)

    def error(self, msg, col):
        return ParseError(msg, self.line, None if col is None else col + 1)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise self.error("empty polynomial", 0)
        p = self.expr()
        kind, _, col = self.peek()
        if kind is not None:
            raise self.error("unexpected trailing input", col)
        return p

    def expr(self):
        kind, _, _ = self.peek()
        if kind in ("+", "-"):
            self.take()
            p = self.term()
            if kind == "-":
                p = -p
        else:
            p = self.term()
        while self.peek()[0] in ("+", "-"):
            kind, _, _ = self.take()
            t = self.term()
            p = p + t if kind == "+" else p - t
        return p

    def term(self):
        p = self.power()
        while True:
            kind, _, col = self.peek()
            if kind == "*":
                self.take()
                p = p * self.power()
            elif kind == "/":
                self.take()
                d = self.power()
                if not d.is_constant() or not d:
                    raise self.error("division by a non-constant or zero", col)
                p = p.scale(1 / d.coefficient((0,) * self.nvars))
            elif kind in ("num", "var", "("):
                p = p * self.power()
            else:
                return p

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            kind, v, col = self.take()
            if kind != "num":
                raise self.error("exponent must be a non-negative integer", col)
            base = base ** v
        return base

    def atom(self):
        kind, v, col = self.take()
        if kind == "num":
            return Polynomial.constant(self.nvars, v)
        if kind == "var":
            return Polynomial.variable(self.nvars, v - 1)
        if kind == "(":
            p = self.expr()
            k2, _, c2 = self.take()
            if k2 != ")":
                raise self.error("expected ')'", c2)
            return p
        if kind == "-":
            return -self.power()
        if kind is None:
            raise self.error("unexpected end of input", col)
        raise self.error(f"unexpected {v!r}", col)


def parse_poly(text: str, nvars: int | None = None, line: int | None = None) -> Polynomial:
    """Parse e.g. ``3/2*x1^2*x3 - x2 + 1``.

    ``nvars`` defaults to the largest variable index that occurs.
    """
    return _PolyParser(text, nvars, line).parse()
