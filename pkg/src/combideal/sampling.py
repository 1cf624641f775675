"""Seeded random instances and polynomials for tests and batch checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .csp import Complete, CspInstance, Gf2Linear, Permutation, TwoFan
from .poly import Polynomial


def random_xor_instance(rng: random.Random, n: int, rows: int, density: float = 0.4) -> CspInstance:
    """``rows`` random XOR equations over ``n`` Boolean variables."""
    cons = []
    for _ in range(rows):
        vs = tuple(v for v in range(n) if rng.random() < density)
        cons.append(Gf2Linear(vs, rng.randint(0, 1)))
    return CspInstance(n, (0, 1), tuple(cons))


def random_dualdisc_instance(rng: random.Random, n: int, k: int, m: int | None = None) -> CspInstance:
    """Mixed permutation, complete and two-fan constraints over ``{0..k-1}``.

    Value sets are kept large so that a fair share of instances is feasible.
    """
    dom = [Fraction(v) for v in range(k)]
    m = rng.randint(1, n) if m is None else m
    big = max(1, k - 1)
    cons = []
    for _ in range(m):
        i, j = rng.sample(range(n), 2)
        kind = rng.choice(("perm", "complete", "twofan", "twofan"))
        if kind == "perm":
            size = rng.randint(big, k)
            cons.append(Permutation(i, j, tuple(zip(rng.sample(dom, size), rng.sample(dom, size)))))
        elif kind == "complete":
            cons.append(Complete(i, frozenset(rng.sample(dom, rng.randint(big, k))),
                                 j, frozenset(rng.sample(dom, rng.randint(big, k)))))
        else:
            di = frozenset(rng.sample(dom, rng.randint(min(2, k), k)))
            dj = frozenset(rng.sample(dom, rng.randint(min(2, k), k)))
            cons.append(TwoFan(i, rng.choice(sorted(di)), di, j, rng.choice(sorted(dj)), dj))
    return CspInstance(n, tuple(dom), tuple(cons))


def random_poly(rng: random.Random, n: int, degree: int, terms: int = 4, coeff: int = 5) -> Polynomial:
    """A random polynomial of total degree at most ``degree``."""
    out = {}
    for _ in range(terms):
        m = [0] * n
        for _ in range(rng.randint(0, degree)):
            m[rng.randrange(n)] += 1
        out[tuple(m)] = Fraction(rng.randint(-coeff, coeff), rng.randint(1, 3))
    return Polynomial(n, out)
