import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from combideal.buchberger import buchberger, is_groebner, reduce_basis
from combideal.csp import (Complete, CspInstance, Permutation, TwoFan, enumerate_solutions,
                           ideal_generators, parse_instance, vanishing_member)
from combideal.dualdisc import (CfPool, arc_consistency, binarize, build_cpcs, cf_basis,
                                classify, combined_basis, cpc_basis, dualdisc_basis,
                                lagrange_interpolate)
from combideal.errors import DomainError, StructuralError
from combideal.poly import GRLEX, Polynomial, parse_poly, remainder
from combideal.sampling import random_dualdisc_instance

F = Fraction
D3 = (F(0), F(1), F(2))

WORKED_RELATIONS = """\
vars 3
domain 0,1,2
rel (x1,x2,x3) : (0,1,1),(2,0,2),(2,2,1),(2,0,1),(2,1,1)
rel (x1,x3) : (1,1),(2,1)
"""


# -- interpolation -----------------------------------------------------------

def test_interpolation_examples():
    assert lagrange_interpolate([(0, 0), (1, 1)], 1, 0) == parse_poly("x1", 1)
    assert lagrange_interpolate([(3, 5)], 1, 0) == Polynomial.constant(1, 5)
    with pytest.raises(DomainError):
        lagrange_interpolate([(1, 0), (1, 2)], 1, 0)


def _vandermonde_solve(points):
    # independent route: Gauss-Jordan on the Vandermonde system
    k = len(points)
    rows = [[F(u) ** e for e in range(k)] + [F(v)] for u, v in points]
    for c in range(k):
        piv = next(r for r in range(c, k) if rows[r][c])
        rows[c], rows[piv] = rows[piv], rows[c]
        rows[c] = [x / rows[c][c] for x in rows[c]]
        for r in range(k):
            if r != c and rows[r][c]:
                rows[r] = [a - rows[r][c] * b for a, b in zip(rows[r], rows[c])]
    return [rows[e][k] for e in range(k)]


def test_three_point_interpolant_matches_vandermonde():
    pts = [(0, 1), (1, 2), (2, 0)]
    got = lagrange_interpolate(pts, 1, 0)
    coeffs = _vandermonde_solve(pts)
    assert got == Polynomial(1, {(e,): c for e, c in enumerate(coeffs)})
    assert got == parse_poly("-3/2*x1^2 + 5/2*x1 + 1", 1)
    assert all(got.evaluate([F(u)]) == v for u, v in pts)


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(-5, 5), st.integers(-5, 5), min_size=1, max_size=5))
def test_interpolation_agrees_with_vandermonde(table):
    pts = sorted(table.items())
    got = lagrange_interpolate(pts, 1, 0)
    assert got == Polynomial(1, {(e,): c for e, c in enumerate(_vandermonde_solve(pts))})


# -- arc consistency and decomposition ------------------------------------------

def test_worked_instance_decomposes_and_prunes():
    inst = binarize(parse_instance(WORKED_RELATIONS))
    kinds = sorted(c.kind for c in inst.constraints)
    assert kinds == ["complete", "twofan", "twofan", "twofan"]
    assert TwoFan(0, 2, {0, 2}, 1, 1, {0, 1, 2}) in inst.constraints
    doms = arc_consistency(inst)
    assert doms[0] == {2} and doms[2] == {1}
    sols = enumerate_solutions(inst)
    for v in range(3):
        assert {t[v] for t in sols} <= doms[v]


def test_arc_consistency_detects_empty_domain():
    inst = CspInstance(2, D3, (Permutation(0, 1, ((0, 1),)), Complete(0, {2}, 1, set(D3))))
    assert arc_consistency(inst) is None
    assert arc_consistency(CspInstance(2, D3)) == [frozenset(D3)] * 2


def test_arc_consistency_refuses_wide_constraints():
    inst = parse_instance("vars 3\ndomain 0,1\nrel (x1,x2,x3) : (0,0,0)\n")
    with pytest.raises(StructuralError):
        arc_consistency(inst)


def test_binarize_rejects_non_majority_relation():
    inst = parse_instance("vars 3\ndomain 0,1\nrel (x1,x2,x3) : (0,0,1),(0,1,0),(1,0,0),(1,1,1)\n")
    with pytest.raises(StructuralError):
        binarize(inst)


# -- chained permutation constraints -------------------------------------------

def test_chain_of_two():
    cs = build_cpcs([Permutation(0, 1, ((0, 1), (1, 2), (2, 0))),
                     Permutation(1, 2, ((0, 0), (1, 2), (2, 1)))])
    (c,) = list(cs)
    assert c.vars == [0, 1, 2]
    assert c.relation() == {(F(0), F(1), F(2)), (F(1), F(2), F(1)), (F(2), F(0), F(0))}
    assert c.sigma(0, 2) == {F(0): F(2), F(1): F(1), F(2): F(0)}


def test_disjoint_perms_give_disjoint_chains():
    cs = build_cpcs([Permutation(0, 1, ((0, 1),)), Permutation(2, 3, ((1, 1),))])
    assert len(cs) == 2
    a, b = list(cs)
    assert not set(a.vars) & set(b.vars)


def test_conflicting_chain_is_infeasible():
    assert build_cpcs([Permutation(0, 1, ((0, 0), (1, 1))), Permutation(1, 2, ((0, 1), (1, 0))),
                       Permutation(0, 2, ((0, 0), (1, 1)))]) is None


def _join(perms, variables):
    out = set()
    for t in product(D3, repeat=len(variables)):
        val = dict(zip(variables, t))
        if all((val[p.i], val[p.j]) in p.pairs for p in perms):
            out.add(t)
    return out


@pytest.mark.parametrize("seed", range(40))
def test_chains_equal_the_relational_join(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    perms = []
    for _ in range(rng.randint(1, n)):
        i, j = rng.sample(range(n), 2)
        size = rng.randint(1, 3)
        perms.append(Permutation(i, j, tuple(zip(rng.sample(D3, size), rng.sample(D3, size)))))
    cs = build_cpcs(perms)
    if cs is None:
        # some connected group has no consistent assignment
        assert any(not _join([p for p in perms if {p.i, p.j} <= grp], sorted(grp))
                   for grp in _components(perms))
        return
    seen = set()
    for c in cs:
        assert not seen & set(c.vars)
        seen |= set(c.vars)
        inside = [p for p in perms if p.i in c.vars and p.j in c.vars]
        assert c.relation() == _join(inside, c.vars)


def _components(perms):
    groups = []
    for p in perms:
        hit = [g for g in groups if p.i in g or p.j in g]
        merged = {p.i, p.j}.union(*hit) if hit else {p.i, p.j}
        groups = [g for g in groups if g not in hit] + [merged]
    return groups


def test_identical_columns_become_linear():
    cs = build_cpcs([Permutation(1, 4, ((0, 0), (1, 1), (2, 2))),
                     Permutation(1, 2, ((0, 1), (1, 2), (2, 0)))])
    (c,) = list(cs)
    G = cpc_basis(c, 5)
    assert parse_poly("x2 - x5", 5) in G.as_set()
    assert is_groebner(G)
    sols = {t for t in product(D3, repeat=5) if t[1] == t[4] and (t[1], t[2]) in
            {(0, 1), (1, 2), (2, 0)}}
    for g in G:
        assert all(g.evaluate(t) == 0 for t in sols)


@pytest.mark.parametrize("seed", range(15))
def test_chain_basis_is_the_reduced_basis_of_its_relation(seed):
    rng = random.Random(seed)
    perms = []
    for _ in range(rng.randint(2, 5)):
        i, j = rng.sample(range(5), 2)
        perms.append(Permutation(i, j, tuple(zip(D3, rng.sample(D3, 3)))))
    cs = build_cpcs(perms)
    if cs is None:
        return
    for c in cs:
        G = cpc_basis(c, 5)
        inst = CspInstance(5, D3, tuple(p for p in perms if p.i in c.vars))
        ref = reduce_basis(buchberger(
            [g for g in ideal_generators(inst) if g.variables() <= set(c.vars)], GRLEX))
        assert G.as_set() == ref.as_set()
        assert max(g.degree() for g in G) <= 6


# -- complete and two-fan pool -------------------------------------------------

def test_two_fans_on_one_pair_give_a_line():
    pool = CfPool([parse_poly("(x1 - 1)*(x2 - 2)", 2), parse_poly("x1*(x2 - 1)", 2)], D3)
    G = cf_basis(pool)
    assert parse_poly("x1 + x2 - 2", 2) in G.as_set()
    assert Permutation(0, 1, ((1, 1), (0, 2))) in pool.pending
    H = [parse_poly(t, 2) for t in ("x1 + x2 - 2", "(x1 - 1)*x1", "(x2 - 2)*(x2 - 1)")]
    from combideal.poly import s_polynomial
    s = s_polynomial(pool.elements[0], pool.elements[1], GRLEX)
    assert remainder(s, H, GRLEX).is_zero()


def test_value_outside_domain_forces_the_other_end():
    pool = CfPool([parse_poly("x1*(x1 - 1)", 2), parse_poly("(x1 - 2)*(x2 - 1)", 2)], D3)
    G = cf_basis(pool)
    assert parse_poly("x2 - 1", 2) in G.as_set()


def test_coprime_pool_is_unchanged():
    pool = [parse_poly("x1*(x1 - 1)", 3), parse_poly("(x2 - 1)*(x3 - 2)", 3)]
    assert cf_basis(CfPool(list(pool), D3)).as_set() == set(pool)


def test_shared_centre_forces_a_value():
    pool = CfPool([parse_poly("(x1 - 1)*(x2 - 2)", 2), parse_poly("(x1 - 1)*x2", 2),
                   parse_poly("x1*(x1 - 1)*(x1 - 2)", 2)], D3)
    assert parse_poly("x1 - 1", 2) in cf_basis(pool).as_set()


def test_family_classification():
    assert classify(parse_poly("x1*(x1 - 2)", 2), D3)[0] == "D"
    assert classify(parse_poly("(x1 - 2)*(x2 - 1)", 2), D3) == ("F", 0, 2, 1, 1)
    assert classify(parse_poly("x1 + 1/2*x2 - 1", 2), D3)[0] == "L"
    assert classify(parse_poly("x1^2 + x2", 2), D3) == ("?",)


# -- the combined basis ----------------------------------------------------------

def test_worked_instance_variety_equals_solutions():
    inst = parse_instance(WORKED_RELATIONS)
    G = dualdisc_basis(inst)
    variety = {t for t in product(D3, repeat=3) if all(g.evaluate(t) == 0 for g in G)}
    assert variety == set(enumerate_solutions(inst))
    assert is_groebner(G)


def test_permutations_only_is_the_union_of_chain_bases():
    perms = (Permutation(0, 1, ((0, 1), (1, 2), (2, 0))), Permutation(2, 3, ((0, 0), (1, 2))))
    G = combined_basis(CspInstance(4, D3, perms))
    chains = build_cpcs(list(perms))
    want = set()
    for c in chains:
        want |= cpc_basis(c, 4).as_set()
    extra = G.as_set() - want
    # besides the chain bases only domain polynomials of the chained variables remain
    assert all(len(g.variables()) == 1 for g in extra)
    assert want <= G.as_set()


def test_fan_inside_one_chain_shrinks_it():
    inst = CspInstance(2, D3, (Permutation(0, 1, ((0, 1), (1, 2), (2, 0))),
                               TwoFan(0, 0, set(D3), 1, 0, set(D3))))
    G = combined_basis(inst)
    sols = enumerate_solutions(inst)
    assert set(sols) == {(F(0), F(1)), (F(2), F(0))}
    assert is_groebner(G)
    assert all(vanishing_member(g, sols) for g in G)
    assert all(remainder(g, list(G), GRLEX).is_zero() for g in ideal_generators(inst))


def test_unsatisfiable_two_sat_is_unit():
    # clauses (x1|x2) (x1|~x2) (~x1|x3) (~x1|~x3); arc consistency alone cannot see it
    fans = (TwoFan(0, 1, {0, 1}, 1, 1, {0, 1}), TwoFan(0, 1, {0, 1}, 1, 0, {0, 1}),
            TwoFan(0, 0, {0, 1}, 2, 1, {0, 1}), TwoFan(0, 0, {0, 1}, 2, 0, {0, 1}))
    inst = CspInstance(3, (0, 1), fans)
    assert arc_consistency(inst) is not None
    assert combined_basis(inst).is_unit()


def test_relations_need_binarizing():
    with pytest.raises(DomainError):
        combined_basis(parse_instance(WORKED_RELATIONS))


@pytest.mark.parametrize("seed", range(30))
def test_combined_basis_matches_buchberger(seed):
    rng = random.Random(seed)
    inst = random_dualdisc_instance(rng, rng.randint(2, 6), rng.choice((2, 3)))
    G = combined_basis(inst)
    ref = reduce_basis(buchberger(ideal_generators(inst), GRLEX))
    assert reduce_basis(G).as_set() == ref.as_set()
