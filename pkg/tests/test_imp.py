import json
import random
from fractions import Fraction
from itertools import product

import pytest

from combideal.buchberger import GroebnerBasis
from combideal.csp import CspInstance, Gf2Linear, enumerate_solutions, vanishing_member
from combideal.errors import DegreeError, ParseError, StructuralError
from combideal.imp import MembershipProof, certificate, query, read_certificate, verify
from combideal.minority import convert, lex_basis
from combideal.poly import GRLEX, LEX, Polynomial, parse_poly, remainder
from combideal.sampling import random_poly, random_xor_instance
from combideal.minority import minority_basis

from oracles import random_member, vanishing_space

P5 = lambda text: parse_poly(text, 5)


@pytest.fixture
def table_basis(xor_example):
    return convert(xor_example, 2)


def test_basis_row_is_a_member_with_a_valid_proof(table_basis):
    f = P5("x1*x2 + x4*x5 - 1/2*(x1 + x2 + x4 + x5 - 1)")
    member, proof = query(f, table_basis, 2)
    assert member and verify(f, proof, table_basis)


def test_a_variable_is_not_a_member(table_basis):
    member, proof = query(P5("x1"), table_basis, 2)
    assert not member
    assert proof.remainder == P5("x1")
    assert verify(P5("x1"), proof, table_basis)


def test_degree_bound_is_enforced(table_basis):
    with pytest.raises(DegreeError):
        query(P5("x1*x2*x3"), table_basis, 2)
    with pytest.raises(DegreeError):
        query(P5("x1*x2*x3"), table_basis)
    lexed = GroebnerBasis.build(list(table_basis), LEX, 5, True, 2)
    with pytest.raises(DegreeError):
        query(P5("x1"), lexed)


def test_untruncated_lex_basis_answers_any_degree(xor_example):
    G = lex_basis(xor_example)
    f = P5("(x1 + x3 - x4 - 2*x1*x3)*(x1 - x4)*x5")
    # x1 xor x3 = x4 on every solution, so the first factor vanishes there
    member, proof = query(f, G)
    assert member and verify(f, proof, G)


def test_tampered_cofactor_fails(table_basis):
    f = P5("x1*x3 - 1/2*(x1 + x3 - x4) + 3*(x2^2 - x2)")
    member, proof = query(f, table_basis, 2)
    assert member
    cof = list(proof.cofactors)
    k = next(i for i, h in enumerate(cof) if h)
    cof[k] = cof[k] + Polynomial.constant(5, Fraction(1, 7))
    bad = MembershipProof(proof.basis_ids, tuple(cof), proof.remainder, proof.order)
    assert not verify(f, bad, table_basis)


def test_multidegree_violation_is_rejected(table_basis):
    f = P5("x1*x3 - 1/2*(x1 + x3 - x4)")
    member, proof = query(f, table_basis, 2)
    G = list(table_basis)
    # add m*g_b to h_a and subtract m*g_a from h_b: the sum is unchanged
    a, b = 0, 1
    m = Polynomial.term(5, (3, 0, 0, 0, 2))
    cof = list(proof.cofactors)
    cof[a] = cof[a] + m * G[b]
    cof[b] = cof[b] - m * G[a]
    bad = MembershipProof(proof.basis_ids, tuple(cof), proof.remainder, proof.order)
    total = proof.remainder
    for h, g in zip(cof, G):
        total = total + h * g
    assert total == f
    assert not verify(f, bad, table_basis)


def test_reducible_remainder_is_rejected(table_basis):
    f = P5("x1^2")
    bad = MembershipProof(tuple(range(len(table_basis))),
                          tuple(Polynomial.zero(5) for _ in table_basis), f, GRLEX)
    assert not verify(f, bad, table_basis)


def test_dangling_basis_id():
    f = P5("x1")
    proof = MembershipProof((3,), (Polynomial.constant(5, 1),), Polynomial.zero(5), GRLEX)
    with pytest.raises(StructuralError):
        verify(f, proof, [P5("x1")])


@pytest.mark.parametrize("seed", range(5))
def test_remainder_is_independent_of_element_order(table_basis, seed):
    rng = random.Random(seed)
    G = list(table_basis)
    for _ in range(20):
        f = random_poly(rng, 5, 2)
        shuffled = G[:]
        rng.shuffle(shuffled)
        assert remainder(f, G, GRLEX) == remainder(f, shuffled, GRLEX)


def test_certificate_round_trip_is_byte_identical(table_basis):
    for text in ("x1*x2 + x4*x5 - 1/2*(x1 + x2 + x4 + x5 - 1) + 2*(x3^2 - x3)", "x1 + 1/3"):
        f = P5(text)
        _, proof = query(f, table_basis, 2)
        cert = certificate(f, proof, table_basis)
        g, proof2, elements = read_certificate(cert)
        assert g == f
        assert verify(g, proof2, elements) == verify(f, proof, table_basis) is True
        assert certificate(g, proof2, elements) == cert


def test_member_certificate_lists_only_used_elements(table_basis):
    f = P5("x3*x5 - 1/2*(x2 + x3 + x5 - 1)")
    _, proof = query(f, table_basis, 2)
    doc = json.loads(certificate(f, proof, table_basis))
    assert [e["basis"] for e in doc["terms"]] == ["x3*x5 - 1/2*x2 - 1/2*x3 - 1/2*x5 + 1/2"]
    assert doc["member"] is True and doc["remainder"] == "0"


def test_malformed_certificate():
    with pytest.raises(ParseError):
        read_certificate("{\"query\": \"x1\"}")
    with pytest.raises(ParseError):
        read_certificate("not json")


@pytest.mark.parametrize("seed", range(6))
def test_verdicts_agree_with_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    inst = random_xor_instance(rng, n, rng.randint(1, 3))
    d = rng.randint(1, 3)
    G = minority_basis(inst, d)
    sols = enumerate_solutions(inst)
    space = vanishing_space(list(sols), n, d)
    for k in range(60):
        f = random_member(rng, space, n) if k % 2 else random_poly(rng, n, d)
        member, proof = query(f, G, d)
        assert member == vanishing_member(f, sols)
        assert verify(f, proof, G)
