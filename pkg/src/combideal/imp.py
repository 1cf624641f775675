"""Ideal membership queries with checkable certificates.

A certificate lists basis elements with their cofactors ``h_i`` and the
remainder ``r``, so that ``f = sum h_i g_i + r``.  It is a member proof when
``r = 0``; then only elements with a nonzero cofactor are listed, so every
coefficient in the file takes part in the identity.  A non-member
certificate lists the whole basis, which the irreducibility check of the
remainder needs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .buchberger import GroebnerBasis
from .errors import DegreeError, ParseError, StructuralError
from .poly import GRLEX, LEX, MonomialOrder, Polynomial, divide, format_poly, parse_poly


@dataclass(frozen=True)
class MembershipProof:
    basis_ids: tuple
    cofactors: tuple
    remainder: Polynomial
    order: MonomialOrder = GRLEX

    @property
    def member(self) -> bool:
        return not self.remainder


def query(f: Polynomial, basis: GroebnerBasis, d: int | None = None):
    """Decide ``f in <basis>``; returns ``(member, proof)``.

    Against a degree-``d`` truncated basis the answer is only meaningful for
    ``deg f <= d`` under grlex, so anything else is refused.
    """
    if f.nvars != basis.nvars:
        raise StructuralError(f"query over {f.nvars} variables, basis over {basis.nvars}")
    bound = basis.truncation if d is None else d
    if basis.truncation is not None:
        if basis.order.kind == "lex":
            raise DegreeError("a degree-truncated basis cannot answer queries under lex")
        bound = basis.truncation if d is None else min(d, basis.truncation)
    if bound is not None and f.degree() > bound:
        raise DegreeError(f"query has degree {f.degree()} but the bound is {bound}")
    quotients, rem = divide(f, list(basis.elements), basis.order)
    proof = MembershipProof(tuple(range(len(basis))), tuple(quotients), rem, basis.order)
    return proof.member, proof


def verify(f: Polynomial, proof: MembershipProof, basis) -> bool:
    """Check a certificate against ``f`` and the basis it refers to.

    Besides the exact identity ``f = sum h_i g_i + r`` this checks that no
    product ``h_i g_i`` has a larger multidegree than ``f`` and that no term
    of ``r`` is divisible by a basis leading term.
    """
    elements = list(basis.elements if isinstance(basis, GroebnerBasis) else basis)
    order = proof.order
    if len(proof.basis_ids) != len(proof.cofactors):
        raise StructuralError("certificate has mismatched ids and cofactors")
    total = proof.remainder
    key = order.key
    fkey = key(f.leading_monomial(order)) if f else None
    for idx, h in zip(proof.basis_ids, proof.cofactors):
        if not 0 <= idx < len(elements):
            raise StructuralError(f"certificate refers to missing basis element {idx}")
        if not h:
            continue
        prod = h * elements[idx]
        if not prod:
            continue
        if fkey is None or key(prod.leading_monomial(order)) > fkey:
            return False
        total = total + prod
    if total != f:
        return False
    leads = [g.leading_monomial(order) for g in elements]
    for m in proof.remainder.terms:
        if any(all(a <= b for a, b in zip(lm, m)) for lm in leads):
            return False
    return True


# -- certificate files -------------------------------------------------------

def certificate(f: Polynomial, proof: MembershipProof, basis) -> str:
    """Self-contained JSON certificate with the basis polynomials spelled out."""
    elements = list(basis.elements if isinstance(basis, GroebnerBasis) else basis)
    entries = [{"basis": format_poly(elements[i]), "cofactor": format_poly(h)}
               for i, h in zip(proof.basis_ids, proof.cofactors) if h or not proof.member]
    doc = {
        "query": format_poly(f),
        "order": proof.order.kind,
        "nvars": f.nvars,
        "terms": entries,
        "remainder": format_poly(proof.remainder),
        "member": proof.member,
    }
    return json.dumps(doc, indent=2) + "\n"


def read_certificate(text: str):
    """Parse a certificate; returns ``(f, proof, basis_elements)``."""
    try:
        doc = json.loads(text)
        n = int(doc["nvars"])
        order = LEX if doc["order"] == "lex" else GRLEX
        f = parse_poly(doc["query"], n)
        basis = [parse_poly(e["basis"], n) for e in doc["terms"]]
        cof = [parse_poly(e["cofactor"], n) for e in doc["terms"]]
        rem = parse_poly(doc["remainder"], n)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed certificate: {exc}") from exc
    proof = MembershipProof(tuple(range(len(basis))), tuple(cof), rem, order)
    return f, proof, basis
