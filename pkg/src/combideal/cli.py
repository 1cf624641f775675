"""Command-line front end.

Exit codes: 0 success, 1 infeasible instance / failed check / invalid
certificate, 2 usage, parse or degree errors, 3 internal or budget errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import dualdisc, imp, minority, sampling
from .buchberger import GroebnerBasis, buchberger, first_failing_pair, reduce_basis
from .csp import CspInstance, enumerate_solutions, ideal_generators, parse_instance, vanishing_member
from .errors import BudgetExceeded, DegreeError, DomainError, ParseError, StructuralError
from .poly import GRLEX, format_poly, parse_poly, remainder

OK, FAILED, USAGE, INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def choose_pipeline(inst: CspInstance, requested: str) -> str:
    if requested != "auto":
        return requested
    kinds = inst.kinds()
    if not kinds:
        return "minority" if tuple(inst.domain) == (0, 1) else "dualdisc"
    if kinds == {"xor"}:
        return "minority"
    if "xor" not in kinds:
        return "dualdisc"
    raise UsageError("instance mixes xor constraints with other kinds; pick --pipeline")


def read_instance(path: str | None) -> CspInstance:
    if not path:
        raise UsageError("--instance is required")
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_instance(text)


def read_poly(arg: str | None, n: int):
    if not arg:
        raise UsageError("--poly is required")
    text = arg
    if os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
    return parse_poly(text.strip(), n)


def compute_basis(inst: CspInstance, pipeline: str, d: int, order: str = "grlex") -> GroebnerBasis:
    if pipeline == "minority":
        if order == "lex":
            sys_ = minority.system_of(inst)
            if sys_ is minority.INFEASIBLE:
                return minority.minority_basis(inst, d)
            return minority.lex_basis(sys_)
        return minority.minority_basis(inst, d)
    if order == "lex":
        raise UsageError("the dual-discriminator pipeline computes grlex bases only")
    return dualdisc.dualdisc_basis(inst)


def emit_basis(basis: GroebnerBasis, pipeline: str, fmt: str, out) -> None:
    order = basis.order
    if fmt == "structured":
        doc = {"pipeline": pipeline, "order": order.kind, "nvars": basis.nvars,
               "truncation": basis.truncation,
               "basis": [format_poly(g, GRLEX) for g in basis]}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for g in basis:
            out.write(format_poly(g, GRLEX) + "\n")


def read_basis_file(path: str, n: int) -> list:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return [parse_poly(t, n) for t in doc["basis"]]
    return [parse_poly(line, n, lineno) for lineno, line in enumerate(text.splitlines(), 1)
            if line.strip() and not line.lstrip().startswith("#")]


# -- commands ----------------------------------------------------------------

def cmd_basis(args, out) -> int:
    inst = read_instance(args.instance)
    pipeline = choose_pipeline(inst, args.pipeline)
    d = 2 if args.d is None else args.d
    if d < 1:
        raise UsageError("--d must be at least 1")
    basis = compute_basis(inst, pipeline, d, args.order)
    emit_basis(basis, pipeline, args.format, out)
    return FAILED if basis.is_unit() else OK


def _membership(args):
    inst = read_instance(args.instance)
    pipeline = choose_pipeline(inst, args.pipeline)
    f = read_poly(args.poly, inst.n)
    if args.d is not None and f.degree() > args.d:
        raise DegreeError(f"query has degree {f.degree()} but --d is {args.d}")
    d = args.d if args.d is not None else max(1, f.degree())
    basis = compute_basis(inst, pipeline, d)
    member, proof = imp.query(f, basis, d if pipeline == "minority" else None)
    return f, basis, member, proof


def cmd_member(args, out) -> int:
    if args.verify:
        return cmd_verify(argparse.Namespace(**{**vars(args), "proof": args.verify}), out)
    f, basis, member, proof = _membership(args)
    if args.proof:
        with open(args.proof, "w") as fh:
            fh.write(imp.certificate(f, proof, basis))
    if args.format == "structured":
        out.write(json.dumps({"member": member, "remainder": format_poly(proof.remainder)}) + "\n")
    else:
        out.write("MEMBER\n" if member else "NOT MEMBER\n")
    return OK


def cmd_prove(args, out) -> int:
    f, basis, member, proof = _membership(args)
    cert = imp.certificate(f, proof, basis)
    if args.proof:
        with open(args.proof, "w") as fh:
            fh.write(cert)
        out.write("MEMBER\n" if member else "NOT MEMBER\n")
    else:
        out.write(cert)
    return OK


def cmd_verify(args, out) -> int:
    if not args.proof:
        raise UsageError("--proof is required")
    with open(args.proof) as fh:
        f, proof, elements = imp.read_certificate(fh.read())
    ok = imp.verify(f, proof, elements)
    if ok and args.instance:
        # every listed element must belong to the basis the instance produces
        inst = read_instance(args.instance)
        pipeline = choose_pipeline(inst, args.pipeline)
        d = args.d if args.d is not None else max(1, f.degree())
        basis = set(compute_basis(inst, pipeline, d))
        ok = set(elements) <= basis and (proof.member or set(elements) == basis)
    if args.format == "structured":
        out.write(json.dumps({"valid": ok, "member": ok and proof.member}) + "\n")
    else:
        out.write(("VALID" if ok else "INVALID") + (" MEMBER" if ok and proof.member else "") + "\n")
    return OK if ok else FAILED


def oracle_report(inst: CspInstance, pipeline: str, d: int, given=None, budget=10 ** 6) -> list:
    """``(check name, passed)`` pairs comparing a basis with both oracles."""
    checks = []
    if given is None:
        basis = compute_basis(inst, pipeline, d)
        elements = list(basis)
    else:
        elements = given
    truncated = pipeline == "minority"
    sols = enumerate_solutions(inst)
    gens = ideal_generators(inst)
    ref = reduce_basis(buchberger(gens, GRLEX, budget))
    if truncated:
        ref = ref.truncate(d)
    checks.append(("vanishing", not sols.truncated and all(vanishing_member(g, sols) for g in elements)))
    checks.append(("criterion", bool(elements) and
                   first_failing_pair(elements, GRLEX, d if truncated else None) is None))
    if truncated:
        checks.append(("oracle basis equality", set(elements) == ref.as_set()))
    else:
        same = (all(not remainder(g, elements, GRLEX) for g in ref)
                and all(not remainder(g, list(ref), GRLEX) for g in elements))
        checks.append(("oracle ideal equality", same))
        checks.append(("generators reduce to 0", all(not remainder(g, elements, GRLEX) for g in gens)))
    return checks


def cmd_oracle_check(args, out) -> int:
    d = 2 if args.d is None else args.d
    if d < 1:
        raise UsageError("--d must be at least 1")
    runs = []
    if args.instance:
        inst = read_instance(args.instance)
        pipeline = choose_pipeline(inst, args.pipeline)
        given = read_basis_file(args.basis, inst.n) if args.basis else None
        runs.append((args.instance, inst, pipeline, given))
    else:
        pipeline = "minority" if args.pipeline == "auto" else args.pipeline
        n = args.max_n
        for seed in range(args.seed, args.seed + args.count):
            rng = random.Random(seed)
            if pipeline == "minority":
                inst = sampling.random_xor_instance(rng, n, n // 2)
            else:
                inst = sampling.random_dualdisc_instance(rng, n, rng.choice((2, 3)))
            runs.append((f"seed {seed}", inst, pipeline, None))
    failures = 0
    for label, inst, pipeline, given in runs:
        checks = oracle_report(inst, pipeline, d, given)
        bad = [name for name, ok in checks if not ok]
        failures += bool(bad)
        if args.format == "structured":
            out.write(json.dumps({"run": label, "checks": dict(checks)}) + "\n")
        else:
            status = "ok" if not bad else "FAIL " + ", ".join(bad)
            out.write(f"{label}: {status}\n")
    out.write(f"{len(runs) - failures}/{len(runs)} passed\n")
    return FAILED if failures else OK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="combideal",
                                 description="Groebner bases and ideal membership for "
                                             "minority and dual-discriminator CSPs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--instance", help="instance file")
        p.add_argument("--pipeline", choices=("auto", "minority", "dualdisc"), default="auto")
        p.add_argument("--d", type=int, help="degree bound (default 2; queries use deg f)")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        return p

    p = common(sub.add_parser("basis", help="print the basis of an instance"))
    p.add_argument("--order", choices=("grlex", "lex"), default="grlex")
    p.set_defaults(func=cmd_basis)

    for name, func, text in (("member", cmd_member, "decide membership of a polynomial"),
                             ("prove", cmd_prove, "write a membership certificate")):
        p = common(sub.add_parser(name, help=text))
        p.add_argument("--poly", help="polynomial text or a file containing it")
        p.add_argument("--proof", help="certificate output path")
        if name == "member":
            p.add_argument("--verify", help="check this certificate instead")
        p.set_defaults(func=func)

    p = common(sub.add_parser("verify", help="check a certificate"))
    p.add_argument("--proof", help="certificate path")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("oracle-check", help="cross-check against Buchberger and enumeration"))
    p.add_argument("--basis", help="check this basis file instead of computing one")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--max-n", type=int, default=10)
    p.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args, out)
    except (UsageError, ParseError, DegreeError, DomainError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort reporting
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
