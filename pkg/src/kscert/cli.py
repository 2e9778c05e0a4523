"""Command-line workflow: verify / derive / bound / export / catalog.

Exit codes: 0 success, 2 input is not a KS proof, 3 input error,
4 search budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import catalog as catalog_mod
from .assign import (
    DEFAULT_NODE_CAP,
    classical_max,
    general_unsat,
    ks_colorability,
    parity_certify,
)
from .compat import Context, build_orthogonality_graph, enumerate_bases
from .derive import (
    assemble_F,
    build_complete_set_bases_only,
    build_complete_set_parity,
    build_complete_set_rays,
    present,
)
from .errors import (
    KSCertError,
    NotKSProofError,
    ParseError,
    SearchBudgetExceeded,
)
from .poly import render
from .prooffile import parse_file, proof_file_from_set, render_record

EXIT_OK = 0
EXIT_NOT_PROOF = 2
EXIT_INPUT = 3
EXIT_BUDGET = 4


class _Loaded:
    def __init__(self, oset, mode, user_polys, proof_file, source):
        self.oset = oset
        self.mode = mode
        self.user_polys = user_polys
        self.proof_file = proof_file
        self.source = source


def _load(args) -> _Loaded:
    if bool(args.catalog) == bool(args.input):
        raise ParseError("exactly one of --catalog and --input is required")
    if args.catalog:
        entry = catalog_mod.get(args.catalog)
        oset = entry.load()
        mode = args.mode if args.mode != "auto" else entry.mode
        pf = proof_file_from_set(oset, mode)
        return _Loaded(oset, mode, [], pf, args.catalog)
    pf = parse_file(args.input)
    oset = pf.to_observable_set()
    user_polys = pf.to_polynomials(oset)
    mode = args.mode if args.mode != "auto" else pf.mode
    if mode == "auto":
        mode = _auto_mode(oset, user_polys)
    pf.mode = mode
    return _Loaded(oset, mode, user_polys, pf, args.input)


def _auto_mode(oset, user_polys) -> str:
    if user_polys:
        return "general"
    if oset.all_rays:
        return "ray"
    if oset.all_dichotomic and oset.declared_contexts:
        return "parity"
    raise ParseError(
        "cannot infer mode: supply contexts for parity proofs, rays for "
        "ray proofs, or explicit polynomials for general proofs"
    )


def _declared_contexts(oset):
    if not oset.declared_contexts:
        raise ParseError("this mode requires declared contexts")
    return [Context(ids) for ids in oset.declared_contexts]


def _build_complete_set(loaded, node_cap):
    oset, mode = loaded.oset, loaded.mode
    if mode == "ray":
        graph = build_orthogonality_graph(oset)
        bases = enumerate_bases(graph)
        return build_complete_set_rays(oset, graph, bases)
    if mode == "bases-only":
        graph = build_orthogonality_graph(oset)
        bases = enumerate_bases(graph)
        return build_complete_set_bases_only(oset, graph, bases)
    if mode == "parity":
        return build_complete_set_parity(oset, _declared_contexts(oset))
    if mode == "general":
        if not loaded.user_polys:
            raise ParseError("general mode requires user-supplied polynomials")
        from .derive import CompleteSet, USER_SUPPLIED

        return CompleteSet(
            oset=oset, polynomials=list(loaded.user_polys), provenance=USER_SUPPLIED
        )
    raise ParseError(f"unknown mode {mode!r}")


def _witness_lines(oset, witness):
    labels = oset.labels
    return ", ".join(f"{labels[i]}={witness[i]}" for i in sorted(witness))


def cmd_verify(args) -> int:
    loaded = _load(args)
    oset = loaded.oset
    if loaded.mode == "ray":
        graph = build_orthogonality_graph(oset)
        bases = enumerate_bases(graph)
        cert = ks_colorability(oset, graph, bases, node_cap=args.node_cap)
        print(f"method: RayColoring ({len(bases)} bases, {len(graph.edges)} edges)")
    elif loaded.mode == "parity":
        cert = parity_certify(oset, _declared_contexts(oset))
        print(f"method: Parity (deltas {cert.detail['deltas']})")
    else:
        cs = _build_complete_set(loaded, args.node_cap)
        cert = general_unsat(oset, cs.polynomials, node_cap=args.node_cap)
        print(f"method: GeneralCSP ({len(cs)} polynomials)")
    print(f"verdict: {cert.verdict}")
    if cert.stats:
        print(f"search: {cert.stats.nodes} nodes, {cert.stats.propagations} propagations")
    if cert.witness is not None:
        print(f"witness: {_witness_lines(oset, cert.witness)}")
    if cert.detail.get("violated"):
        print("violated: " + "; ".join(cert.detail["violated"]))
    return EXIT_OK if cert.is_proof else EXIT_NOT_PROOF


def _derive(loaded, args):
    cs = _build_complete_set(loaded, args.node_cap)
    ineq = assemble_F(cs, exact_bound=args.exact_bound, node_cap=args.node_cap)
    form = args.form or ("projector" if loaded.oset.all_rays else "dichotomic")
    presented = present(ineq, form)
    return cs, ineq, presented


def _print_inequality(loaded, cs, ineq, presented):
    oset = loaded.oset
    labels = dict(enumerate(oset.labels))
    plabels = dict(enumerate(presented.presented_set.labels))
    print(f"input: {loaded.source}")
    print(f"mode: {loaded.mode}")
    print(f"complete set: {len(cs)} polynomials ({cs.provenance})")
    print(f"F = {render(ineq.F, labels)}")
    print(f"quantum certificate: operator F is zero: {ineq.operator_zero}")
    print(f"classical certificate on F: {ineq.classical.statement} ({ineq.classical.kind})")
    print(f"form: {presented.form}")
    print(
        f"inequality: {render(presented.score, plabels)} <= {presented.classical_bound}"
    )
    print(
        f"bound: {presented.classical_bound} ({presented.bound_kind}); "
        f"quantum value: {presented.quantum_value}"
    )


def cmd_derive(args) -> int:
    loaded = _load(args)
    cs, ineq, presented = _derive(loaded, args)
    _print_inequality(loaded, cs, ineq, presented)
    if args.output:
        record = render_record(loaded.proof_file, ineq, presented)
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(record)
        print(f"record written to {args.output}")
    return EXIT_OK


def cmd_bound(args) -> int:
    loaded = _load(args)
    cs, ineq, presented = _derive(loaded, args)
    result = classical_max(
        presented.presented_set, presented.score, mode="exact", node_cap=args.node_cap
    )
    print(f"form: {presented.form}")
    print(f"exact classical maximum: {result.value}")
    print(f"quantum value: {presented.quantum_value}")
    if result.witness is not None:
        print(f"attained at: {_witness_lines(presented.presented_set, result.witness)}")
    return EXIT_OK


def cmd_export(args) -> int:
    loaded = _load(args)
    cs, ineq, presented = _derive(loaded, args)
    record = render_record(loaded.proof_file, ineq, presented)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(record)
    else:
        sys.stdout.write(record)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.name:
        entry = catalog_mod.get(args.name)
        oset = entry.load()
        from .prooffile import render_input_section

        sys.stdout.write(render_input_section(proof_file_from_set(oset, entry.mode)))
        return EXIT_OK
    for name in catalog_mod.names():
        entry = catalog_mod.get(name)
        print(f"{name:18s} {entry.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kscert",
        description="Verify Kochen-Specker proofs and derive the "
        "state-independent noncontextuality inequalities they induce.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_form=False, with_output=False):
        p.add_argument("--catalog", help="built-in proof name")
        p.add_argument("--input", help="proof file path")
        p.add_argument(
            "--mode",
            choices=["ray", "bases-only", "parity", "general", "auto"],
            default="auto",
        )
        p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
        if with_form:
            p.add_argument("--form", choices=["projector", "dichotomic"])
            p.add_argument("--exact-bound", action="store_true")
        if with_output:
            p.add_argument("--output", help="write the derivation record here")

    p = sub.add_parser("verify", help="check whether the input is a KS proof")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("derive", help="run the full inequality derivation")
    common(p, with_form=True, with_output=True)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("bound", help="exact classical maximum of the derived score")
    common(p, with_form=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("export", help="derive and write the machine-readable record")
    common(p, with_form=True, with_output=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("catalog", help="list or show built-in proofs")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotKSProofError as ex:
        print(f"error: not-a-ks-proof: {ex}", file=sys.stderr)
        return EXIT_NOT_PROOF
    except SearchBudgetExceeded as ex:
        print(f"error: budget-exceeded: {ex}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, KSCertError, OSError, KeyError) as ex:
        print(f"error: input: {ex}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
