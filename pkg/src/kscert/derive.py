"""The derivation pipeline: complete sets, the witness polynomial F, and
canonical inequality presentations.

The pipeline mirrors three steps: build a complete set of normalized
polynomials from the proof structure, assemble F as minus the sum of their
normalized squares (certifying that F vanishes as an operator and that no
assignment keeps it above -1), and rearrange F into an integer-coefficient
score with explicit classical bound and quantum value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .assign import (
    BoundResult,
    DEFAULT_NODE_CAP,
    ProofCertificate,
    classical_max,
    general_unsat,
    parity_certify,
)
from .compat import Context, OrthogonalityGraph, context_product
from .errors import (
    Condition1Violated,
    EdgeOutsideBases,
    NotKSProofError,
    NotParityProof,
    ZeroState,
)
from .exact import ExactMatrix, Scalar, inner
from .model import ObservableSet, dichotomize
from .poly import (
    ContextPolynomial,
    Poly,
    eval_operator,
    make_context_polynomial,
    normalization_constant,
    normalized_square,
    reduce,
)

RAY_EDGES_BASES = "RayEdgesBases"
RAY_BASES_ONLY = "RayBasesOnly"
PARITY = "Parity"
USER_SUPPLIED = "UserSupplied"


@dataclass
class CompleteSet:
    oset: ObservableSet
    polynomials: list  # list[ContextPolynomial]
    provenance: str

    def __len__(self):
        return len(self.polynomials)


def _edge_poly(oset, i, j) -> ContextPolynomial:
    ctx = Context((i, j))
    return make_context_polynomial(Poly.var(i) * Poly.var(j), ctx, oset)


def _basis_poly(oset, ctx: Context) -> ContextPolynomial:
    p = Poly.const(-1)
    for i in ctx.ids:
        p = p + Poly.var(i)
    return make_context_polynomial(p, ctx, oset)


def build_complete_set_rays(
    oset: ObservableSet, graph: OrthogonalityGraph, bases: Sequence[Context]
) -> CompleteSet:
    """One P_i*P_j polynomial per orthogonality edge plus one sum-minus-one
    polynomial per basis; every member already has c = 1."""
    polys = [_edge_poly(oset, i, j) for i, j in graph.edges]
    polys += [_basis_poly(oset, b) for b in bases]
    return CompleteSet(oset=oset, polynomials=polys, provenance=RAY_EDGES_BASES)


def build_complete_set_bases_only(
    oset: ObservableSet, graph: OrthogonalityGraph, bases: Sequence[Context]
) -> CompleteSet:
    """Basis polynomials only; valid when every orthogonality edge lies in
    some supplied basis (raises EdgeOutsideBases otherwise)."""
    basis_sets = [set(b.ids) for b in bases]
    for i, j in graph.edges:
        if not any({i, j} <= b for b in basis_sets):
            raise EdgeOutsideBases(i, j)
    polys = [_basis_poly(oset, b) for b in bases]
    return CompleteSet(oset=oset, polynomials=polys, provenance=RAY_BASES_ONLY)


def build_complete_set_parity(
    oset: ObservableSet, contexts: Sequence[Context]
) -> CompleteSet:
    """Product-minus-delta polynomials, each with c = 4 (values are 0 or +-2)."""
    cert = parity_certify(oset, contexts)
    if not cert.is_proof:
        raise NotParityProof("; ".join(cert.detail.get("violated", [])) or "not a parity proof")
    polys = []
    for ctx, delta in zip(contexts, cert.detail["deltas"]):
        p = Poly.const(1)
        for i in ctx.ids:
            p = p * Poly.var(i)
        p = p - Poly.const(delta)
        polys.append(make_context_polynomial(p, ctx, oset, c=Fraction(4)))
    return CompleteSet(oset=oset, polynomials=polys, provenance=PARITY)


def verify_complete_set(
    cs: CompleteSet, node_cap: int = DEFAULT_NODE_CAP
) -> ProofCertificate:
    """Condition 1: every member vanishes as an operator (raises on failure).
    Condition 2: no assignment zeroes all members, checked by complete search."""
    for idx, cp in enumerate(cs.polynomials):
        m = eval_operator(cp.poly, cs.oset)
        if not m.is_zero:
            raise Condition1Violated(idx, m)
    return general_unsat(cs.oset, cs.polynomials, node_cap=node_cap)


@dataclass
class Inequality:
    oset: ObservableSet
    complete_set: CompleteSet
    F: Poly  # fully reduced, across all contexts
    operator_zero: bool
    classical: BoundResult  # bound on max F|_v
    unsat_certificate: ProofCertificate


@dataclass
class PresentedInequality:
    form: str  # "projector" | "dichotomic"
    score: Poly  # integer-coefficient score G with F = scale*G + offset
    scale: Fraction
    offset: Fraction
    classical_bound: Fraction
    bound_kind: str  # "exact" | "certified"
    quantum_value: Fraction
    presented_set: ObservableSet  # observables matching the score's variables
    substituted: bool = False  # True when P -> (1-A)/2 was applied


def assemble_F(
    cs: CompleteSet,
    exact_bound: bool = False,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Inequality:
    """F = -sum of normalized squares, with quantum and classical certificates."""
    unsat = verify_complete_set(cs, node_cap=node_cap)
    if not unsat.is_proof:
        raise NotKSProofError(
            f"not a KS proof; satisfying assignment {_witness_str(unsat.witness, cs.oset)}"
        )
    F = Poly()
    for cp in cs.polynomials:
        c = normalization_constant(cp, cs.oset)
        normalized = normalized_square(
            ContextPolynomial(cp.poly, cp.context, c), cs.oset
        )
        F = F - normalized.poly
    F = reduce(F, cs.oset.spectra())
    operator_zero = eval_operator(F, cs.oset).is_zero
    if exact_bound:
        classical = classical_max(cs.oset, F, mode="exact", node_cap=node_cap)
    else:
        classical = classical_max(
            cs.oset, F, mode="certify_only", complete_set=cs.polynomials, node_cap=node_cap
        )
    return Inequality(
        oset=cs.oset,
        complete_set=cs,
        F=F,
        operator_zero=operator_zero,
        classical=classical,
        unsat_certificate=unsat,
    )


def _witness_str(witness, oset) -> str:
    if witness is None:
        return "(none)"
    labels = oset.labels
    return ", ".join(f"{labels[i]}={witness[i]}" for i in sorted(witness))


def _rational_coeffs(p: Poly) -> dict:
    out = {}
    for mono, coef in p.terms.items():
        if not coef.is_rational:
            raise ValueError("presentation requires rational coefficients")
        out[mono] = coef.rational()
    return out


def _primitive_scale(coeffs: dict) -> Fraction:
    """Positive s with coeffs/s integers of gcd 1."""
    nums = [c for c in coeffs.values() if c != 0]
    if not nums:
        return Fraction(1)
    # gcd of fractions = gcd(numerators) / lcm(denominators)
    num_g = 0
    den_l = 1
    for c in nums:
        num_g = gcd(num_g, abs(c.numerator))
        den_l = den_l * c.denominator // gcd(den_l, c.denominator)
    return Fraction(num_g, den_l)


def _substitute_dichotomic(F: Poly) -> Poly:
    """Replace every projector variable P_i by (1 - A_i)/2, keeping ids."""
    out = Poly.const(0)
    half = Scalar.of(Fraction(1, 2))
    for mono, coef in F.terms.items():
        term = Poly.const(coef)
        for i, e in mono:
            factor = (Poly.const(1) - Poly.var(i)) * half
            for _ in range(e):
                term = term * factor
        out = out + term
    return out


def present(ineq: Inequality, form: str) -> PresentedInequality:
    """Rearrange F into an integer-coefficient score with explicit bounds.

    projector form requires projector variables and keeps them; dichotomic
    form substitutes P = (1 - A)/2 when needed and re-reduces with A^2 = 1.
    The affine bookkeeping F = scale*G + offset transforms both the
    classical bound and the quantum value exactly.
    """
    oset = ineq.oset
    if form == "projector":
        if not oset.all_rays:
            raise ValueError("projector form requires a ray observable set")
        F_form, presented_set, substituted = ineq.F, oset, False
        scale_rule = "primitive"
    elif form == "dichotomic":
        if oset.all_dichotomic:
            F_form, presented_set, substituted = ineq.F, oset, False
            scale_rule = "primitive"
        else:
            if not oset.all_rays:
                raise ValueError("dichotomic substitution requires projector variables")
            presented_set = ObservableSet(dim=oset.dim)
            for i, obs in enumerate(oset.observables):
                presented_set.add(dichotomize(obs.ray, label=f"d{obs.label or i}"))
            F_sub = _substitute_dichotomic(ineq.F)
            F_form = reduce(F_sub, presented_set.spectra())
            substituted = True
            scale_rule = "power_of_two"
    else:
        raise ValueError(f"unknown form {form!r}")

    coeffs = _rational_coeffs(F_form)
    offset = coeffs.get((), Fraction(0))
    noncon = {m: c for m, c in coeffs.items() if m != ()}
    if scale_rule == "primitive":
        scale = _primitive_scale(noncon)
    else:
        # substitution introduces denominators up to 2^maxdeg; keeping that
        # exact power keeps pair-correlation coefficients even integers,
        # matching the customary dichotomic presentation
        scale = Fraction(1, 2 ** ineq.F.max_degree())
    if scale == 0:
        scale = Fraction(1)
    score = Poly({m: Scalar.of(c / scale) for m, c in noncon.items()})
    quantum_value = -offset / scale
    if ineq.classical.kind == "exact":
        classical_bound = (ineq.classical.value - offset) / scale
        bound_kind = "exact"
    else:
        classical_bound = (Fraction(-1) - offset) / scale
        bound_kind = "certified"
    return PresentedInequality(
        form=form,
        score=score,
        scale=scale,
        offset=offset,
        classical_bound=classical_bound,
        bound_kind=bound_kind,
        quantum_value=quantum_value,
        presented_set=presented_set,
        substituted=substituted,
    )


def expectation(p: Poly, oset: ObservableSet, state: Sequence) -> Scalar:
    """Exact <psi| p(A) |psi> / <psi|psi> for an unnormalized state vector."""
    psi = tuple(Scalar.of(x) for x in state)
    if all(x.is_zero for x in psi):
        raise ZeroState("state vector is zero")
    m = eval_operator(p, oset)
    return inner(psi, m.apply(psi)) / inner(psi, psi)
