"""Value-assignment search engines.

Three complete searches over noncontextual value assignments:

* ks_colorability -- {0,1} colorings of a ray set under the orthogonality
  and basis rules, with unit propagation;
* parity_certify -- the product/occurrence-parity conditions for contexts
  whose operator products are +-I;
* general_unsat -- the eigenvalue-assignment CSP for an arbitrary complete
  polynomial set, with forward checking.

All searches are deterministic: fixed variable and value orders, so
identical inputs yield identical certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .compat import Context, OrthogonalityGraph, context_product
from .errors import (
    NotDichotomic,
    NotScalarMultiple,
    SearchBudgetExceeded,
)
from .model import ObservableSet
from .poly import ContextPolynomial, Poly, eval_assignment

DEFAULT_NODE_CAP = 10**8

KS_PROOF = "KSProof"
NOT_KS_PROOF = "NotKSProof"


@dataclass
class SearchStats:
    nodes: int = 0
    propagations: int = 0


@dataclass
class ProofCertificate:
    verdict: str  # KS_PROOF or NOT_KS_PROOF
    method: str  # RayColoring | Parity | GeneralCSP
    witness: Optional[dict] = None  # id -> Fraction, when NOT_KS_PROOF
    stats: Optional[SearchStats] = None
    detail: dict = field(default_factory=dict)

    @property
    def is_proof(self) -> bool:
        return self.verdict == KS_PROOF


@dataclass
class BoundResult:
    kind: str  # "exact" | "certified"
    value: Fraction  # exact maximum, or the certified upper bound
    witness: Optional[dict] = None
    stats: Optional[SearchStats] = None

    @property
    def statement(self) -> str:
        rel = "=" if self.kind == "exact" else "<="
        return f"max {rel} {self.value}"


def value_order(spectrum) -> list:
    """Deterministic value order: 0 before 1 for rays, +1 before -1 for
    dichotomic observables, ascending otherwise."""
    s = set(spectrum)
    if s == {Fraction(0), Fraction(1)}:
        return [Fraction(0), Fraction(1)]
    if s == {Fraction(-1), Fraction(1)}:
        return [Fraction(1), Fraction(-1)]
    return sorted(spectrum)


# -- KS colorability for ray sets -------------------------------------------


def ks_colorability(
    oset: ObservableSet,
    graph: OrthogonalityGraph,
    bases: Sequence[Context],
    node_cap: int = DEFAULT_NODE_CAP,
) -> ProofCertificate:
    """Complete backtracking search for a {0,1} coloring of the rays.

    Rules: orthogonal rays cannot both be 1; every basis carries exactly
    one 1.  Assigning 1 propagates 0 to all neighbors; a basis whose
    members are all 0 is an immediate conflict.
    """
    mu = len(oset)
    basis_ids = [b.ids for b in bases]
    stats = SearchStats()
    # static branching order: rays in the most bases first, then degree
    in_bases = [0] * mu
    for b in basis_ids:
        for i in b:
            in_bases[i] += 1
    order_key = {
        i: (-in_bases[i], -len(graph.adjacency[i]), i) for i in range(mu)
    }

    def propagate(dom):
        changed = True
        while changed:
            changed = False
            for i in range(mu):
                if dom[i] == {1}:
                    for j in graph.adjacency[i]:
                        if 1 in dom[j]:
                            if dom[j] == {1}:
                                return False
                            dom[j] = dom[j] - {1}
                            stats.propagations += 1
                            changed = True
            for b in basis_ids:
                can_be_one = [i for i in b if 1 in dom[i]]
                if not can_be_one:
                    return False
                if len(can_be_one) == 1 and dom[can_be_one[0]] == {0, 1}:
                    dom[can_be_one[0]] = {1}
                    stats.propagations += 1
                    changed = True
        return True

    def search(dom):
        stats.nodes += 1
        if stats.nodes > node_cap:
            raise SearchBudgetExceeded(f"node cap {node_cap} exceeded")
        if not propagate(dom):
            return None
        free = [i for i in range(mu) if len(dom[i]) == 2]
        if not free:
            # verify: exactly one 1 per basis, no adjacent pair of 1s
            vals = {i: next(iter(dom[i])) for i in range(mu)}
            for b in basis_ids:
                if sum(vals[i] for i in b) != 1:
                    return None
            for i in range(mu):
                if vals[i] == 1 and any(vals[j] == 1 for j in graph.adjacency[i]):
                    return None
            return vals
        var = min(free, key=lambda i: order_key[i])
        for val in (0, 1):
            nxt = {i: set(s) for i, s in dom.items()}
            nxt[var] = {val}
            found = search(nxt)
            if found is not None:
                return found
        return None

    domains = {i: {0, 1} for i in range(mu)}
    witness = search(domains)
    if witness is None:
        return ProofCertificate(KS_PROOF, "RayColoring", stats=stats)
    return ProofCertificate(
        NOT_KS_PROOF,
        "RayColoring",
        witness={i: Fraction(v) for i, v in witness.items()},
        stats=stats,
    )


# -- parity certification ----------------------------------------------------


def parity_certify(oset: ObservableSet, contexts: Sequence[Context]) -> ProofCertificate:
    """Parity conditions: all context products delta*I multiply to -1 and
    every observable occurs in an even number of contexts."""
    for i, obs in enumerate(oset.observables):
        if not obs.is_dichotomic:
            raise NotDichotomic(i)
    deltas = []
    for ctx in contexts:
        _, delta = context_product(oset, ctx)
        if delta is None or not delta.is_rational or delta.rational() not in (1, -1):
            raise NotScalarMultiple(
                f"context {ctx.ids} product is not +-identity"
            )
        deltas.append(int(delta.rational()))
    counts = {i: 0 for i in range(len(oset))}
    for ctx in contexts:
        for i in ctx.ids:
            counts[i] += 1
    odd = sorted(i for i, c in counts.items() if c % 2 == 1)
    product = 1
    for d in deltas:
        product *= d
    detail = {"deltas": deltas, "delta_product": product, "odd_observables": odd}
    if product == -1 and not odd:
        return ProofCertificate(KS_PROOF, "Parity", detail=detail)
    violated = []
    if product != -1:
        violated.append("delta product is +1")
    if odd:
        violated.append(f"observables {odd} occur an odd number of times")
    detail["violated"] = violated
    return ProofCertificate(NOT_KS_PROOF, "Parity", detail=detail)


# -- general eigenvalue-assignment CSP --------------------------------------


def general_unsat(
    oset: ObservableSet,
    complete_set: Sequence[ContextPolynomial],
    node_cap: int = DEFAULT_NODE_CAP,
) -> ProofCertificate:
    """Complete search for an assignment zeroing every polynomial.

    Backtracking with forward checking: once a constraint has a single
    unassigned variable its domain is filtered to values keeping the
    constraint satisfiable.  KSProof iff no satisfying assignment exists.
    """
    stats = SearchStats()
    if not complete_set:
        return ProofCertificate(NOT_KS_PROOF, "GeneralCSP", witness={}, stats=stats)
    constraints = [(cp.poly, tuple(sorted(cp.poly.variables()))) for cp in complete_set]
    variables = sorted({v for _, vs in constraints for v in vs})
    participation = {v: 0 for v in variables}
    for _, vs in constraints:
        for v in vs:
            participation[v] += 1
    watch = {v: [] for v in variables}
    for idx, (_, vs) in enumerate(constraints):
        for v in vs:
            watch[v].append(idx)

    def check_and_filter(assigned, domains, touched):
        """Returns False on conflict; filters domains of near-ground constraints."""
        seen = set()
        for v in touched:
            for idx in watch[v]:
                if idx in seen:
                    continue
                seen.add(idx)
                p, vs = constraints[idx]
                free = [u for u in vs if u not in assigned]
                if not free:
                    if not eval_assignment(p, assigned).is_zero:
                        return False
                elif len(free) == 1:
                    u = free[0]
                    keep = []
                    for val in domains[u]:
                        trial = dict(assigned)
                        trial[u] = val
                        if eval_assignment(p, trial).is_zero:
                            keep.append(val)
                    stats.propagations += 1
                    if not keep:
                        return False
                    domains[u] = keep
        return True

    def search(assigned, domains):
        stats.nodes += 1
        if stats.nodes > node_cap:
            raise SearchBudgetExceeded(f"node cap {node_cap} exceeded")
        free = [v for v in variables if v not in assigned]
        if not free:
            return dict(assigned)
        var = min(free, key=lambda v: (len(domains[v]), -participation[v], v))
        for val in list(domains[var]):
            assigned[var] = val
            nxt = {v: list(d) for v, d in domains.items()}
            nxt[var] = [val]
            if check_and_filter(assigned, nxt, [var]):
                found = search(assigned, nxt)
                if found is not None:
                    return found
            del assigned[var]
        return None

    domains = {v: value_order(oset[v].spectrum) for v in variables}
    witness = search({}, domains)
    if witness is None:
        return ProofCertificate(KS_PROOF, "GeneralCSP", stats=stats)
    return ProofCertificate(NOT_KS_PROOF, "GeneralCSP", witness=witness, stats=stats)


# -- exact classical maximum -------------------------------------------------


def _monomial_interval(mono, coef: Fraction, assigned, spectra):
    lo, hi = coef, coef
    for i, e in mono:
        if i in assigned:
            x = assigned[i] ** e
            cands = [x]
        else:
            cands = [a**e for a in spectra[i]]
        xs = [lo * min(cands), lo * max(cands), hi * min(cands), hi * max(cands)]
        lo, hi = min(xs), max(xs)
    return lo, hi


def classical_max(
    oset: ObservableSet,
    score: Poly,
    mode: str = "exact",
    complete_set: Optional[Sequence[ContextPolynomial]] = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> BoundResult:
    """Exact maximum of score over all value assignments, or a certified
    upper bound obtained from the UNSAT search on the underlying complete
    set (certify_only mode never enumerates the score's values).
    """
    if mode == "certify_only":
        if complete_set is None:
            raise ValueError("certify_only mode requires the complete set")
        cert = general_unsat(oset, complete_set, node_cap=node_cap)
        if cert.is_proof:
            return BoundResult(kind="certified", value=Fraction(-1), stats=cert.stats)
        # a satisfying assignment zeroes every normalized square, so F attains 0
        return BoundResult(
            kind="exact", value=Fraction(0), witness=cert.witness, stats=cert.stats
        )
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    coeffs = {}
    for mono, coef in score.terms.items():
        if not coef.is_rational:
            raise ValueError("classical_max requires a rational-coefficient score")
        coeffs[mono] = coef.rational()
    variables = sorted(score.variables())
    spectra = oset.spectra()
    participation = {v: 0 for v in variables}
    for mono in coeffs:
        for i, _ in mono:
            participation[i] += 1
    order = sorted(variables, key=lambda v: (-participation[v], v))
    stats = SearchStats()
    best = {"value": None, "witness": None}

    def upper_bound(assigned):
        return sum(
            _monomial_interval(m, c, assigned, spectra)[1] for m, c in coeffs.items()
        )

    def search(pos, assigned):
        stats.nodes += 1
        if stats.nodes > node_cap:
            raise SearchBudgetExceeded(f"node cap {node_cap} exceeded")
        if pos == len(order):
            val = sum(
                c * _prod_at(m, assigned) for m, c in coeffs.items()
            ) if coeffs else Fraction(0)
            if best["value"] is None or val > best["value"]:
                best["value"] = val
                best["witness"] = dict(assigned)
            return
        if best["value"] is not None and upper_bound(assigned) <= best["value"]:
            return
        var = order[pos]
        for val in value_order(spectra[var]):
            assigned[var] = val
            search(pos + 1, assigned)
            del assigned[var]

    def _prod_at(mono, assigned):
        out = Fraction(1)
        for i, e in mono:
            out *= assigned[i] ** e
        return out

    if not variables:
        const = coeffs.get((), Fraction(0))
        return BoundResult(kind="exact", value=const, witness={}, stats=stats)
    search(0, {})
    return BoundResult(
        kind="exact", value=best["value"], witness=best["witness"], stats=stats
    )
