"""Compatibility structure: contexts, orthogonality graph, basis enumeration.

A context is a strictly increasing tuple of observable ids whose operators
pairwise commute (verified exactly).  For ray sets the orthogonality graph
has one vertex per ray and an edge whenever the exact inner product of the
underlying vectors vanishes; bases are its n-vertex cliques.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import KSCertError, NonRayMember, NotCommuting, NotScalarMultiple
from .exact import (
    ExactMatrix,
    Scalar,
    commutes,
    inner,
    mat_mul,
    scalar_multiple_of_identity,
)
from .model import ObservableSet


@dataclass(frozen=True)
class Context:
    """Ordered ids of a set of mutually commuting observables."""

    ids: tuple

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.ids, self.ids[1:])):
            raise KSCertError("context ids must be strictly increasing")

    def __len__(self):
        return len(self.ids)

    def __contains__(self, i):
        return i in self.ids

    def contains_all(self, ids) -> bool:
        return set(ids) <= set(self.ids)


def validate_context(oset: ObservableSet, ids: Sequence[int]) -> Context:
    """Certify pairwise commutation; raises NotCommuting on the first bad pair."""
    ids = sorted(ids)
    if len(set(ids)) != len(ids):
        raise KSCertError("context ids must be distinct")
    for i in ids:
        if not 0 <= i < len(oset):
            raise KSCertError(f"observable id {i} out of range")
    for a_pos, i in enumerate(ids):
        for j in ids[a_pos + 1 :]:
            if not commutes(oset[i].matrix, oset[j].matrix):
                raise NotCommuting(i, j)
    return Context(tuple(ids))


@dataclass
class OrthogonalityGraph:
    """Vertices are ray ids; edges join rays with exactly vanishing inner product."""

    oset: ObservableSet
    adjacency: dict = field(default_factory=dict)  # id -> frozenset of ids

    @property
    def n_vertices(self) -> int:
        return len(self.oset)

    @property
    def edges(self) -> list:
        out = []
        for i in sorted(self.adjacency):
            for j in sorted(self.adjacency[i]):
                if i < j:
                    out.append((i, j))
        return out

    def neighbors(self, i: int) -> frozenset:
        return self.adjacency[i]


def build_orthogonality_graph(oset: ObservableSet) -> OrthogonalityGraph:
    if not oset.all_rays:
        raise NonRayMember("orthogonality graph requires a pure ray set")
    n = len(oset)
    adj = {i: set() for i in range(n)}
    for i in range(n):
        vi = oset[i].ray.vector
        for j in range(i + 1, n):
            if inner(vi, oset[j].ray.vector).is_zero:
                adj[i].add(j)
                adj[j].add(i)
    return OrthogonalityGraph(
        oset=oset, adjacency={i: frozenset(s) for i, s in adj.items()}
    )


def _bron_kerbosch(adj, r, p, x, out):
    # pivot on the vertex of p|x with the most neighbors in p
    if not p and not x:
        out.append(tuple(sorted(r)))
        return
    pivot = max(p | x, key=lambda u: (len(adj[u] & p), -u))
    for v in sorted(p - adj[pivot]):
        _bron_kerbosch(adj, r | {v}, p & adj[v], x & adj[v], out)
        p = p - {v}
        x = x | {v}


def enumerate_bases(graph: OrthogonalityGraph, n: Optional[int] = None) -> list:
    """All n-cliques of the orthogonality graph, as canonical Contexts.

    In dimension n at most n rays are mutually orthogonal, so every n-clique
    is maximal and the pivoted maximal-clique search finds them all.  Each
    returned clique is re-verified to resolve the identity: sum of the n
    projectors equals I exactly.
    """
    if n is None:
        n = graph.oset.dim
    cliques = []
    vertices = set(range(graph.n_vertices))
    _bron_kerbosch(graph.adjacency, set(), vertices, set(), cliques)
    bases = sorted(c for c in cliques if len(c) == n)
    ident = ExactMatrix.identity(graph.oset.dim)
    for clique in bases:
        total = ExactMatrix.zero(graph.oset.dim)
        for i in clique:
            total = total + graph.oset[i].matrix
        if total != ident:
            raise KSCertError(
                f"clique {clique} does not resolve the identity"
            )  # unreachable for true rays; guards corrupted input
    return [Context(c) for c in bases]


def context_product(oset: ObservableSet, ctx: Context):
    """Exact product of the member matrices and, when scalar, its delta.

    Returns (matrix, delta) with delta a Scalar when the product is a scalar
    multiple of the identity, else (matrix, None).
    """
    prod = ExactMatrix.identity(oset.dim)
    for i in ctx.ids:
        prod = mat_mul(prod, oset[i].matrix)
    return prod, scalar_multiple_of_identity(prod)


def require_scalar_product(oset: ObservableSet, ctx: Context) -> Scalar:
    _, delta = context_product(oset, ctx)
    if delta is None:
        raise NotScalarMultiple(f"context {ctx.ids} product is not a scalar multiple of I")
    return delta
