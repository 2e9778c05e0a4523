"""Search engines: ray coloring, parity certification, general CSP, bounds."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kscert.assign import (
    KS_PROOF,
    NOT_KS_PROOF,
    classical_max,
    general_unsat,
    ks_colorability,
    parity_certify,
    value_order,
)
from kscert.compat import Context, build_orthogonality_graph, enumerate_bases
from kscert.derive import (
    build_complete_set_parity,
    build_complete_set_rays,
)
from kscert.errors import (
    NotDichotomic,
    NotScalarMultiple,
    SearchBudgetExceeded,
)
from kscert.exact import PAULI, kron
from kscert.model import ObservableSet, make_observable
from kscert.poly import Poly, eval_assignment

from conftest import single_basis_set, two_bases_set


def brute_force_coloring(n, edges, bases):
    """Independent oracle: enumerate all 2^n colorings."""
    sols = []
    for bits in itertools.product((0, 1), repeat=n):
        if any(bits[i] and bits[j] for i, j in edges):
            continue
        if any(sum(bits[i] for i in b) != 1 for b in bases):
            continue
        sols.append(bits)
    return sols


class TestKSColorability:
    def test_single_basis_colorable(self, basis3):
        g = build_orthogonality_graph(basis3)
        bases = enumerate_bases(g)
        cert = ks_colorability(basis3, g, bases)
        assert cert.verdict == NOT_KS_PROOF
        assert sum(cert.witness.values()) == 1

    def test_two_bases_colorable(self, two_bases):
        g = build_orthogonality_graph(two_bases)
        bases = enumerate_bases(g)
        cert = ks_colorability(two_bases, g, bases)
        assert not cert.is_proof
        w = cert.witness
        for i, j in g.edges:
            assert not (w[i] == 1 and w[j] == 1)
        for b in bases:
            assert sum(w[i] for i in b.ids) == 1

    def test_cabello_uncolorable(self, cabello):
        oset, graph, bases = cabello
        cert = ks_colorability(oset, graph, bases)
        assert cert.is_proof
        assert cert.method == "RayColoring"
        assert cert.witness is None
        assert cert.stats.nodes < 10_000

    def test_peres_uncolorable(self, peres33):
        oset, graph, bases = peres33
        cert = ks_colorability(oset, graph, bases)
        assert cert.is_proof
        assert cert.stats.nodes < 100_000

    def test_budget(self, cabello):
        oset, graph, bases = cabello
        with pytest.raises(SearchBudgetExceeded):
            ks_colorability(oset, graph, bases, node_cap=2)

    @given(
        st.lists(
            st.tuples(st.integers(-1, 1), st.integers(-1, 1), st.integers(-1, 1)),
            min_size=3,
            max_size=7,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, vectors):
        oset = ObservableSet(dim=3)
        for v in vectors:
            if not any(v):
                continue
            try:
                oset.add_ray(v)
            except Exception:
                pass
        assume(len(oset) >= 3)
        g = build_orthogonality_graph(oset)
        bases = enumerate_bases(g)
        cert = ks_colorability(oset, g, bases)
        sols = brute_force_coloring(len(oset), g.edges, [b.ids for b in bases])
        assert cert.is_proof == (not sols)
        if not cert.is_proof:
            assert tuple(cert.witness[i] for i in range(len(oset))) in sols


class TestParityCertify:
    def test_mermin_peres(self, mermin_peres):
        oset, ctxs = mermin_peres
        cert = parity_certify(oset, ctxs)
        assert cert.is_proof
        assert cert.detail["deltas"] == [1, 1, 1, 1, 1, -1]
        assert cert.detail["delta_product"] == -1
        assert cert.detail["odd_observables"] == []

    def test_pentagram(self, pentagram):
        oset, ctxs = pentagram
        cert = parity_certify(oset, ctxs)
        assert cert.is_proof
        assert sorted(cert.detail["deltas"]) == [-1, 1, 1, 1, 1]

    def test_dropped_context_fails(self, mermin_peres):
        oset, ctxs = mermin_peres
        cert = parity_certify(oset, ctxs[:-1])
        assert not cert.is_proof
        # the minus column's observables now occur an odd number of times
        assert cert.detail["delta_product"] == 1
        assert cert.detail["odd_observables"] == list(ctxs[-1].ids)

    def test_requires_dichotomic(self, basis3):
        with pytest.raises(NotDichotomic):
            parity_certify(basis3, [Context((0, 1, 2))])

    def test_requires_scalar_product(self):
        oset = ObservableSet(dim=4)
        oset.add(make_observable(kron(PAULI["X"], PAULI["I"]), label="XI"))
        oset.add(make_observable(kron(PAULI["I"], PAULI["X"]), label="IX"))
        with pytest.raises(NotScalarMultiple):
            parity_certify(oset, [Context((0, 1))])


class TestGeneralUnsat:
    def test_empty_set_is_not_proof(self, basis3):
        cert = general_unsat(basis3, [])
        assert cert.verdict == NOT_KS_PROOF
        assert cert.witness == {}

    def test_single_basis_sat(self, basis3):
        g = build_orthogonality_graph(basis3)
        cs = build_complete_set_rays(basis3, g, enumerate_bases(g))
        cert = general_unsat(basis3, cs.polynomials)
        assert not cert.is_proof
        for cp in cs.polynomials:
            assert eval_assignment(cp.poly, cert.witness).is_zero

    def test_cabello_unsat_agrees_with_coloring(self, cabello):
        oset, graph, bases = cabello
        cs = build_complete_set_rays(oset, graph, bases)
        cert = general_unsat(oset, cs.polynomials)
        assert cert.is_proof
        assert cert.method == "GeneralCSP"
        assert ks_colorability(oset, graph, bases).is_proof

    def test_parity_set_unsat(self, mermin_peres):
        oset, ctxs = mermin_peres
        cs = build_complete_set_parity(oset, ctxs)
        assert general_unsat(oset, cs.polynomials).is_proof

    def test_budget(self, cabello):
        oset, graph, bases = cabello
        cs = build_complete_set_rays(oset, graph, bases)
        with pytest.raises(SearchBudgetExceeded):
            general_unsat(oset, cs.polynomials, node_cap=3)

    @given(
        st.lists(
            st.tuples(st.integers(-1, 1), st.integers(-1, 1), st.integers(-1, 1)),
            min_size=3,
            max_size=6,
        )
    )
    @settings(max_examples=30, deadline=None)
    def test_matches_coloring_on_ray_sets(self, vectors):
        oset = ObservableSet(dim=3)
        for v in vectors:
            if not any(v):
                continue
            try:
                oset.add_ray(v)
            except Exception:
                pass
        assume(len(oset) >= 3)
        g = build_orthogonality_graph(oset)
        bases = enumerate_bases(g)
        cs = build_complete_set_rays(oset, g, bases)
        csp = general_unsat(oset, cs.polynomials)
        coloring = ks_colorability(oset, g, bases)
        assert csp.is_proof == coloring.is_proof


def brute_force_max(oset, score):
    variables = sorted(score.variables())
    spectra = oset.spectra()
    best = None
    arg = None
    for vals in itertools.product(*(spectra[v] for v in variables)):
        assignment = dict(zip(variables, vals))
        x = eval_assignment(score, assignment).rational()
        if best is None or x > best:
            best, arg = x, assignment
    return best, arg


class TestClassicalMax:
    def test_constant(self, basis3):
        res = classical_max(basis3, Poly.const(Fraction(5, 2)))
        assert res.kind == "exact" and res.value == Fraction(5, 2)

    def test_linear_projectors(self, basis3):
        score = Poly.var(0) + Poly.var(1) - Poly.var(2)
        res = classical_max(basis3, score)
        assert res.value == 2
        assert eval_assignment(score, res.witness).rational() == 2

    def test_oracle_mermin_peres_row(self, mermin_peres):
        oset, ctxs = mermin_peres
        ids = ctxs[0].ids
        score = Poly.var(ids[0]) * Poly.var(ids[1]) + Poly.var(ids[2])
        res = classical_max(oset, score)
        expect, _ = brute_force_max(oset, score)
        assert res.value == expect == 2

    def test_oracle_full_parity_score(self, mermin_peres):
        # sum of the six context products with the minus column negated
        oset, ctxs = mermin_peres
        score = Poly()
        for ctx, delta in zip(ctxs, [1, 1, 1, 1, 1, -1]):
            term = Poly.const(delta)
            for i in ctx.ids:
                term = term * Poly.var(i)
            score = score + term
        res = classical_max(oset, score)
        expect, _ = brute_force_max(oset, score)
        assert res.value == expect == 4
        assert eval_assignment(score, res.witness).rational() == 4

    def test_certify_only_proof(self, cabello):
        oset, graph, bases = cabello
        cs = build_complete_set_rays(oset, graph, bases)
        res = classical_max(oset, Poly(), mode="certify_only", complete_set=cs.polynomials)
        assert res.kind == "certified" and res.value == -1

    def test_certify_only_sat(self, basis3):
        g = build_orthogonality_graph(basis3)
        cs = build_complete_set_rays(basis3, g, enumerate_bases(g))
        res = classical_max(basis3, Poly(), mode="certify_only", complete_set=cs.polynomials)
        assert res.kind == "exact" and res.value == 0
        assert res.witness is not None

    def test_certify_only_needs_complete_set(self, basis3):
        with pytest.raises(ValueError):
            classical_max(basis3, Poly(), mode="certify_only")

    def test_unknown_mode(self, basis3):
        with pytest.raises(ValueError):
            classical_max(basis3, Poly(), mode="anneal")

    def test_budget(self, peres33):
        oset, graph, bases = peres33
        score = Poly()
        for i in range(len(oset)):
            score = score + Poly.var(i)
        with pytest.raises(SearchBudgetExceeded):
            classical_max(oset, score, node_cap=5)

    @given(
        st.lists(
            st.tuples(
                st.lists(st.integers(0, 2), min_size=0, max_size=2),
                st.integers(-3, 3),
            ),
            min_size=1,
            max_size=4,
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_oracle_random_scores(self, terms):
        from kscert.exact import Scalar

        oset = single_basis_set(3)
        score = Poly()
        for varlist, coef in terms:
            term = Poly.const(coef)
            for i in varlist:
                term = term * Poly.var(i)
            score = score + term
        assume(score.variables())
        res = classical_max(oset, score)
        expect, _ = brute_force_max(oset, score)
        assert res.value == expect
        assert eval_assignment(score, res.witness).rational() == expect


class TestValueOrder:
    def test_orders(self):
        assert value_order((Fraction(0), Fraction(1))) == [Fraction(0), Fraction(1)]
        assert value_order((Fraction(-1), Fraction(1))) == [Fraction(1), Fraction(-1)]
        assert value_order((Fraction(2), Fraction(0), Fraction(1))) == [
            Fraction(0),
            Fraction(1),
            Fraction(2),
        ]
