"""Proof-file parsing and the command-line workflow."""

from fractions import Fraction

import pytest

from kscert.cli import main
from kscert.errors import ParseError
from kscert.exact import Scalar
from kscert.prooffile import (
    parse,
    parse_poly_expr,
    parse_scalar,
    proof_file_from_set,
    render_input_section,
)


class TestParseScalar:
    @pytest.mark.parametrize(
        "token,expect",
        [
            ("1/2", Scalar(Fraction(1, 2))),
            ("-3", Scalar(-3)),
            ("i", Scalar(0, 0, 1, 0)),
            ("-i", Scalar(0, 0, -1, 0)),
            ("r2", Scalar(0, 1)),
            ("-r2", Scalar(0, -1)),
            ("2r2i", Scalar(0, 0, 0, 2)),
            ("1+i", Scalar(1, 0, 1, 0)),
            ("(1-i)", Scalar(1, 0, -1, 0)),
            ("1/2+1/2r2", Scalar(Fraction(1, 2), Fraction(1, 2))),
        ],
    )
    def test_examples(self, token, expect):
        assert parse_scalar(token) == expect

    def test_str_roundtrip(self):
        samples = [
            Scalar(Fraction(3, 4)),
            Scalar(0, 0, 1, 0),
            Scalar(1, 0, 1, 0),
            Scalar(0, -1),
            Scalar(Fraction(1, 2), 0, Fraction(-1, 2), 0),
            Scalar(0, Fraction(1, 2), 0, -2),
            Scalar(0),
        ]
        for x in samples:
            assert parse_scalar(str(x)) == x

    def test_bad_token(self):
        with pytest.raises(ParseError):
            parse_scalar("sqrt3")


class TestParsePolyExpr:
    def test_terms(self):
        terms = parse_poly_expr("2*a*b^2 - (1+i)*c + 1")
        assert terms == [
            (Scalar(2), [("a", 1), ("b", 2)]),
            (Scalar(-1, 0, -1, 0), [("c", 1)]),
            (Scalar(1), []),
        ]

    def test_bad_exponent(self):
        with pytest.raises(ParseError):
            parse_poly_expr("a^b")


SINGLE_BASIS = """\
dim 3
ray e1 1 0 0
ray e2 0 1 0
ray e3 0 0 1
"""

MP_PARITY = """\
dim 4
pauli a +XI
pauli b +IX
pauli c +XX
pauli d +IZ
pauli e +ZI
pauli f +ZZ
pauli g +XZ
pauli h +ZX
pauli k +YY
context a b c
context d e f
context g h k
context a d g
context b e h
context c f k
"""

GENERAL_MP = MP_PARITY + """\
poly c=4 a*b*c - 1
poly c=4 d*e*f - 1
poly c=4 g*h*k - 1
poly c=4 a*d*g - 1
poly c=4 b*e*h - 1
poly c=4 c*f*k + 1
"""


class TestParseErrors:
    def test_missing_dim(self):
        with pytest.raises(ParseError):
            parse("ray e1 1 0 0\n")

    def test_line_number_in_error(self):
        with pytest.raises(ParseError) as exc:
            parse("dim 3\nray e1 1 0 q\n")
        assert exc.value.line == 2

    def test_unknown_directive(self):
        with pytest.raises(ParseError):
            parse("dim 3\nvector e1 1 0 0\n")

    def test_row_length(self):
        with pytest.raises(ParseError):
            parse("dim 2\nmatrix m\nrow 1 0 0\n")

    def test_missing_rows(self):
        with pytest.raises(ParseError):
            parse("dim 2\nmatrix m\nrow 1 0\n")

    def test_duplicate_labels(self):
        with pytest.raises(ParseError):
            parse("dim 3\nray e1 1 0 0\nray e1 0 1 0\n")

    def test_ray_dimension_mismatch(self):
        pf = parse("dim 4\nray e1 1 0 0\n")
        with pytest.raises(ParseError):
            pf.to_observable_set()

    def test_derived_section_ignored(self):
        pf = parse(SINGLE_BASIS + "=== derived ===\nnot even a directive\n")
        assert len(pf.observables) == 3


class TestParseRoundTrip:
    def test_input_section_stable(self):
        pf = parse(SINGLE_BASIS)
        text = render_input_section(pf)
        assert render_input_section(parse(text)) == text

    def test_catalog_reconstruction(self, peres33):
        oset, _, _ = peres33
        pf = proof_file_from_set(oset, "ray")
        oset2 = parse(render_input_section(pf)).to_observable_set()
        assert len(oset2) == 33
        for a, b in zip(oset.observables, oset2.observables):
            assert a.matrix == b.matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerifyCommand:
    def test_catalog_proof(self, capsys):
        code, out, _ = run(capsys, "verify", "--catalog", "cabello-18")
        assert code == 0
        assert "method: RayColoring" in out
        assert "verdict: KSProof" in out

    def test_parity_catalog(self, capsys):
        code, out, _ = run(capsys, "verify", "--catalog", "mermin-peres")
        assert code == 0
        assert "method: Parity" in out

    def test_colorable_file(self, capsys, tmp_path):
        path = tmp_path / "basis.txt"
        path.write_text(SINGLE_BASIS)
        code, out, _ = run(capsys, "verify", "--input", str(path))
        assert code == 2
        assert "verdict: NotKSProof" in out
        assert "witness: " in out

    def test_general_mode_file(self, capsys, tmp_path):
        path = tmp_path / "mp.txt"
        path.write_text(GENERAL_MP)
        code, out, _ = run(capsys, "verify", "--input", str(path), "--mode", "general")
        assert code == 0
        assert "method: GeneralCSP (6 polynomials)" in out

    def test_budget_exceeded(self, capsys):
        code, _, err = run(
            capsys, "verify", "--catalog", "cabello-18", "--node-cap", "2"
        )
        assert code == 4
        assert "budget-exceeded" in err

    def test_missing_source(self, capsys):
        code, _, err = run(capsys, "verify")
        assert code == 3
        assert "error: input" in err

    def test_both_sources(self, capsys, tmp_path):
        path = tmp_path / "basis.txt"
        path.write_text(SINGLE_BASIS)
        code, _, _ = run(
            capsys, "verify", "--catalog", "cabello-18", "--input", str(path)
        )
        assert code == 3

    def test_unknown_catalog(self, capsys):
        code, _, err = run(capsys, "verify", "--catalog", "nope")
        assert code == 3

    def test_bad_file(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("dim 3\nray e1 1 0 q\n")
        code, _, err = run(capsys, "verify", "--input", str(path))
        assert code == 3
        assert "error: input" in err


class TestDeriveCommand:
    def test_mermin_peres(self, capsys):
        code, out, _ = run(
            capsys, "derive", "--catalog", "mermin-peres", "--exact-bound"
        )
        assert code == 0
        assert "complete set: 6 polynomials (Parity)" in out
        assert "<= 4" in out
        assert "quantum value: 6" in out
        assert "bound: 4 (exact)" in out

    def test_cabello(self, capsys):
        code, out, _ = run(capsys, "derive", "--catalog", "cabello-18")
        assert code == 0
        assert "complete set: 72 polynomials (RayEdgesBases)" in out
        assert "<= 8" in out
        assert "quantum value: 9" in out
        assert "(certified)" in out

    def test_not_a_proof(self, capsys, tmp_path):
        path = tmp_path / "basis.txt"
        path.write_text(SINGLE_BASIS)
        code, _, err = run(capsys, "derive", "--input", str(path))
        assert code == 2
        assert "not-a-ks-proof" in err
        assert "e1=" in err


class TestBoundCommand:
    def test_mermin_peres(self, capsys):
        code, out, _ = run(capsys, "bound", "--catalog", "mermin-peres")
        assert code == 0
        assert "exact classical maximum: 4" in out
        assert "quantum value: 6" in out


class TestExportCommand:
    def test_round_trip_identical(self, capsys, tmp_path):
        first = tmp_path / "mp.rec"
        code, _, _ = run(
            capsys, "export", "--catalog", "mermin-peres", "--output", str(first)
        )
        assert code == 0
        second = tmp_path / "mp2.rec"
        code, _, _ = run(
            capsys, "export", "--input", str(first), "--output", str(second)
        )
        assert code == 0
        assert first.read_text() == second.read_text()
        assert "sha256 " in first.read_text()

    def test_round_trip_with_sqrt2(self, capsys, tmp_path):
        first = tmp_path / "p33.rec"
        code, _, _ = run(
            capsys, "export", "--catalog", "peres-33", "--output", str(first)
        )
        assert code == 0
        second = tmp_path / "p33b.rec"
        code, _, _ = run(
            capsys, "export", "--input", str(first), "--output", str(second)
        )
        assert code == 0
        assert first.read_text() == second.read_text()

    def test_refuses_non_proof(self, capsys, tmp_path):
        path = tmp_path / "basis.txt"
        path.write_text(SINGLE_BASIS)
        out = tmp_path / "basis.rec"
        code, _, err = run(
            capsys, "export", "--input", str(path), "--output", str(out)
        )
        assert code == 2
        assert not out.exists()


class TestCatalogCommand:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "catalog")
        assert code == 0
        for name in ("mermin-peres", "mermin-pentagram", "cabello-18", "peres-33"):
            assert name in out

    def test_show(self, capsys):
        code, out, _ = run(capsys, "catalog", "cabello-18")
        assert code == 0
        assert out.startswith("dim 4")
        assert out.count("ray ") == 18
