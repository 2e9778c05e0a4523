"""Plain-text proof files and derivation records.

Input files are line-oriented, hand-editable and diff-able:

    dim 4
    mode auto
    ray  r1  0 0 0 1
    pauli a11 +XI
    matrix m1 spectrum 0,1
    row 1 0
    row 0 0
    context a11 a12 a13
    poly c=4 a11*a12*a13 - 1

Scalar tokens are exact: rationals (`-3/2`), the imaginary unit (`i`,
`2i`), and sqrt2 written `r2` (`-r2`, `1/2r2`), combinable as `1+i` or
`(1+i)` inside polynomial expressions.

Exports append a `=== derived ===` section with the complete set, F, the
presented score, bounds and a content hash; the parser reads only the
input section, so a record round-trips through parse -> re-derive ->
export byte-identically.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .compat import validate_context
from .errors import ParseError
from .exact import ExactMatrix, Scalar, pauli_matrix
from .model import ObservableSet, make_observable, make_ray, ray_observable
from .poly import ContextPolynomial, Poly, make_context_polynomial, render

DERIVED_MARKER = "=== derived ==="

_SCALAR_TERM = re.compile(r"^(\d+(?:/\d+)?)?(r2)?(i)?$")


def parse_scalar(token: str, line: Optional[int] = None) -> Scalar:
    """Parse an exact scalar token like `-3/2`, `i`, `r2`, `1+i`, `2r2i`."""
    s = token.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        raise ParseError("empty scalar", line)
    # split into signed terms
    terms = re.findall(r"[+-]?[^+-]+", s.replace(" ", ""))
    total = Scalar(0)
    for t in terms:
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        m = _SCALAR_TERM.match(t)
        if not m or (not m.group(1) and not m.group(2) and not m.group(3)):
            raise ParseError(f"bad scalar term {t!r} in {token!r}", line)
        q = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        q *= sign
        has_r2, has_i = bool(m.group(2)), bool(m.group(3))
        if has_r2 and has_i:
            total = total + Scalar(0, 0, 0, q)
        elif has_r2:
            total = total + Scalar(0, q)
        elif has_i:
            total = total + Scalar(0, 0, q)
        else:
            total = total + Scalar(q)
    return total


@dataclass
class ObsDecl:
    kind: str  # "ray" | "pauli" | "matrix"
    label: str
    vector: Optional[tuple] = None  # ray
    pauli: Optional[str] = None  # signed word
    rows: Optional[list] = None  # matrix rows of Scalar
    spectrum: Optional[tuple] = None


@dataclass
class PolyDecl:
    c: Fraction
    terms: list  # [(Scalar coef, [(label, exp), ...]), ...]
    source: str


@dataclass
class ProofFile:
    dim: int
    mode: str = "auto"
    observables: List[ObsDecl] = field(default_factory=list)
    contexts: List[list] = field(default_factory=list)  # lists of labels
    polynomials: List[PolyDecl] = field(default_factory=list)

    def to_observable_set(self) -> ObservableSet:
        oset = ObservableSet(dim=self.dim)
        for d in self.observables:
            if d.kind == "ray":
                if len(d.vector) != self.dim:
                    raise ParseError(
                        f"ray {d.label} has {len(d.vector)} components, dim is {self.dim}"
                    )
                oset.add(ray_observable(make_ray(d.vector, d.label), d.label))
            elif d.kind == "pauli":
                sign = 1
                word = d.pauli
                if word[0] in "+-":
                    sign = -1 if word[0] == "-" else 1
                    word = word[1:]
                m = pauli_matrix(word, sign)
                if m.dim != self.dim:
                    raise ParseError(
                        f"pauli {d.label} has dimension {m.dim}, dim is {self.dim}"
                    )
                oset.add(make_observable(m, spectrum=(-1, 1), label=d.label))
            else:
                m = ExactMatrix(d.rows)
                if m.dim != self.dim:
                    raise ParseError(
                        f"matrix {d.label} has dimension {m.dim}, dim is {self.dim}"
                    )
                oset.add(make_observable(m, spectrum=d.spectrum, label=d.label))
        for labels in self.contexts:
            ids = [oset.by_label(l) for l in labels]
            oset.declared_contexts.append(validate_context(oset, ids).ids)
        return oset

    def to_polynomials(self, oset: ObservableSet) -> list:
        out = []
        for decl in self.polynomials:
            p = Poly()
            for coef, factors in decl.terms:
                mono = {}
                for label, exp in factors:
                    i = oset.by_label(label)
                    mono[i] = mono.get(i, 0) + exp
                p = p + Poly({tuple(sorted(mono.items())): coef})
            ids = sorted(p.variables())
            ctx = validate_context(oset, ids) if ids else validate_context(oset, [])
            out.append(make_context_polynomial(p, ctx, oset, c=decl.c))
        return out


# -- polynomial expression parsing -------------------------------------------

_TOKEN = re.compile(
    r"\s*(\(|\)|\*|\^|\+|-|[A-Za-z_][A-Za-z_0-9]*|\d+(?:/\d+)?(?:r2)?i?|r2i?|i)"
)


def _tokenize_expr(s: str, line):
    pos = 0
    out = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"cannot tokenize polynomial near {s[pos:pos+12]!r}", line)
        out.append(m.group(1))
        pos = m.end()
    return out


_SCALAR_TOKEN = re.compile(r"^(\d+(?:/\d+)?(?:r2)?i?|r2i?|i)$")


def parse_poly_expr(s: str, line: Optional[int] = None) -> list:
    """Parse `2*a*b^2 - (1+i)*c + 1` into [(Scalar, [(label, exp), ...]), ...]."""
    toks = _tokenize_expr(s, line)
    terms = []
    idx = 0

    def peek():
        return toks[idx] if idx < len(toks) else None

    while idx < len(toks):
        sign = 1
        while peek() in ("+", "-"):
            if toks[idx] == "-":
                sign = -sign
            idx += 1
        if peek() is None:
            raise ParseError("dangling sign in polynomial", line)
        coef = Scalar(sign)
        factors = []
        while True:
            tok = peek()
            if tok == "(":
                # parenthesized exact scalar
                depth_end = toks.index(")", idx)
                coef = coef * parse_scalar("".join(toks[idx + 1 : depth_end]), line)
                idx = depth_end + 1
            elif tok is not None and _SCALAR_TOKEN.match(tok):
                coef = coef * parse_scalar(tok, line)
                idx += 1
            elif tok is not None and re.match(r"^[A-Za-z_]", tok):
                label = tok
                idx += 1
                exp = 1
                if peek() == "^":
                    idx += 1
                    if peek() is None or not peek().isdigit():
                        raise ParseError("exponent must be a positive integer", line)
                    exp = int(toks[idx])
                    idx += 1
                factors.append((label, exp))
            else:
                raise ParseError(f"unexpected token {tok!r} in polynomial", line)
            if peek() == "*":
                idx += 1
                continue
            break
        terms.append((coef, factors))
        if peek() not in (None, "+", "-"):
            raise ParseError(f"unexpected token {peek()!r} after term", line)
    if not terms:
        raise ParseError("empty polynomial expression", line)
    return terms


# -- file parsing -------------------------------------------------------------


def parse(text: str) -> ProofFile:
    dim = None
    mode = "auto"
    observables: List[ObsDecl] = []
    contexts: List[list] = []
    polynomials: List[PolyDecl] = []
    pending_matrix: Optional[ObsDecl] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == DERIVED_MARKER:
            break
        parts = line.split()
        head = parts[0]
        if pending_matrix is not None and head != "row":
            if len(pending_matrix.rows) != dim:
                raise ParseError(
                    f"matrix {pending_matrix.label} has {len(pending_matrix.rows)} rows, expected {dim}",
                    lineno,
                )
            pending_matrix = None
        if head == "dim":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("dim takes one positive integer", lineno)
            dim = int(parts[1])
        elif head == "mode":
            if len(parts) != 2 or parts[1] not in (
                "ray",
                "bases-only",
                "parity",
                "general",
                "auto",
            ):
                raise ParseError(
                    "mode must be ray | bases-only | parity | general | auto", lineno
                )
            mode = parts[1]
        elif head == "ray":
            if dim is None:
                raise ParseError("dim must come before observables", lineno)
            if len(parts) < 3:
                raise ParseError("ray takes a label and components", lineno)
            vec = tuple(parse_scalar(t, lineno) for t in parts[2:])
            observables.append(ObsDecl(kind="ray", label=parts[1], vector=vec))
        elif head == "pauli":
            if dim is None:
                raise ParseError("dim must come before observables", lineno)
            if len(parts) != 3:
                raise ParseError("pauli takes a label and a signed word", lineno)
            observables.append(ObsDecl(kind="pauli", label=parts[1], pauli=parts[2]))
        elif head == "matrix":
            if dim is None:
                raise ParseError("dim must come before observables", lineno)
            if len(parts) < 2:
                raise ParseError("matrix takes a label", lineno)
            spectrum = None
            if len(parts) >= 4 and parts[2] == "spectrum":
                spectrum = tuple(Fraction(x) for x in parts[3].split(","))
            elif len(parts) != 2:
                raise ParseError("matrix syntax: matrix LABEL [spectrum a,b,...]", lineno)
            pending_matrix = ObsDecl(
                kind="matrix", label=parts[1], rows=[], spectrum=spectrum
            )
            observables.append(pending_matrix)
        elif head == "row":
            if pending_matrix is None:
                raise ParseError("row outside a matrix declaration", lineno)
            row = [parse_scalar(t, lineno) for t in parts[1:]]
            if len(row) != dim:
                raise ParseError(f"row has {len(row)} entries, expected {dim}", lineno)
            pending_matrix.rows.append(row)
        elif head == "context":
            if len(parts) < 2:
                raise ParseError("context takes observable labels", lineno)
            contexts.append(parts[1:])
        elif head == "poly":
            rest = line[len("poly") :].strip()
            c = Fraction(1)
            m = re.match(r"^c=(\d+(?:/\d+)?)\s+(.*)$", rest)
            if m:
                c = Fraction(m.group(1))
                rest = m.group(2)
            terms = parse_poly_expr(rest, lineno)
            polynomials.append(PolyDecl(c=c, terms=terms, source=rest))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if pending_matrix is not None and len(pending_matrix.rows) != dim:
        raise ParseError(f"matrix {pending_matrix.label} is missing rows")
    if dim is None:
        raise ParseError("file does not declare dim")
    labels = [d.label for d in observables]
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate observable labels")
    return ProofFile(
        dim=dim,
        mode=mode,
        observables=observables,
        contexts=contexts,
        polynomials=polynomials,
    )


def parse_file(path: str) -> ProofFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


# -- rendering ----------------------------------------------------------------


def render_input_section(pf: ProofFile) -> str:
    lines = [f"dim {pf.dim}", f"mode {pf.mode}"]
    for d in pf.observables:
        if d.kind == "ray":
            lines.append("ray " + d.label + " " + " ".join(str(x) for x in d.vector))
        elif d.kind == "pauli":
            lines.append(f"pauli {d.label} {d.pauli}")
        else:
            spec = ",".join(str(a) for a in d.spectrum) if d.spectrum else None
            lines.append(
                f"matrix {d.label}" + (f" spectrum {spec}" if spec else "")
            )
            for row in d.rows:
                lines.append("row " + " ".join(str(x) for x in row))
    for ctx in pf.contexts:
        lines.append("context " + " ".join(ctx))
    for p in pf.polynomials:
        prefix = f"c={p.c} " if p.c != 1 else ""
        lines.append(f"poly {prefix}{p.source}")
    return "\n".join(lines) + "\n"


def proof_file_from_set(oset: ObservableSet, mode: str) -> ProofFile:
    """Reconstruct a ProofFile from a live observable set (catalog export)."""
    decls = []
    for obs in oset.observables:
        if obs.is_projector:
            decls.append(
                ObsDecl(kind="ray", label=obs.label, vector=obs.ray.vector)
            )
        else:
            decls.append(
                ObsDecl(
                    kind="matrix",
                    label=obs.label,
                    rows=[list(r) for r in obs.matrix.entries],
                    spectrum=obs.spectrum,
                )
            )
    labels = oset.labels
    contexts = [[labels[i] for i in ids] for ids in oset.declared_contexts]
    return ProofFile(dim=oset.dim, mode=mode, observables=decls, contexts=contexts)


def render_record(pf: ProofFile, ineq, presented) -> str:
    """Full derivation record: input section + derived section + hash."""
    oset = ineq.oset
    labels = dict(enumerate(oset.labels))
    plabels = dict(enumerate(presented.presented_set.labels))
    lines = [render_input_section(pf).rstrip("\n"), DERIVED_MARKER]
    cs = ineq.complete_set
    lines.append(f"provenance {cs.provenance}")
    lines.append(f"complete_set {len(cs)}")
    for cp in cs.polynomials:
        lines.append(f"cpoly c={cp.c} :: {render(cp.poly, labels)}")
    lines.append(f"F :: {render(ineq.F, labels)}")
    lines.append(f"form {presented.form}")
    lines.append(f"score :: {render(presented.score, plabels)}")
    lines.append(f"scale {presented.scale}")
    lines.append(f"offset {presented.offset}")
    lines.append(f"classical_bound {presented.classical_bound}")
    lines.append(f"bound_kind {presented.bound_kind}")
    lines.append(f"quantum_value {presented.quantum_value}")
    lines.append("verdict KSProof")
    body = "\n".join(lines)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return body + f"\nsha256 {digest}\n"
