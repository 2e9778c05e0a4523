"""Exact scalar and dense matrix arithmetic.

Scalars live in the field Q(i, sqrt2): every value is

    (a + b*sqrt2) + (c + d*sqrt2)*i

with a, b, c, d arbitrary-precision rationals.  All arithmetic is exact;
there is no floating point anywhere in the package.  The sqrt2 component
exists only because a few classic ray sets (Peres' 33 rays) need it --
rational inputs simply carry b = d = 0.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, NonHermitian, ZeroVector

RationalLike = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Scalar:
    """An element a + b*sqrt2 + (c + d*sqrt2)*i of Q(i, sqrt2)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "c", _frac(c))
        object.__setattr__(self, "d", _frac(d))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def of(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls(_frac(x))

    @classmethod
    def _make(cls, a, b, c, d) -> "Scalar":
        """Internal fast constructor; components must already be exact."""
        self = object.__new__(cls)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        return self

    # -- predicates / projections -------------------------------------

    @property
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    @property
    def is_real(self) -> bool:
        return not (self.c or self.d)

    @property
    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"not a rational number: {self}")
        return self.a

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        o = Scalar.of(other)
        return Scalar._make(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) + (-self)

    def __mul__(self, other):
        o = Scalar.of(other)
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = o.a, o.b, o.c, o.d
        if not (b or c or d or f or g or h):  # both purely rational
            return Scalar._make(a * e, _FR0, _FR0, _FR0)
        # (re1 + im1*i)(re2 + im2*i), components in Q(sqrt2):
        # (x1 + y1*s)(x2 + y2*s) = (x1x2 + 2 y1y2) + (x1y2 + y1x2) s
        re_a = a * e + 2 * b * f - (c * g + 2 * d * h)
        re_b = a * f + b * e - (c * h + d * g)
        im_a = a * g + 2 * b * h + c * e + 2 * d * f
        im_b = a * h + b * g + c * f + d * e
        return Scalar._make(re_a, re_b, im_a, im_b)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.a, self.b, -self.c, -self.d)

    def norm_squared(self) -> "Scalar":
        """|z|^2, a real (possibly sqrt2-bearing) scalar."""
        return self * self.conjugate()

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("division by exact zero")
        # rationalize in two stages: kill i, then kill sqrt2
        num = self.conjugate()
        n = self.norm_squared()  # x + y*sqrt2, real
        x, y = n.a, n.b
        denom = x * x - 2 * y * y  # (x + y s)(x - y s), rational
        # num * (x - y*sqrt2) / denom
        return num * Scalar(x, -y) * Scalar(Fraction(1, 1) / denom)

    def __truediv__(self, other):
        return self * Scalar.of(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.of(other) * self.inverse()

    # -- comparisons ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            o = Scalar.of(other)
            return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    # -- rendering ------------------------------------------------------

    def __str__(self):
        parts = []
        for coef, tag in ((self.a, ""), (self.b, "r2"), (self.c, "i"), (self.d, "r2i")):
            if coef == 0:
                continue
            sign = "-" if coef < 0 else ("+" if parts else "")
            mag = abs(coef)
            if tag and mag == 1:
                parts.append(f"{sign}{tag}")
            elif tag:
                parts.append(f"{sign}{mag}{tag}")
            else:
                parts.append(f"{sign}{mag}")
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"Scalar({self})"


_FR0 = Fraction(0)

ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 0, 1, 0)
SQRT2 = Scalar(0, 1, 0, 0)


def conj_vector(v: Sequence[Scalar]) -> tuple:
    return tuple(x.conjugate() for x in v)


def inner(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    """Hermitian inner product <u, v> = sum conj(u_k) v_k."""
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths {len(u)} != {len(v)}")
    acc = ZERO
    for x, y in zip(u, v):
        acc = acc + x.conjugate() * y
    return acc


class ExactMatrix:
    """A dense square matrix over Q(i, sqrt2); immutable value semantics."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(Scalar.of(x) for x in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square and nonempty")
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "ExactMatrix":
        return cls([[ZERO] * n for _ in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def _check_dim(self, other: "ExactMatrix"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimensions {self.dim} != {other.dim}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_dim(other)
        return ExactMatrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_dim(other)
        return ExactMatrix(
            [[x - y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def __neg__(self):
        return self.scale(Scalar(-1))

    def scale(self, s) -> "ExactMatrix":
        s = Scalar.of(s)
        return ExactMatrix([[s * x for x in row] for row in self.entries])

    def dagger(self) -> "ExactMatrix":
        n = self.dim
        return ExactMatrix(
            [[self.entries[j][i].conjugate() for j in range(n)] for i in range(n)]
        )

    def trace(self) -> Scalar:
        acc = ZERO
        for i in range(self.dim):
            acc = acc + self.entries[i][i]
        return acc

    @property
    def is_zero(self) -> bool:
        return all(x.is_zero for row in self.entries for x in row)

    @property
    def is_hermitian(self) -> bool:
        n = self.dim
        return all(
            self.entries[i][j] == self.entries[j][i].conjugate()
            for i in range(n)
            for j in range(i, n)
        )

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def apply(self, v: Sequence[Scalar]) -> tuple:
        if len(v) != self.dim:
            raise DimensionMismatch("vector length does not match matrix dimension")
        out = []
        for row in self.entries:
            acc = ZERO
            for x, y in zip(row, v):
                acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"ExactMatrix[{body}]"


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact matrix product."""
    a._check_dim(b)
    bt = list(zip(*b.entries))  # columns of b
    out = []
    for row in a.entries:
        out_row = []
        for col in bt:
            acc = ZERO
            for x, y in zip(row, col):
                if x.is_zero or y.is_zero:
                    continue
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return ExactMatrix(out)


def commutes(a: ExactMatrix, b: ExactMatrix) -> bool:
    """True iff ab - ba is exactly the zero matrix."""
    a._check_dim(b)
    return (mat_mul(a, b) - mat_mul(b, a)).is_zero


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Tensor product; result dimension a.dim * b.dim."""
    n, m = a.dim, b.dim
    out = [[ZERO] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(n):
            aij = a.entries[i][j]
            for k in range(m):
                for l in range(m):
                    out[i * m + k][j * m + l] = aij * b.entries[k][l]
    return ExactMatrix(out)


def projector_from_vector(v: Sequence[Scalar]) -> ExactMatrix:
    """Rank-1 projector v v^dagger / (v^dagger v) from an unnormalized vector."""
    v = tuple(Scalar.of(x) for x in v)
    nrm = inner(v, v)
    if nrm.is_zero:
        raise ZeroVector("cannot project along the zero vector")
    inv = nrm.inverse()
    n = len(v)
    return ExactMatrix(
        [[v[i] * v[j].conjugate() * inv for j in range(n)] for i in range(n)]
    )


def scalar_multiple_of_identity(m: ExactMatrix):
    """Return s if m == s*I exactly, else None."""
    s = m.entries[0][0]
    n = m.dim
    for i in range(n):
        for j in range(n):
            want = s if i == j else ZERO
            if m.entries[i][j] != want:
                return None
    return s


def require_hermitian(m: ExactMatrix) -> ExactMatrix:
    if not m.is_hermitian:
        raise NonHermitian("matrix is not Hermitian")
    return m


# 2x2 Pauli matrices, the building blocks for tensor-product observables.
PAULI = {
    "I": ExactMatrix.identity(2),
    "X": ExactMatrix([[ZERO, ONE], [ONE, ZERO]]),
    "Y": ExactMatrix([[ZERO, -I_UNIT], [I_UNIT, ZERO]]),
    "Z": ExactMatrix([[ONE, ZERO], [ZERO, Scalar(-1)]]),
}


def pauli_matrix(word: str, sign: int = 1) -> ExactMatrix:
    """Tensor product of single-qubit Paulis, e.g. "XY" -> X (x) Y."""
    if not word or any(ch not in PAULI for ch in word):
        raise ValueError(f"bad Pauli word: {word!r}")
    m = PAULI[word[0]]
    for ch in word[1:]:
        m = kron(m, PAULI[ch])
    if sign == -1:
        m = -m
    elif sign != 1:
        raise ValueError("sign must be +1 or -1")
    return m
