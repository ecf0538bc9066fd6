"""Matrices, idempotents and equivalence certificates.

Entries are :class:`~qsfree.ring.MultiPoly` or
:class:`~qsfree.localization.MonicFraction`; a matrix remembers a ``zero``
element so that empty (0 x n, n x 0) matrices keep their ring.
Matrices act on row vectors from the right, as in ``v -> v*A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    DimensionMismatch,
    MiddleMismatch,
    NotIdempotent,
    NotSplitPair,
    SingularMatrix,
)
from .localization import MonicFraction, as_fraction, polynomial_part
from .ring import MultiPoly, VarContext


class Mat:
    __slots__ = ("rows", "cols", "_e", "zero")

    def __init__(self, rows: int, cols: int, entries: Sequence, zero):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self._e = entries
        self.zero = zero

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], zero=None) -> "Mat":
        rows = [list(r) for r in rows]
        if zero is None:
            zero = rows[0][0] * 0
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, [e for r in rows for e in r], zero)

    @classmethod
    def identity(cls, n: int, zero) -> "Mat":
        one = zero + 1
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)], zero)

    @classmethod
    def zeros(cls, rows: int, cols: int, zero) -> "Mat":
        return cls(rows, cols, [zero] * (rows * cols), zero)

    @classmethod
    def column(cls, entries: Sequence, zero=None) -> "Mat":
        return cls.from_rows([[e] for e in entries], zero)

    @classmethod
    def row(cls, entries: Sequence, zero=None) -> "Mat":
        return cls.from_rows([list(entries)], zero)

    # -- access ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple:
        return self._e

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i * self.cols + j]

    def row_list(self, i: int) -> list:
        return list(self._e[i * self.cols:(i + 1) * self.cols])

    def col_list(self, j: int) -> list:
        return [self._e[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list[list]:
        return [self.row_list(i) for i in range(self.rows)]

    def map(self, fn: Callable, zero=None) -> "Mat":
        return Mat(self.rows, self.cols, [fn(e) for e in self._e], fn(self.zero) if zero is None else zero)

    @property
    def T(self) -> "Mat":
        return Mat(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)], self.zero)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self):
        if not self.is_square():
            raise DimensionMismatch("trace of a non-square matrix")
        t = self.zero
        for i in range(self.rows):
            t = t + self[i, i]
        return t

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self._e)

    # -- arithmetic --------------------------------------------------------
    def _check_same(self, other: "Mat"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat(self.rows, self.cols, [a + b for a, b in zip(self._e, other._e)], self.zero)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat(self.rows, self.cols, [a - b for a, b in zip(self._e, other._e)], self.zero)

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [-a for a in self._e], self.zero)

    def __mul__(self, other):
        if isinstance(other, Mat):
            return matmul(self, other)
        return Mat(self.rows, self.cols, [a * other for a in self._e], self.zero)

    def __rmul__(self, other):
        return Mat(self.rows, self.cols, [other * a for a in self._e], self.zero)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self._e, other._e))

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.tolist()})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in self.row_list(i)) + "]" for i in range(self.rows)) or "[]"


def matmul(a: Mat, b: Mat) -> Mat:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    zero = a.zero
    out = []
    bcols = [b.col_list(j) for j in range(b.cols)]
    for i in range(a.rows):
        row = a.row_list(i)
        for col in bcols:
            acc = zero
            for x, y in zip(row, col):
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            out.append(acc)
    return Mat(a.rows, b.cols, out, zero)


def identity_like(n: int, m: Mat) -> Mat:
    return Mat.identity(n, m.zero)


def hstack(*blocks: Mat) -> Mat:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise DimensionMismatch("hstack with different row counts")
    out = []
    for i in range(rows):
        for b in blocks:
            out.extend(b.row_list(i))
    return Mat(rows, sum(b.cols for b in blocks), out, blocks[0].zero)


def vstack(*blocks: Mat) -> Mat:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise DimensionMismatch("vstack with different column counts")
    out = []
    for b in blocks:
        out.extend(b.entries)
    return Mat(sum(b.rows for b in blocks), cols, out, blocks[0].zero)


def block_diag(a: Mat, b: Mat) -> Mat:
    top = hstack(a, Mat.zeros(a.rows, b.cols, a.zero))
    bottom = hstack(Mat.zeros(b.rows, a.cols, a.zero), b)
    return vstack(top, bottom)


def is_idempotent(e: Mat) -> bool:
    return e.is_square() and e * e == e


# -- conversions between polynomial and fraction matrices ------------------

def to_fractions(m: Mat, var: str | None = None) -> Mat:
    return m.map(lambda e: as_fraction(e, var))


def to_polys(m: Mat) -> Mat:
    """Convert a fraction matrix with polynomial entries back to MultiPoly entries."""
    def conv(e):
        if isinstance(e, MultiPoly):
            return e
        return e.to_poly()
    return m.map(conv)


def substitute_matrix(m: Mat, var: str, replacement) -> Mat:
    return m.map(lambda e: e.substitute(var, replacement))


def evaluate_matrix(m: Mat, point) -> Mat:
    return m.map(lambda e: e.evaluate(point))


def convert_matrix(m: Mat, ctx: VarContext) -> Mat:
    return m.map(lambda e: e.convert(ctx))


def polynomial_part_matrix(m: Mat, var: str | None = None) -> Mat:
    return m.map(lambda e: polynomial_part(e, var)[0])


# -- certificates -----------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failed: str | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "certificate verified"
        return f"FAILED: {self.failed}" + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Witness ``(A, B)`` of ``E ~ F``: ``A*B = E`` and ``B*A = F``."""

    E: Mat
    F: Mat
    A: Mat
    B: Mat

    def verify(self) -> VerificationReport:
        return verify_certificate(self)

    def map(self, fn: Callable[[Mat], Mat]) -> "EquivalenceCertificate":
        return EquivalenceCertificate(fn(self.E), fn(self.F), fn(self.A), fn(self.B))

    def reversed(self) -> "EquivalenceCertificate":
        return EquivalenceCertificate(self.F, self.E, self.B, self.A)

    @property
    def m(self) -> int:
        return self.F.rows


@dataclass(frozen=True)
class FreeCertificate(EquivalenceCertificate):
    """Equivalence of ``E`` with an identity matrix: an explicit free basis."""

    @classmethod
    def of(cls, E: Mat, A: Mat, B: Mat) -> "FreeCertificate":
        return cls(E, Mat.identity(B.rows, E.zero), A, B)

    def map(self, fn: Callable[[Mat], Mat]) -> "FreeCertificate":
        return FreeCertificate(fn(self.E), fn(self.F), fn(self.A), fn(self.B))


CHECK_ORDER = ("E*E = E", "F*F = F", "B*A = F", "A*B = E")


def verify_certificate(c: EquivalenceCertificate) -> VerificationReport:
    """Check ``E^2 = E``, ``F^2 = F``, ``B*A = F`` and ``A*B = E`` exactly, reporting the first failure."""
    E, F, A, B = c.E, c.F, c.A, c.B
    if not E.is_square() or not F.is_square():
        return VerificationReport(False, "dimensions", "E and F must be square")
    if A.shape != (E.rows, F.rows) or B.shape != (F.rows, E.rows):
        return VerificationReport(
            False, "dimensions", f"E {E.shape}, F {F.shape}, A {A.shape}, B {B.shape}")
    checks = {
        "E*E = E": lambda: E * E == E,
        "F*F = F": lambda: F * F == F,
        "B*A = F": lambda: B * A == F,
        "A*B = E": lambda: A * B == E,
    }
    for name in CHECK_ORDER:
        if not checks[name]():
            return VerificationReport(False, name)
    return VerificationReport(True)


def make_idempotent(S: Mat, T: Mat) -> FreeCertificate:
    """``E := S*T`` from a split pair ``T*S = I_m``; returns the certificate ``(E, I_m, S, T)``."""
    if S.rows != T.cols or S.cols != T.rows:
        raise DimensionMismatch(f"S {S.shape} and T {T.shape} do not form a split pair")
    if T * S != Mat.identity(S.cols, S.zero):
        raise NotSplitPair("T*S is not the identity")
    return FreeCertificate.of(S * T, S, T)


def compose_certificates(c1: EquivalenceCertificate, c2: EquivalenceCertificate) -> EquivalenceCertificate:
    """``E ~ F`` and ``F ~ G`` give ``E ~ G`` with ``A = A1*A2``, ``B = B2*B1``."""
    if c1.F != c2.E:
        raise MiddleMismatch("the middle idempotents differ")
    cls = FreeCertificate if isinstance(c2, FreeCertificate) else EquivalenceCertificate
    return cls(c1.E, c2.F, c1.A * c2.A, c2.B * c1.B)


def identity_certificate(E: Mat) -> EquivalenceCertificate:
    return EquivalenceCertificate(E, E, E, E)


# -- Euclidean structure of K[t] -----------------------------------------------

class _Euclid:
    """``K[t]`` with ``K`` the field of rational functions in the other variables.

    With ``t = None`` the ring is the field ``K`` itself.
    """

    def __init__(self, t: str | None):
        self.t = t

    def deg(self, a: MonicFraction) -> int:
        return 0 if self.t is None else a.num.degree(self.t)

    def divmod(self, a: MonicFraction, b: MonicFraction):
        if self.t is None:
            return a / b, a * 0
        q, _ = polynomial_part(a / b, self.t)
        return q, a - b * q

    def lc(self, a: MonicFraction) -> MonicFraction:
        if self.t is None:
            return a
        return MonicFraction(a.num.lc(self.t), a.den, a.var)

    def is_polynomial(self, a: MonicFraction) -> bool:
        return self.t is None or not a.den.involves(self.t)


def _row_axpy(dst: list, src: list, s) -> None:
    for k, v in enumerate(src):
        if not v.is_zero():
            dst[k] = dst[k] + s * v


def hermite_rows(M: Mat, t: str | None, frac_var: str | None = None) -> tuple[list[list], list[int]]:
    """Row Hermite normal form over ``K[t]``: returns (nonzero rows, pivot columns)."""
    eu = _Euclid(t)
    rows = [[as_fraction(e, frac_var) for e in M.row_list(i)] for i in range(M.rows)]
    n, ncols = len(rows), M.cols
    pr = 0
    pivots = []
    for col in range(ncols):
        if pr == n:
            break
        while True:
            cand = [i for i in range(pr, n) if not rows[i][col].is_zero()]
            if not cand:
                break
            best = min(cand, key=lambda i: (eu.deg(rows[i][col]), i))
            rows[pr], rows[best] = rows[best], rows[pr]
            piv = rows[pr][col]
            clean = True
            for i in range(pr + 1, n):
                if rows[i][col].is_zero():
                    continue
                q, r = eu.divmod(rows[i][col], piv)
                _row_axpy(rows[i], rows[pr], -q)
                if not r.is_zero():
                    clean = False
            if clean:
                break
        if pr < n and not rows[pr][col].is_zero() and all(rows[i][col].is_zero() for i in range(pr + 1, n)):
            u = eu.lc(rows[pr][col]).inverse()
            rows[pr] = [u * v for v in rows[pr]]
            piv = rows[pr][col]
            for i in range(pr):
                if rows[i][col].is_zero():
                    continue
                q, _ = eu.divmod(rows[i][col], piv)
                if not q.is_zero():
                    _row_axpy(rows[i], rows[pr], -q)
            pivots.append(col)
            pr += 1
    return rows[:pr], pivots


def hermite_basis_of_idempotent(E: Mat, t: str | None, frac_var: str | None = None) -> tuple[Mat, Mat]:
    """Free basis of the row module ``K[t]^n * E`` of an idempotent over the PID ``K[t]``.

    Returns ``(C, D)`` with ``C*D = E`` and ``D*C = I_m``; the rows of ``D`` are
    the nonzero rows of the Hermite normal form of ``E``.  Entries come back as
    MonicFractions with ``var = frac_var`` (as MultiPolys when ``E`` had
    MultiPoly entries and everything stayed polynomial).
    """
    if not E.is_square():
        raise NotIdempotent("idempotents are square")
    eu = _Euclid(t)
    fzero = as_fraction(E.zero, frac_var)
    Ef = E.map(lambda e: as_fraction(e, frac_var), fzero)
    if Ef * Ef != Ef:
        raise NotIdempotent("E*E != E")
    D_rows, pivots = hermite_rows(Ef, t, frac_var)
    m = len(D_rows)
    D = Mat(m, E.cols, [v for r in D_rows for v in r], fzero)
    C_rows = []
    for i in range(E.rows):
        e = Ef.row_list(i)
        coeffs = []
        for k, pc in enumerate(pivots):
            acc = e[pc]
            for l in range(k):
                acc = acc - coeffs[l] * D_rows[l][pc]
            c = acc / D_rows[k][pc]
            if not eu.is_polynomial(c):
                raise NotIdempotent(f"row {i} of E is not in the Hermite row module")
            coeffs.append(c)
        C_rows.extend(coeffs)
    C = Mat(E.rows, m, C_rows, fzero)
    if C * D != Ef:
        raise NotIdempotent("rows of E are not combinations of the Hermite basis")
    if D * C != Mat.identity(m, fzero):
        raise NotIdempotent("D*C is not the identity")
    if isinstance(E.zero, MultiPoly) and all(x.is_polynomial() for x in C.entries + D.entries):
        return to_polys(C), to_polys(D)
    return C, D


# -- elementary factorization over a field ------------------------------------

@dataclass(frozen=True)
class ElementaryFactor:
    """``transvection``: I + s*e_ij (adds s times row j to row i); ``dilation``: row i scaled by s."""

    kind: str
    i: int
    j: int
    scalar: object
    size: int

    def __post_init__(self):
        if self.kind not in ("transvection", "dilation"):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == "transvection" and self.i == self.j:
            raise ValueError("transvection needs i != j")
        if self.kind == "dilation" and self.scalar.is_zero():
            raise ValueError("dilation by zero")

    @classmethod
    def transvection(cls, i: int, j: int, s, size: int) -> "ElementaryFactor":
        return cls("transvection", i, j, s, size)

    @classmethod
    def dilation(cls, i: int, u, size: int) -> "ElementaryFactor":
        return cls("dilation", i, i, u, size)

    def inverse(self) -> "ElementaryFactor":
        if self.kind == "transvection":
            return ElementaryFactor("transvection", self.i, self.j, -self.scalar, self.size)
        return ElementaryFactor("dilation", self.i, self.i, self.scalar.inverse(), self.size)

    def map(self, fn: Callable) -> "ElementaryFactor":
        return ElementaryFactor(self.kind, self.i, self.j, fn(self.scalar), self.size)

    def matrix(self, zero) -> Mat:
        rows = Mat.identity(self.size, zero).tolist()
        if self.kind == "transvection":
            rows[self.i][self.j] = self.scalar
        else:
            rows[self.i][self.i] = self.scalar
        return Mat.from_rows(rows, zero) if self.size else Mat.identity(0, zero)

    def apply_left(self, M: Mat) -> Mat:
        """``self * M`` as a row operation."""
        rows = M.tolist()
        if self.kind == "transvection":
            _row_axpy(rows[self.i], rows[self.j], self.scalar)
        else:
            rows[self.i] = [self.scalar * v for v in rows[self.i]]
        return Mat(M.rows, M.cols, [v for r in rows for v in r], M.zero)

    def apply_right(self, M: Mat) -> Mat:
        """``M * self`` as a column operation."""
        return self.transpose().apply_left(M.T).T

    def transpose(self) -> "ElementaryFactor":
        if self.kind == "transvection":
            return ElementaryFactor("transvection", self.j, self.i, self.scalar, self.size)
        return self


def product_of_factors(factors: Sequence[ElementaryFactor], size: int, zero) -> Mat:
    M = Mat.identity(size, zero)
    for f in reversed(factors):
        M = f.apply_left(M)
    return M


def elementary_factorization(M: Mat) -> list[ElementaryFactor]:
    """Write an invertible matrix over a field as an ordered product of elementary factors.

    Gaussian elimination with the first nonzero entry below the diagonal as
    pivot; a zero diagonal entry is repaired by a transvection instead of a
    row swap, and each pivot block ends with one dilation.
    """
    if not M.is_square():
        raise DimensionMismatch("only square matrices factor")
    m = M.rows
    rows = M.tolist()
    ops: list[ElementaryFactor] = []

    def apply(op: ElementaryFactor):
        if op.kind == "transvection":
            _row_axpy(rows[op.i], rows[op.j], op.scalar)
        else:
            rows[op.i] = [op.scalar * v for v in rows[op.i]]
        ops.append(op)

    for k in range(m):
        if rows[k][k].is_zero():
            src = next((i for i in range(k + 1, m) if not rows[i][k].is_zero()), None)
            if src is None:
                raise SingularMatrix("matrix is singular")
            apply(ElementaryFactor.transvection(k, src, M.zero + 1, m))
        piv = rows[k][k]
        for i in range(m):
            if i != k and not rows[i][k].is_zero():
                apply(ElementaryFactor.transvection(i, k, -(rows[i][k] / piv), m))
        if not piv.is_one():
            apply(ElementaryFactor.dilation(k, piv.inverse(), m))
    return [op.inverse() for op in ops]


# -- determinants and inverses over fraction fields --------------------------

def determinant(M: Mat):
    """Bareiss elimination; entries must support exact division (fractions do)."""
    if not M.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    n = M.rows
    one = M.zero + 1
    if n == 0:
        return one
    a = M.tolist()
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return M.zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def _exact_div(a, b):
    if isinstance(a, MultiPoly):
        return a.exquo(b)
    return a / b


def inverse(M: Mat) -> Mat:
    """Gauss-Jordan inverse over the fraction field of the entries."""
    if not M.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = M.rows
    fzero = M.zero
    a = [M.row_list(i) + [fzero + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(n):
        p = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        a[k], a[p] = a[p], a[k]
        inv = a[k][k].inverse()
        a[k] = [inv * v for v in a[k]]
        for i in range(n):
            if i != k and not a[i][k].is_zero():
                _row_axpy(a[i], a[k], -a[i][k])
    return Mat(n, n, [v for r in a for v in r[n:]], fzero)
