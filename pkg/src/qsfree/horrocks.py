"""Horrocks' theorem over a point-localized base ring, made constructive.

Setting: ``R = Q[X]_m`` for a rational point of the variables ``X`` (or
``R = Q`` for the empty point), ``x`` a further variable.  Given an idempotent
``E`` over ``R[x]`` and a free trivialization ``A*B = E``, ``B*A = I_m`` over
``R(x)``, :func:`horrocks_free_basis` returns one over ``R[x]``.

The only non-effective ingredient of the classical argument is Nakayama's lemma, used
to produce ``F'`` with ``[F'*A'] = I_m``.  :func:`solve_polynomial_part_identity`
replaces it by a finite computation: with ``h`` monic and ``h*B'`` polynomial,
the R-linear endomorphism ``G -> [[G*B']*A'] mod h`` of ``R[x]^m / (h)`` (a free
R-module of rank ``m*deg h``) reduces to the identity modulo ``m``, hence is
invertible with unit pivots, and solving it gives ``F'`` directly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    NotInLocalization,
    PolynomialPartSolveError,
    ResidueMismatch,
    SingularMatrix,
    VerificationFailed,
)
from .localization import (
    MonicFraction,
    PointIdeal,
    has_unit_residue_form,
    in_local_polynomials,
    in_monic_localization,
    local_divmod,
    polynomial_part,
    reduce_fraction,
)
from .matrix import (
    ElementaryFactor,
    FreeCertificate,
    Mat,
    determinant,
    elementary_factorization,
    hermite_basis_of_idempotent,
    inverse,
    product_of_factors,
    to_fractions,
    verify_certificate,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HorrocksInput:
    E: Mat
    A: Mat
    B: Mat
    var: str
    ideal: PointIdeal = field(default_factory=PointIdeal)

    def check(self) -> None:
        E = to_fractions(self.E, self.var)
        A = to_fractions(self.A, self.var)
        B = to_fractions(self.B, self.var)
        for name, M in (("E", E), ("A", A), ("B", B)):
            for e in M.entries:
                if not in_monic_localization(e, self.ideal, self.var):
                    raise NotInLocalization(f"entry {e} of {name} is not in R({self.var})")
        if not all(in_local_polynomials(e, self.ideal, self.var) for e in E.entries):
            raise NotInLocalization(f"E is not a matrix over R[{self.var}]")
        if A * B != E or B * A != Mat.identity(B.rows, E.zero):
            raise VerificationFailed(verify_certificate(FreeCertificate.of(E, A, B)))


@dataclass(frozen=True)
class LiftedUnit:
    """Invertible ``U`` over ``R(x)`` kept as a product of elementary factors."""

    factors: tuple[ElementaryFactor, ...]
    size: int
    target: Mat

    def matrix(self) -> Mat:
        return product_of_factors(self.factors, self.size, self.target.zero)

    def inverse_matrix(self) -> Mat:
        return product_of_factors([f.inverse() for f in reversed(self.factors)], self.size, self.target.zero)

    def times(self, M: Mat) -> Mat:
        """``U * M``."""
        for f in reversed(self.factors):
            M = f.apply_left(M)
        return M

    def right_inverse_times(self, M: Mat) -> Mat:
        """``M * U^-1``."""
        for f in reversed(self.factors):
            M = f.inverse().apply_right(M)
        return M


def lift_invertible(target: Mat, ideal: PointIdeal, var: str) -> LiftedUnit:
    """Lift an invertible matrix over ``Q(x)`` to one over ``R(x)`` reducing to it.

    ``Q(x)`` sits inside ``R(x)`` (every nonzero polynomial over Q is a rational
    multiple of a monic one), so each elementary factor lifts to itself.
    """
    fs = elementary_factorization(to_fractions(target, var))
    for f in fs:
        if f.scalar.variables() - {var}:
            raise ValueError(f"target entries must lie in Q({var}), got {f.scalar}")
    return LiftedUnit(tuple(fs), target.rows, to_fractions(target, var))


# -- the Nakayama step -------------------------------------------------------------

def _monic_common_denominator(M: Mat, var: str) -> MonicFraction:
    """Monic ``h`` over R with ``h*M`` polynomial."""
    ctx = M.zero.ctx
    L = ctx.one
    for e in M.entries:
        if e.den.involves(var):
            L = L.lcm(e.den)
    return MonicFraction(L, L.lc(var), var)


def _coefficients_mod(p: MonicFraction, h: MonicFraction, var: str) -> list[MonicFraction]:
    _, r = local_divmod(p, h, var)
    d = h.num.degree(var)
    cs = r.num.coeffs_in(var)
    cs += [r.num.ctx.zero] * (d - len(cs))
    return [MonicFraction(c, r.den, p.var) for c in cs]


def _poly_row_times(row: Sequence[MonicFraction], M: Mat) -> list[MonicFraction]:
    out = []
    for j in range(M.cols):
        acc = M.zero
        for a, b in zip(row, M.col_list(j)):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        out.append(acc)
    return out


def _ppart(values: Sequence[MonicFraction], var: str) -> list[MonicFraction]:
    return [polynomial_part(v, var)[0] for v in values]


def _solve_unit_pivot(M: list[list[MonicFraction]], rhs: list[list[MonicFraction]],
                      ideal: PointIdeal) -> list[list[MonicFraction]]:
    """Solve ``M * X = rhs`` over the local ring, pivoting only on units."""
    n = len(M)
    k = len(rhs[0]) if rhs else 0
    a = [list(M[i]) + list(rhs[i]) for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if ideal.is_unit(a[i][c])), None)
        if p is None:
            raise PolynomialPartSolveError(
                "the polynomial-part operator is not invertible over the local ring "
                "(are A' and its partner reduced to polynomial matrices?)")
        a[c], a[p] = a[p], a[c]
        inv = a[c][c].inverse()
        a[c] = [inv * v for v in a[c]]
        for i in range(n):
            if i != c and not a[i][c].is_zero():
                s = a[i][c]
                a[i] = [u - s * v if not v.is_zero() else u for u, v in zip(a[i], a[c])]
    return [r[n:n + k] for r in a]


def solve_polynomial_part_identity(Aprime: Mat, partner: Mat, ideal: PointIdeal, var: str,
                                   side: str = "left") -> Mat:
    """Polynomial ``F`` over ``R[x]`` with ``[F*A'] = I_m`` (left) or ``[A'*F] = I_m`` (right).

    ``partner`` is the other half of the trivialization: ``partner*A' = I_m``
    for the left side, ``A'*partner = I_m`` for the right side.  Both ``A'`` and
    ``partner`` must reduce modulo ``m`` to polynomial matrices.
    """
    if side == "right":
        return solve_polynomial_part_identity(Aprime.T, partner.T, ideal, var, "left").T
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    A = to_fractions(Aprime, var)
    B = to_fractions(partner, var)
    n, m = A.shape
    fzero = A.zero
    one = fzero + 1
    if B * A != Mat.identity(m, fzero):
        raise PolynomialPartSolveError("partner*A' is not the identity")
    h = _monic_common_denominator(B, var)
    d = h.num.degree(var)
    if d == 0:
        F = B
    else:
        xpow = [MonicFraction(fzero.ctx.gen(var) ** e, None, var) for e in range(d)]
        hB = B.map(lambda e: h * e)
        basis = [(k, e) for k in range(m) for e in range(d)]
        rows = []
        for k, e in basis:
            P = _ppart([xpow[e] * b for b in B.row_list(k)], var)
            S = _ppart(_poly_row_times(P, A), var)
            rows.append([c for s in S for c in _coefficients_mod(s, h, var)])
        # row convention g*Psi = target  <=>  Psi^T g^T = target^T
        N = len(basis)
        psi_t = [[rows[r][c] for r in range(N)] for c in range(N)]
        targets = [[one if (k, e) == (i, 0) else fzero for i in range(m)] for k, e in basis]
        sol = _solve_unit_pivot(psi_t, targets, ideal)
        F_rows = []
        for i in range(m):
            G = [fzero] * m
            for idx, (k, e) in enumerate(basis):
                c = sol[idx][i]
                if not c.is_zero():
                    G[k] = G[k] + c * xpow[e]
            P = _ppart(_poly_row_times(G, B), var)
            S = _ppart(_poly_row_times(P, A), var)
            S[i] = S[i] - one
            H = []
            for s in S:
                q, r = local_divmod(s, h, var)
                if not r.is_zero():
                    raise PolynomialPartSolveError("residual not divisible by h")
                H.append(q)
            HhB = _poly_row_times(H, hB)
            F_rows.append([p - t for p, t in zip(P, HhB)])
        F = Mat(m, n, [v for r in F_rows for v in r], fzero)
    if Mat(m, m, _ppart((F * A).entries, var), fzero) != Mat.identity(m, fzero):
        raise PolynomialPartSolveError("[F*A'] != I after solving")
    for e in F.entries:
        if not in_local_polynomials(e, ideal, var):
            raise PolynomialPartSolveError(f"solution entry {e} is not in R[{var}]")
    return F


# -- the full Horrocks pipeline -----------------------------------------------------

def horrocks_free_basis(inp: HorrocksInput, trace: dict | None = None) -> FreeCertificate:
    """Free certificate ``A''*B'' = E``, ``B''*A'' = I_m`` with entries in ``R[x]``."""
    x, ideal = inp.var, inp.ideal
    E = to_fractions(inp.E, x)
    A = to_fractions(inp.A, x)
    B = to_fractions(inp.B, x)
    inp.check()
    m = B.rows
    fzero = E.zero
    I_m = Mat.identity(m, fzero)
    red = lambda M: M.map(lambda e: reduce_fraction(e, ideal, x))  # noqa: E731

    # (1)-(2): free basis of the reduced idempotent over the PID Q[x]
    Ebar = red(E)
    Chat, Dhat = hermite_basis_of_idempotent(Ebar, x, x)
    if Dhat.rows != m:
        raise ResidueMismatch(f"rank over the residue field is {Dhat.rows}, expected {m}")
    # (3): U lifts Dhat*Abar
    target = Dhat * red(A)
    try:
        U = lift_invertible(target, ideal, x)
    except SingularMatrix as exc:
        raise ResidueMismatch("Dhat*Abar is singular") from exc
    # (4)
    Ap = U.right_inverse_times(A)
    Bp = U.times(B)
    if red(Ap) != Chat or red(Bp) != Dhat:
        raise ResidueMismatch("A', B' do not reduce to the Hermite basis")
    # (5)
    Fp = solve_polynomial_part_identity(Ap, Bp, ideal, x, "left")
    # (6)
    V = Fp * Ap
    detV = determinant(V)
    if not has_unit_residue_form(detV, ideal, x):
        raise ResidueMismatch(f"det(F'*A') = {detV} is not in 1 + m*R(x)_o")
    # (7)
    Bpp = Fp * E
    if V * Bp != Bpp:
        raise ResidueMismatch("(F'*A')*B' != F'*E")
    # (8)
    App_frac = Ap * inverse(V)
    Gpp = solve_polynomial_part_identity(Bpp, App_frac, ideal, x, "right")
    App = E * Gpp
    cert = FreeCertificate(E, I_m, App, Bpp)
    report = verify_certificate(cert)
    if not report:
        raise VerificationFailed(report)
    for e in App.entries + Bpp.entries:
        if not in_local_polynomials(e, ideal, x):
            raise ResidueMismatch(f"output entry {e} is not in R[{x}]")
    if trace is not None:
        trace.update(Ebar=Ebar, Chat=Chat, Dhat=Dhat, target=target, U_factors=U.factors,
                     Aprime=Ap, Bprime=Bp, Fprime=Fp, detV=detV, Gpp=Gpp, App=App, Bpp=Bpp)
    log.debug("horrocks at %s: m=%d, deg det num=%d", ideal.point, m, detV.num.degree(x))
    return cert
