"""Quillen patching by translation certificates.

For an idempotent ``E`` over ``R[x]`` (``R = Q[X]``) and an auxiliary
variable ``y``, a :class:`TranslationCertificate` for ``j`` in ``R`` is a pair
``A, B`` over ``R[x, y]`` with ``A*B = E(x -> x + j*y)`` and ``B*A = E``.  The
admissible ``j`` form an ideal; local free bases supply elements outside
each maximal ideal, a Bezout relation combines them into a certificate for
``j = 1``, and ``y -> -x`` turns that into ``E(x -> 0) ~ E`` over ``R[x]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DenominatorInIdeal,
    MismatchedE,
    NotBezout,
    NotUnitTranslation,
    VerificationFailed,
)
from .localization import PointIdeal
from .matrix import (
    EquivalenceCertificate,
    Mat,
    VerificationReport,
    compose_certificates,
    substitute_matrix,
    to_fractions,
    to_polys,
    verify_certificate,
)
from .ring import MultiPoly


@dataclass(frozen=True)
class TranslationCertificate:
    E: Mat
    j: MultiPoly
    A: Mat
    B: Mat
    var: str
    aux: str

    def translated_E(self) -> Mat:
        y = self.E.zero.ctx.gen(self.aux)
        x = self.E.zero.ctx.gen(self.var)
        return substitute_matrix(self.E, self.var, x + self.j * y)

    def as_equivalence(self) -> EquivalenceCertificate:
        """``E(x -> x + j*y) ~ E`` over ``R[x, y]``."""
        return EquivalenceCertificate(self.translated_E(), self.E, self.A, self.B)

    def verify(self) -> VerificationReport:
        if self.j.involves(self.var) or self.j.involves(self.aux):
            return VerificationReport(False, "j in R", f"j = {self.j} involves {self.var} or {self.aux}")
        if any(e.involves(self.aux) for e in self.E.entries):
            return VerificationReport(False, "E over R[x]", f"E involves {self.aux}")
        return verify_certificate(self.as_equivalence())

    def to_json(self) -> dict:
        from .serialize import matrix_to_json
        return {"E": matrix_to_json(self.E), "j": self.j.to_json(), "A": matrix_to_json(self.A),
                "B": matrix_to_json(self.B), "var": self.var, "aux": self.aux}


def _check(c: TranslationCertificate) -> TranslationCertificate:
    report = c.verify()
    if not report:
        raise VerificationFailed(report)
    return c


def zero_certificate(E: Mat, var: str, aux: str) -> TranslationCertificate:
    """The certificate for ``j = 0``: ``A = B = E``."""
    return TranslationCertificate(E, E.zero.ctx.zero, E, E, var, aux)


def translation_from_local_trivialization(E: Mat, A: Mat, B: Mat, ideal: PointIdeal,
                                          var: str, aux: str) -> TranslationCertificate:
    """Certificate for some ``r`` outside the point's ideal from a free basis over ``R_m[x]``.

    With ``C = A*B(x -> x+y)`` and ``D = A(x -> x+y)*B``, ``r`` is the least common
    denominator of the entries of C and D; ``y -> r*y`` clears it because the
    y-free parts of C and D are already polynomial.
    """
    ctx = E.zero.ctx
    x, y = ctx.gen(var), ctx.gen(aux)
    Af = to_fractions(A, var)
    Bf = to_fractions(B, var)
    C = Af * substitute_matrix(Bf, var, x + y)
    D = substitute_matrix(Af, var, x + y) * Bf
    r = ctx.one
    for e in C.entries + D.entries:
        if e.den.involves(var) or e.den.involves(aux):
            raise DenominatorInIdeal(f"denominator {e.den} involves {var} or {aux}")
        if not e.den.is_constant():
            r = r.lcm(e.den)
    r = r.monic()
    if not ideal.is_trivial() and ideal.contains(r):
        raise DenominatorInIdeal(f"common denominator {r} vanishes at {ideal.point}")
    scale = lambda M: to_polys(substitute_matrix(M, aux, r * y))  # noqa: E731
    cert = TranslationCertificate(to_polys(to_fractions(E, var)), r, scale(D), scale(C), var, aux)
    return _check(cert)


def cert_add(c1: TranslationCertificate, c2: TranslationCertificate) -> TranslationCertificate:
    """Certificate for ``j1 + j2``: translate ``c1`` by ``j2*y`` and compose with ``c2``."""
    if c1.E != c2.E or c1.var != c2.var or c1.aux != c2.aux:
        raise MismatchedE("certificates belong to different idempotents")
    ctx = c1.E.zero.ctx
    shift = ctx.gen(c1.var) + c2.j * ctx.gen(c1.aux)
    A1 = substitute_matrix(c1.A, c1.var, shift)
    B1 = substitute_matrix(c1.B, c1.var, shift)
    first = EquivalenceCertificate(substitute_matrix(c1.translated_E(), c1.var, shift),
                                   c2.translated_E(), A1, B1)
    comp = compose_certificates(first, c2.as_equivalence())
    return _check(TranslationCertificate(c1.E, c1.j + c2.j, comp.A, comp.B, c1.var, c1.aux))


def cert_scale(c: TranslationCertificate, r) -> TranslationCertificate:
    """Certificate for ``j*r``: apply ``y -> r*y`` (E does not involve y)."""
    ctx = c.E.zero.ctx
    r = r if isinstance(r, MultiPoly) else ctx.const(r)
    ry = r * ctx.gen(c.aux)
    return _check(TranslationCertificate(c.E, c.j * r, substitute_matrix(c.A, c.aux, ry),
                                         substitute_matrix(c.B, c.aux, ry), c.var, c.aux))


def bezout_combine(certs: Sequence[TranslationCertificate],
                   coefficients: Sequence) -> TranslationCertificate:
    """Fold ``cert_scale(c_i, u_i)`` with ``cert_add`` into a certificate for ``sum u_i r_i = 1``."""
    if not certs or len(certs) != len(coefficients):
        raise NotBezout("need one coefficient per certificate")
    ctx = certs[0].E.zero.ctx
    us = [u if isinstance(u, MultiPoly) else ctx.const(u) for u in coefficients]
    total = ctx.zero
    for c, u in zip(certs, us):
        total = total + c.j * u
    if not total.is_one():
        raise NotBezout(f"sum u_i r_i = {total}, not 1")
    acc = None
    for c, u in zip(certs, us):
        if u.is_zero():
            continue
        s = cert_scale(c, u)
        acc = s if acc is None else cert_add(acc, s)
    return acc


def specialize_to_zero(c: TranslationCertificate) -> EquivalenceCertificate:
    """From a certificate for ``j = 1``, the equivalence ``E(x -> 0) ~ E`` over ``R[x]``."""
    if not c.j.is_one():
        raise NotUnitTranslation(f"certificate is for j = {c.j}, not 1")
    ctx = c.E.zero.ctx
    minus_x = -ctx.gen(c.var)
    A0 = substitute_matrix(c.A, c.aux, minus_x)
    B0 = substitute_matrix(c.B, c.aux, minus_x)
    E0 = substitute_matrix(c.E, c.var, Fraction(0))
    out = EquivalenceCertificate(E0, c.E, A0, B0)
    report = verify_certificate(out)
    if not report:
        raise VerificationFailed(report)
    return out
