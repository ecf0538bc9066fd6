"""Free bases for projective modules over Q[x1, ..., xv], by induction on v.

* v = 0, 1: Hermite normal form over the field Q or the PID Q[x1].
* v = 2: a free basis over ``Q(x1)[x2]`` (again Hermite) is a free basis over
  ``Q[x2]_m(x1)`` for every maximal ideal ``m``; Horrocks upgrades it to
  ``Q[x2]_m[x1]`` at finitely many rational points until the resulting
  denominators generate the unit ideal; patching then gives
  ``E(x1 -> 0) ~ E`` and the problem drops to one variable.
* v >= 3: the local data for the top variable must be supplied as a
  :class:`Cover`; the remaining levels recurse as above.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import divisors

from .errors import (
    NonRationalLocus,
    NotUnimodular,
    SingularMatrix,
    UnsupportedDimension,
    VerificationFailed,
)
from .horrocks import HorrocksInput, horrocks_free_basis
from .localization import PointIdeal
from .matrix import (
    EquivalenceCertificate,
    FreeCertificate,
    Mat,
    compose_certificates,
    determinant,
    hermite_basis_of_idempotent,
    make_idempotent,
    to_fractions,
    to_polys,
    convert_matrix,
    verify_certificate,
    vstack,
)
from .patching import bezout_combine, specialize_to_zero, translation_from_local_trivialization
from .ring import MultiPoly, univariate_gcdex

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    max_point_height: int = 1000
    degree_escalation_ceiling: int = 6
    max_patch_points: int = 64
    trace: bool = False

    def __post_init__(self):
        if self.max_point_height <= 0 or self.degree_escalation_ceiling <= 0 or self.max_patch_points <= 0:
            raise ValueError("solver bounds must be positive")

    @classmethod
    def from_json(cls, obj: dict) -> "SolverConfig":
        known = {k: obj[k] for k in ("max_point_height", "degree_escalation_ceiling",
                                     "max_patch_points", "trace") if k in obj}
        return cls(**known)


@dataclass(frozen=True)
class LocalPatch:
    ideal: PointIdeal
    A: Mat
    B: Mat


@dataclass(frozen=True)
class Cover:
    """Local free bases of ``E`` over ``Q[X]_m[x1]`` plus Bezout coefficients.

    ``bezout[i]`` multiplies the common denominator ``r_i`` computed by
    :func:`~qsfree.patching.translation_from_local_trivialization` for
    ``patches[i]``; they must satisfy ``sum u_i r_i = 1``.  Without them (one
    remaining variable only) the patches seed the automatic point search.
    """

    var: str
    patches: tuple[LocalPatch, ...]
    bezout: tuple[MultiPoly, ...] | None = None


# -- rational points --------------------------------------------------------------

def _rational_roots(g: MultiPoly, var: str, height: int) -> list[Fraction]:
    cs = [c.constant_value() for c in g.coeffs_in(var)]
    while cs and cs[0] == 0:
        cs.pop(0)
    roots = [Fraction(0)] if len(cs) < len(g.coeffs_in(var)) else []
    if len(cs) <= 1:
        return roots
    den = 1
    for c in cs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    a0, an = abs(ints[0]), abs(ints[-1])
    found = set(roots)
    for p in divisors(a0):
        if p > height:
            break
        for q in divisors(an):
            if q > height:
                break
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in found:
                    continue
                if sum(c * cand ** k for k, c in enumerate(cs)) == 0:
                    found.add(cand)
    return sorted(found, key=lambda r: (max(abs(r.numerator), r.denominator), r < 0, abs(r)))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def rational_point_search(generators: Sequence[MultiPoly], variables: Sequence[str],
                          config: SolverConfig | None = None) -> PointIdeal | None:
    """A rational point where all generators vanish; ``None`` if they generate the unit ideal.

    Only one variable is handled automatically; with none the answer is the
    trivial point of Q.
    """
    config = config or SolverConfig()
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("need at least one nonzero generator")
    variables = list(variables)
    used = set().union(*(g.variables() for g in gens))
    if used - set(variables):
        raise ValueError(f"generators involve {sorted(used - set(variables))}")
    if not variables:
        return PointIdeal()
    if len(variables) > 1:
        raise UnsupportedDimension(
            f"maximal ideals of Q[{', '.join(variables)}] need a user-supplied cover")
    (var,) = variables
    g = gens[0]
    for h in gens[1:]:
        g = g.gcd(h)
    if g.degree(var) <= 0:
        return None
    roots = _rational_roots(g.monic(), var, config.max_point_height)
    if not roots:
        raise NonRationalLocus(f"{g.monic()} has no rational root of height <= {config.max_point_height}")
    return PointIdeal({var: roots[0]})


def bezout_coefficients(rs: Sequence[MultiPoly], var: str) -> list[MultiPoly] | None:
    """``u_i`` with ``sum u_i r_i = 1`` in ``Q[var]``, or None if the r_i share a root."""
    ctx = rs[0].ctx
    g = ctx.zero
    coeffs: list[MultiPoly] = []
    for r in rs:
        s, t, g_new = univariate_gcdex(g, r, var)
        coeffs = [c * s for c in coeffs] + [t]
        g = g_new
    if not g.is_one():
        return None
    return coeffs


# -- the induction -----------------------------------------------------------------

def _check(cert: EquivalenceCertificate) -> EquivalenceCertificate:
    report = verify_certificate(cert)
    if not report:
        raise VerificationFailed(report)
    return cert


def _active_variables(E: Mat, exclude: str | None) -> list[str]:
    used = set()
    for e in E.entries:
        used |= e.variables()
    return [v for v in E.zero.ctx.names if v in used and v != exclude]


def _hermite_certificate(E: Mat, t: str | None) -> FreeCertificate:
    C, D = hermite_basis_of_idempotent(E, t, t)
    C, D = to_polys(C), to_polys(D)
    return _check(FreeCertificate.of(E, C, D))


class _Driver:
    def __init__(self, config: SolverConfig, aux: str, covers: list[Cover]):
        self.config = config
        self.aux = aux
        self.covers = list(covers)
        self.trace: list[dict] = []

    def solve(self, E: Mat) -> FreeCertificate:
        active = _active_variables(E, self.aux)
        if len(active) <= 1:
            return _hermite_certificate(E, active[0] if active else None)
        x1, X = active[0], active[1:]
        cover = next((c for c in self.covers if c.var == x1), None)
        if cover is not None:
            self.covers.remove(cover)
            step = self._patch_from_cover(E, x1, X, cover)
        elif len(X) == 1:
            step = self._patch_automatic(E, x1, X[0])
        else:
            raise UnsupportedDimension(
                f"{len(active)} variables: supply a cover for {x1} (no automatic search over Q[{', '.join(X)}])")
        # step: E0 ~ E with E0 = E(x1 -> 0); reverse it and continue with E0
        rest = self.solve(step.E)
        return _check(compose_certificates(step.reversed(), rest))

    def _record(self, x1: str, ideal: PointIdeal, tc) -> None:
        if self.config.trace:
            self.trace.append({"var": x1, "point": ideal.point, "r": str(tc.j)})
        log.info("patch point %s for %s: r = %s", ideal.point, x1, tc.j)

    def _patch_automatic(self, E: Mat, x1: str, x2: str, seed=()) -> EquivalenceCertificate:
        certs = [tc for _, tc in seed]
        seen = {ideal for ideal, _ in seed}
        A0 = B0 = None
        for _ in range(self.config.max_patch_points):
            gens = [tc.j for tc in certs] or [E.zero.ctx.gen(x2)]
            ideal = rational_point_search(gens, [x2], self.config)
            if ideal is None:
                break
            if ideal in seen:
                raise NonRationalLocus(f"point {ideal.point} repeated; the search is not converging")
            seen.add(ideal)
            if A0 is None:
                # free basis over the PID Q(x1)[x2]; valid in every Q[x2]_m(x1)
                A0, B0 = hermite_basis_of_idempotent(E, x2, x1)
                A0, B0 = to_fractions(A0, x1), to_fractions(B0, x1)
            local = horrocks_free_basis(HorrocksInput(E, A0, B0, x1, ideal))
            tc = translation_from_local_trivialization(E, local.A, local.B, ideal, x1, self.aux)
            certs.append(tc)
            self._record(x1, ideal, tc)
        else:
            raise NonRationalLocus(f"no Bezout relation after {self.config.max_patch_points} points")
        us = bezout_coefficients([tc.j for tc in certs], x2)
        return specialize_to_zero(bezout_combine(certs, us))

    def _patch_from_cover(self, E: Mat, x1: str, X: list[str], cover: Cover) -> EquivalenceCertificate:
        seed = []
        for p in cover.patches:
            tc = translation_from_local_trivialization(E, p.A, p.B, p.ideal, x1, self.aux)
            self._record(x1, p.ideal, tc)
            seed.append((p.ideal, tc))
        if cover.bezout is None:
            if len(X) != 1:
                raise UnsupportedDimension(f"cover for {x1} needs Bezout coefficients over Q[{', '.join(X)}]")
            return self._patch_automatic(E, x1, X[0], seed)
        us = [u.convert(E.zero.ctx) for u in cover.bezout]
        return specialize_to_zero(bezout_combine([tc for _, tc in seed], us))


def quillen_suslin_free_basis(E: Mat, config: SolverConfig | None = None,
                              covers: Sequence[Cover] = (), trace: list | None = None) -> FreeCertificate:
    """Verified free certificate ``A*B = E``, ``B*A = I_m`` over ``Q[x1, ..., xv]``."""
    config = config or SolverConfig()
    if not E.is_square():
        raise SingularMatrix("E must be square")
    ctx = E.zero.ctx
    aux = ctx.fresh_name("y_aux")
    big = ctx.extend(aux)
    Eb = convert_matrix(E, big)
    if Eb * Eb != Eb:
        raise VerificationFailed(verify_certificate(FreeCertificate.of(Eb, Eb, Eb)))
    driver = _Driver(config, aux, [Cover(c.var, tuple(LocalPatch(p.ideal, convert_matrix(p.A, big),
                                                                  convert_matrix(p.B, big))
                                                       for p in c.patches), c.bezout)
                                   for c in covers])
    cert = driver.solve(Eb)
    out = FreeCertificate.of(E, convert_matrix(cert.A, ctx), convert_matrix(cert.B, ctx))
    _check(out)
    m = out.m
    if E.trace() != ctx.const(m):
        raise VerificationFailed(verify_certificate(out))
    if trace is not None:
        trace.extend(driver.trace)
    return out


# -- unimodular rows ----------------------------------------------------------------

def _monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """One solution of a linear system over Q, or None if inconsistent."""
    a = [r[:] + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    pr = 0
    for c in range(ncols):
        p = next((i for i in range(pr, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[pr], a[p] = a[p], a[pr]
        inv = 1 / a[pr][c]
        a[pr] = [v * inv for v in a[pr]]
        for i in range(len(a)):
            if i != pr and a[i][c] != 0:
                s = a[i][c]
                a[i] = [u - s * v for u, v in zip(a[i], a[pr])]
        pivots.append(c)
        pr += 1
    if any(all(v == 0 for v in r[:-1]) and r[-1] != 0 for r in a):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = a[i][-1]
    return x


def unimodular_witness(v: Mat, config: SolverConfig | None = None) -> Mat:
    """Column ``w`` with ``v*w = 1``, by exact linear solving with growing degree bound."""
    config = config or SolverConfig()
    ctx = v.zero.ctx
    row = v.row_list(0)
    origin = {name: 0 for name in ctx.names}
    if all(e.evaluate(origin).is_zero() for e in row):
        raise NotUnimodular("the row vanishes at the origin")
    names = sorted(set().union(*(e.variables() for e in row)), key=ctx.index)
    idx = [ctx.index(nm) for nm in names]
    dv = max(e.total_degree() for e in row)
    n = len(row)
    for D in range(0, max(dv, 0) + config.degree_escalation_ceiling + 1):
        mons = _monomials(len(names), D)
        out_mons = _monomials(len(names), D + max(dv, 0))
        pos = {m: k for k, m in enumerate(out_mons)}
        eqs = [[Fraction(0)] * (n * len(mons)) for _ in out_mons]
        for i, e in enumerate(row):
            for exp, c in e.terms.items():
                short = tuple(exp[j] for j in idx)
                for k, mon in enumerate(mons):
                    tgt = tuple(a + b for a, b in zip(short, mon))
                    eqs[pos[tgt]][i * len(mons) + k] += c
        rhs = [Fraction(1) if sum(mm) == 0 else Fraction(0) for mm in out_mons]
        sol = _solve_rational(eqs, rhs)
        if sol is None:
            continue
        w = []
        for i in range(n):
            terms = {}
            for k, mon in enumerate(mons):
                c = sol[i * len(mons) + k]
                if c:
                    full = [0] * len(ctx)
                    for j, d in zip(idx, mon):
                        full[j] = d
                    terms[tuple(full)] = c
            w.append(MultiPoly(ctx, terms))
        W = Mat.column(w, ctx.zero)
        assert (v * W).entries[0].is_one()
        return W
    raise NotUnimodular(f"no witness of degree <= {max(dv, 0) + config.degree_escalation_ceiling}")


def complete_unimodular_row(v: Mat, config: SolverConfig | None = None,
                            witness: Mat | None = None) -> Mat:
    """Invertible matrix with first row ``v`` (constant nonzero determinant).

    With ``v*w = 1`` the idempotent ``I - w*v`` is projective of rank n-1; a
    free basis ``(A, B)`` of it completes ``v`` by the rows of ``B``, with inverse
    ``[w | A]``.
    """
    if v.rows != 1:
        raise ValueError("expected a 1 x n row")
    config = config or SolverConfig()
    w = witness if witness is not None else unimodular_witness(v, config)
    if not (v * w).entries[0].is_one():
        raise NotUnimodular("v*w != 1")
    n = v.cols
    E = make_idempotent(w, v).E
    comp = Mat.identity(n, v.zero) - E
    cert = quillen_suslin_free_basis(comp, config)
    M = vstack(v, cert.B)
    d = determinant(to_fractions(M))
    if not d.is_constant() or d.is_zero():
        raise VerificationFailed(verify_certificate(cert))
    return M
