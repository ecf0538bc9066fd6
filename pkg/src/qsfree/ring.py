"""Exact multivariate polynomials over Q.

Polynomials live in a :class:`VarContext`, an ordered tuple of variable
names which also fixes the lexicographic monomial order.  The arithmetic is
delegated to sympy's sparse ``PolyElement`` over ``QQ`` (gmpy2 rationals when
available); this module adds the pieces the rest of the package relies on:
division by polynomials monic in one distinguished variable, pseudo-division,
substitution endomorphisms, evaluation at rational points and a canonical
JSON encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, ring as _sympy_ring

from .errors import NonMonicDivisor, ParseError, UnknownVariable

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions, gmpy2/sympy rationals and "p/q" strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is None or den is None:
        raise TypeError(f"cannot interpret {value!r} as a rational")
    if callable(num):
        num, den = num(), den()
    return Fraction(int(num), int(den))


def _qq(value):
    f = to_rational(value)
    return QQ(f.numerator, f.denominator)


class VarContext:
    """Ordered list of distinct variable names."""

    __slots__ = ("names", "_ring", "_gens", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValueError(f"bad variable name {name!r}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}
        if names:
            r, *gens = _sympy_ring(",".join(names), QQ, lex)
        else:
            r, gens = _sympy_ring("", QQ, lex)[0], []
        self._ring = r
        self._gens = gens

    def __repr__(self):
        return f"VarContext({list(self.names)!r})"

    def __eq__(self, other):
        return isinstance(other, VarContext) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} not in {list(self.names)}") from None

    def gen(self, name: str) -> "MultiPoly":
        return MultiPoly._wrap(self, self._gens[self.index(name)])

    def gens(self) -> tuple["MultiPoly", ...]:
        return tuple(MultiPoly._wrap(self, g) for g in self._gens)

    def const(self, c) -> "MultiPoly":
        return MultiPoly._wrap(self, self._ring(_qq(c)))

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly._wrap(self, self._ring.zero)

    @property
    def one(self) -> "MultiPoly":
        return MultiPoly._wrap(self, self._ring.one)

    def extend(self, *names: str) -> "VarContext":
        return VarContext(self.names + tuple(names))

    def fresh_name(self, stem: str = "t") -> str:
        if stem not in self._index:
            return stem
        k = 0
        while f"{stem}{k}" in self._index:
            k += 1
        return f"{stem}{k}"


class MultiPoly:
    """Immutable polynomial in ``Q[ctx.names]``."""

    __slots__ = ("ctx", "_p")

    def __init__(self, ctx: VarContext, terms: Mapping[tuple, object] | None = None):
        self.ctx = ctx
        p = ctx._ring.zero
        if terms:
            n = len(ctx)
            data = {}
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n or any(e < 0 for e in exp):
                    raise ValueError(f"exponent {exp} does not fit {ctx}")
                c = _qq(c)
                if c:
                    data[exp] = data.get(exp, QQ.zero) + c
            p = ctx._ring.from_dict({e: c for e, c in data.items() if c})
        self._p = p

    @classmethod
    def _wrap(cls, ctx: VarContext, p: PolyElement) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._p = p
        return obj

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> PolyElement | None:
        if isinstance(other, MultiPoly):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError(f"context mismatch: {self.ctx} vs {other.ctx}")
            return other._p
        if isinstance(other, (int, Fraction)):
            return self.ctx._ring(_qq(other))
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return MultiPoly._wrap(self.ctx, self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return MultiPoly._wrap(self.ctx, self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return MultiPoly._wrap(self.ctx, o - self._p)

    def __neg__(self):
        return MultiPoly._wrap(self.ctx, -self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return MultiPoly._wrap(self.ctx, self._p * o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        return MultiPoly._wrap(self.ctx, self._p ** k)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ctx == other.ctx and self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self._p == self.ctx._ring(_qq(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.names, frozenset(self._p.items())))

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        return str(self._p.as_expr()) if self._p else "0"

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {e: to_rational(c) for e, c in self._p.items()}

    def is_zero(self) -> bool:
        return not self._p

    def is_one(self) -> bool:
        return self._p == self.ctx._ring.one

    def is_constant(self) -> bool:
        return self._p.is_ground

    def constant_value(self) -> Fraction:
        if not self._p.is_ground:
            raise ValueError(f"{self} is not a constant")
        return to_rational(self._p.coeff(1)) if self._p else Fraction(0)

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the lex-largest monomial (0 for the zero polynomial)."""
        return to_rational(self._p.LC)

    def degree(self, var: str) -> int:
        """Degree in ``var``; the zero polynomial has degree -1."""
        if not self._p:
            return -1
        i = self.ctx.index(var)
        return max(e[i] for e in self._p.keys())

    def total_degree(self) -> int:
        if not self._p:
            return -1
        return max(sum(e) for e in self._p.keys())

    def variables(self) -> set[str]:
        used = set()
        for e in self._p.keys():
            for i, k in enumerate(e):
                if k:
                    used.add(self.ctx.names[i])
        return used

    def involves(self, var: str) -> bool:
        i = self.ctx.index(var)
        return any(e[i] for e in self._p.keys())

    def coeffs_in(self, var: str) -> list["MultiPoly"]:
        """``[c_0, ..., c_d]`` with ``self = sum c_k var**k`` and every c_k free of ``var``."""
        i = self.ctx.index(var)
        d = self.degree(var)
        buckets = [dict() for _ in range(d + 1)]
        for e, c in self._p.items():
            k = e[i]
            buckets[k][e[:i] + (0,) + e[i + 1:]] = c
        R = self.ctx._ring
        return [MultiPoly._wrap(self.ctx, R.from_dict(b) if b else R.zero) for b in buckets]

    def lc(self, var: str) -> "MultiPoly":
        """Leading coefficient in ``var`` (a polynomial in the other variables)."""
        if not self._p:
            return self
        i = self.ctx.index(var)
        d = self.degree(var)
        out = {e[:i] + (0,) + e[i + 1:]: c for e, c in self._p.items() if e[i] == d}
        return MultiPoly._wrap(self.ctx, self.ctx._ring.from_dict(out))

    def is_monic_in(self, var: str) -> bool:
        return bool(self._p) and self.lc(var).is_one()

    # -- ring operations backed by sympy ------------------------------------
    def gcd(self, other: "MultiPoly") -> "MultiPoly":
        return MultiPoly._wrap(self.ctx, self._p.gcd(self._coerce(other)))

    def lcm(self, other: "MultiPoly") -> "MultiPoly":
        return MultiPoly._wrap(self.ctx, self._p.lcm(self._coerce(other)))

    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        o = self._coerce(other)
        try:
            return MultiPoly._wrap(self.ctx, self._p.exquo(o))
        except Exception as exc:  # sympy raises ExactQuotientFailed
            raise ArithmeticError(f"{other} does not divide {self}") from exc

    def divides(self, other: "MultiPoly") -> bool:
        """Does ``self`` divide ``other``?"""
        if self.is_zero():
            return other.is_zero()
        _, r = self._coerce(other).div(self._p)
        return not r

    def scale(self, c) -> "MultiPoly":
        return MultiPoly._wrap(self.ctx, self._p.mul_ground(_qq(c)))

    def monic(self) -> "MultiPoly":
        """Divide by the lex leading coefficient."""
        if not self._p:
            return self
        return MultiPoly._wrap(self.ctx, self._p.quo_ground(self._p.LC))

    # -- substitution / evaluation -----------------------------------------
    def substitute(self, var: str, replacement: "MultiPoly | int | Fraction") -> "MultiPoly":
        gen = self.ctx._gens[self.ctx.index(var)]
        rep = self._coerce(replacement)
        if rep is None:
            raise TypeError(f"bad replacement {replacement!r}")
        if rep.is_ground:
            return MultiPoly._wrap(self.ctx, self._p.subs(gen, rep.coeff(1) if rep else QQ.zero))
        return MultiPoly._wrap(self.ctx, self._p.compose(gen, rep))

    def evaluate(self, point: Mapping[str, object]) -> "MultiPoly":
        if not point:
            return self
        pairs = [(self.ctx._gens[self.ctx.index(v)], _qq(c)) for v, c in point.items()]
        return MultiPoly._wrap(self.ctx, self._p.subs(pairs))

    def convert(self, ctx: VarContext) -> "MultiPoly":
        """Re-express in another context; every variable used must exist there."""
        if ctx == self.ctx:
            return self
        idx = []
        for name in self.ctx.names:
            idx.append(ctx._index.get(name))
        n = len(ctx)
        out = {}
        for e, c in self._p.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    j = idx[i]
                    if j is None:
                        raise UnknownVariable(f"variable {self.ctx.names[i]!r} not in {list(ctx.names)}")
                    new[j] = k
            out[tuple(new)] = c
        return MultiPoly._wrap(ctx, ctx._ring.from_dict(out) if out else ctx._ring.zero)

    # -- serialization ------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending lexicographic exponent order."""
        return sorted(((e, to_rational(c)) for e, c in self._p.items()), reverse=True)

    def to_json(self) -> dict:
        return {
            "vars": list(self.ctx.names),
            "terms": [{"c": str(c), "e": list(e)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj, ctx: VarContext | None = None) -> "MultiPoly":
        try:
            names = obj["vars"]
            own = VarContext(names) if ctx is None or tuple(names) != ctx.names else ctx
            terms = {}
            for t in obj["terms"]:
                e = tuple(t["e"])
                if e in terms:
                    raise ParseError(f"repeated exponent {list(e)}")
                terms[e] = to_rational(t["c"])
            p = cls(own, terms)
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed polynomial: {exc}") from exc
        return p if ctx is None else p.convert(ctx)


@dataclass(frozen=True)
class Substitution:
    """Ring endomorphism sending ``target`` to ``replacement`` and fixing the other variables."""

    target: str
    replacement: MultiPoly

    def __post_init__(self):
        self.replacement.ctx.index(self.target)

    def __call__(self, f: MultiPoly) -> MultiPoly:
        return substitute(f, self)


def substitute(f: MultiPoly, s: Substitution) -> MultiPoly:
    return f.substitute(s.target, s.replacement)


def evaluate_at_point(f: MultiPoly, point: Mapping[str, object]) -> MultiPoly:
    return f.evaluate(point)


def poly_divmod(f: MultiPoly, g: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    """Divide by ``g``, monic in ``var``: ``f = g*q + r`` with ``deg_var r < deg_var g``."""
    if g.is_zero() or not g.lc(var).is_one():
        raise NonMonicDivisor(f"{g} is not monic in {var}")
    i = f.ctx.index(var)
    dg = g.degree(var)
    gp = g._p
    R = f.ctx._ring
    q = R.zero
    r = f._p
    while r:
        dr = max(e[i] for e in r.keys())
        if dr < dg:
            break
        lead = {e[:i] + (e[i] - dg,) + e[i + 1:]: c for e, c in r.items() if e[i] == dr}
        t = R.from_dict(lead)
        q += t
        r -= t * gp
    return MultiPoly._wrap(f.ctx, q), MultiPoly._wrap(f.ctx, r)


def pseudo_divmod(f: MultiPoly, g: MultiPoly, var: str) -> tuple[int, MultiPoly, MultiPoly]:
    """Pseudo-division in ``var``: returns ``(k, q, r)`` with ``lc(g)**k * f = q*g + r``."""
    if g.is_zero():
        raise ZeroDivisionError("pseudo-division by zero")
    i = f.ctx.index(var)
    dg = g.degree(var)
    lc = g.lc(var)._p
    gp = g._p
    R = f.ctx._ring
    q = R.zero
    r = f._p
    k = 0
    while r:
        dr = max(e[i] for e in r.keys())
        if dr < dg:
            break
        lead = {e[:i] + (e[i] - dg,) + e[i + 1:]: c for e, c in r.items() if e[i] == dr}
        t = R.from_dict(lead)
        q = q * lc + t
        r = r * lc - t * gp
        k += 1
    return k, MultiPoly._wrap(f.ctx, q), MultiPoly._wrap(f.ctx, r)


def univariate_gcdex(a: MultiPoly, b: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Extended Euclid in ``Q[var]``: ``s*a + t*b = g`` with ``g`` monic (or zero)."""
    for p in (a, b):
        if p.variables() - {var}:
            raise ValueError(f"{p} is not univariate in {var}")
    ctx = a.ctx
    r0, r1 = a, b
    s0, s1 = ctx.one, ctx.zero
    t0, t1 = ctx.zero, ctx.one
    while not r1.is_zero():
        lc = r1.lc(var).constant_value()
        q, r = poly_divmod(r0, r1.scale(1 / lc), var)
        q = q.scale(1 / lc)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return s0, t0, r0
    c = r0.leading_coefficient()
    return s0.scale(1 / c), t0.scale(1 / c), r0.scale(1 / c)
