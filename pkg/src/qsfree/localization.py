"""Fractions with monic denominators, point ideals and residue maps.

A :class:`MonicFraction` is a quotient ``num/den`` of polynomials in one
:class:`~qsfree.ring.VarContext`, together with a distinguished variable
``var``.  Write ``X`` for the remaining variables.  For a rational point of
``X`` with maximal ideal ``m`` and local ring ``R = Q[X]_m``, the fraction
lies in ``R(var)`` (the localization of ``R[var]`` at monic polynomials)
exactly when the leading ``var``-coefficient of the reduced denominator does
not vanish at the point, and lies in ``R[var]`` when the denominator does not
involve ``var`` at all.  The same class therefore carries elements of
``Q(x)``, ``Q[X]_m``, ``R[x]`` and ``R(x)``; membership is a predicate, not a
type.

Canonical form: ``gcd(num, den) = 1`` and the lexicographic leading
coefficient of ``lc_var(den)`` equals 1, so a denominator whose leading
``var``-coefficient is a rational constant is literally monic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import NotInLocalization, NotRecognizedUnit, ParseError
from .ring import MultiPoly, VarContext, poly_divmod, pseudo_divmod, to_rational


class MonicFraction:
    __slots__ = ("num", "den", "var")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, var: str | None = None,
                 *, reduced: bool = False):
        ctx = num.ctx
        if den is None:
            den = ctx.one
            reduced = True
        if var is not None:
            ctx.index(var)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = num, ctx.one
        elif not reduced and not den.is_constant():
            g = num.gcd(den)
            if not g.is_constant():
                num, den = num.exquo(g), den.exquo(g)
        if not den.is_one():
            lead = den.lc(var) if var is not None else den
            c = lead.leading_coefficient()
            if c != 1:
                num, den = num.scale(1 / c), den.scale(1 / c)
        self.num = num
        self.den = den
        self.var = var

    @property
    def ctx(self) -> VarContext:
        return self.num.ctx

    @classmethod
    def from_poly(cls, p: MultiPoly, var: str | None = None) -> "MonicFraction":
        return cls(p, None, var)

    def _lift(self, other) -> "MonicFraction | None":
        if isinstance(other, MonicFraction):
            return other
        if isinstance(other, MultiPoly):
            return MonicFraction(other, None, self.var)
        if isinstance(other, (int, Fraction)):
            return MonicFraction(self.ctx.const(other), None, self.var)
        return None

    def _new(self, num, den, reduced=False):
        return MonicFraction(num, den, self.var, reduced=reduced)

    # -- field arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            if self.den.is_one():
                return self._new(self.num + o.num, self.den, reduced=True)
            return self._new(self.num + o.num, self.den)
        if o.den.is_one():
            return self._new(self.num + o.num * self.den, self.den, reduced=True)
        if self.den.is_one():
            return self._new(self.num * o.den + o.num, o.den, reduced=True)
        return self._new(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return MonicFraction(-self.num, self.den, self.var, reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return self._new(self.ctx.zero, None)
        if self.den.is_one() and o.den.is_one():
            return self._new(self.num * o.num, self.den, reduced=True)
        return self._new(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "MonicFraction":
        """Inverse in the fraction field (no unit criterion; see :func:`invert_unit`)."""
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self._new(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return self._new(self.num ** k, self.den ** k, reduced=True)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"MonicFraction({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    # -- predicates / conversions -------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def to_poly(self) -> MultiPoly:
        if not self.den.is_one():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.constant_value()

    def degree(self, var: str | None = None) -> int:
        """Numerator degree in ``var`` (default: the distinguished variable)."""
        return self.num.degree(var or self.var)

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def with_var(self, var: str | None) -> "MonicFraction":
        if var == self.var:
            return self
        return MonicFraction(self.num, self.den, var, reduced=True)

    def substitute(self, var: str, replacement) -> "MonicFraction":
        return self._new(self.num.substitute(var, replacement), self.den.substitute(var, replacement))

    def evaluate(self, point: Mapping[str, object]) -> "MonicFraction":
        den = self.den.evaluate(point)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator of {self} vanishes at {dict(point)}")
        return self._new(self.num.evaluate(point), den)

    def convert(self, ctx: VarContext) -> "MonicFraction":
        return MonicFraction(self.num.convert(ctx), self.den.convert(ctx), self.var, reduced=True)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json(), "var": self.var}

    @classmethod
    def from_json(cls, obj, ctx: VarContext | None = None) -> "MonicFraction":
        try:
            num = MultiPoly.from_json(obj["num"], ctx)
            den = MultiPoly.from_json(obj["den"], num.ctx)
            var = obj.get("var")
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed fraction: {exc}") from exc
        if den.is_zero():
            raise ParseError("fraction with zero denominator")
        return cls(num, den, var)


def as_fraction(value, var: str | None = None) -> MonicFraction:
    if isinstance(value, MonicFraction):
        return value.with_var(var) if var is not None else value
    if isinstance(value, MultiPoly):
        return MonicFraction(value, None, var)
    raise TypeError(f"cannot view {value!r} as a fraction")


@dataclass(frozen=True)
class PointIdeal:
    """Maximal ideal of ``Q[X]`` of polynomials vanishing at a rational point.

    The empty point is the zero ideal of ``Q`` itself (no localization).
    """

    coords: tuple[tuple[str, Fraction], ...]

    def __init__(self, point: Mapping[str, object] | None = None):
        items = tuple(sorted((str(k), to_rational(v)) for k, v in (point or {}).items()))
        object.__setattr__(self, "coords", items)

    @property
    def point(self) -> dict[str, Fraction]:
        return dict(self.coords)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.coords)

    def is_trivial(self) -> bool:
        return not self.coords

    def contains(self, f: MultiPoly) -> bool:
        return f.evaluate(self.point).is_zero()

    def residue(self, f: MultiPoly) -> MultiPoly:
        return f.evaluate(self.point)

    def residue_value(self, f: MultiPoly) -> Fraction:
        """Residue in Q of a polynomial in the point's variables only."""
        return f.evaluate(self.point).constant_value()

    def is_unit(self, a: MonicFraction) -> bool:
        """``a`` is a unit of ``Q[X]_m`` (an element of Q(X) with nonzero value at the point)."""
        return not a.num.evaluate(self.point).is_zero() and not a.den.evaluate(self.point).is_zero()

    def local_value(self, a: MonicFraction) -> Fraction:
        """Residue of an element of ``Q[X]_m``."""
        den = a.den.evaluate(self.point)
        if den.is_zero():
            raise NotInLocalization(f"{a} is not in the local ring at {self.point}")
        return (a.num.evaluate(self.point)).constant_value() / den.constant_value()

    def to_json(self) -> dict:
        return {"point": {k: str(v) for k, v in self.coords}}

    @classmethod
    def from_json(cls, obj) -> "PointIdeal":
        try:
            return cls({k: to_rational(v) for k, v in obj["point"].items()})
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"malformed point ideal: {exc}") from exc


def _base_unit(c: MultiPoly, ideal: PointIdeal | None) -> bool:
    """Is the x-free polynomial ``c`` invertible in the base ring?"""
    if c.is_zero():
        return False
    if ideal is None or ideal.is_trivial():
        return c.is_constant()
    if c.variables() - set(ideal.vars):
        return False
    return not ideal.contains(c)


def in_monic_localization(phi: MonicFraction, ideal: PointIdeal | None = None,
                          var: str | None = None) -> bool:
    """Membership of ``phi`` in ``R(var)``."""
    var = var or phi.var
    return _base_unit(phi.den.lc(var), ideal)


def in_local_polynomials(phi: MonicFraction, ideal: PointIdeal | None = None,
                         var: str | None = None) -> bool:
    """Membership of ``phi`` in ``R[var]``: the denominator is a unit of R."""
    var = var or phi.var
    return not phi.den.involves(var) and _base_unit(phi.den, ideal)


def frac_add(a: MonicFraction, b: MonicFraction) -> MonicFraction:
    return a + b


def frac_mul(a: MonicFraction, b: MonicFraction) -> MonicFraction:
    return a * b


def frac_neg(a: MonicFraction) -> MonicFraction:
    return -a


def polynomial_part(phi: MonicFraction, var: str | None = None) -> tuple[MonicFraction, MonicFraction]:
    """Split ``phi = q + proper`` with ``q`` polynomial in ``var`` and ``proper`` of negative degree.

    ``q`` carries denominators only from the leading ``var``-coefficient of
    the denominator, so over ``R(var)`` it is an element of ``R[var]``.
    """
    var = var or phi.var
    if var is None:
        raise ValueError("polynomial_part needs a distinguished variable")
    num, den = phi.num, phi.den
    if not den.involves(var):
        return phi, MonicFraction(phi.ctx.zero, None, phi.var)
    lead = den.lc(var)
    if lead.is_constant():
        c = lead.constant_value()
        q, r = poly_divmod(num, den.scale(1 / c), var)
        return (MonicFraction(q.scale(1 / c), None, phi.var),
                MonicFraction(r, den, phi.var))
    k, q, r = pseudo_divmod(num, den, var)
    lk = lead ** k
    return (MonicFraction(q, lk, phi.var),
            MonicFraction(r, lk * den, phi.var))


def local_divmod(f: MonicFraction, g: MonicFraction, var: str | None = None) -> tuple[MonicFraction, MonicFraction]:
    """Division in ``R[var]`` by ``g`` whose leading coefficient is a unit of R."""
    var = var or f.var
    q, _ = polynomial_part(f / g, var)
    return q, f - g * q


def reduce_fraction(phi: MonicFraction, ideal: PointIdeal, var: str | None = None) -> MonicFraction:
    """Residue map ``R(x) -> Q(x)`` obtained by evaluating X at the point."""
    var = var or phi.var
    if not ideal.coords:
        return phi
    if var is not None and not in_monic_localization(phi, ideal, var):
        raise NotInLocalization(f"{phi} is not in R({var}) at {ideal.point}")
    return MonicFraction(phi.num.evaluate(ideal.point), phi.den.evaluate(ideal.point), phi.var)


def invert_unit(phi: MonicFraction, ideal: PointIdeal | None = None, var: str | None = None) -> MonicFraction:
    """Inverse of ``phi`` in ``R(var)`` when the leading coefficient of its numerator is a unit of R."""
    var = var or phi.var
    if phi.is_zero() or not _base_unit(phi.num.lc(var), ideal):
        raise NotRecognizedUnit(f"{phi} is not recognized as a unit of R({var})")
    return phi.inverse()


def has_unit_residue_form(phi: MonicFraction, ideal: PointIdeal, var: str | None = None) -> bool:
    """Membership in ``1 + m*R(x)_o``: ``phi = f/g``, f, g monic of equal degree, equal residues."""
    var = var or phi.var
    num, den = phi.num, phi.den
    if num.degree(var) != den.degree(var):
        return False
    if num.lc(var) != den.lc(var):
        return False
    if not _base_unit(den.lc(var), ideal):
        return False
    return num.evaluate(ideal.point) == den.evaluate(ideal.point)
