from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import XY, fractions_in, polys, rationals
from qsfree.errors import NotInLocalization, NotRecognizedUnit, ParseError
from qsfree.localization import (
    MonicFraction,
    PointIdeal,
    has_unit_residue_form,
    in_local_polynomials,
    in_monic_localization,
    invert_unit,
    polynomial_part,
    reduce_fraction,
)
from qsfree.ring import VarContext

x, y = XY.gens()
AT0 = PointIdeal({"y": 0})


def F(num, den=None):
    return MonicFraction(num, den, "x")


def test_arithmetic_examples():
    assert F(XY.one, x + 1) + F(x, x + 1) == F(XY.one)
    assert F(x, x**2 + 1) * F(x**2 + 1) == F(x)
    assert F(XY.one, x + 1) + F(XY.one, x + 2) == F(2 * x + 3, x**2 + 3 * x + 2)


def test_canonical_form():
    a = F(2 * x + 2, 4 * x**2 - 4)
    assert a.den == x - 1 and a.num == XY.const(Fraction(1, 2))
    assert F(XY.zero, x + 7).den == XY.one
    with pytest.raises(ZeroDivisionError):
        F(x, XY.zero)


def test_polynomial_part_examples():
    q, p = polynomial_part(F(x**2 + 1, x + 1))
    assert q == F(x - 1) and p == F(XY.const(2), x + 1)
    q, p = polynomial_part(F(x * y + 3))
    assert q == F(x * y + 3) and p.is_zero()
    q, p = polynomial_part(F(XY.one, x + 1))
    assert q.is_zero() and p == F(XY.one, x + 1)


def test_reduce_fraction_examples():
    assert reduce_fraction(F((y + 1) * x + y, x), AT0).is_one()
    assert reduce_fraction(F(XY.const(5)), PointIdeal({"y": 3})) == F(XY.const(5))
    assert reduce_fraction(F(x + y, x**2), PointIdeal({"y": 2})) == F(x + 2, x**2)


def test_reduce_fraction_outside_localization():
    with pytest.raises(NotInLocalization):
        reduce_fraction(F(XY.one, y * x + 1), AT0)


def test_invert_unit_examples():
    assert invert_unit(F(x + 1, x**2 + 1)) == F(x**2 + 1, x + 1)
    assert invert_unit(F(XY.const(2))) == F(XY.const(Fraction(1, 2)))
    with pytest.raises(NotRecognizedUnit):
        invert_unit(F(y * x, x + 1), AT0)
    assert invert_unit(F((y + 1) * x, x + 1), AT0) * F((y + 1) * x, x + 1) == F(XY.one)


def test_point_ideal():
    assert AT0.contains(y**2 + x * y) and not AT0.contains(y + 1)
    assert AT0.residue(x * y + x + 3 * y) == x
    assert PointIdeal().is_trivial()
    assert PointIdeal.from_json({"point": {"y": "1/2"}}).point == {"y": Fraction(1, 2)}
    assert PointIdeal.from_json(AT0.to_json()) == AT0
    with pytest.raises(ParseError):
        PointIdeal.from_json({"pt": {}})


def test_membership():
    assert in_monic_localization(F(x, (1 + y) * x + y), AT0)
    assert not in_monic_localization(F(x, y * x + 1), AT0)
    assert in_local_polynomials(F(x, 1 + y), AT0)
    assert not in_local_polynomials(F(x, y), AT0)
    assert not in_local_polynomials(F(XY.one, x + 1), AT0)


def test_unit_residue_form():
    assert has_unit_residue_form(F(x + y + 1, x + 1), AT0, "x")
    assert not has_unit_residue_form(F(x + 2, x + 1), AT0, "x")
    assert not has_unit_residue_form(F(x**2, x + 1), AT0, "x")


def test_json_roundtrip():
    a = F(x**2 + y, x + Fraction(1, 3))
    js = a.to_json()
    assert js["var"] == "x"
    assert MonicFraction.from_json(js) == a
    with pytest.raises(ParseError):
        MonicFraction.from_json({"num": x.to_json(), "den": XY.zero.to_json(), "var": "x"})


# -- properties ---------------------------------------------------------------------

@given(fractions_in())
def test_decomposition_and_degree_condition(phi):
    q, p = polynomial_part(phi)
    assert q + p == phi
    assert q.is_polynomial() or not q.den.involves("x")
    assert p.is_zero() or p.num.degree("x") < p.den.degree("x")


@given(fractions_in(), fractions_in(), rationals, rationals)
def test_retraction_is_linear(phi, psi, a, b):
    lhs = polynomial_part(phi * a + psi * b)[0]
    assert lhs == polynomial_part(phi)[0] * a + polynomial_part(psi)[0] * b


@given(fractions_in(), fractions_in())
def test_reduction_is_a_ring_map(phi, psi):
    red = lambda f: reduce_fraction(f, AT0)  # noqa: E731
    assert red(phi + psi) == red(phi) + red(psi)
    assert red(phi * psi) == red(phi) * red(psi)


@given(fractions_in())
def test_invert_unit_round_trip(phi):
    try:
        inv = invert_unit(phi, AT0)
    except NotRecognizedUnit:
        return
    assert phi * inv == F(XY.one)


@given(polys(VarContext(["y"]), 3, 3), st.fractions(-4, 4, max_denominator=3))
def test_residue_agrees_with_evaluation(f, c):
    ideal = PointIdeal({"y": c})
    f = f.convert(XY)
    assert ideal.contains(f) == f.evaluate({"y": c}).is_zero()
