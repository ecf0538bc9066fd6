import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import X, XY, conjugated_idempotent, split_idempotent
from qsfree.errors import DimensionMismatch, MiddleMismatch, NotIdempotent, NotSplitPair, SingularMatrix
from qsfree.localization import MonicFraction
from qsfree.matrix import (
    CHECK_ORDER,
    ElementaryFactor,
    EquivalenceCertificate,
    FreeCertificate,
    Mat,
    block_diag,
    compose_certificates,
    determinant,
    elementary_factorization,
    hermite_basis_of_idempotent,
    identity_certificate,
    inverse,
    make_idempotent,
    product_of_factors,
    to_fractions,
    verify_certificate,
)

x, y = XY.gens()
u = Mat.column([1 + x * y, y**2, x], XY.zero)
w = Mat.row([XY.one, XY.zero, -y], XY.zero)


def leibniz(M: Mat):
    n = M.rows
    total = M.zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = M.zero + 1
        for i in range(n):
            term = term * M[i, perm[i]]
        total = total - term if inv % 2 else total + term
    return total


def diag(*vals, ctx=X):
    n = len(vals)
    return Mat(n, n, [ctx.const(vals[i]) if i == j else ctx.zero for i in range(n) for j in range(n)], ctx.zero)


def test_arithmetic_examples():
    I2 = Mat.identity(2, XY.zero)
    assert I2 * I2 == I2
    assert Mat.from_rows([[x]]) * Mat.from_rows([[y]]) == Mat.from_rows([[x * y]])
    a = Mat.from_rows([[x, XY.one, y], [XY.zero, XY.const(2), x]])
    b = Mat.column([y, XY.one, x], XY.zero)
    assert a * b == Mat.column([x * y + 1 + x * y, 2 + x**2], XY.zero)
    assert (a.T).shape == (3, 2) and a.T.T == a


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        Mat.identity(2, XY.zero) * Mat.identity(3, XY.zero)
    with pytest.raises(DimensionMismatch):
        Mat(2, 2, [XY.one], XY.zero)


def test_verify_examples():
    one = Mat.identity(1, XY.zero)
    assert verify_certificate(EquivalenceCertificate(one, one, one, one))
    good = FreeCertificate.of(u * w, u, w)
    assert verify_certificate(good)
    bad_B = Mat.row([XY.zero, XY.zero, -y], XY.zero)
    report = verify_certificate(FreeCertificate.of(u * w, u, bad_B))
    assert not report and report.failed == "B*A = F"
    assert "B*A = F" in str(report)


def test_verify_reports_first_failure_in_order():
    E = diag(1, 0)
    not_idem = diag(2, 0)
    assert verify_certificate(EquivalenceCertificate(not_idem, E, E, E)).failed == CHECK_ORDER[0]
    assert verify_certificate(EquivalenceCertificate(E, not_idem, E, E)).failed == CHECK_ORDER[1]
    A = Mat.column([X.one, X.one], X.zero)
    B = Mat.row([X.one, X.zero], X.zero)
    report = verify_certificate(FreeCertificate.of(E, A, B))
    assert report.failed == "A*B = E"
    assert verify_certificate(FreeCertificate.of(E, A, A)).failed == "dimensions"


def test_make_idempotent_examples():
    c = make_idempotent(Mat.column([X.one, X.zero], X.zero), Mat.row([X.one, X.zero], X.zero))
    assert c.E == diag(1, 0)
    c = make_idempotent(u, w)
    assert c.E.shape == (3, 3) and c.E * c.E == c.E and c.m == 1
    I3 = Mat.identity(3, X.zero)
    assert make_idempotent(I3, I3).E == I3
    with pytest.raises(NotSplitPair):
        make_idempotent(Mat.column([X.one, X.zero], X.zero), Mat.row([X.zero, X.one], X.zero))
    with pytest.raises(DimensionMismatch):
        make_idempotent(I3, Mat.identity(2, X.zero))


def test_compose_examples():
    c = make_idempotent(u, w)
    same = compose_certificates(c, identity_certificate(c.F))
    assert same.A == c.A and same.B == c.B and verify_certificate(same)
    d = make_idempotent(Mat.column([X.one, X.zero], X.zero), Mat.row([X.one, X.zero], X.zero))
    one = Mat.identity(1, X.zero)
    chain = compose_certificates(d, identity_certificate(one))
    assert chain.E == diag(1, 0) and chain.F == one and verify_certificate(chain)
    with pytest.raises(MiddleMismatch):
        compose_certificates(d, identity_certificate(diag(1, 1)))


def test_hermite_examples():
    C, D = hermite_basis_of_idempotent(diag(1, 0), "x")
    assert C == Mat.column([X.one, X.zero], X.zero) and D == Mat.row([X.one, X.zero], X.zero)
    xx = X.gen("x")
    E = Mat.from_rows([[X.one, xx], [X.zero, X.zero]])
    C, D = hermite_basis_of_idempotent(E, "x")
    assert C == Mat.column([X.one, X.zero], X.zero) and D == Mat.row([X.one, xx], X.zero)
    C, D = hermite_basis_of_idempotent(Mat.zeros(3, 3, X.zero), "x")
    assert C.shape == (3, 0) and D.shape == (0, 3)
    assert verify_certificate(FreeCertificate.of(Mat.zeros(3, 3, X.zero), C, D))


def test_hermite_over_a_field_of_fractions():
    # rows over Q(x)[y]: the pivot x is a unit there
    v = Mat.row([x, 1 - x * y], XY.zero)
    wv = Mat.column([y, XY.one], XY.zero)
    C, D = hermite_basis_of_idempotent(wv * v, "y", "x")
    assert D[0, 0].is_one()
    assert C * D == to_fractions(wv * v, "x") and (D * C).is_square()


def test_hermite_rejects_non_idempotent():
    with pytest.raises(NotIdempotent):
        hermite_basis_of_idempotent(diag(2, 0), "x")


def test_elementary_factorization_examples():
    Q = MonicFraction(X.zero, None, "x")
    I = Mat.identity(3, Q)
    assert elementary_factorization(I) == []
    two = Mat(1, 1, [Q + 2], Q)
    fs = elementary_factorization(two)
    assert len(fs) == 1 and fs[0].kind == "dilation" and fs[0].scalar == Q + 2
    swap = Mat(2, 2, [Q, Q + 1, Q + 1, Q], Q)
    fs = elementary_factorization(swap)
    assert product_of_factors(fs, 2, Q) == swap
    assert product_of_factors([f.inverse() for f in reversed(fs)], 2, Q) == inverse(swap)


def test_elementary_factor_validation():
    with pytest.raises(ValueError):
        ElementaryFactor.transvection(1, 1, X.one, 2)
    with pytest.raises(ValueError):
        ElementaryFactor.dilation(0, X.zero, 2)


def test_singular_inputs():
    Q = MonicFraction(X.zero, None, "x")
    sing = Mat(2, 2, [Q + 1, Q + 1, Q + 1, Q + 1], Q)
    with pytest.raises(SingularMatrix):
        inverse(sing)
    with pytest.raises(SingularMatrix):
        elementary_factorization(sing)


def test_zero_sized_matrices():
    z = Mat.zeros(0, 0, X.zero)
    assert z * z == z and determinant(z) == X.one
    assert Mat.zeros(2, 0, X.zero) * Mat.zeros(0, 2, X.zero) == Mat.zeros(2, 2, X.zero)
    assert block_diag(z, diag(1)).shape == (1, 1)


# -- properties ---------------------------------------------------------------------

seeds = st.integers(0, 10**6)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_determinant_matches_leibniz(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    M = Mat(n, n, [XY.const(rng.randint(-3, 3)) + rng.randint(-2, 2) * x + rng.randint(-1, 1) * y
                   for _ in range(n * n)], XY.zero)
    assert determinant(M) == leibniz(M)
    assert determinant(to_fractions(M, "x")) == MonicFraction(leibniz(M), None, "x")


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_direct_sum_law(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    E, _ = conjugated_idempotent(rng, X, n)
    v = Mat.row([X.const(rng.randint(-3, 3)) + rng.randint(-3, 3) * X.gen("x") for _ in range(n)], X.zero)
    comp = Mat.identity(n, X.zero) - E
    assert v == v * E + v * comp
    assert (v * E * comp).is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_hermite_rank_and_identities(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    E, rank = conjugated_idempotent(rng, X, n)
    C, D = hermite_basis_of_idempotent(E, "x")
    c = FreeCertificate.of(E, C, D)
    assert verify_certificate(c)
    assert c.m == rank and E.trace() == X.const(rank)
    assert E * C == C * c.F


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_composed_random_certificates_verify(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    rank = rng.randint(0, n)
    E, A, B = split_idempotent(rng, X, n, rank)
    c1 = make_idempotent(A, B)
    C, D = hermite_basis_of_idempotent(E, "x")
    # E ~ I_m two ways; B*C and D*A relate them
    c2 = EquivalenceCertificate(c1.F, Mat.identity(C.cols, X.zero), B * C, D * A)
    assert verify_certificate(compose_certificates(c1, c2))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_factorization_round_trip(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    Q = MonicFraction(X.zero, None, "x")
    xx = X.gen("x")
    fs = []
    for _ in range(rng.randint(0, 8)):
        if n > 1 and rng.random() < 0.7:
            i, j = rng.sample(range(n), 2)
            fs.append(ElementaryFactor.transvection(i, j, MonicFraction(xx + rng.randint(-2, 2), xx**2 + 1, "x"), n))
        else:
            fs.append(ElementaryFactor.dilation(rng.randrange(n), MonicFraction(xx + 3, xx - Fraction(1, 2), "x"), n))
    M = product_of_factors(fs, n, Q)
    out = elementary_factorization(M)
    assert product_of_factors(out, n, Q) == M
    assert product_of_factors([f.inverse() for f in reversed(out)], n, Q) == inverse(M)
    assert len(out) <= n * n + n
