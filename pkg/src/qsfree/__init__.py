"""Exact, certificate-producing free bases for projective modules over Q[x1, ..., xn]."""

from .errors import *  # noqa: F401,F403
from .horrocks import HorrocksInput, LiftedUnit, horrocks_free_basis, lift_invertible, solve_polynomial_part_identity
from .localization import MonicFraction, PointIdeal, invert_unit, polynomial_part, reduce_fraction
from .matrix import (
    ElementaryFactor,
    EquivalenceCertificate,
    FreeCertificate,
    Mat,
    compose_certificates,
    determinant,
    elementary_factorization,
    hermite_basis_of_idempotent,
    make_idempotent,
    verify_certificate,
)
from .patching import (
    TranslationCertificate,
    bezout_combine,
    cert_add,
    cert_scale,
    specialize_to_zero,
    translation_from_local_trivialization,
)
from .ring import MultiPoly, Rational, Substitution, VarContext, poly_divmod, substitute, univariate_gcdex
from .solver import (
    Cover,
    LocalPatch,
    SolverConfig,
    complete_unimodular_row,
    quillen_suslin_free_basis,
    rational_point_search,
)

__version__ = "0.1.0"
