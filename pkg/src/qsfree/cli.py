"""``qs`` command line: solve, horrocks, patch, complete-row, verify.

Exit codes: 0 success, 1 verification failure, 2 unsupported input,
3 parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import ParseError, QSError, UnsupportedInput, VerificationFailed
from .horrocks import HorrocksInput, horrocks_free_basis
from .localization import MonicFraction
from .matrix import EquivalenceCertificate, Mat, to_fractions, verify_certificate
from .patching import bezout_combine, specialize_to_zero
from .ring import MultiPoly, VarContext
from .serialize import (
    certificate_from_json,
    certificate_to_json,
    config_from_json,
    cover_from_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    point_from_json,
    poly_from_json,
    translation_certificate_from_json,
)
from .solver import (
    SolverConfig,
    bezout_coefficients,
    complete_unimodular_row,
    quillen_suslin_free_basis,
    rational_point_search,
)

EXIT_OK, EXIT_VERIFY, EXIT_UNSUPPORTED, EXIT_PARSE = 0, 1, 2, 3


def _emit(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _config(path: str | None) -> SolverConfig:
    return config_from_json(load_json(path)) if path else SolverConfig()


def _as_common(*mats: Mat) -> tuple[Mat, ...]:
    """Bring matrices to one entry type so they can be compared."""
    if any(isinstance(M.zero, MonicFraction) for M in mats):
        return tuple(to_fractions(M) for M in mats)
    return mats


# -- subcommands ------------------------------------------------------------------

def cmd_solve(args) -> int:
    E = matrix_from_json(load_json(args.E))
    config = _config(args.config)
    if isinstance(E.zero, MonicFraction):
        raise ParseError("E must have polynomial entries")
    covers = [cover_from_json(load_json(p), E.zero.ctx) for p in args.cover or []]
    trace: list = []
    cert = quillen_suslin_free_basis(E, config, covers, trace=trace)
    out = certificate_to_json(cert)
    if config.trace:
        out["trace"] = [{"var": t["var"], "point": {k: str(v) for k, v in t["point"].items()}, "r": t["r"]}
                        for t in trace]
    _emit(out, args.output)
    return EXIT_OK


def cmd_horrocks(args) -> int:
    doc = load_json(args.input)
    if not isinstance(doc, dict) or any(k not in doc for k in ("E", "A", "B", "var")):
        raise ParseError("horrocks input needs E, A, B and var")
    ideal = point_from_json(load_json(args.point))
    names: list[str] = []
    for k in ("E", "A", "B"):
        probe = matrix_from_json(doc[k])
        for n in probe.zero.ctx.names:
            if n not in names:
                names.append(n)
    for n in [doc["var"], *ideal.vars]:
        if n not in names:
            names.append(n)
    ctx = VarContext(names)
    E, A, B = (matrix_from_json(doc[k], ctx) for k in ("E", "A", "B"))
    trace: dict | None = {} if args.trace else None
    cert = horrocks_free_basis(HorrocksInput(E, A, B, doc["var"], ideal), trace)
    out = certificate_to_json(cert)
    if trace is not None:
        out["trace"] = {k: (matrix_to_json(v) if isinstance(v, Mat) else
                            v.to_json() if hasattr(v, "to_json") else
                            [{"kind": f.kind, "i": f.i, "j": f.j, "scalar": f.scalar.to_json()} for f in v])
                        for k, v in trace.items()}
    _emit(out, args.output)
    return EXIT_OK


def cmd_patch(args) -> int:
    certs = [translation_certificate_from_json(load_json(p)) for p in args.certs]
    ctx = certs[0].E.zero.ctx
    certs = [c if c.E.zero.ctx == ctx else type(c)(*(_convert_field(getattr(c, f), ctx)
                                                      for f in ("E", "j", "A", "B")), c.var, c.aux)
             for c in certs]
    if args.bezout:
        raw = load_json(args.bezout)
        if isinstance(raw, dict):
            raw = raw.get("coefficients")
        if not isinstance(raw, list):
            raise ParseError("bezout file must be a list of polynomials")
        us = [poly_from_json(u, ctx) for u in raw]
    else:
        base = sorted(set().union(*(c.j.variables() for c in certs)), key=ctx.index)
        if len(base) > 1:
            raise UnsupportedInput(f"Bezout coefficients over Q[{', '.join(base)}] must be supplied")
        if not base:
            us = bezout_coefficients([c.j for c in certs], ctx.names[0])
        else:
            us = bezout_coefficients([c.j for c in certs], base[0])
        if us is None:
            ideal = rational_point_search([c.j for c in certs], base, SolverConfig())
            raise UnsupportedInput(f"denominators share the point {ideal.point}; "
                                   "add a certificate localized there")
    combined = bezout_combine(certs, us)
    equiv = specialize_to_zero(combined)
    _emit({"translation": combined.to_json(), "equivalence": certificate_to_json(equiv)}, args.output)
    return EXIT_OK


def _convert_field(v, ctx):
    return v.convert(ctx) if isinstance(v, MultiPoly) else v.map(lambda e: e.convert(ctx))


def cmd_complete_row(args) -> int:
    v = matrix_from_json(load_json(args.v))
    if isinstance(v.zero, MonicFraction):
        raise ParseError("the row must have polynomial entries")
    M = complete_unimodular_row(v, _config(args.config))
    _emit(matrix_to_json(M), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = load_json(args.cert)
    if isinstance(doc, dict) and "j" in doc:
        report = translation_certificate_from_json(doc).verify()
    else:
        c = certificate_from_json(doc)
        report = verify_certificate(EquivalenceCertificate(*_as_common(c.E, c.F, c.A, c.B)))
    print(report)
    return EXIT_OK if report else EXIT_VERIFY


# -- entry point -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qs", description="Exact free bases of projective modules over Q[x1..xn].")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="free certificate for an idempotent matrix")
    s.add_argument("E")
    s.add_argument("--config")
    s.add_argument("--cover", action="append", help="local data for one variable (repeatable)")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_solve)

    h = sub.add_parser("horrocks", help="polynomial free basis over a localization")
    h.add_argument("--input", required=True)
    h.add_argument("--point", required=True)
    h.add_argument("--trace", action="store_true")
    h.add_argument("-o", "--output")
    h.set_defaults(fn=cmd_horrocks)

    pa = sub.add_parser("patch", help="combine translation certificates into E(x->0) ~ E")
    pa.add_argument("--certs", nargs="+", required=True)
    pa.add_argument("--bezout")
    pa.add_argument("-o", "--output")
    pa.set_defaults(fn=cmd_patch)

    c = sub.add_parser("complete-row", help="complete a unimodular row to an invertible matrix")
    c.add_argument("v")
    c.add_argument("--config")
    c.add_argument("-o", "--output")
    c.set_defaults(fn=cmd_complete_row)

    v = sub.add_parser("verify", help="check a certificate file")
    v.add_argument("cert")
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedInput as exc:
        print(f"unsupported input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except VerificationFailed as exc:
        print(f"verification failed: {exc.report}", file=sys.stderr)
        return EXIT_VERIFY
    except QSError as exc:
        print(f"unsupported input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
