"""JSON forms of polynomials, fractions, points, matrices and certificates.

A matrix document names its variables once (``"vars"``) when every entry is
a polynomial written in the short ``{"c","e"}`` form; entries written as full
polynomial objects carry their own ``vars`` and are merged into one context.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseError
from .localization import MonicFraction, PointIdeal
from .matrix import EquivalenceCertificate, Mat
from .ring import MultiPoly, VarContext


def _fail(msg: str):
    raise ParseError(msg)


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        _fail(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        _fail(f"{path}: invalid JSON ({exc})")


def poly_from_json(obj, ctx: VarContext | None = None) -> MultiPoly:
    try:
        return MultiPoly.from_json(obj, ctx)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        _fail(f"bad polynomial {obj!r}: {exc}")


def fraction_from_json(obj, ctx: VarContext | None = None) -> MonicFraction:
    try:
        return MonicFraction.from_json(obj, ctx)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        _fail(f"bad fraction {obj!r}: {exc}")


def point_from_json(obj) -> PointIdeal:
    try:
        return PointIdeal.from_json(obj)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        _fail(f"bad point {obj!r}: {exc}")


def _entry_vars(e) -> list[str]:
    if isinstance(e, dict):
        if "num" in e:
            return list(e["num"].get("vars", [])) + list(e.get("den", {}).get("vars", []))
        return list(e.get("vars", []))
    return []


def _context_for(obj: dict, extra=()) -> VarContext:
    names: list[str] = list(obj.get("vars", []))
    for e in obj.get("entries", []):
        names += _entry_vars(e)
    names += list(extra)
    seen: list[str] = []
    for n in names:
        if not isinstance(n, str):
            _fail(f"variable names must be strings, got {n!r}")
        if n not in seen:
            seen.append(n)
    return VarContext(seen)


def matrix_from_json(obj, ctx: VarContext | None = None) -> Mat:
    """Parse a matrix; entries may be numbers, rational strings, polynomials or fractions."""
    if not isinstance(obj, dict):
        _fail("matrix must be a JSON object")
    try:
        r, c, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        _fail(f"matrix needs rows, cols and entries: {exc}")
    if r < 0 or c < 0 or not isinstance(entries, list) or len(entries) != r * c:
        _fail(f"matrix is {r}x{c} but has {len(entries) if isinstance(entries, list) else '?'} entries")
    ctx = ctx or _context_for(obj)
    fractional = any(isinstance(e, dict) and "num" in e for e in entries)
    vars_ = obj.get("vars")
    out = []
    for e in entries:
        if isinstance(e, dict) and "num" in e:
            out.append(fraction_from_json(e, ctx))
        elif isinstance(e, dict):
            if "vars" not in e and vars_ is not None:
                e = dict(e, vars=vars_)
            out.append(poly_from_json(e, ctx))
        elif isinstance(e, (int, str)) and not isinstance(e, bool):
            out.append(poly_from_json({"vars": [], "terms": [{"c": str(e), "e": []}]}, ctx))
        else:
            _fail(f"bad matrix entry {e!r}")
    if fractional:
        var = next((e.var for e in out if isinstance(e, MonicFraction)), None)
        out = [e if isinstance(e, MonicFraction) else MonicFraction(e, None, var) for e in out]
        zero = MonicFraction(ctx.zero, None, var)
    else:
        zero = ctx.zero
    return Mat(r, c, out, zero)


def matrix_to_json(M: Mat) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": [e.to_json() for e in M.entries]}


def certificate_to_json(c: EquivalenceCertificate) -> dict:
    return {k: matrix_to_json(getattr(c, k)) for k in ("E", "F", "A", "B")}


def certificate_from_json(obj) -> EquivalenceCertificate:
    if not isinstance(obj, dict) or any(k not in obj for k in ("E", "F", "A", "B")):
        _fail("certificate needs E, F, A and B")
    names: list[str] = []
    for k in ("E", "F", "A", "B"):
        if not isinstance(obj[k], dict):
            _fail(f"certificate field {k} is not a matrix")
        for n in _context_for(obj[k]).names:
            if n not in names:
                names.append(n)
    ctx = VarContext(names)
    E, F, A, B = (matrix_from_json(obj[k], ctx) for k in ("E", "F", "A", "B"))
    return EquivalenceCertificate(E, F, A, B)


def translation_certificate_from_json(obj):
    from .patching import TranslationCertificate

    if not isinstance(obj, dict) or any(k not in obj for k in ("E", "j", "A", "B", "var", "aux")):
        _fail("translation certificate needs E, j, A, B, var and aux")
    names: list[str] = []
    for part in (obj["E"], obj["A"], obj["B"]):
        for n in _context_for(part).names:
            if n not in names:
                names.append(n)
    for n in list(obj["j"].get("vars", [])) + [obj["var"], obj["aux"]]:
        if n not in names:
            names.append(n)
    ctx = VarContext(names)
    return TranslationCertificate(matrix_from_json(obj["E"], ctx), poly_from_json(obj["j"], ctx),
                                  matrix_from_json(obj["A"], ctx), matrix_from_json(obj["B"], ctx),
                                  obj["var"], obj["aux"])


def cover_from_json(obj, ctx: VarContext):
    """``{"var": "x", "patches": [{"point": {...}, "A": M, "B": M}], "bezout": [poly, ...]}``.

    ``bezout`` may be omitted when one variable remains; the patches then seed
    the automatic point search.
    """
    from .solver import Cover, LocalPatch

    try:
        patches = tuple(LocalPatch(point_from_json({"point": p["point"]}),
                                   matrix_from_json(p["A"], ctx), matrix_from_json(p["B"], ctx))
                        for p in obj["patches"])
        bezout = None
        if obj.get("bezout") is not None:
            bezout = tuple(poly_from_json(u, ctx) for u in obj["bezout"])
        return Cover(obj["var"], patches, bezout)
    except (KeyError, TypeError) as exc:
        _fail(f"bad cover: {exc}")


def config_from_json(obj):
    from .solver import SolverConfig

    if not isinstance(obj, dict):
        _fail("config must be a JSON object")
    try:
        return SolverConfig.from_json(obj)
    except (TypeError, ValueError) as exc:
        _fail(f"bad config: {exc}")
