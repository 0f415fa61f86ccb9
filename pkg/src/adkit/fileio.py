"""The algebra file format, witness files, and assignment strings.

An algebra file is a JSON object::

    { "dim": 3,
      "params": ["a", "b"],
      "kind": "associative" | "antidendriform",
      "mul": [[i, j, k, "coeff"], ...],          # kind = associative
      "rhd": [[i, j, k, "coeff"], ...],          # kind = antidendriform
      "lhd": [[i, j, k, "coeff"], ...] }

Indices are 1-based, omitted entries are zero, and coefficients use the
coefficient grammar over the declared parameter names.  This is the single
interchange format for every CLI command; export followed by parse is exact.

A witness file holds a square matrix of coefficient expressions::

    { "dim": 3, "entries": [["1", "0", "0"], ...] }

With an optional ``"radicand": "2"``, entries may instead be two-element
lists ``["aexpr", "bexpr"]`` meaning a + b*sqrt(radicand).
"""

from __future__ import annotations

import json
from fractions import Fraction
from .algebra import AdPair, StructureConstants, UnaryAlgebra
from .errors import AlgebraFormatError
from .scalars import (PARAM_NAMES, Poly, QuadExt, format_poly,
                      is_rational_square, parse_rational, poly_parse)


def _parse_entry_list(raw, dim: int, params, where: str) -> StructureConstants:
    if not isinstance(raw, list):
        raise AlgebraFormatError(f"{where!r} must be a list of [i, j, k, coeff] rows")
    table = {}
    for row in raw:
        if (not isinstance(row, list) or len(row) != 4
                or not all(isinstance(x, int) for x in row[:3])):
            raise AlgebraFormatError(f"bad row in {where!r}: {row!r}")
        i, j, k, coeff = row
        if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
            raise AlgebraFormatError(f"index out of range in {where!r}: {row!r}")
        if (i, j, k) in table:
            raise AlgebraFormatError(f"duplicate entry ({i},{j},{k}) in {where!r}")
        if not isinstance(coeff, str):
            raise AlgebraFormatError(f"coefficient must be a string in {where!r}: {row!r}")
        table[(i, j, k)] = poly_parse(coeff, params)
    return StructureConstants.from_table(dim, table, params)


def parse_algebra(text: str):
    """Parse an algebra file; returns UnaryAlgebra or AdPair."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise AlgebraFormatError("top level must be an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraFormatError("'dim' must be a positive integer")
    params = tuple(doc.get("params", []))
    for p in params:
        if p not in PARAM_NAMES:
            raise AlgebraFormatError(
                f"unknown parameter {p!r}; allowed: {', '.join(PARAM_NAMES)}")
    kind = doc.get("kind")
    if kind == "associative":
        if "mul" not in doc:
            raise AlgebraFormatError("associative file needs a 'mul' table")
        sc = _parse_entry_list(doc["mul"], dim, params, "mul")
        return UnaryAlgebra(sc, label=doc.get("label"))
    if kind == "antidendriform":
        if "rhd" not in doc or "lhd" not in doc:
            raise AlgebraFormatError("antidendriform file needs 'rhd' and 'lhd' tables")
        rhd = _parse_entry_list(doc["rhd"], dim, params, "rhd")
        lhd = _parse_entry_list(doc["lhd"], dim, params, "lhd")
        return AdPair(rhd, lhd, label=doc.get("label"))
    raise AlgebraFormatError("'kind' must be 'associative' or 'antidendriform'")


def _entry_rows(sc: StructureConstants):
    rows = []
    for (i, j, k), p in sorted(sc.entries()):
        rows.append([i + 1, j + 1, k + 1, format_poly(p)])
    return rows


def render_algebra(obj, label: str | None = None) -> str:
    """Serialise to the file format (sorted keys, canonical coefficients)."""
    if isinstance(obj, UnaryAlgebra):
        doc = {"dim": obj.dim, "kind": "associative",
               "params": sorted(obj.sc.variables()),
               "mul": _entry_rows(obj.sc)}
        label = label if label is not None else obj.label
    elif isinstance(obj, AdPair):
        doc = {"dim": obj.dim, "kind": "antidendriform",
               "params": sorted(obj.variables()),
               "rhd": _entry_rows(obj.rhd), "lhd": _entry_rows(obj.lhd)}
        label = label if label is not None else obj.label
    else:
        raise TypeError(f"cannot render {type(obj).__name__}")
    if label:
        doc["label"] = label
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_assignment(text: str) -> dict[str, Fraction]:
    """Parse ``a=1/2,l=-1`` into a name-to-rational mapping."""
    out: dict[str, Fraction] = {}
    if not text.strip():
        return out
    for piece in text.split(","):
        if "=" not in piece:
            raise AlgebraFormatError(f"bad assignment {piece!r}; expected name=value")
        name, _, value = piece.partition("=")
        name = name.strip()
        if not name.isidentifier():
            raise AlgebraFormatError(f"bad parameter name {name!r}")
        if name in out:
            raise AlgebraFormatError(f"parameter {name!r} assigned twice")
        out[name] = parse_rational(value.strip())
    return out


def parse_rational_or_none(text: str | None) -> Fraction | None:
    return None if text is None else parse_rational(text)


def parse_witness(text: str):
    """Parse a witness file into (matrix rows, radicand or None).

    Plain entries become polynomials; with a radicand, two-element entries
    become quadratic-extension scalars.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"not valid JSON: {exc}") from exc
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraFormatError("'dim' must be a positive integer")
    entries = doc.get("entries")
    if (not isinstance(entries, list) or len(entries) != dim
            or any(not isinstance(r, list) or len(r) != dim for r in entries)):
        raise AlgebraFormatError("'entries' must be a dim x dim matrix")
    radicand = None
    if "radicand" in doc:
        radicand = parse_rational(str(doc["radicand"]))
        if is_rational_square(radicand):
            raise AlgebraFormatError(
                f"radicand {radicand} is a rational square; drop it instead")
    rows = []
    for row in entries:
        out = []
        for cell in row:
            if isinstance(cell, str):
                value = poly_parse(cell)
                if radicand is None:
                    out.append(value)
                elif value.is_constant():
                    out.append(QuadExt(value.constant_value(), 0, radicand))
                else:
                    raise AlgebraFormatError(
                        "parametric entries cannot mix with a radicand")
            elif isinstance(cell, list) and len(cell) == 2 and radicand is not None:
                a = poly_parse(cell[0])
                b = poly_parse(cell[1])
                if not (a.is_constant() and b.is_constant()):
                    raise AlgebraFormatError(
                        "parametric entries cannot mix with a radicand")
                out.append(QuadExt(a.constant_value(), b.constant_value(), radicand))
            else:
                raise AlgebraFormatError(f"bad witness entry {cell!r}")
        rows.append(tuple(out))
    return tuple(rows), radicand


def render_witness(rows, radicand=None) -> str:
    doc: dict = {"dim": len(rows)}
    if radicand is not None:
        doc["radicand"] = str(radicand)
        doc["entries"] = [[[str(c.a), str(c.b)] if isinstance(c, QuadExt)
                           else [format_poly(Poly.coerce(c)), "0"] for c in row]
                          for row in rows]
    else:
        doc["entries"] = [[format_poly(Poly.coerce(c)) for c in row] for row in rows]
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
