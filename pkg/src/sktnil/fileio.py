"""The algebra file format (JSON) and report serialisation.

An algebra file looks like::

    {
      "format_version": 1,
      "name": "n4_abelian",
      "dim": 4,
      "brackets": [
        {"i": 1, "j": 2, "targets": [{"k": 3, "coeff": "1"}]}
      ],
      "J": {"pairs": [[1, 2], [3, 4]]},
      "metric": "identity",
      "provenance": {"source": "..."}
    }

``J`` may instead be ``{"matrix": [[...], ...]}`` (row-major, ``J e_i`` is
column i) and ``metric`` a full symmetric matrix.  All numbers that can be
non-integral are rational strings such as ``"-5/2"``; indices are 1-based and
brackets need ``i < j``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ValidationError
from .exactnum import format_rational, parse_rational
from .hermitian import ComplexStructure, HermitianTriple, Metric
from .liealg import LieAlgebra

FORMAT_VERSION = 1


def _rational(value, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except ZeroDivisionError:
        raise ValidationError("zero_denominator", f"{where}: {value!r} has zero denominator", witness=where) from None
    except ValueError:
        raise ValidationError("rational_syntax", f"{where}: {value!r} is not a rational string", witness=where) from None


def _index(value, dim: int, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError("index_type", f"{where}: index {value!r} is not an integer", witness=where)
    if not 1 <= value <= dim:
        raise ValidationError("index_range", f"{where}: index {value} outside 1..{dim}", witness=(where, value))
    return value


def _matrix(rows, dim: int, where: str):
    if not isinstance(rows, list) or len(rows) != dim or any(not isinstance(r, list) or len(r) != dim for r in rows):
        raise ValidationError("matrix_shape", f"{where} must be a {dim}x{dim} list of lists", witness=where)
    return [[_rational(x, f"{where}[{r + 1}][{c + 1}]") for c, x in enumerate(row)] for r, row in enumerate(rows)]


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            "syntax", f"line {exc.lineno}, column {exc.colno}: {exc.msg}", witness=(exc.lineno, exc.colno)
        ) from None
    if not isinstance(doc, dict):
        raise ValidationError("syntax", "top level must be an object", witness=type(doc).__name__)
    return doc


def triple_from_document(doc: dict, validate: bool = True) -> HermitianTriple:
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValidationError("format_version", f"unsupported format_version {version!r}", witness=version)
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise ValidationError("dim", f"dim must be a nonnegative integer, got {dim!r}", witness=dim)

    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for n, rec in enumerate(doc.get("brackets", []), start=1):
        where = f"brackets[{n}]"
        if not isinstance(rec, dict):
            raise ValidationError("syntax", f"{where} must be an object", witness=where)
        i = _index(rec.get("i"), dim, f"{where}.i")
        j = _index(rec.get("j"), dim, f"{where}.j")
        if not i < j:
            raise ValidationError("bracket_order", f"{where}: need i < j, got ({i}, {j})", witness=(i, j))
        if (i, j) in brackets:
            raise ValidationError("duplicate_bracket", f"{where}: bracket ({i}, {j}) listed twice", witness=(i, j))
        row: dict[int, Fraction] = {}
        for m, t in enumerate(rec.get("targets", []), start=1):
            tw = f"{where}.targets[{m}]"
            if not isinstance(t, dict):
                raise ValidationError("syntax", f"{tw} must be an object", witness=tw)
            k = _index(t.get("k"), dim, f"{tw}.k")
            if k in row:
                raise ValidationError("duplicate_target", f"{tw}: target e{k} listed twice", witness=(i, j, k))
            row[k] = _rational(t.get("coeff"), f"{tw}.coeff")
        brackets[(i, j)] = row
    L = LieAlgebra(dim, brackets)

    jspec = doc.get("J")
    if not isinstance(jspec, dict):
        raise ValidationError("J_syntax", 'J must be {"pairs": [...]} or {"matrix": [...]}', witness=jspec)
    if "pairs" in jspec:
        pairs = []
        for n, p in enumerate(jspec["pairs"], start=1):
            if not isinstance(p, list) or len(p) != 2:
                raise ValidationError("J_syntax", f"J.pairs[{n}] must be a pair", witness=n)
            pairs.append((_index(p[0], dim, f"J.pairs[{n}][1]"), _index(p[1], dim, f"J.pairs[{n}][2]")))
        J = ComplexStructure.from_pairs(dim, pairs)
    elif "matrix" in jspec:
        J = ComplexStructure(_matrix(jspec["matrix"], dim, "J.matrix"))
    else:
        raise ValidationError("J_syntax", 'J must have "pairs" or "matrix"', witness=sorted(jspec))

    mspec = doc.get("metric", "identity")
    if mspec == "identity":
        g = Metric.identity(dim)
    else:
        g = Metric(_matrix(mspec, dim, "metric"))

    return HermitianTriple(
        L, J, g, name=doc.get("name"), provenance=dict(doc.get("provenance", {})), validate=validate
    )


def parse_algebra(text: str) -> HermitianTriple:
    """Parse and fully validate an algebra file."""
    return triple_from_document(load_document(text))


def read_algebra(path) -> HermitianTriple:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def triple_to_document(T: HermitianTriple) -> dict:
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION}
    if T.name:
        doc["name"] = T.name
    doc["dim"] = T.dim
    doc["brackets"] = [
        {"i": i, "j": j, "targets": [{"k": k, "coeff": format_rational(c)} for k, c in row.items()]}
        for (i, j), row in T.L.brackets.items()
    ]
    pairs = T.J.pairs if T.J.pairs is not None else T.J.detect_pairs()
    if pairs is not None:
        doc["J"] = {"pairs": [list(p) for p in pairs]}
    else:
        doc["J"] = {"matrix": [[format_rational(x) for x in row] for row in T.J.matrix]}
    if T.g.is_identity():
        doc["metric"] = "identity"
    else:
        doc["metric"] = [[format_rational(x) for x in row] for row in T.g.matrix]
    if T.provenance:
        doc["provenance"] = T.provenance
    return doc


def _compact_dumps(doc: dict) -> str:
    """Pretty JSON with one bracket record / matrix row per line."""
    lines = ["{"]
    keys = list(doc)
    for n, key in enumerate(keys):
        value = doc[key]
        comma = "," if n < len(keys) - 1 else ""
        if key == "brackets" and value:
            lines.append(f'  "brackets": [')
            for m, rec in enumerate(value):
                c = "," if m < len(value) - 1 else ""
                lines.append("    " + json.dumps(rec, ensure_ascii=False) + c)
            lines.append("  ]" + comma)
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"  {json.dumps(key)}: [")
            for m, row in enumerate(value):
                c = "," if m < len(value) - 1 else ""
                lines.append("    " + json.dumps(row, ensure_ascii=False) + c)
            lines.append("  ]" + comma)
        elif isinstance(value, dict) and key == "J" and "matrix" in value:
            lines.append('  "J": {"matrix": [')
            rows = value["matrix"]
            for m, row in enumerate(rows):
                c = "," if m < len(rows) - 1 else ""
                lines.append("    " + json.dumps(row) + c)
            lines.append("  ]}" + comma)
        elif isinstance(value, dict) and key == "provenance":
            body = json.dumps(value, indent=2, sort_keys=True, ensure_ascii=False).replace("\n", "\n  ")
            lines.append(f"  {json.dumps(key)}: {body}{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value, ensure_ascii=False)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_algebra(T: HermitianTriple) -> str:
    """Canonical text; ``parse_algebra(serialize_algebra(T)) == T``."""
    return _compact_dumps(triple_to_document(T))


def write_algebra(T: HermitianTriple, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_algebra(T))


def form_to_list(form) -> list:
    """``[[[i, j, k], "coeff"], ...]`` in increasing tuple order."""
    return [[list(key), format_rational(c)] for key, c in form.items()]


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
