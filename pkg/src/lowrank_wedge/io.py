"""JSON file formats.

Matrix:   {"scalar": kind, "p": modulus?, "rows": [[entry, ...], ...]}
Family:   {"scalar": kind, "p": modulus?, "M": m, "vectors": [[...], ...]}
K-forms:  {"scalar": kind, "p": modulus?, "k": k, "r": r?, "forms": [[blade, ...], ...]}
Graph:    {"scalar": kind?, "p": modulus?, "M": m, "color1": [[...]], "color2": [[...]]}
Factors:  {"scalar": kind, "p": modulus?, "M": m, "x0": [[...]], "x1": [[...]]}

Entries: bigint and modp as decimal strings (plain JSON integers are also
accepted), rationals as "a/b" strings, complex as [re, im] pairs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .exterior import KFormFamily, TwoFormFamily
from .mixed_disc import Rank2Factors
from .reduction import TwoColorGraph
from .ring import DEFAULT_PRIME, SCALAR_KINDS, ModP, rows_kind, scalar_kind


class FormatError(ValueError):
    pass


def parse_scalar(raw: Any, kind: str, p: int = DEFAULT_PRIME):
    try:
        if kind == "bigint":
            if isinstance(raw, bool) or not isinstance(raw, (int, str)):
                raise FormatError(f"bigint entry must be a decimal string, got {raw!r}")
            return int(raw)
        if kind == "rational":
            if not isinstance(raw, (int, str)) or isinstance(raw, bool):
                raise FormatError(f"rational entry must be an 'a/b' string, got {raw!r}")
            return Fraction(raw)
        if kind == "modp":
            if isinstance(raw, bool) or not isinstance(raw, (int, str)):
                raise FormatError(f"modp entry must be a decimal string, got {raw!r}")
            return ModP(int(raw), p)
        if kind == "complex":
            if isinstance(raw, (list, tuple)) and len(raw) == 2:
                return complex(float(raw[0]), float(raw[1]))
            if isinstance(raw, (int, float)) and not isinstance(raw, bool):
                return complex(raw)
            raise FormatError(f"complex entry must be [re, im], got {raw!r}")
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"cannot parse {raw!r} as {kind}: {exc}") from exc
    raise FormatError(f"unknown scalar kind {kind!r}; expected one of {SCALAR_KINDS}")


def format_scalar(x: Any):
    """JSON-ready encoding of a scalar."""
    kind = scalar_kind(x)
    if kind == "bigint":
        return str(int(x))
    if kind == "rational":
        return f"{x.numerator}/{x.denominator}"
    if kind == "modp":
        return str(x.value)
    return [float(complex(x).real), float(complex(x).imag)]


def scalar_to_text(x: Any) -> str:
    """Exact string for exact kinds, ``"re im"`` with 17 significant digits for complex."""
    if scalar_kind(x) == "complex":
        z = complex(x)
        return f"{z.real:.17g} {z.imag:.17g}"
    enc = format_scalar(x)
    return enc


def _header(doc: dict) -> tuple[str, int]:
    kind = doc.get("scalar", "bigint")
    if kind not in SCALAR_KINDS:
        raise FormatError(f"unknown scalar kind {kind!r}; expected one of {SCALAR_KINDS}")
    p = int(doc.get("p", DEFAULT_PRIME))
    return kind, p


def _rows(raw, kind, p, what="rows"):
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise FormatError(f"{what} must be a list of lists")
    return [[parse_scalar(x, kind, p) for x in row] for row in raw]


def _header_for(rows) -> dict:
    kind = rows_kind(rows)
    doc: dict = {"scalar": kind}
    if kind == "modp":
        doc["p"] = next(x.p for row in rows for x in row)
    return doc


def _encode_rows(rows):
    return [[format_scalar(x) for x in row] for row in rows]


def read_json(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top level must be an object")
    return doc


def write_json(path, doc: dict):
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def matrix_from_doc(doc: dict):
    kind, p = _header(doc)
    if "rows" not in doc:
        raise FormatError("matrix document needs 'rows'")
    return _rows(doc["rows"], kind, p)


def matrix_to_doc(rows) -> dict:
    doc = _header_for(rows)
    doc["rows"] = _encode_rows(rows)
    return doc


def family_from_doc(doc: dict) -> TwoFormFamily:
    kind, p = _header(doc)
    vectors = _rows(doc.get("vectors"), kind, p, "vectors")
    family = TwoFormFamily(vectors)
    if "M" in doc and int(doc["M"]) != family.m:
        raise FormatError(f"M={doc['M']} but {len(vectors)} vectors given")
    return family


def family_to_doc(family: TwoFormFamily) -> dict:
    doc = _header_for(family.vectors)
    doc["M"] = family.m
    doc["vectors"] = _encode_rows(family.vectors)
    return doc


def kform_from_doc(doc: dict) -> KFormFamily:
    kind, p = _header(doc)
    forms = doc.get("forms")
    if not isinstance(forms, list):
        raise FormatError("k-form document needs 'forms'")
    parsed = [[_rows(blade, kind, p, "blade") for blade in form] for form in forms]
    return KFormFamily(parsed, k=int(doc["k"]), r=doc.get("r"))


def kform_to_doc(family: KFormFamily) -> dict:
    doc = _header_for([v for form in family.forms for blade in form for v in blade])
    doc.update(k=family.k, r=family.r)
    doc["forms"] = [[_encode_rows(blade) for blade in form] for form in family.forms]
    return doc


def graph_from_doc(doc: dict) -> TwoColorGraph:
    kind, p = _header(doc)
    g = TwoColorGraph(_rows(doc.get("color1"), kind, p, "color1"), _rows(doc.get("color2"), kind, p, "color2"))
    if "M" in doc and int(doc["M"]) != g.m:
        raise FormatError(f"M={doc['M']} but {2 * g.m} rows given")
    return g


def graph_to_doc(g: TwoColorGraph) -> dict:
    doc = _header_for(g.color1 + g.color2)
    doc["M"] = g.m
    doc["color1"] = _encode_rows(g.color1)
    doc["color2"] = _encode_rows(g.color2)
    return doc


def factors_from_doc(doc: dict) -> Rank2Factors:
    kind, p = _header(doc)
    f = Rank2Factors(_rows(doc.get("x0"), kind, p, "x0"), _rows(doc.get("x1"), kind, p, "x1"))
    if "M" in doc and int(doc["M"]) != f.m:
        raise FormatError(f"M={doc['M']} but {f.m} factor pairs given")
    return f


def factors_to_doc(f: Rank2Factors) -> dict:
    doc = _header_for(f.x0 + f.x1)
    doc["M"] = f.m
    doc["x0"] = _encode_rows(f.x0)
    doc["x1"] = _encode_rows(f.x1)
    return doc
