"""JSON model descriptions.

Three kinds are understood::

    {"kind": "contact-chart", "coordinates": [{"name": "x", "degree": 0}, ...],
     "alpha": "dz - y*dx", "S": "..."}
    {"kind": "jacobi", "base_dim": 3, "coordinates": ["x", "y", "z"],
     "Lambda": [["0", "1", "0"], ...], "E": ["0", "0", "1"]}
    {"kind": "courant-jacobi", "base_dim": 0, "rank": 2,
     "g": [["0", "1"], ["1", "0"]], "a": [...], "b": [...], "T": [[[...]]],
     "T_form": "full" | "skew"}

``coordinates`` is optional for the two algebroid kinds (default ``x1..xd``).
With ``"T_form": "skew"`` the array ``T`` is read as the totally skew part and
the rest of the bracket array is filled in from ``g`` and ``b``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .algebra import Chart, ChartError
from .contact import ContactChart
from .expr import ParseError, parse_expression
from .models import (
    ContactModel,
    CourantJacobiData,
    JacobiPair,
    base_chart,
    build_cj_contact,
    build_jacobi_contact,
    default_names,
)

KINDS = ("contact-chart", "jacobi", "courant-jacobi")


class ModelError(ValueError):
    """Invalid model file; ``where`` names the offending entry."""

    def __init__(self, message: str, where: str = "", line: int | None = None, column: int | None = None):
        self.where = where
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" at line {line}, column {column}"
        prefix = f"{where}: " if where else ""
        super().__init__(f"{prefix}{message}{loc}")


@dataclass
class ModelData:
    kind: str
    model: ContactModel
    data: Any = None  # JacobiPair or CourantJacobiData
    path: str = ""

    @property
    def contact(self) -> ContactChart:
        return self.model.contact

    @property
    def chart(self) -> Chart:
        return self.model.chart


def _expr(text, chart: Chart, where: str):
    if isinstance(text, (int,)) and not isinstance(text, bool):
        text = str(text)
    try:
        return parse_expression(text, chart)
    except ParseError as exc:
        raise ModelError(exc.message, where, exc.line, exc.column) from None


def _table(value, shape: tuple, chart: Chart, where: str):
    if len(shape) == 0:
        return _expr(value, chart, where)
    if not isinstance(value, list) or len(value) != shape[0]:
        raise ModelError(f"expected a list of length {shape[0]}", where)
    return [_table(v, shape[1:], chart, f"{where}[{i}]") for i, v in enumerate(value)]


def _names(doc: dict, d: int) -> list[str]:
    names = doc.get("coordinates")
    if names is None:
        return default_names(d)
    if not isinstance(names, list) or len(names) != d:
        raise ModelError(f"expected {d} base coordinate names", "coordinates")
    out = []
    for i, nm in enumerate(names):
        if isinstance(nm, dict):
            if nm.get("degree", 0) != 0:
                raise ModelError(f"base coordinate {nm.get('name')!r} must have degree 0", f"coordinates[{i}]")
            nm = nm.get("name")
        if not isinstance(nm, str) or not nm.isidentifier():
            raise ModelError(f"invalid coordinate name {nm!r}", f"coordinates[{i}]")
        out.append(nm)
    return out


def _int_field(doc: dict, key: str) -> int:
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise ModelError("expected a non-negative integer", key)
    return v


def _contact_chart(doc: dict) -> ModelData:
    coords = doc.get("coordinates")
    if not isinstance(coords, list) or not coords:
        raise ModelError("expected a non-empty list of coordinates", "coordinates")
    decl = []
    for i, c in enumerate(coords):
        where = f"coordinates[{i}]"
        if not isinstance(c, dict) or "name" not in c:
            raise ModelError("expected {name, degree}", where)
        name, degree = c["name"], c.get("degree", 0)
        if not isinstance(name, str) or not name.isidentifier():
            raise ModelError(f"invalid coordinate name {name!r}", where)
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 0:
            raise ModelError(f"coordinate {name!r} has invalid degree {degree!r}", where)
        decl.append((name, degree))
    try:
        chart = Chart(decl)
    except ChartError as exc:
        raise ModelError(str(exc), "coordinates") from None
    if "alpha" not in doc:
        raise ModelError("missing contact form", "alpha")
    alpha = _expr(doc["alpha"], chart, "alpha")
    bideg = alpha.bidegree()
    if not alpha or bideg == "mixed" or bideg[0] != 1:
        raise ModelError("alpha must be a nonzero homogeneous 1-form", "alpha")
    n = bideg[1]
    S = _expr(doc["S"], chart, "S") if "S" in doc else chart.zero()
    if S:
        if not S.is_function():
            raise ModelError("S must be a function", "S")
        deg = S.degree()
        if deg != n + 1:
            offenders = [
                g.name
                for g in chart.generators
                if g.kind == "coordinate" and any(m[chart.gen_index(g.name)] for m in S.terms)
            ]
            raise ModelError(f"S must have degree {n + 1} (involves {', '.join(offenders)})", "S")
    fields = {}
    for name, _ in decl:
        fields[name] = doc.get("fields", {}).get(name, "")
    fields = {k: v for k, v in fields.items() if v}
    return ModelData("contact-chart", ContactModel(ContactChart(chart, alpha), S, fields))


def _jacobi(doc: dict) -> ModelData:
    d = _int_field(doc, "base_dim")
    names = _names(doc, d)
    B = base_chart(names)
    Lam = _table(doc.get("Lambda"), (d, d), B, "Lambda")
    E = _table(doc.get("E"), (d,), B, "E")
    try:
        J = JacobiPair(Lam, E, names)
    except ValueError as exc:
        raise ModelError(str(exc), "Lambda") from None
    return ModelData("jacobi", build_jacobi_contact(J), J)


def _courant_jacobi(doc: dict) -> ModelData:
    d = _int_field(doc, "base_dim")
    r = _int_field(doc, "rank")
    names = _names(doc, d)
    B = base_chart(names)
    g = _table(doc.get("g"), (r, r), B, "g")
    gq = []
    for i, row in enumerate(g):
        out = []
        for j, c in enumerate(row):
            if any(any(m) for m in c.terms):
                raise ModelError("pairing entries must be rational constants", f"g[{i}][{j}]")
            out.append(c.constant_term())
        gq.append(out)
    a = _table(doc["a"], (r, d), B, "a") if "a" in doc else None
    b = _table(doc["b"], (r,), B, "b") if "b" in doc else None
    T = _table(doc["T"], (r, r, r), B, "T") if "T" in doc else None
    form = doc.get("T_form", "full")
    try:
        if form == "full":
            D = CourantJacobiData(gq, a, b, T, names)
        elif form == "skew":
            zero = [[[B.zero()] * r for _ in range(r)] for _ in range(r)]
            D = CourantJacobiData.from_skew(gq, T or zero, a, b, names)
        else:
            raise ModelError("T_form must be 'full' or 'skew'", "T_form")
    except ModelError:
        raise
    except ValueError as exc:
        raise ModelError(str(exc), "g") from None
    return ModelData("courant-jacobi", build_cj_contact(D), D)


def load_model(doc: dict, path: str = "") -> ModelData:
    if not isinstance(doc, dict):
        raise ModelError("top level must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ModelError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", "kind")
    loader = {"contact-chart": _contact_chart, "jacobi": _jacobi, "courant-jacobi": _courant_jacobi}[kind]
    md = loader(doc)
    md.path = path
    return md


def parse_model(path) -> ModelData:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(exc.msg, str(path), exc.lineno, exc.colno) from None
    return load_model(doc, str(path))
