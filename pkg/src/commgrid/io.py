"""The JSON module file format.

A file looks like::

    {
      "field": {"kind": "prime", "p": 5},
      "quiver": [{"size": 2, "orientation": ["forward"]}, {"size": 3, "orientation": ["forward", "forward"]}],
      "dims": {"1,1": 1, "1,2": 1},
      "maps": {"1,1->1,2": [[1]]}
    }

Unlisted vertices have dimension 0. A map is written only when both ends are
nonzero; omitted maps are zero. Entries are integers in ``[0, p)`` over F_p
and strings ``"a"`` or ``"a/b"`` (lowest terms, ``b > 0``) over Q.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .linalg import FieldSpec, Matrix
from .quiver import GridQuiver, make_grid, parse_vertex, vertex_name
from .rep import Rep, validate


class ModuleFormatError(ValueError):
    """A module file is malformed; the message names the offending location."""


class ModuleValidationError(ModuleFormatError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("module violates the grid relations:\n  " + "\n  ".join(violations))


def _entry_out(field: FieldSpec, x):
    if field.is_prime:
        return int(x)
    return str(Fraction(x))


def to_dict(m: Rep) -> dict:
    q, field = m.quiver, m.field
    return {
        "field": {"kind": "prime", "p": field.p} if field.is_prime else {"kind": "rational"},
        "quiver": [{"size": s, "orientation": list(w)} for s, w in zip(q.sizes, q.orientations)],
        "dims": {vertex_name(v): m.dim(v) for v in q.vertices if m.dim(v)},
        "maps": {a.name: [[_entry_out(field, x) for x in row] for row in m.map(a).to_lists()]
                 for a in q.arrows if m.dim(a.source) and m.dim(a.target)},
    }


def dumps(m: Rep) -> str:
    """Canonical text: one line per vertex and per map, in grid order."""
    d = to_dict(m)

    def one(x):
        return json.dumps(x, separators=(", ", ": "))

    def block(mapping):
        if not mapping:
            return "{}"
        body = ",\n".join(f"    {one(k)}: {one(v)}" for k, v in mapping.items())
        return "{\n" + body + "\n  }"

    return ("{\n"
            f'  "field": {one(d["field"])},\n'
            f'  "quiver": {one(d["quiver"])},\n'
            f'  "dims": {block(d["dims"])},\n'
            f'  "maps": {block(d["maps"])}\n'
            "}\n")


def write_module(m: Rep, path) -> None:
    Path(path).write_text(dumps(m))


def _field(obj) -> FieldSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ModuleFormatError('field "field": expected {"kind": "prime", "p": P} or {"kind": "rational"}')
    try:
        if obj["kind"] == "rational":
            return FieldSpec.rational()
        if obj["kind"] == "prime":
            return FieldSpec.prime(obj.get("p"))
    except ValueError as exc:
        raise ModuleFormatError(f'field "field": {exc}') from None
    raise ModuleFormatError(f'field "field.kind": unknown kind {obj["kind"]!r}')


def _quiver(obj) -> GridQuiver:
    if not isinstance(obj, list) or not obj:
        raise ModuleFormatError('field "quiver": expected a nonempty list of factors')
    factors = []
    for k, f in enumerate(obj):
        if not isinstance(f, dict) or not isinstance(f.get("size"), int):
            raise ModuleFormatError(f'field "quiver[{k}]": expected {{"size": n, "orientation": [...]}}')
        factors.append((f["size"], f.get("orientation")))
    try:
        return make_grid(factors)
    except ValueError as exc:
        raise ModuleFormatError(f'field "quiver": {exc}') from None


def _entry_in(field: FieldSpec, x, where: str):
    if field.is_prime:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < field.p:
            raise ModuleFormatError(f"{where}: F_{field.p} entries are integers in [0, {field.p}), got {x!r}")
        return x
    if not isinstance(x, (str, int)) or isinstance(x, bool):
        raise ModuleFormatError(f'{where}: rational entries are strings "a/b", got {x!r}')
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise ModuleFormatError(f"{where}: cannot read {x!r} as a rational") from None


def from_dict(obj) -> Rep:
    if not isinstance(obj, dict):
        raise ModuleFormatError("top level: expected an object")
    unknown = set(obj) - {"field", "quiver", "dims", "maps"}
    if unknown:
        raise ModuleFormatError(f"top level: unknown keys {sorted(unknown)}")
    for key in ("field", "quiver"):
        if key not in obj:
            raise ModuleFormatError(f'top level: missing "{key}"')
    field = _field(obj["field"])
    q = _quiver(obj["quiver"])

    dims = {}
    for name, d in (obj.get("dims") or {}).items():
        where = f'field "dims.{name}"'
        try:
            v = q.check_vertex(parse_vertex(name))
        except ValueError as exc:
            raise ModuleFormatError(f"{where}: {exc}") from None
        if isinstance(d, bool) or not isinstance(d, int) or d < 0:
            raise ModuleFormatError(f"{where}: dimension must be a nonnegative integer, got {d!r}")
        dims[v] = d

    maps = {}
    for name, rows in (obj.get("maps") or {}).items():
        where = f'field "maps.{name}"'
        a = q.arrows_by_name.get(name)
        if a is None:
            raise ModuleFormatError(f"{where}: no such arrow in the grid")
        r, c = dims.get(a.target, 0), dims.get(a.source, 0)
        if not isinstance(rows, list) or any(not isinstance(row, list) for row in rows):
            raise ModuleFormatError(f"{where}: expected a list of rows")
        shape = (len(rows), len(rows[0]) if rows else 0)
        if shape != (r, c) or any(len(row) != c for row in rows):
            raise ModuleFormatError(f"{where}: arrow {name} needs a {r}x{c} matrix, got {shape[0]}x{shape[1]}")
        entries = [[_entry_in(field, x, f"{where}[{i}][{j}]") for j, x in enumerate(row)]
                   for i, row in enumerate(rows)]
        maps[a] = Matrix(field, entries, r, c)

    m = Rep(q, field, dims, maps)
    problems = validate(m)
    if problems:
        raise ModuleValidationError(problems)
    return m


def loads(text: str) -> Rep:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModuleFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(obj)


def parse_module(path) -> Rep:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModuleFormatError(f"{path}: {exc.strerror}") from None
    try:
        return loads(text)
    except ModuleValidationError:
        raise
    except ModuleFormatError as exc:
        raise ModuleFormatError(f"{path}: {exc}") from None


__all__ = ["ModuleFormatError", "ModuleValidationError", "to_dict", "from_dict", "dumps", "loads",
           "write_module", "parse_module"]
