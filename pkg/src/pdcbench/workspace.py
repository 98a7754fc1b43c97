"""JSON workspace files: loading with full re-verification, canonical saving, report emission.

Scalars are integers or rational strings "p/q" (residues for F_p), matrices
are row-major nested arrays, complexes map degrees to {module, differential}.
Saving is canonical (sorted keys, fixed indentation), so load -> save ->
load -> save is byte-identical.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from importlib import resources

import jsonschema
from json_source_map import calculate as source_map

from .algebra import (
    Algebra,
    AlgebraError,
    dual_numbers,
    ground_algebra,
    kA2,
    path_algebra,
    truncated_polynomial,
    upper_triangular,
)
from .complexes import ChainMap, Complex, ComplexError
from .linalg import ExactMatrix, FieldSpec, QQ
from .modules import (
    Module,
    ModuleError,
    dual,
    indecomposable_injective,
    indecomposable_projective,
    regular_bimodule,
    regular_module,
    simple_modules,
)
from .validators import PseudoDualizingCandidate


class LoadError(ValueError):
    """A workspace failed the schema or an invariant; carries the JSON pointer and line."""

    def __init__(self, message, pointer="", line=None):
        self.pointer = pointer
        self.line = line
        where = f" at {pointer or '/'}" + (f" (line {line})" if line is not None else "")
        super().__init__(f"{message}{where}")


def schema():
    with resources.files(__package__).joinpath("workspace.schema.json").open() as fh:
        return json.load(fh)


def parse_field(spec):
    """'QQ', 'Q', 'rationals', 'GF(p)', 'F_p', 'Fp', a bare prime, or a schema dict."""
    if isinstance(spec, FieldSpec):
        return spec
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "rationals":
            return QQ
        if kind in ("prime-field", "prime"):
            return FieldSpec.prime(spec.get("characteristic", 0))
        raise ValueError(f"unknown field kind {kind!r}")
    s = str(spec).strip()
    if s.lower() in ("qq", "q", "rationals", "0"):
        return QQ
    for prefix in ("GF(", "gf("):
        if s.startswith(prefix) and s.endswith(")"):
            return FieldSpec.prime(int(s[len(prefix):-1]))
    for prefix in ("F_", "f_", "F", "f"):
        if s.startswith(prefix) and s[len(prefix):].isdigit():
            return FieldSpec.prime(int(s[len(prefix):]))
    if s.isdigit():
        return FieldSpec.prime(int(s))
    raise ValueError(f"cannot parse field {spec!r}")


def field_to_json(fld):
    if fld.is_rational:
        return {"kind": "rationals"}
    return {"characteristic": fld.characteristic, "kind": "prime-field"}


def matrix_to_json(m):
    f = m.field
    return [[f.format(x) for x in row] for row in m.tolist()]


def matrix_from_json(fld, rows, nrows, ncols, where):
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        got = (len(rows), len(rows[0]) if rows else 0)
        raise _Invariant(f"matrix has shape {got}, expected {(nrows, ncols)}", where)
    if nrows == 0 or ncols == 0:
        return ExactMatrix.zeros(fld, nrows, ncols)
    return ExactMatrix(fld, [[fld.scalar(x) for x in r] for r in rows], ncols)


class _Invariant(Exception):
    def __init__(self, message, pointer):
        super().__init__(message)
        self.pointer = pointer


@dataclass
class Workspace:
    field: FieldSpec = QQ
    algebras: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    complexes: dict = dc_field(default_factory=dict)
    candidates: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    tasks: list = dc_field(default_factory=list)

    def algebra(self, name):
        if name == "k" and "k" not in self.algebras:
            return ground_algebra(self.field)
        return self.algebras[name]

    def lookup(self, name):
        """A module, complex or candidate by name."""
        for table in (self.candidates, self.complexes, self.modules):
            if name in table:
                return table[name]
        raise KeyError(f"no object named {name!r}")

    def name_of_algebra(self, alg):
        for n, a in self.algebras.items():
            if a is alg:
                return n
        for n, a in self.algebras.items():
            if a == alg:
                return n
        if alg.dim == 1:
            return "k"
        base = alg.name or "alg"
        base = "".join(ch if ch.isalnum() or ch in "_^()[]/+-" else "_" for ch in base)
        name, i = base, 1
        while name in self.algebras:
            i += 1
            name = f"{base}_{i}"
        self.algebras[name] = alg
        return name


# loading -------------------------------------------------------------------------------

def _builtin_algebra(fld, spec):
    b = spec["builtin"]
    if b == "k":
        return ground_algebra(fld)
    if b == "kA2":
        return kA2(fld)
    if b == "k[x]/(x^2)":
        return dual_numbers(fld)
    if b == "UT2":
        return upper_triangular(fld)
    return truncated_polynomial(fld, spec.get("n", 2))


def _load_algebra(fld, spec, ptr):
    try:
        if "builtin" in spec:
            return _builtin_algebra(fld, spec)
        if "quiver" in spec:
            q = spec["quiver"]
            rels = [{w: fld.scalar(c) for w, c in r.items()} for r in q.get("relations", [])]
            return path_algebra(fld, q["vertices"], q["arrows"], rels)
        alg = Algebra(fld, spec["structure"], spec["unit"], spec.get("labels"),
                      idempotents=spec.get("idempotents"), check=True)
    except (AlgebraError, ValueError, ZeroDivisionError) as exc:
        raise _Invariant(str(exc), ptr) from exc
    if "idempotents" in spec:
        _check_idempotents(alg, ptr)
    return alg


def _check_idempotents(alg, ptr):
    es = alg.primitive_idempotents()
    zero = tuple(alg.field.scalar(0) for _ in range(alg.dim))
    total = zero
    for i, e in enumerate(es):
        for j, f in enumerate(es):
            want = e if i == j else zero
            if tuple(alg.mul(e, f)) != want:
                raise _Invariant(f"idempotents {i} and {j} are not orthogonal idempotents", f"{ptr}/idempotents")
        total = tuple(a + b for a, b in zip(total, e))
    if total != alg.unit:
        raise _Invariant("idempotents do not sum to the unit", f"{ptr}/idempotents")


def _load_module(ws, spec, ptr):
    fld = ws.field
    try:
        if "builtin" in spec:
            alg = ws.algebra(spec["algebra"])
            b = spec["builtin"]
            t = spec.get("index", 0)
            if b == "regular":
                return regular_module(alg)
            if b == "regular-bimodule":
                return regular_bimodule(alg)
            if b == "dual-regular":
                return dual(regular_bimodule(alg))
            if b == "projective":
                return indecomposable_projective(alg, t)
            if b == "injective":
                return indecomposable_injective(alg, t)
            return simple_modules(alg)[t]
        left = ws.algebra(spec["left"])
        right = ws.algebra(spec.get("right", "k"))
    except KeyError as exc:
        raise _Invariant(f"unresolved reference {exc}", ptr) from exc
    except IndexError as exc:
        raise _Invariant("index out of range", ptr) from exc
    d = spec["dim"]

    def actions(alg, key):
        if key not in spec:
            if alg.dim == 1:
                return [ExactMatrix.identity(fld, d)]
            raise _Invariant(f"missing {key}", ptr)
        mats = spec[key]
        if len(mats) != alg.dim:
            raise _Invariant(f"{key} needs {alg.dim} matrices, got {len(mats)}", f"{ptr}/{key}")
        return [matrix_from_json(fld, m, d, d, f"{ptr}/{key}/{i}") for i, m in enumerate(mats)]

    try:
        return Module(left, right, actions(left, "left_action"), actions(right, "right_action"), check=True)
    except ModuleError as exc:
        raise _Invariant(str(exc), ptr) from exc


def _load_complex(ws, spec, ptr, name):
    terms, diffs = {}, {}
    for key, t in spec["terms"].items():
        n = int(key)
        m = t["module"]
        if isinstance(m, str):
            if m not in ws.modules:
                raise _Invariant(f"unresolved module {m!r}", f"{ptr}/terms/{key}/module")
            terms[n] = ws.modules[m]
        else:
            terms[n] = _load_module(ws, m, f"{ptr}/terms/{key}/module")
    left = ws.algebra(spec["left"]) if "left" in spec else None
    right = ws.algebra(spec["right"]) if "right" in spec else None
    if not terms and left is None:
        raise _Invariant("an empty complex needs 'left'", ptr)
    for key, t in spec["terms"].items():
        n = int(key)
        if "differential" in t:
            src = terms[n].dim
            tgt = terms[n + 1].dim if n + 1 in terms else 0
            diffs[n] = matrix_from_json(ws.field, t["differential"], tgt, src, f"{ptr}/terms/{key}/differential")
    try:
        return Complex(terms, diffs, left, right, name=name, check=True)
    except (ComplexError, ModuleError) as exc:
        raise _Invariant(str(exc), ptr) from exc


def _load_map(ws, spec, ptr):
    fld = ws.field
    try:
        if spec["kind"] == "algebra-map":
            s, t = ws.algebra(spec["source"]), ws.algebra(spec["target"])
            return {"kind": "algebra-map", "source": s, "target": t,
                    "matrix": matrix_from_json(fld, spec["matrix"], t.dim, s.dim, f"{ptr}/matrix")}
        s, t = ws.lookup(spec["source"]), ws.lookup(spec["target"])
    except KeyError as exc:
        raise _Invariant(f"unresolved reference {exc}", ptr) from exc
    s = s.complex if isinstance(s, PseudoDualizingCandidate) else s
    t = t.complex if isinstance(t, PseudoDualizingCandidate) else t
    comps = {}
    for key, m in spec["components"].items():
        n = int(key)
        comps[n] = matrix_from_json(fld, m, t[n].dim, s[n].dim, f"{ptr}/components/{key}")
    try:
        return ChainMap(s, t, comps, check=False)
    except ComplexError as exc:
        raise _Invariant(str(exc), ptr) from exc


def loads_workspace(text, field=None):
    """Parse and fully validate a workspace from JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"invalid JSON: {exc.msg}", "", exc.lineno) from exc
    positions = None

    def line_of(pointer):
        nonlocal positions
        if positions is None:
            try:
                positions = source_map(text)
            except Exception:
                positions = {}
        p = pointer
        while True:
            entry = positions.get(p)
            if entry is not None:
                return entry.value_start.line + 1
            if not p:
                return None
            p = p.rsplit("/", 1)[0]

    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        ptr = "".join(f"/{p}" for p in err.absolute_path)
        raise LoadError(f"schema violation: {err.message}", ptr, line_of(ptr))
    try:
        return _build(data, field, line_of)
    except _Invariant as exc:
        raise LoadError(str(exc), exc.pointer, line_of(exc.pointer)) from exc


def _build(data, field, line_of):
    fld = parse_field(field) if field is not None else parse_field(data["field"])
    ws = Workspace(field=fld)
    for name, spec in data.get("algebras", {}).items():
        alg = _load_algebra(fld, spec, f"/algebras/{name}")
        if "builtin" not in spec:
            alg.name = name
        ws.algebras[name] = alg
    for name, spec in data.get("modules", {}).items():
        m = _load_module(ws, spec, f"/modules/{name}")
        ws.modules[name] = Module._raw(m.left, m.right, m.lact, m.ract, name)
    for name, spec in data.get("complexes", {}).items():
        ws.complexes[name] = _load_complex(ws, spec, f"/complexes/{name}", name)
    for name, spec in data.get("candidates", {}).items():
        ptr = f"/candidates/{name}"
        c = ws.complexes.get(spec["complex"])
        if c is None:
            raise _Invariant(f"unresolved complex {spec['complex']!r}", ptr)
        try:
            ws.candidates[name] = PseudoDualizingCandidate(c, spec.get("d1"), spec.get("d2"), name)
        except ValueError as exc:
            raise _Invariant(str(exc), ptr) from exc
    for name, spec in data.get("maps", {}).items():
        ws.maps[name] = _load_map(ws, spec, f"/maps/{name}")
    ws.tasks = [dict(t) for t in data.get("tasks", [])]
    return ws


def load_workspace(path, field=None):
    with open(path, encoding="utf-8") as fh:
        return loads_workspace(fh.read(), field)


# saving --------------------------------------------------------------------------------

def algebra_to_json(alg):
    out = {"structure": [[[alg.field.format(x) for x in v] for v in row] for row in alg.structure_constants()],
           "unit": [alg.field.format(x) for x in alg.unit],
           "labels": list(alg.labels)}
    if alg.dim > 1:
        out["idempotents"] = [[alg.field.format(x) for x in e] for e in alg.primitive_idempotents()]
    return out


def module_to_json(ws, m):
    out = {"left": ws.name_of_algebra(m.left), "dim": m.dim}
    if m.left.dim > 1:
        out["left_action"] = [matrix_to_json(X) for X in m.lact]
    if m.right.dim > 1:
        out["right"] = ws.name_of_algebra(m.right)
        out["right_action"] = [matrix_to_json(X) for X in m.ract]
    return out


def complex_to_json(ws, c):
    names = {id(m): n for n, m in ws.modules.items()}
    terms = {}
    for n in c.degrees:
        m = c[n]
        if m.dim == 0:
            continue
        entry = {"module": names.get(id(m)) or module_to_json(ws, m)}
        if c[n + 1].dim:
            entry["differential"] = matrix_to_json(c.d(n))
        terms[str(n)] = entry
    out = {"left": ws.name_of_algebra(c.left), "terms": terms}
    if c.right.dim > 1:
        out["right"] = ws.name_of_algebra(c.right)
    return out


def _name_of(ws, obj):
    for table in (ws.candidates, ws.complexes, ws.modules):
        for n, x in table.items():
            if x is obj or (isinstance(x, PseudoDualizingCandidate) and x.complex is obj):
                return n
    raise KeyError("chain-map endpoints must be named objects")


def workspace_to_json(ws):
    out = {"field": field_to_json(ws.field)}
    # serialize dependants first: they may register anonymous algebras
    modules = {n: module_to_json(ws, m) for n, m in ws.modules.items()}
    complexes = {n: complex_to_json(ws, c) for n, c in ws.complexes.items()}
    cands = {}
    for n, c in ws.candidates.items():
        cname = next((k for k, x in ws.complexes.items() if x is c.complex), None)
        if cname is None:
            cname = f"{n}_complex"
            complexes[cname] = complex_to_json(ws, c.complex)
        cands[n] = {"complex": cname, "d1": c.d1, "d2": c.d2}
    maps = {}
    for n, mp in ws.maps.items():
        if isinstance(mp, dict):
            maps[n] = {"kind": "algebra-map", "source": ws.name_of_algebra(mp["source"]),
                       "target": ws.name_of_algebra(mp["target"]), "matrix": matrix_to_json(mp["matrix"])}
        else:
            comps = {str(d): matrix_to_json(mp[d]) for d in mp.degrees
                     if mp.source[d].dim and mp.target[d].dim}
            maps[n] = {"kind": "chain-map", "source": _name_of(ws, mp.source),
                       "target": _name_of(ws, mp.target), "components": comps}
    algebras = {n: algebra_to_json(a) for n, a in ws.algebras.items()}
    for key, val in (("algebras", algebras), ("modules", modules), ("complexes", complexes),
                     ("candidates", cands), ("maps", maps)):
        if val:
            out[key] = val
    if ws.tasks:
        out["tasks"] = ws.tasks
    return out


_FLAT = re.compile(r'\[\s*(?:-?\d+|null|"[^"\\\[\]]*")(?:,\s*(?:-?\d+|null|"[^"\\\[\]]*"))*\s*\]')
_TOKEN = re.compile(r'-?\d+|null|"[^"\\\[\]]*"')


def dumps_canonical(obj):
    """Sorted keys, two-space indent, flat scalar arrays on one line."""
    text = json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)
    text = _FLAT.sub(lambda m: "[" + ", ".join(_TOKEN.findall(m.group(0))) + "]", text)
    return text + "\n"


def dumps_workspace(ws):
    return dumps_canonical(workspace_to_json(ws))


def save_workspace(ws, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_workspace(ws))


def save_report(report, path=None):
    """Write a report (anything with to_dict, or a dict) canonically; returns the text."""
    data = report.to_dict() if hasattr(report, "to_dict") else report
    text = dumps_canonical(data)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


__all__ = [
    "LoadError", "Workspace", "schema", "parse_field", "field_to_json", "matrix_to_json",
    "matrix_from_json", "loads_workspace", "load_workspace", "algebra_to_json", "module_to_json",
    "complex_to_json", "workspace_to_json", "dumps_canonical", "dumps_workspace", "save_workspace",
    "save_report",
]
