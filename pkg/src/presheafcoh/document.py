"""Workspace documents: one JSON file holding categories, functors, diagrams, modules, maps and complexes.

Scalars are integers or strings such as "3/7"; matrices are row-major lists of
rows.  Identities must be listed explicitly.  The structural schema is
``SCHEMA`` below (JSON Schema, draft 2020-12); semantic checks (category laws,
module laws, references) run after it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import jsonschema
import numpy as np

from . import diagram as dg
from . import fincat, ralg
from .complexes import ChainComplex, complex_from
from .diagram import DiagMap, DiagModule, Diagram
from .field import Field
from .fincat import CatFunctor, FinCat, label
from .ralg import Algebra, AlgModule

FORMAT = "presheafcoh/1"

_scalar = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}
_matrix = {"type": "array", "items": {"type": "array", "items": _scalar}}
_named = lambda item: {"type": "object", "additionalProperties": item}  # noqa: E731

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "field"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": FORMAT},
        "field": {"type": "string"},
        "categories": _named({
            "oneOf": [
                {"type": "object", "required": ["builtin"], "additionalProperties": False,
                 "properties": {"builtin": {"enum": ["terminal", "interval", "chain3", "square", "parallel_pair"]}}},
                {"type": "object", "required": ["objects", "morphisms", "identities", "compose"], "additionalProperties": False,
                 "properties": {
                     "objects": {"type": "array", "items": {"type": "string"}},
                     "morphisms": {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3}},
                     "identities": _named({"type": "string"}),
                     "compose": {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3}},
                 }},
            ]
        }),
        "functors": _named({
            "type": "object", "required": ["source", "target", "objects", "morphisms"], "additionalProperties": False,
            "properties": {"source": {"type": "string"}, "target": {"type": "string"},
                           "objects": _named({"type": "string"}), "morphisms": _named({"type": "string"})},
        }),
        "algebras": _named({
            "oneOf": [
                {"type": "object", "required": ["builtin"], "additionalProperties": False,
                 "properties": {"builtin": {"type": "string"}}},
                {"type": "object", "required": ["mult", "unit"], "additionalProperties": False,
                 "properties": {"mult": {"type": "array", "items": _matrix}, "unit": {"type": "array", "items": _scalar}}},
            ]
        }),
        "diagrams": _named({
            "type": "object", "required": ["category", "algebras"], "additionalProperties": False,
            "properties": {"category": {"type": "string"}, "algebras": _named({"type": "string"}), "phi": _named(_matrix)},
        }),
        "modules": _named({
            "type": "object", "required": ["diagram"], "additionalProperties": False,
            "properties": {"diagram": {"type": "string"}, "regular": {"type": "boolean"},
                           "actions": _named({"type": "array", "items": _matrix}), "T": _named(_matrix)},
        }),
        "bimodules": _named({
            "type": "object", "required": ["diagram"], "additionalProperties": False,
            "properties": {"diagram": {"type": "string"}, "regular": {"type": "boolean"},
                           "left": _named({"type": "array", "items": _matrix}),
                           "right": _named({"type": "array", "items": _matrix}), "T": _named(_matrix)},
        }),
        "maps": _named({
            "type": "object", "required": ["source", "target", "components"], "additionalProperties": False,
            "properties": {"source": {"type": "string"}, "target": {"type": "string"}, "components": _named(_matrix)},
        }),
        "complexes": _named({
            "type": "object", "required": ["terms"], "additionalProperties": False,
            "properties": {"terms": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                           "differentials": {"type": "array", "items": {"type": "string"}}},
        }),
    },
}


class DocumentError(ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


@dataclass
class Workspace:
    field: Field
    categories: dict = dc_field(default_factory=dict)
    functors: dict = dc_field(default_factory=dict)
    algebras: dict = dc_field(default_factory=dict)
    diagrams: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    bimodules: dict = dc_field(default_factory=dict)  # name -> (diagram name, DiagModule over the enveloping diagram)
    maps: dict = dc_field(default_factory=dict)
    complexes: dict = dc_field(default_factory=dict)
    _names: dict = dc_field(default_factory=dict, repr=False)  # id(entity) -> (section, name)

    def name_of(self, entity) -> str | None:
        hit = self._names.get(id(entity))
        return hit[1] if hit else None

    def remember(self, section: str, name: str, entity) -> None:
        getattr(self, section)[name] = entity
        self._names[id(entity[1] if section == "bimodules" else entity)] = (section, name)


# -- scalars and matrices --------------------------------------------------------------------------


def _matrix(F: Field, rows, where: str, shape=None) -> np.ndarray:
    try:
        if len(rows) == 0:
            a = F.zeros(0, shape[1] if shape else 0)
        else:
            a = F.array([[F.parse(x) for x in row] for row in rows])
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(where, f"bad scalar: {exc}") from None
    if a.ndim != 2 and a.size:
        raise DocumentError(where, "rows have different lengths")
    if shape is not None and a.shape != tuple(shape):
        raise DocumentError(where, f"expected a {shape[0]}x{shape[1]} matrix, got {a.shape[0]}x{a.shape[1] if a.ndim == 2 else '?'}")
    return a


def _emit_matrix(F: Field, a: np.ndarray) -> list:
    return [[_emit_scalar(F, x) for x in row] for row in a]


def _emit_scalar(F: Field, x):
    if F.p is not None:
        return int(x)
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


BUILTIN_CATEGORIES = {
    "terminal": fincat.terminal, "interval": fincat.interval, "chain3": lambda: fincat.chain(3),
    "square": fincat.square, "parallel_pair": fincat.parallel_pair,
}


def builtin_algebra(F: Field, name: str) -> Algebra:
    s = name.replace(" ", "")
    if s == "k":
        return ralg.ground_algebra(F)
    if s.startswith("k[x]/x^"):
        return ralg.truncated_polynomial(F, int(s[len("k[x]/x^"):]))
    if s.startswith("k^"):
        return ralg.product_algebra(F, int(s[2:]))
    if s.startswith("M") and s[1:].isdigit():
        return ralg.matrix_algebra(F, int(s[1:]))
    if s.startswith("T") and s[1:].isdigit():
        return ralg.upper_triangular(F, int(s[1:]))
    raise ValueError(f"unknown builtin algebra {name!r} (k, k^n, k[x]/x^n, Mn, Tn)")


# -- parsing ------------------------------------------------------------------------------------------------


def _ref(table: dict, name: str, where: str, kind: str):
    if name not in table:
        raise DocumentError(where, f"undefined {kind} {name!r}")
    return table[name]


def parse(doc: dict, cap=fincat.DEFAULT_CAP) -> Workspace:
    """Check the schema, resolve every reference and validate every entity."""
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/" + "/".join(str(p) for p in e.absolute_path)
        raise DocumentError(where, e.message)
    try:
        F = Field.from_name(doc["field"])
    except ValueError as exc:
        raise DocumentError("/field", str(exc)) from None
    ws = Workspace(F)
    for name, raw in doc.get("categories", {}).items():
        where = f"/categories/{name}"
        try:
            if "builtin" in raw:
                C = BUILTIN_CATEGORIES[raw["builtin"]]()
                C = fincat.validate_category(C, cap)
            else:
                C = fincat.validate_category(raw, cap, name=name)
        except fincat.CategoryError as exc:
            raise DocumentError(where, str(exc)) from None
        ws.remember("categories", name, C)
    for name, raw in doc.get("functors", {}).items():
        where = f"/functors/{name}"
        D = _ref(ws.categories, raw["source"], where + "/source", "category")
        C = _ref(ws.categories, raw["target"], where + "/target", "category")
        f = CatFunctor(D, C, dict(raw["objects"]), dict(raw["morphisms"]), name=name)
        bad = f.violations()
        if bad:
            raise DocumentError(where, "; ".join(bad[:5]))
        ws.remember("functors", name, f)
    for name, raw in doc.get("algebras", {}).items():
        where = f"/algebras/{name}"
        try:
            if "builtin" in raw:
                B = builtin_algebra(F, raw["builtin"])
            else:
                mult = np.stack([_matrix(F, m, f"{where}/mult/{s}") for s, m in enumerate(raw["mult"])])
                unit = F.array([F.parse(x) for x in raw["unit"]])
                B = Algebra(F, mult, unit, name=name)
            B.validate()
        except (ValueError, ralg.AlgebraError) as exc:
            raise DocumentError(where, str(exc)) from None
        ws.remember("algebras", name, B)
    for name, raw in doc.get("diagrams", {}).items():
        where = f"/diagrams/{name}"
        C = _ref(ws.categories, raw["category"], where + "/category", "category")
        algs = {}
        for o in C.objects:
            ref = raw["algebras"].get(label(o))
            if ref is None:
                raise DocumentError(f"{where}/algebras", f"no algebra for object {label(o)!r}")
            algs[o] = _ref(ws.algebras, ref, f"{where}/algebras/{label(o)}", "algebra")
        phi = {}
        given = raw.get("phi", {})
        for v in C.morphisms:
            d, c = algs[C.dom(v)], algs[C.cod(v)]
            if label(v) in given:
                phi[v] = _matrix(F, given[label(v)], f"{where}/phi/{label(v)}", (d.dim, c.dim))
            elif C.is_identity(v) or d is c:
                phi[v] = F.eye(d.dim)
            else:
                raise DocumentError(f"{where}/phi", f"no transition map for {label(v)!r}")
        A = Diagram(C, algs, phi, name=name)
        bad = A.violations()
        if bad:
            raise DocumentError(where, "; ".join(bad[:5]))
        ws.remember("diagrams", name, A)
    for name, raw in doc.get("modules", {}).items():
        where = f"/modules/{name}"
        A = _ref(ws.diagrams, raw["diagram"], where + "/diagram", "diagram")
        if raw.get("regular"):
            M = dg.regular_diag_module(A)
        else:
            M = _parse_module(F, A, raw.get("actions", {}), raw.get("T", {}), where)
        M.name = name
        bad = M.violations()
        if bad:
            raise DocumentError(where, "; ".join(bad[:5]))
        ws.remember("modules", name, M)
    for name, raw in doc.get("bimodules", {}).items():
        where = f"/bimodules/{name}"
        A = _ref(ws.diagrams, raw["diagram"], where + "/diagram", "diagram")
        if raw.get("regular"):
            X = dg.regular_bimodule(A)
        else:
            left, right = {}, {}
            for o in A.base.objects:
                B = A.algebras[o]
                lo, ro = raw.get("left", {}).get(label(o)), raw.get("right", {}).get(label(o))
                if lo is None or ro is None:
                    raise DocumentError(where, f"missing left/right actions at {label(o)!r}")
                if len(lo) != B.dim or len(ro) != B.dim:
                    raise DocumentError(f"{where}/{label(o)}", f"need {B.dim} left and {B.dim} right action matrices")
                left[o] = np.stack([_matrix(F, m, f"{where}/left/{label(o)}/{s}") for s, m in enumerate(lo)])
                right[o] = np.stack([_matrix(F, m, f"{where}/right/{label(o)}/{s}") for s, m in enumerate(ro)])
            T = _parse_T(F, A.base, raw.get("T", {}), {o: left[o].shape[1] for o in A.base.objects}, where)
            try:
                X = dg.bimodule_as_left(A, left, right, T)
            except dg.DiagramError as exc:
                raise DocumentError(where, str(exc)) from None
        X.name = name
        bad = X.violations()
        if bad:
            raise DocumentError(where, "; ".join(bad[:5]))
        ws.remember("bimodules", name, (raw["diagram"], X))
    for name, raw in doc.get("maps", {}).items():
        where = f"/maps/{name}"
        M = _lookup_module(ws, raw["source"], where + "/source")
        N = _lookup_module(ws, raw["target"], where + "/target")
        comps = {}
        for o in M.base.objects:
            rows = raw["components"].get(label(o))
            if rows is None:
                raise DocumentError(f"{where}/components", f"no component at {label(o)!r}")
            comps[o] = _matrix(F, rows, f"{where}/components/{label(o)}", (N.dim(o), M.dim(o)))
        eta = DiagMap(M, N, comps)
        bad = eta.violations()
        if bad:
            raise DocumentError(where, "; ".join(bad[:5]))
        ws.remember("maps", name, eta)
    for name, raw in doc.get("complexes", {}).items():
        where = f"/complexes/{name}"
        terms = [_lookup_module(ws, t, f"{where}/terms/{n}") for n, t in enumerate(raw["terms"])]
        diffs = [_ref(ws.maps, m, f"{where}/differentials/{n}", "map") for n, m in enumerate(raw.get("differentials", []))]
        if len(diffs) != len(terms) - 1:
            raise DocumentError(where, f"{len(terms)} terms need {len(terms) - 1} differentials, got {len(diffs)}")
        try:
            X = complex_from(terms, diffs)
        except ValueError as exc:
            raise DocumentError(where, str(exc)) from None
        bad = X.violations()
        if bad:
            raise DocumentError(where, "; ".join(bad[:5]))
        ws.remember("complexes", name, X)
    return ws


def _lookup_module(ws: Workspace, name: str, where: str) -> DiagModule:
    if name in ws.modules:
        return ws.modules[name]
    if name in ws.bimodules:
        return ws.bimodules[name][1]
    raise DocumentError(where, f"undefined module {name!r}")


def _parse_T(F: Field, C: FinCat, raw: dict, dims: dict, where: str) -> dict:
    T = {}
    for v in C.morphisms:
        d, c = C.dom(v), C.cod(v)
        if label(v) in raw:
            T[v] = _matrix(F, raw[label(v)], f"{where}/T/{label(v)}", (dims[d], dims[c]))
        elif C.is_identity(v):
            T[v] = F.eye(dims[d])
        else:
            raise DocumentError(f"{where}/T", f"no transition matrix for {label(v)!r}")
    return T


def _parse_module(F: Field, A: Diagram, actions: dict, T: dict, where: str) -> DiagModule:
    mods, dims = {}, {}
    for o in A.base.objects:
        B = A.algebras[o]
        raw = actions.get(label(o))
        if raw is None:
            raise DocumentError(f"{where}/actions", f"no action at {label(o)!r}")
        if len(raw) != B.dim:
            raise DocumentError(f"{where}/actions/{label(o)}", f"need {B.dim} action matrices, got {len(raw)}")
        mats = [_matrix(F, m, f"{where}/actions/{label(o)}/{s}") for s, m in enumerate(raw)]
        n = mats[0].shape[0] if mats else 0
        act = np.stack([m if m.size else F.zeros(n, n) for m in mats]) if n else F.zeros(B.dim, 0, 0)
        mods[o] = AlgModule(B, act)
        dims[o] = n
    return DiagModule(A, mods, _parse_T(F, A.base, T, dims, where))


def load(path: str, cap=fincat.DEFAULT_CAP) -> Workspace:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return parse(doc, cap)


# -- emission ------------------------------------------------------------------------------------------------


def category_doc(C: FinCat) -> dict:
    d = C.to_dict()
    return {"objects": d["objects"], "morphisms": d["morphisms"], "identities": d["identities"], "compose": d["compose"]}


def algebra_doc(B: Algebra) -> dict:
    F = B.field
    return {"mult": [_emit_matrix(F, B.mult[s]) for s in range(B.dim)], "unit": [_emit_scalar(F, x) for x in B.unit]}


def _actions_doc(F: Field, act: np.ndarray) -> list:
    return [_emit_matrix(F, act[s]) for s in range(act.shape[0])]


class Emitter:
    """Builds a document, naming algebras by content so shared algebras are emitted once."""

    def __init__(self, F: Field):
        self.F = F
        self.doc = {"format": FORMAT, "field": F.name}
        self._alg_names = {}

    def _section(self, key: str) -> dict:
        return self.doc.setdefault(key, {})

    def category(self, name: str, C: FinCat) -> str:
        self._section("categories")[name] = category_doc(C)
        return name

    def algebra(self, B: Algebra, hint: str = "") -> str:
        key = (B.dim, B.mult.tobytes() if self.F.p is not None else str(B.mult.tolist()), str(B.unit.tolist()))
        if key in self._alg_names:
            return self._alg_names[key]
        base = hint or B.name or "B"
        name, n = base, 1
        while name in self._section("algebras"):
            n += 1
            name = f"{base}#{n}"
        self._section("algebras")[name] = algebra_doc(B)
        self._alg_names[key] = name
        return name

    def diagram(self, name: str, A: Diagram, category: str | None = None) -> str:
        cname = category or self.category(f"{name}.base", A.base)
        algs = {label(o): self.algebra(A.algebras[o]) for o in A.base.objects}
        phi = {label(v): _emit_matrix(self.F, A.phi[v]) for v in A.base.morphisms if not A.base.is_identity(v)}
        self._section("diagrams")[name] = {"category": cname, "algebras": algs, "phi": phi}
        return name

    def module(self, name: str, M: DiagModule, diagram: str) -> str:
        C = M.base
        self._section("modules")[name] = {
            "diagram": diagram,
            "actions": {label(o): _actions_doc(self.F, M.modules[o].action) for o in C.objects},
            "T": {label(v): _emit_matrix(self.F, M.T[v]) for v in C.morphisms if not C.is_identity(v)},
        }
        return name

    def bimodule(self, name: str, X: DiagModule, diagram: str) -> str:
        C = X.base
        left, right = {}, {}
        for o in C.objects:
            if X.dim(o):
                l, r = ralg.bimodule_sides(X.modules[o])
            else:
                n = X.diagram.algebras[o].factors[0].dim
                l = r = self.F.zeros(n, 0, 0)
            left[label(o)], right[label(o)] = _actions_doc(self.F, l), _actions_doc(self.F, r)
        self._section("bimodules")[name] = {
            "diagram": diagram, "left": left, "right": right,
            "T": {label(v): _emit_matrix(self.F, X.T[v]) for v in C.morphisms if not C.is_identity(v)},
        }
        return name

    def map(self, name: str, eta: DiagMap, source: str, target: str) -> str:
        self._section("maps")[name] = {"source": source, "target": target,
                                       "components": {label(o): _emit_matrix(self.F, eta.comps[o]) for o in eta.source.base.objects}}
        return name

    def complex(self, name: str, X: ChainComplex, diagram: str) -> str:
        terms = [self.module(f"{name}.{n}", X.terms[n], diagram) for n in range(len(X.terms))]
        diffs = [self.map(f"{name}.d{n}", X.d[n], terms[n], terms[n - 1]) for n in range(1, len(X.terms))]
        self._section("complexes")[name] = {"terms": terms, "differentials": diffs}
        return name


def emit(ws: Workspace) -> dict:
    """Document for a workspace; parse(emit(ws)) reproduces every entity."""
    em = Emitter(ws.field)
    for name, C in ws.categories.items():
        em.category(name, C)
    cat_names = {id(C): n for n, C in ws.categories.items()}
    for name, f in ws.functors.items():
        em._section("functors")[name] = {
            "source": cat_names[id(f.source)], "target": cat_names[id(f.target)],
            "objects": {label(k): label(v) for k, v in f.obj_map.items()},
            "morphisms": {label(k): label(v) for k, v in f.mor_map.items()},
        }
    for name, B in ws.algebras.items():
        em._section("algebras")[name] = algebra_doc(B)
        em._alg_names[(B.dim, B.mult.tobytes() if ws.field.p is not None else str(B.mult.tolist()), str(B.unit.tolist()))] = name
    for name, A in ws.diagrams.items():
        em.diagram(name, A, cat_names[id(A.base)])
    diag_names = {id(A): n for n, A in ws.diagrams.items()}
    mod_names = {}
    for name, M in ws.modules.items():
        em.module(name, M, diag_names[id(M.diagram)])
        mod_names[id(M)] = name
    for name, (dname, X) in ws.bimodules.items():
        em.bimodule(name, X, dname)
        mod_names[id(X)] = name
    for name, eta in ws.maps.items():
        em.map(name, eta, mod_names[id(eta.source)], mod_names[id(eta.target)])
    map_names = {id(m): n for n, m in ws.maps.items()}
    for name, X in ws.complexes.items():
        em._section("complexes")[name] = {"terms": [mod_names[id(t)] for t in X.terms],
                                          "differentials": [map_names[id(X.d[n])] for n in range(1, len(X.terms))]}
    return em.doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


# -- semantic equality (round-trip checks) ------------------------------------------------------------------


def workspaces_equal(a: Workspace, b: Workspace) -> list[str]:
    """Entity-by-entity differences after normalization (labels, exact scalars)."""
    F = a.field
    diffs = []
    if a.field != b.field:
        return ["fields differ"]
    for sec in ("categories", "functors", "algebras", "diagrams", "modules", "bimodules", "maps", "complexes"):
        if set(getattr(a, sec)) != set(getattr(b, sec)):
            diffs.append(f"{sec}: names differ")
    for n, C in a.categories.items():
        if n in b.categories and C.relabeled() != b.categories[n].relabeled():
            diffs.append(f"category {n} differs")
    for n, B in a.algebras.items():
        if n in b.algebras and not (F.equal(B.mult, b.algebras[n].mult) and F.equal(B.unit, b.algebras[n].unit)):
            diffs.append(f"algebra {n} differs")
    for n, A in a.diagrams.items():
        if n in b.diagrams:
            A2 = b.diagrams[n]
            for o in A.base.objects:
                if not F.equal(A.algebras[o].mult, A2.algebras[o].mult):
                    diffs.append(f"diagram {n} differs at {label(o)}")
            for v in A.base.morphisms:
                if not F.equal(A.phi[v], A2.phi[v]):
                    diffs.append(f"diagram {n} differs at {label(v)}")

    def mod_eq(M, N, what):
        for o in M.base.objects:
            if M.dim(o) != N.dim(o) or not F.equal(M.modules[o].action, N.modules[o].action):
                diffs.append(f"{what} differs at {label(o)}")
        for v in M.base.morphisms:
            if not F.equal(M.T[v], N.T[v]):
                diffs.append(f"{what} transition differs at {label(v)}")

    for n, M in a.modules.items():
        if n in b.modules:
            mod_eq(M, b.modules[n], f"module {n}")
    for n, (_, X) in a.bimodules.items():
        if n in b.bimodules:
            mod_eq(X, b.bimodules[n][1], f"bimodule {n}")
    for n, eta in a.maps.items():
        if n in b.maps:
            for o in eta.comps:
                if not F.equal(eta.comps[o], b.maps[n].comps[o]):
                    diffs.append(f"map {n} differs at {label(o)}")
    return diffs


# -- corpus documents -------------------------------------------------------------------------------------------


def corpus_document(entries, F: Field) -> dict:
    """One document holding every corpus entry; entity names are prefixed by the entry name."""
    em = Emitter(F)
    for e in entries:
        p = e.name.replace(" ", "_")
        cname = em.category(p, e.base)
        dname = em.diagram(f"{p}/A", e.diagram, cname)
        for t, M in enumerate(e.modules):
            em.module(f"{p}/M{t}", M, dname)
        for t, X in enumerate(e.bimodules):
            em.bimodule(f"{p}/X{t}", X, dname)
    return em.doc
