"""Finite categories with explicit composition tables, functors, comma categories.

Composition is written diagrammatically throughout: for ``u: i -> j`` and
``v: j -> l`` the composite ``compose(u, v)`` is ``uv: i -> l``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable

Obj = Hashable
Mor = Hashable

DEFAULT_CAP = (64, 512)


class CategoryError(ValueError):
    """Raised with the full list of violated laws."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        head = "; ".join(self.violations[:8])
        more = f" (+{len(self.violations) - 8} more)" if len(self.violations) > 8 else ""
        super().__init__(f"{len(self.violations)} violation(s): {head}{more}")


class CapExceeded(CategoryError):
    pass


def label(x) -> str:
    """Readable string for nested object/morphism ids."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "[" + ",".join(label(y) for y in x) + "]"
    return str(x)


class FinCat:
    """A finite category given by a fully materialized composition table."""

    def __init__(self, objects, morphisms, identities, table, name: str = ""):
        self.objects: tuple = tuple(objects)
        self.morphisms: dict = dict(morphisms)  # id -> (dom, cod)
        self.identities: dict = dict(identities)  # obj -> id
        self.table: dict = dict(table)  # (u, v) -> uv
        self.name = name
        self._hom: dict = {}
        self._out: dict = {o: [] for o in self.objects}
        self._in: dict = {o: [] for o in self.objects}
        for m, (d, c) in self.morphisms.items():
            self._hom.setdefault((d, c), []).append(m)
            if d in self._out:
                self._out[d].append(m)
            if c in self._in:
                self._in[c].append(m)
        self._id_set = set(self.identities.values())
        self._obj_index = {o: k for k, o in enumerate(self.objects)}

    def __repr__(self) -> str:
        nm = f"{self.name}: " if self.name else ""
        return f"FinCat({nm}{len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinCat)
            and set(self.objects) == set(other.objects)
            and self.morphisms == other.morphisms
            and self.identities == other.identities
            and self.table == other.table
        )

    def __hash__(self):
        return hash((frozenset(self.objects), len(self.morphisms)))

    def dom(self, u) -> Obj:
        return self.morphisms[u][0]

    def cod(self, u) -> Obj:
        return self.morphisms[u][1]

    def compose(self, u, v) -> Mor:
        try:
            return self.table[(u, v)]
        except KeyError:
            raise ValueError(f"{label(u)} and {label(v)} are not composable") from None

    def compose_path(self, path) -> Mor:
        it = iter(path)
        out = next(it)
        for v in it:
            out = self.compose(out, v)
        return out

    def identity(self, obj) -> Mor:
        return self.identities[obj]

    def is_identity(self, u) -> bool:
        return u in self._id_set

    def hom(self, i, j) -> list:
        return self._hom.get((i, j), [])

    def out_of(self, i) -> list:
        return self._out[i]

    def into(self, j) -> list:
        return self._in[j]

    def index(self, obj) -> int:
        return self._obj_index[obj]

    def nonidentity(self) -> list:
        return [m for m in self.morphisms if m not in self._id_set]

    def composable_pairs(self):
        for u, (_, c) in self.morphisms.items():
            for v in self._out[c]:
                yield u, v

    def topological_order(self) -> list:
        """Objects ordered so that every nonidentity arrow i -> j has i before j.

        Only meaningful for categories without cycles (deltas); raises otherwise.
        """
        indeg = {o: 0 for o in self.objects}
        succ = {o: set() for o in self.objects}
        for m, (d, c) in self.morphisms.items():
            if d != c and c not in succ[d]:
                succ[d].add(c)
                indeg[c] += 1
        ready = [o for o in self.objects if indeg[o] == 0]
        order = []
        while ready:
            o = ready.pop(0)
            order.append(o)
            for c in sorted(succ[o], key=self.index):
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.objects):
            raise ValueError("category has a cycle of nonidentity arrows")
        return order

    def to_dict(self) -> dict:
        return {
            "objects": [label(o) for o in self.objects],
            "morphisms": [[label(m), label(d), label(c)] for m, (d, c) in self.morphisms.items()],
            "identities": {label(o): label(m) for o, m in self.identities.items()},
            "compose": [[label(u), label(v), label(w)] for (u, v), w in self.table.items()],
        }

    def relabeled(self) -> "FinCat":
        """Copy with every object and morphism id replaced by its string label."""
        return FinCat(
            [label(o) for o in self.objects],
            {label(m): (label(d), label(c)) for m, (d, c) in self.morphisms.items()},
            {label(o): label(m) for o, m in self.identities.items()},
            {(label(u), label(v)): label(w) for (u, v), w in self.table.items()},
            name=self.name,
        )


def check_laws(C: FinCat) -> list[str]:
    """Every violated category law, each with its witnesses."""
    bad = []
    objs = set(C.objects)
    for o in C.objects:
        m = C.identities.get(o)
        if m is None:
            bad.append(f"missing identity for object {label(o)}")
        elif C.morphisms.get(m) != (o, o):
            bad.append(f"identity {label(m)} of {label(o)} is not an endomorphism of it")
    for m, (d, c) in C.morphisms.items():
        if d not in objs or c not in objs:
            bad.append(f"morphism {label(m)} has unknown endpoint")
    if bad:
        return bad
    for (u, v), w in C.table.items():
        if u not in C.morphisms or v not in C.morphisms or w not in C.morphisms:
            bad.append(f"composite ({label(u)},{label(v)}) -> {label(w)} names an unknown morphism")
        elif C.cod(u) != C.dom(v):
            bad.append(f"composite given for non-composable pair ({label(u)},{label(v)})")
    if bad:
        return bad
    for u, v in C.composable_pairs():
        w = C.table.get((u, v))
        if w is None:
            bad.append(f"missing composite ({label(u)},{label(v)})")
        elif C.morphisms[w] != (C.dom(u), C.cod(v)):
            bad.append(f"composite ({label(u)},{label(v)}) = {label(w)} has wrong dom/cod")
    if bad:
        return bad
    for u, (d, c) in C.morphisms.items():
        if C.table[(C.identities[d], u)] != u or C.table[(u, C.identities[c])] != u:
            bad.append(f"identity law fails at {label(u)}")
    for u, v in C.composable_pairs():
        uv = C.table[(u, v)]
        for w in C.out_of(C.cod(v)):
            if C.table[(uv, w)] != C.table[(u, C.table[(v, w)])]:
                bad.append(f"associativity fails at ({label(u)},{label(v)},{label(w)})")
    return bad


def validate_category(raw, cap=DEFAULT_CAP, name: str = "") -> FinCat:
    """Build a FinCat from a raw description and check every law.

    ``raw`` is a FinCat or a mapping with keys ``objects``, ``morphisms``
    (triples ``[id, dom, cod]`` or mappings), ``identities`` and ``compose``
    (triples ``[u, v, uv]``).  Identities must be listed explicitly.
    """
    if isinstance(raw, FinCat):
        C = raw
    else:
        problems = []
        objects = list(raw.get("objects", []))
        morphisms = {}
        for entry in raw.get("morphisms", []):
            if isinstance(entry, dict):
                m, d, c = entry["id"], entry["dom"], entry["cod"]
            else:
                m, d, c = entry
            if m in morphisms:
                problems.append(f"duplicate morphism id {m}")
            morphisms[m] = (d, c)
        identities = dict(raw.get("identities", {}))
        table = {}
        for entry in raw.get("compose", []):
            u, v, w = entry
            if (u, v) in table and table[(u, v)] != w:
                problems.append(f"conflicting composites for ({u},{v})")
            table[(u, v)] = w
        if problems:
            raise CategoryError(problems)
        C = FinCat(objects, morphisms, identities, table, name=name)
    if cap is not None:
        mo, mm = cap
        if len(C.objects) > mo or len(C.morphisms) > mm:
            raise CapExceeded(
                [f"category has {len(C.objects)} objects / {len(C.morphisms)} morphisms, cap is {mo} / {mm}"]
            )
    bad = check_laws(C)
    if bad:
        raise CategoryError(bad)
    return C


def is_delta(C: FinCat) -> bool:
    for m, (d, c) in C.morphisms.items():
        if d == c and not C.is_identity(m):
            return False
        if d != c and C.hom(c, d):
            return False
    return True


def is_poset(C: FinCat) -> bool:
    return is_delta(C) and all(len(ms) <= 1 for ms in C._hom.values())


# -- named constructors ------------------------------------------------------------


def from_generators(objects, arrows, relations=None, name: str = "") -> FinCat:
    """Category presented by an acyclic quiver, optionally collapsing parallel paths.

    ``arrows`` maps arrow ids to ``(dom, cod)``.  Morphisms are the paths of the
    quiver; ``relations`` is a set of ``(i, j)`` pairs between which all parallel
    paths are identified.  It is closed up under pre- and post-composition so
    that the identification is a congruence.
    """
    objects = list(objects)
    out = {o: [] for o in objects}
    for a, (d, c) in arrows.items():
        out[d].append(a)
    paths = {o: [()] for o in objects}  # paths starting at o, as arrow tuples

    def extend(o):
        result = []
        stack = [((), o)]
        while stack:
            p, end = stack.pop()
            result.append((p, end))
            if len(p) > len(objects):
                raise ValueError("quiver has a cycle")
            for a in out[end]:
                stack.append((p + (a,), arrows[a][1]))
        return result

    all_paths = []
    for o in objects:
        for p, end in extend(o):
            all_paths.append((o, end, p))
    reach = {(d, c) for d, c, _ in all_paths}
    collapse = set(relations or ())
    changed = True
    while changed:
        changed = False
        for (i, j) in list(collapse):
            for (a, b) in reach:
                if a == j and (i, b) not in collapse:
                    collapse.add((i, b))
                    changed = True
                if b == i and (a, j) not in collapse:
                    collapse.add((a, j))
                    changed = True

    def mid(d, c, p):
        if not p:
            return f"id_{d}"
        if (d, c) in collapse:
            return f"{d}<{c}"
        return ".".join(p)

    morphisms = {}
    ident = {}
    for d, c, p in sorted(all_paths, key=lambda t: (len(t[2]), objects.index(t[0]), t[2])):
        m = mid(d, c, p)
        morphisms.setdefault(m, (d, c))
        if not p:
            ident[d] = m
    rep = {}
    for d, c, p in all_paths:
        rep.setdefault(mid(d, c, p), (d, c, p))
    table = {}
    for u, (d, c) in morphisms.items():
        for v, (d2, c2) in morphisms.items():
            if d2 != c:
                continue
            pu, pv = rep[u][2], rep[v][2]
            table[(u, v)] = mid(d, c2, pu + pv)
    return FinCat(objects, morphisms, ident, table, name=name)


def poset_category(elements, relations, name: str = "") -> FinCat:
    """Poset generated by ``relations`` (pairs ``(a, b)`` meaning a <= b)."""
    elements = list(elements)
    le = {(a, a) for a in elements} | set(relations)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(le):
            for (c, d) in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
    for (a, b) in le:
        if a != b and (b, a) in le:
            raise ValueError(f"relations are not antisymmetric at {a}, {b}")

    def mid(a, b):
        return f"id_{a}" if a == b else f"{a}<{b}"

    morphisms = {}
    for a in elements:
        for b in elements:
            if (a, b) in le:
                morphisms[mid(a, b)] = (a, b)
    ident = {a: mid(a, a) for a in elements}
    table = {}
    for (a, b) in le:
        for c in elements:
            if (b, c) in le:
                table[(mid(a, b), mid(b, c))] = mid(a, c)
    return FinCat(elements, morphisms, ident, table, name=name)


def terminal() -> FinCat:
    return FinCat(["*"], {"id_*": ("*", "*")}, {"*": "id_*"}, {("id_*", "id_*"): "id_*"}, name="terminal")


def interval() -> FinCat:
    return poset_category(["0", "1"], [("0", "1")], name="interval")


def chain(n: int) -> FinCat:
    els = [str(k) for k in range(n)]
    return poset_category(els, [(els[k], els[k + 1]) for k in range(n - 1)], name=f"chain{n}")


def square() -> FinCat:
    """Commutative square poset a <= b, c <= d."""
    return poset_category(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], name="square")


def parallel_pair() -> FinCat:
    return from_generators(["a", "b"], {"u": ("a", "b"), "v": ("a", "b")}, name="parallel_pair")


def monoid_category(elements, product, unit, obj="*", name: str = "") -> FinCat:
    """One-object category of a finite monoid; ``product[(x, y)]`` is x then y."""
    morphisms = {e: (obj, obj) for e in elements}
    table = {(x, y): product[(x, y)] for x in elements for y in elements}
    return FinCat([obj], morphisms, {obj: unit}, table, name=name)


def idempotent_monoid() -> FinCat:
    """One object, one nonidentity idempotent e (e e = e)."""
    prod = {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}
    return monoid_category(["1", "e"], prod, "1", name="idempotent")


def product(C: FinCat, D: FinCat, name: str = "") -> FinCat:
    objects = [(a, b) for a in C.objects for b in D.objects]
    morphisms = {(u, v): ((C.dom(u), D.dom(v)), (C.cod(u), D.cod(v))) for u in C.morphisms for v in D.morphisms}
    ident = {(a, b): (C.identity(a), D.identity(b)) for a, b in objects}
    table = {}
    for (u1, u2) in C.composable_pairs():
        for (v1, v2) in D.composable_pairs():
            table[((u1, v1), (u2, v2))] = (C.compose(u1, u2), D.compose(v1, v2))
    return FinCat(objects, morphisms, ident, table, name=name)


# -- functors -------------------------------------------------------------------------


@dataclass
class CatFunctor:
    source: FinCat
    target: FinCat
    obj_map: dict
    mor_map: dict
    name: str = ""

    def __call__(self, x):
        if x in self.mor_map and x not in self.obj_map:
            return self.mor_map[x]
        return self.obj_map[x]

    def obj(self, x):
        return self.obj_map[x]

    def mor(self, u):
        return self.mor_map[u]

    def violations(self) -> list[str]:
        S, T = self.source, self.target
        bad = []
        for o in S.objects:
            if o not in self.obj_map:
                bad.append(f"object {label(o)} unmapped")
            elif self.obj_map[o] not in T._obj_index:
                bad.append(f"object {label(o)} maps outside the target")
        for u in S.morphisms:
            if u not in self.mor_map:
                bad.append(f"morphism {label(u)} unmapped")
        if bad:
            return bad
        for u, (d, c) in S.morphisms.items():
            fu = self.mor_map[u]
            if T.morphisms.get(fu) != (self.obj_map[d], self.obj_map[c]):
                bad.append(f"{label(u)} -> {label(fu)} does not preserve dom/cod")
        for o in S.objects:
            if self.mor_map[S.identity(o)] != T.identity(self.obj_map[o]):
                bad.append(f"identity of {label(o)} not preserved")
        if bad:
            return bad
        for u, v in S.composable_pairs():
            if self.mor_map[S.compose(u, v)] != T.compose(self.mor_map[u], self.mor_map[v]):
                bad.append(f"composition not preserved at ({label(u)},{label(v)})")
        return bad

    def validate(self) -> "CatFunctor":
        bad = self.violations()
        if bad:
            raise CategoryError(bad)
        return self

    def then(self, other: "CatFunctor") -> "CatFunctor":
        """Composite functor: apply self, then other."""
        return CatFunctor(
            self.source,
            other.target,
            {o: other.obj_map[x] for o, x in self.obj_map.items()},
            {u: other.mor_map[x] for u, x in self.mor_map.items()},
        )


def identity_functor(C: FinCat) -> CatFunctor:
    return CatFunctor(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms}, name="id")


def constant_functor(D: FinCat, C: FinCat, obj) -> CatFunctor:
    return CatFunctor(D, C, {o: obj for o in D.objects}, {m: C.identity(obj) for m in D.morphisms})


def inclusion_functor(D: FinCat, C: FinCat) -> CatFunctor:
    """D a subcategory of C sharing ids."""
    return CatFunctor(D, C, {o: o for o in D.objects}, {m: m for m in D.morphisms}).validate()


# -- comma categories ---------------------------------------------------------------------


@dataclass
class CommaCat:
    """The comma category i/f: objects (w, sigma) with w: i -> f(sigma).

    A morphism ``(u, tau) -> (w, sigma)`` is a D-map ``x: tau -> sigma`` with
    ``u . f(x) = w``; it is stored under the id ``(u, x)``.
    """

    anchor: Obj
    functor: CatFunctor
    category: FinCat
    projection: CatFunctor = field(repr=False)

    def induced(self, v, other: "CommaCat") -> CatFunctor:
        """For v: h -> i, the functor i/f -> h/f, (w, sigma) |-> (v w, sigma)."""
        C = self.functor.target
        obj_map = {(w, s): (C.compose(v, w), s) for (w, s) in self.category.objects}
        mor_map = {(u, x): (C.compose(v, u), x) for (u, x) in self.category.morphisms}
        return CatFunctor(self.category, other.category, obj_map, mor_map)


def comma_category(i, f: CatFunctor) -> CommaCat:
    C, D = f.target, f.source
    objects = [(w, s) for s in D.objects for w in C.hom(i, f.obj(s))]
    morphisms = {}
    for (u, t) in objects:
        for x in D.out_of(t):
            s = D.cod(x)
            w = C.compose(u, f.mor(x))
            morphisms[(u, x)] = ((u, t), (w, s))
    ident = {(w, s): (w, D.identity(s)) for (w, s) in objects}
    table = {}
    for (u, x), (src, mid) in morphisms.items():
        w = mid[0]
        for y in D.out_of(D.cod(x)):
            table[((u, x), (w, y))] = (u, D.compose(x, y))
    cat = FinCat(objects, morphisms, ident, table, name=f"{label(i)}/f")
    proj = CatFunctor(cat, D, {o: o[1] for o in objects}, {m: m[1] for m in morphisms})
    return CommaCat(i, f, cat, proj)


def to_dot(C: FinCat, name: str = "C") -> str:
    lines = [f'digraph "{name}" {{']
    for o in C.objects:
        lines.append(f'  "{label(o)}";')
    for m in C.nonidentity():
        d, c = C.morphisms[m]
        lines.append(f'  "{label(d)}" -> "{label(c)}" [label="{label(m)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
