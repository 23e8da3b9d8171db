"""Barycentric subdivision of a finite category.

Objects of the subdivision are nondegenerate simplices: chains
``(v_1, ..., v_p)`` of composable nonidentity arrows.  A map ``tau -> sigma``
is a triple ``(tau, sigma, v)`` where ``sigma`` is obtained from ``tau`` by a
strictly monotone reindexing ``f: [q] -> [p]`` and ``v = tau(0 -> f(0))`` is
the carrier.  Different witnesses with the same carrier give one map.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fincat import CategoryError, CatFunctor, FinCat, check_laws, is_delta, label


class NotADelta(ValueError):
    pass


class DegeneracyCollapse(ValueError):
    pass


@dataclass(frozen=True)
class Simplex:
    vertices: tuple
    arrows: tuple

    @property
    def dim(self) -> int:
        return len(self.arrows)

    @property
    def first(self):
        return self.vertices[0]

    def __str__(self) -> str:
        if not self.arrows:
            return f"[{label(self.vertices[0])}]"
        return "[" + ",".join(label(a) for a in self.arrows) + "]"

    __repr__ = __str__

    def ids(self, C: FinCat) -> list:
        """Serialized form: the ordered morphism ids (the identity for a 0-simplex)."""
        if not self.arrows:
            return [C.identity(self.vertices[0])]
        return list(self.arrows)


def simplex_from_ids(C: FinCat, ids) -> Simplex:
    ids = list(ids)
    if len(ids) == 1 and C.is_identity(ids[0]):
        return Simplex((C.dom(ids[0]),), ())
    verts = [C.dom(ids[0])]
    for a in ids:
        if C.dom(a) != verts[-1]:
            raise ValueError(f"arrows {ids} are not composable")
        if C.is_identity(a):
            raise ValueError(f"simplex {ids} is degenerate")
        verts.append(C.cod(a))
    return Simplex(tuple(verts), tuple(ids))


def simplices(C: FinCat, p_max: int | None = None) -> list[Simplex]:
    """All nondegenerate simplices of dimension <= p_max (all of them for a delta)."""
    if p_max is None and not is_delta(C):
        raise NotADelta("nondegenerate simplices of a non-delta are unbounded; pass p_max")
    out = []
    frontier = [Simplex((o,), ()) for o in C.objects]
    while frontier:
        out.extend(frontier)
        nxt = []
        for s in frontier:
            if p_max is not None and s.dim >= p_max:
                continue
            for a in C.out_of(s.vertices[-1]):
                if not C.is_identity(a):
                    nxt.append(Simplex(s.vertices + (C.cod(a),), s.arrows + (a,)))
        frontier = nxt
    return out


def _segment(C: FinCat, tau: Simplex, a: int, b: int):
    """tau(a -> b) as a morphism of C."""
    if a == b:
        return C.identity(tau.vertices[a])
    return C.compose_path(tau.arrows[a:b])


def faces(C: FinCat, tau: Simplex):
    """Yield (sigma, carrier, witness) for every strictly monotone reindexing.

    Witnesses come in lexicographic order.  Reindexings producing a degenerate
    chain (possible only outside deltas) are skipped.
    """
    p = tau.dim
    for q in range(p + 1):
        for f in itertools.combinations(range(p + 1), q + 1):
            arrows = tuple(_segment(C, tau, f[k], f[k + 1]) for k in range(q))
            if any(C.is_identity(a) for a in arrows):
                continue
            verts = tuple(tau.vertices[k] for k in f)
            yield Simplex(verts, arrows), _segment(C, tau, 0, f[0]), f


def _build(C: FinCat, objs: list[Simplex], validate: bool) -> tuple[FinCat, dict]:
    objset = set(objs)
    morphisms = {}
    witness = {}
    for tau in objs:
        for sigma, v, f in faces(C, tau):
            if sigma not in objset:
                continue
            key = (tau, sigma, v)
            if key not in morphisms:
                morphisms[key] = (tau, sigma)
                witness[key] = f
    ident = {tau: (tau, tau, C.identity(tau.first)) for tau in objs}
    out_of = {}
    for key in morphisms:
        out_of.setdefault(key[0], []).append(key)
    table = {}
    for (tau, sigma, u) in morphisms:
        for (_, omega, v) in out_of.get(sigma, []):
            w = (tau, omega, C.compose(u, v))
            if w not in morphisms:
                raise CategoryError([f"composite {label(w)} is not a subdivision map"])
            table[((tau, sigma, u), (sigma, omega, v))] = w
    Cp = FinCat(objs, morphisms, ident, table, name=f"{C.name}'" if C.name else "")
    if validate:
        bad = check_laws(Cp)
        if bad:
            raise CategoryError(bad)
    return Cp, witness


def subdivide(C: FinCat, validate: bool = False) -> FinCat:
    """The subdivision C' of a delta C."""
    if not is_delta(C):
        raise NotADelta("subdivide needs a delta; use subdivide_capped")
    return _build(C, simplices(C), validate)[0]


def subdivide_capped(C: FinCat, p_max: int, validate: bool = False) -> FinCat:
    """Full subcategory of C' on nondegenerate simplices of dimension <= p_max."""
    return _build(C, simplices(C, p_max), validate)[0]


def witnesses(C: FinCat, Cp: FinCat) -> dict:
    """Lexicographically least monotone witness for each map of Cp."""
    return _build(C, list(Cp.objects), False)[1]


def d_functor(C: FinCat, Cp: FinCat | None = None) -> CatFunctor:
    """d: C' -> C, tau |-> tau(0), [tau, sigma, v] |-> v."""
    if Cp is None:
        Cp = subdivide(C)
    obj_map = {tau: tau.first for tau in Cp.objects}
    mor_map = {m: m[2] for m in Cp.morphisms}
    return CatFunctor(Cp, C, obj_map, mor_map, name="d")


def subdivide_functor(f: CatFunctor, Dp: FinCat | None = None, Cp: FinCat | None = None) -> CatFunctor:
    """f': D' -> C' acting on simplices by composition with f."""
    D, C = f.source, f.target
    for u in D.nonidentity():
        if C.is_identity(f.mor(u)):
            raise DegeneracyCollapse(f"f sends the nonidentity arrow {label(u)} to an identity")
    if Dp is None:
        Dp = subdivide(D)
    if Cp is None:
        Cp = subdivide(C)

    def on_simplex(tau: Simplex) -> Simplex:
        return Simplex(tuple(f.obj(x) for x in tau.vertices), tuple(f.mor(a) for a in tau.arrows))

    obj_map = {tau: on_simplex(tau) for tau in Dp.objects}
    mor_map = {}
    for (tau, sigma, v) in Dp.morphisms:
        img = (obj_map[tau], obj_map[sigma], f.mor(v))
        if img not in Cp.morphisms:
            raise CategoryError([f"image of {label((tau, sigma, v))} is not a map of C'"])
        mor_map[(tau, sigma, v)] = img
    return CatFunctor(Dp, Cp, obj_map, mor_map, name="f'")
