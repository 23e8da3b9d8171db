"""Diagrams of algebras over a finite category and their modules.

Conventions (diagrammatic composition, ``uv`` = u then v):

* a diagram assigns to ``v: i -> j`` an algebra map ``phi[v]: A^j -> A^i``,
  and ``phi[uv] = phi[u] @ phi[v]``;
* a module assigns ``T[v]: M^j -> M^i`` with ``T[uv] = T[u] @ T[v]`` and
  ``T[v] (a m) = phi[v](a) T[v](m)``;
* a map ``eta`` satisfies ``eta^i T_M[v] = T_N[v] eta^j`` for ``v: i -> j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import ralg
from .fincat import CatFunctor, FinCat, comma_category, identity_functor, is_delta, label
from .field import Field
from .ralg import AlgebraError, AlgModule, AlgMorphism, Algebra
from .subdivision import NotADelta, d_functor, subdivide


class DiagramError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:6]))


class Diagram:
    def __init__(self, base: FinCat, algebras: dict, phi: dict, name: str = ""):
        self.base = base
        self.algebras = dict(algebras)
        self.phi = dict(phi)  # morphism -> matrix A^{cod} -> A^{dom}
        self.name = name
        self.field: Field = next(iter(self.algebras.values())).field if self.algebras else None
        self._env = None

    def __repr__(self):
        return f"Diagram({self.name or '?'} over {self.base!r})"

    def morphism(self, v) -> AlgMorphism:
        C = self.base
        return AlgMorphism(self.algebras[C.cod(v)], self.algebras[C.dom(v)], self.phi[v])

    def dims(self) -> dict:
        return {i: self.algebras[i].dim for i in self.base.objects}

    def violations(self) -> list[str]:
        C, F = self.base, self.field
        bad = []
        for i in C.objects:
            if i not in self.algebras:
                bad.append(f"no algebra at {label(i)}")
                continue
            bad += [f"A^{label(i)}: {x}" for x in self.algebras[i].violations()]
        for v in C.morphisms:
            if v not in self.phi:
                bad.append(f"no algebra map for {label(v)}")
                continue
            bad += [f"phi^{label(v)}: {x}" for x in self.morphism(v).violations()]
        if bad:
            return bad
        for i in C.objects:
            if not F.equal(self.phi[C.identity(i)], F.eye(self.algebras[i].dim)):
                bad.append(f"phi of identity at {label(i)} is not the identity")
        for u, v in C.composable_pairs():
            if not F.equal(self.phi[C.compose(u, v)], F.matmul(self.phi[u], self.phi[v])):
                bad.append(f"phi^(uv) != phi^u phi^v at ({label(u)},{label(v)})")
        return bad

    def validate(self) -> "Diagram":
        bad = self.violations()
        if bad:
            raise DiagramError(bad)
        return self

    def enveloping(self) -> "Diagram":
        """A^e = A (x) A^op objectwise, phi^v (x) (phi^v)^op on maps (cached)."""
        if self._env is None:
            F = self.field
            algs = {i: ralg.enveloping_algebra(A) for i, A in self.algebras.items()}
            phi = {v: F.kron(m, m) for v, m in self.phi.items()}
            self._env = Diagram(self.base, algs, phi, name=f"{self.name}^e")
        return self._env


class DiagModule:
    def __init__(self, diagram: Diagram, modules: dict, T: dict, name: str = ""):
        self.diagram = diagram
        self.modules = dict(modules)
        self.T = dict(T)  # morphism -> matrix M^{cod} -> M^{dom}
        self.name = name

    def __repr__(self):
        return f"DiagModule(dims={list(self.dims().values())})"

    @property
    def field(self) -> Field:
        return self.diagram.field

    @property
    def base(self) -> FinCat:
        return self.diagram.base

    def dim(self, i) -> int:
        return self.modules[i].dim

    def dims(self) -> dict:
        return {i: self.modules[i].dim for i in self.base.objects}

    def total_dim(self) -> int:
        return sum(self.dims().values())

    def violations(self) -> list[str]:
        D, C, F = self.diagram, self.base, self.field
        bad = []
        for i in C.objects:
            M = self.modules.get(i)
            if M is None:
                bad.append(f"no module at {label(i)}")
                continue
            if M.algebra.dim != D.algebras[i].dim:
                bad.append(f"module at {label(i)} is over an algebra of the wrong dimension")
                continue
            bad += [f"M^{label(i)}: {x}" for x in M.violations()]
        if bad:
            return bad
        for v in C.morphisms:
            d, c = C.dom(v), C.cod(v)
            if v not in self.T:
                bad.append(f"no transition map for {label(v)}")
                continue
            if self.T[v].shape != (self.dim(d), self.dim(c)):
                bad.append(f"T^{label(v)} has shape {self.T[v].shape}")
        if bad:
            return bad
        for i in C.objects:
            if not F.equal(self.T[C.identity(i)], F.eye(self.dim(i))):
                bad.append(f"T of identity at {label(i)} is not the identity")
        for u, v in C.composable_pairs():
            if not F.equal(self.T[C.compose(u, v)], F.matmul(self.T[u], self.T[v])):
                bad.append(f"T^(uv) != T^u T^v at ({label(u)},{label(v)})")
        for v in C.nonidentity():
            restricted = ralg.restrict_module(self.modules[C.dom(v)], D.morphism(v))
            if not ralg.is_module_map(self.modules[C.cod(v)], restricted, self.T[v]):
                bad.append(f"T^{label(v)} is not linear along phi^{label(v)}")
        return bad

    def validate(self) -> "DiagModule":
        bad = self.violations()
        if bad:
            raise DiagramError(bad)
        return self


@dataclass
class DiagMap:
    source: DiagModule
    target: DiagModule
    comps: dict  # object -> matrix source^i -> target^i

    def __getitem__(self, i):
        return self.comps[i]

    def violations(self) -> list[str]:
        M, N = self.source, self.target
        C, F = M.base, M.field
        bad = []
        for i in C.objects:
            e = self.comps.get(i)
            if e is None or e.shape != (N.dim(i), M.dim(i)):
                bad.append(f"component at {label(i)} missing or misshapen")
            elif not ralg.is_module_map(M.modules[i], N.modules[i], e):
                bad.append(f"component at {label(i)} is not linear")
        if bad:
            return bad
        for v in C.nonidentity():
            d, c = C.dom(v), C.cod(v)
            if not F.equal(F.matmul(self.comps[d], M.T[v]), F.matmul(N.T[v], self.comps[c])):
                bad.append(f"naturality fails at {label(v)}")
        return bad

    def validate(self) -> "DiagMap":
        bad = self.violations()
        if bad:
            raise DiagramError(bad)
        return self

    def then(self, other: "DiagMap") -> "DiagMap":
        F = self.source.field
        return DiagMap(self.source, other.target, {i: F.matmul(other.comps[i], e) for i, e in self.comps.items()})

    def is_zero(self) -> bool:
        F = self.source.field
        return all(F.is_zero(e) for e in self.comps.values())

    def equals(self, other: "DiagMap") -> bool:
        F = self.source.field
        return all(F.equal(e, other.comps[i]) for i, e in self.comps.items())


# -- basic constructions ----------------------------------------------------------------


def constant_diagram(C: FinCat, A: Algebra, name: str = "") -> Diagram:
    F = A.field
    return Diagram(C, {i: A for i in C.objects}, {v: F.eye(A.dim) for v in C.morphisms}, name=name or f"const {A.name}")


def regular_diag_module(A: Diagram) -> DiagModule:
    mods = {i: ralg.regular_module(B) for i, B in A.algebras.items()}
    return DiagModule(A, mods, dict(A.phi), name="A")


def zero_diag_module(A: Diagram) -> DiagModule:
    F = A.field
    C = A.base
    mods = {i: ralg.zero_module(A.algebras[i]) for i in C.objects}
    return DiagModule(A, mods, {v: F.zeros(0, 0) for v in C.morphisms})


def identity_map(M: DiagModule) -> DiagMap:
    return DiagMap(M, M, {i: M.field.eye(M.dim(i)) for i in M.base.objects})


def zero_map(M: DiagModule, N: DiagModule) -> DiagMap:
    return DiagMap(M, N, {i: M.field.zeros(N.dim(i), M.dim(i)) for i in M.base.objects})


def direct_sum(mods: list[DiagModule]) -> DiagModule:
    A = mods[0].diagram
    C, F = A.base, A.field
    out = {i: ralg.direct_sum([M.modules[i] for M in mods], A.algebras[i]) for i in C.objects}
    T = {}
    for v in C.morphisms:
        d, c = C.dom(v), C.cod(v)
        blk = F.zeros(sum(M.dim(d) for M in mods), sum(M.dim(c) for M in mods))
        r = k = 0
        for M in mods:
            blk[r:r + M.dim(d), k:k + M.dim(c)] = M.T[v]
            r += M.dim(d)
            k += M.dim(c)
        T[v] = blk
    return DiagModule(A, out, T)


def generated_submodule(M: DiagModule, gens: dict) -> dict:
    """Basis (columns) at each object of the submodule generated by ``gens[i]`` (columns)."""
    C, F = M.base, M.field
    span = {i: F.zeros(M.dim(i), 0) for i in C.objects}
    for i, g in gens.items():
        span[i] = np.concatenate([span[i], g], axis=1)
    changed = True
    while changed:
        changed = False
        for i in C.objects:
            span[i] = F.colspace(span[i]) if span[i].shape[1] else span[i]
            acts = [span[i]] + [F.matmul(M.modules[i].action[s], span[i]) for s in range(M.modules[i].algebra.dim)] if span[i].shape[1] else [span[i]]
            new = F.colspace(np.concatenate(acts, axis=1)) if span[i].shape[1] else span[i]
            if new.shape[1] != span[i].shape[1]:
                changed = True
            span[i] = new
        for v in C.nonidentity():
            d, c = C.dom(v), C.cod(v)
            if span[c].shape[1] == 0:
                continue
            img = F.matmul(M.T[v], span[c])
            if not F.in_span(span[d], img):
                span[d] = F.colspace(np.concatenate([span[d], img], axis=1))
                changed = True
    return span


@dataclass
class Quotient:
    module: DiagModule
    proj: DiagMap


def quotient_module(M: DiagModule, sub: dict) -> Quotient:
    """M / sub for a submodule given by per-object column bases."""
    C, F = M.base, M.field
    projs, lifts, mods = {}, {}, {}
    for i in C.objects:
        p, l = ralg.quotient(F, sub[i], M.dim(i))
        projs[i], lifts[i] = p, l
        mods[i] = ralg.induced_quotient_module(M.modules[i], p, l)
    T = {v: F.mul(projs[C.dom(v)], M.T[v], lifts[C.cod(v)]) for v in C.morphisms}
    Q = DiagModule(M.diagram, mods, T)
    return Quotient(Q, DiagMap(M, Q, projs))


def kernel(eta: DiagMap) -> tuple[DiagModule, DiagMap]:
    """Kernel submodule with its inclusion (columns are a chosen basis)."""
    M = eta.source
    C, F = M.base, M.field
    inc = {i: F.nullspace(eta.comps[i]) if M.dim(i) else F.zeros(0, 0) for i in C.objects}
    return submodule(M, inc)


def submodule(M: DiagModule, basis: dict) -> tuple[DiagModule, DiagMap]:
    """The submodule with the given column bases (assumed closed), and its inclusion."""
    C, F = M.base, M.field
    left = {i: F.left_inverse(basis[i]) for i in C.objects}
    mods = {}
    for i in C.objects:
        A = M.modules[i].algebra
        k = basis[i].shape[1]
        if k == 0:
            mods[i] = ralg.zero_module(A)
        else:
            mods[i] = AlgModule(A, np.stack([F.mul(left[i], M.modules[i].action[s], basis[i]) for s in range(A.dim)]))
    T = {v: F.mul(left[C.dom(v)], M.T[v], basis[C.cod(v)]) for v in C.morphisms}
    K = DiagModule(M.diagram, mods, T)
    return K, DiagMap(K, M, dict(basis))


# -- pullback ------------------------------------------------------------------------------


def pullback(f: CatFunctor, X, along: Diagram | None = None):
    """f* of a Diagram, DiagModule or DiagMap.

    For modules and maps the pulled-back diagram can be supplied as ``along``
    so that repeated pullbacks share one diagram object.
    """
    D = f.source
    if isinstance(X, Diagram):
        return Diagram(D, {s: X.algebras[f.obj(s)] for s in D.objects}, {x: X.phi[f.mor(x)] for x in D.morphisms},
                       name=f"{f.name or 'f'}*{X.name}")
    if isinstance(X, DiagModule):
        A = along if along is not None else pullback(f, X.diagram)
        return DiagModule(A, {s: X.modules[f.obj(s)] for s in D.objects}, {x: X.T[f.mor(x)] for x in D.morphisms})
    if isinstance(X, DiagMap):
        A = along if along is not None else pullback(f, X.source.diagram)
        src = pullback(f, X.source, A)
        tgt = pullback(f, X.target, A)
        return DiagMap(src, tgt, {s: X.comps[f.obj(s)] for s in D.objects})
    raise TypeError(f"cannot pull back {type(X).__name__}")


# -- left adjoint f_! ----------------------------------------------------------------------


@dataclass
class _ShriekAt:
    """Data of (f_!N)^i: nodes (w, sigma) of i/f and the plain-level presentation."""

    nodes: list
    offsets: dict  # node -> offset into the plain direct sum of A^i (x)_k N^sigma
    plain_dim: int
    proj: np.ndarray  # plain -> (f_!N)^i
    lift: np.ndarray  # section of proj


@dataclass
class Shriek:
    functor: CatFunctor
    source: DiagModule  # N over f*A
    module: DiagModule  # f_!N over A
    pieces: dict = dc_field(repr=False)

    def unit(self) -> DiagMap:
        """eta_N: N -> f* f_! N, n |-> 1 (x) n at (id, sigma)."""
        f, N = self.functor, self.source
        D = f.source
        F = N.field
        target = pullback(f, self.module, N.diagram)
        comps = {}
        for s in D.objects:
            i = f.obj(s)
            P = self.pieces[i]
            A = self.module.diagram.algebras[i]
            node = (f.target.identity(i), s)
            n = N.dim(s)
            emb = F.zeros(P.plain_dim, n)
            off = P.offsets[node]
            emb[off:off + A.dim * n, :] = F.kron(A.unit.reshape(-1, 1), F.eye(n))
            comps[s] = F.matmul(P.proj, emb)
        return DiagMap(N, target, comps)

    def on_map(self, eta: DiagMap, other: "Shriek") -> DiagMap:
        """f_!(eta) for eta: self.source -> other.source."""
        C = self.module.base
        F = self.module.field
        comps = {}
        for i in C.objects:
            P, Q = self.pieces[i], other.pieces[i]
            A = self.module.diagram.algebras[i]
            blk = F.zeros(Q.plain_dim, P.plain_dim)
            for node in P.nodes:
                s = node[1]
                e = eta.comps[s]
                r, c = Q.offsets[node], P.offsets[node]
                blk[r:r + A.dim * e.shape[0], c:c + A.dim * e.shape[1]] = F.kron(F.eye(A.dim), e)
            comps[i] = F.mul(Q.proj, blk, P.lift)
        return DiagMap(self.module, other.module, comps)


def _plain_layout(i, f: CatFunctor, N: DiagModule, A: Diagram):
    cc = comma_category(i, f)
    nodes = list(cc.category.objects)
    offsets = {}
    off = 0
    for node in nodes:
        offsets[node] = off
        off += A.algebras[i].dim * N.dim(node[1])
    return cc, nodes, offsets, off


def shriek(f: CatFunctor, N: DiagModule, A: Diagram, check: bool = False) -> Shriek:
    """f_!N over A for N over f*A.

    At each object i the value is the colimit over (i/f)^op of A^i (x)_w N^sigma,
    a map x: (u, tau) -> (w, sigma) of i/f contributing Id (x) T_N^x.
    """
    C, F = A.base, A.field
    mods, pieces = {}, {}
    for i in C.objects:
        Ai = A.algebras[i]
        cc, nodes, offsets, plain = _plain_layout(i, f, N, A)
        if not nodes:
            mods[i] = ralg.zero_module(Ai)
            pieces[i] = _ShriekAt(nodes, offsets, 0, F.zeros(0, 0), F.zeros(0, 0))
            continue
        tts = {}
        for (w, s) in nodes:
            phi_w = AlgMorphism(A.algebras[f.obj(s)], Ai, A.phi[w])
            tts[(w, s)] = ralg.twisted_tensor(phi_w, N.modules[s])
        J = cc.category
        maps = {}
        for g in J.morphisms:
            src, dst = J.dom(g), J.cod(g)  # g = (u, x): (u, tau) -> (w, sigma)
            x = g[1]
            big = F.kron(F.eye(Ai.dim), N.T[x])  # A^i (x) N^sigma -> A^i (x) N^tau
            maps[g] = F.mul(tts[src].proj, big, tts[dst].lift) if tts[src].proj.size and tts[dst].lift.size \
                else F.zeros(tts[src].module.dim, tts[dst].module.dim)
        colim = ralg.module_colimit(J, {n: tts[n].module for n in nodes}, maps, contravariant=True, check=check)
        # compose the node surjections with the colimit presentation
        node_proj = F.zeros(sum(t.module.dim for t in tts.values()), plain)
        node_lift = F.zeros(plain, node_proj.shape[0])
        for n in nodes:
            r = colim.offsets[n]
            q = tts[n].module.dim
            if q:
                node_proj[r:r + q, offsets[n]:offsets[n] + tts[n].proj.shape[1]] = tts[n].proj
                node_lift[offsets[n]:offsets[n] + tts[n].lift.shape[0], r:r + q] = tts[n].lift
        proj = F.matmul(colim.proj, node_proj) if colim.proj.size else F.zeros(colim.module.dim, plain)
        lift = F.matmul(node_lift, colim.lift) if colim.lift.size else F.zeros(plain, colim.module.dim)
        mods[i] = colim.module
        pieces[i] = _ShriekAt(nodes, offsets, plain, proj, lift)
    T = {}
    for v in C.morphisms:
        h, i = C.dom(v), C.cod(v)
        Pi, Ph = pieces[i], pieces[h]
        blk = F.zeros(Ph.plain_dim, Pi.plain_dim)
        for (w, s) in Pi.nodes:
            n = N.dim(s)
            tgt = (C.compose(v, w), s)
            r, c = Ph.offsets[tgt], Pi.offsets[(w, s)]
            blk[r:r + A.algebras[h].dim * n, c:c + A.algebras[i].dim * n] = F.kron(A.phi[v], F.eye(n))
        T[v] = F.mul(Ph.proj, blk, Pi.lift) if Ph.proj.size and Pi.lift.size else F.zeros(mods[h].dim, mods[i].dim)
    out = DiagModule(A, mods, T)
    if check:
        out.validate()
    return Shriek(f, N, out, pieces)


def counit(f: CatFunctor, M: DiagModule, sh: Shriek | None = None) -> DiagMap:
    """epsilon_M: f_! f* M -> M, a (x) m at (w, sigma) |-> a T_M^w(m)."""
    A = M.diagram
    C, F = A.base, A.field
    if sh is None:
        sh = shriek(f, pullback(f, M), A)
    comps = {}
    for i in C.objects:
        P = sh.pieces[i]
        Ai = A.algebras[i]
        blk = F.zeros(M.dim(i), P.plain_dim)
        for (w, s) in P.nodes:
            Tw = M.T[w]  # M^{f s} -> M^i
            n = Tw.shape[1]
            off = P.offsets[(w, s)]
            for a in range(Ai.dim):
                blk[:, off + a * n: off + (a + 1) * n] = F.matmul(M.modules[i].action[a], Tw)
        comps[i] = F.matmul(blk, P.lift) if P.lift.size else F.zeros(M.dim(i), sh.module.dim(i))
    return DiagMap(sh.module, M, comps)


# -- Hom spaces -------------------------------------------------------------------------------


def hom_space(M: DiagModule, N: DiagModule) -> list[DiagMap]:
    """Basis of Hom_A(M, N)."""
    C, F = M.base, M.field
    objs = list(C.objects)
    offs, off = {}, 0
    for i in objs:
        offs[i] = off
        off += N.dim(i) * M.dim(i)
    nvar = off
    if nvar == 0:
        return []
    rows = []
    for i in objs:
        m, n = M.dim(i), N.dim(i)
        if m * n == 0:
            continue
        for g in M.modules[i].algebra.generators():
            Mg, Ng = M.modules[i].act(g), N.modules[i].act(g)
            blk = F.zeros(n * m, nvar)
            blk[:, offs[i]:offs[i] + n * m] = F.reduce(F.kron(F.eye(n), Mg.T) - F.kron(Ng, F.eye(m)))
            rows.append(blk)
    for v in C.nonidentity():
        d, c = C.dom(v), C.cod(v)
        md, nd, mc, nc = M.dim(d), N.dim(d), M.dim(c), N.dim(c)
        if nd * mc == 0:
            continue
        # eta^d T_M - T_N eta^c = 0, an nd x mc matrix equation
        blk = F.zeros(nd * mc, nvar)
        if md:
            blk[:, offs[d]:offs[d] + nd * md] = F.kron(F.eye(nd), M.T[v].T)
        if nc:
            blk[:, offs[c]:offs[c] + nc * mc] = F.reduce(blk[:, offs[c]:offs[c] + nc * mc] - F.kron(N.T[v], F.eye(mc)))
        rows.append(blk)
    sysm = np.concatenate(rows, axis=0) if rows else F.zeros(0, nvar)
    null = F.nullspace(sysm)
    out = []
    for c in range(null.shape[1]):
        col = null[:, c]
        comps = {i: col[offs[i]:offs[i] + N.dim(i) * M.dim(i)].reshape(N.dim(i), M.dim(i)) for i in objs}
        out.append(DiagMap(M, N, comps))
    return out


def flatten(eta: DiagMap) -> np.ndarray:
    objs = eta.source.base.objects
    parts = [eta.comps[i].ravel() for i in objs]
    return np.concatenate(parts) if parts else eta.source.field.zeros(0)


def maps_rank(maps: list[DiagMap]) -> int:
    if not maps:
        return 0
    F = maps[0].source.field
    return F.rank(np.stack([flatten(m) for m in maps], axis=1))


# -- adjunction ---------------------------------------------------------------------------------


@dataclass
class AdjunctionReport:
    hom_left: int
    hom_right: int
    triangle_counit: bool
    triangle_unit: bool
    bijection: bool

    @property
    def ok(self) -> bool:
        return self.hom_left == self.hom_right and self.triangle_counit and self.triangle_unit and self.bijection


def adjunction_check(f: CatFunctor, N: DiagModule, M: DiagModule) -> AdjunctionReport:
    """Hom_A(f_!N, M) against Hom_{f*A}(N, f*M), triangle identities and the bijection."""
    A = M.diagram
    F = A.field
    fA = N.diagram
    shN = shriek(f, N, A)
    fM = pullback(f, M, fA)
    shfM = shriek(f, fM, A)
    left = hom_space(shN.module, M)
    right = hom_space(N, fM)
    eps_M = counit(f, M, shfM)
    eta_N = shN.unit()
    eta_fM = shfM.unit()
    # epsilon_{f_!N} . f_!(eta_N) = id
    shfshN = shriek(f, pullback(f, shN.module, fA), A)
    eps_shN = counit(f, shN.module, shfshN)
    first = shN.on_map(eta_N, shfshN).then(eps_shN)
    tri1 = first.equals(identity_map(shN.module))
    # f*(epsilon_M) . eta_{f*M} = id
    second = eta_fM.then(pullback(f, eps_M, fA))
    tri2 = second.equals(identity_map(fM))

    def to_right(g: DiagMap) -> DiagMap:
        return eta_N.then(pullback(f, g, fA))

    def to_left(h: DiagMap) -> DiagMap:
        return shN.on_map(h, shfM).then(eps_M)

    bij = all(to_left(to_right(g)).equals(g) for g in left) and all(to_right(to_left(h)).equals(h) for h in right)
    return AdjunctionReport(len(left), len(right), tri1, tri2, bij)


# -- allowability -------------------------------------------------------------------------------


def is_allowable(eta: DiagMap) -> tuple[bool, dict]:
    """Objectwise k-linear k^i with eta^i k^i eta^i = eta^i (always exists over a field)."""
    F = eta.source.field
    wit = {}
    ok = True
    for i, e in eta.comps.items():
        k = F.pseudo_inverse(e)
        wit[i] = k
        if not F.equal(F.mul(e, k, e), e):
            ok = False
    return ok, wit


# -- bimodules ------------------------------------------------------------------------------------


def bimodule_as_left(A: Diagram, left: dict, right: dict, T: dict) -> DiagModule:
    """A bimodule (commuting left/right actions, transitions T) as a left A^e-module."""
    Ae = A.enveloping()
    bad = []
    mods = {}
    for i in A.base.objects:
        M = ralg.bimodule_to_left(A.algebras[i], left[i], right[i])
        mods[i] = AlgModule(Ae.algebras[i], M.action)
        bad += [f"at {label(i)}: {x}" for x in mods[i].violations()]
    if bad:
        raise DiagramError(bad)
    return DiagModule(Ae, mods, dict(T))


def regular_bimodule(A: Diagram) -> DiagModule:
    """A as a bimodule over itself, as a left A^e-module (T^v = phi^v)."""
    Ae = A.enveloping()
    mods = {i: AlgModule(Ae.algebras[i], ralg.regular_bimodule(B).action) for i, B in A.algebras.items()}
    return DiagModule(Ae, mods, dict(A.phi), name="A")


def rebase(M: DiagModule, A: Diagram) -> DiagModule:
    """The same module data over an equal diagram object ``A``."""
    return DiagModule(A, {i: AlgModule(A.algebras[i], m.action) for i, m in M.modules.items()}, dict(M.T), M.name)


def rebase_map(eta: DiagMap, M: DiagModule, N: DiagModule) -> DiagMap:
    return DiagMap(M, N, dict(eta.comps))


# -- subdivision -------------------------------------------------------------------------------


@dataclass
class Subdivided:
    """C', d: C' -> C and A' = d*A, built once and shared."""

    diagram: Diagram
    base: FinCat
    d: CatFunctor
    primed: Diagram

    def module(self, M: DiagModule) -> DiagModule:
        return pullback(self.d, M, self.primed)

    def map(self, eta: DiagMap, src: DiagModule | None = None, tgt: DiagModule | None = None) -> DiagMap:
        src = src or self.module(eta.source)
        tgt = tgt or self.module(eta.target)
        return DiagMap(src, tgt, {s: eta.comps[self.d.obj(s)] for s in self.base.objects})


def subdivide_diagram(A: Diagram) -> Subdivided:
    C = A.base
    if not is_delta(C):
        raise NotADelta(f"{C!r} is not a delta")
    Cp = subdivide(C)
    d = d_functor(C, Cp)
    return Subdivided(A, Cp, d, pullback(d, A))


def subdivide_module(M: DiagModule, sub: Subdivided | None = None) -> DiagModule:
    sub = sub or subdivide_diagram(M.diagram)
    return sub.module(M)


def diagrams_equal(A: Diagram, B: Diagram) -> list[str]:
    """Differences between two diagrams over the same base (structure constants and maps)."""
    F = A.field
    bad = []
    if A.base != B.base:
        return ["different base categories"]
    for i in A.base.objects:
        a, b = A.algebras[i], B.algebras[i]
        if a.dim != b.dim or not F.equal(a.mult, b.mult) or not F.equal(a.unit, b.unit):
            bad.append(f"algebras differ at {label(i)}")
    for v in A.base.morphisms:
        if not F.equal(A.phi[v], B.phi[v]):
            bad.append(f"transition maps differ at {label(v)}")
    return bad


def shriek_identity_check(N: DiagModule) -> bool:
    """f = id: the unit N -> f_!N is invertible at every object."""
    f = identity_functor(N.base)
    sh = shriek(f, N, N.diagram)
    eta = sh.unit()
    F = N.field
    return all(e.shape[0] == e.shape[1] and F.rank(e) == e.shape[0] for e in eta.comps.values())
