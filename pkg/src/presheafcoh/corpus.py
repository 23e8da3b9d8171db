"""Seeded instances: small deltas and posets, diagrams on them, and modules of small dimension."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import diagram as dg
from . import fincat, ralg
from .diagram import DiagModule, Diagram
from .field import Field
from .fincat import FinCat


@dataclass
class CorpusEntry:
    name: str
    diagram: Diagram
    modules: list = dc_field(default_factory=list)  # left modules over the diagram
    bimodules: list = dc_field(default_factory=list)  # left modules over the enveloping diagram
    seed: int | None = None

    @property
    def base(self) -> FinCat:
        return self.diagram.base


# -- random categories ------------------------------------------------------------------------------


def random_delta(rng: np.random.Generator, max_objects: int = 5, max_morphisms: int = 24, poset: bool | None = None) -> FinCat:
    """A random delta: a poset generated by a random DAG, or the free category on one."""
    while True:
        n = int(rng.integers(1, max_objects + 1))
        objs = [f"o{k}" for k in range(n)]
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.45]
        as_poset = bool(rng.random() < 0.5) if poset is None else poset
        if as_poset:
            C = fincat.poset_category(objs, [(objs[a], objs[b]) for a, b in edges], name=f"poset{n}")
        else:
            arrows = {}
            for a, b in edges:
                for m in range(int(rng.integers(1, 3))):
                    arrows[f"g{a}{b}{'abc'[m]}"] = (objs[a], objs[b])
            try:
                C = fincat.from_generators(objs, arrows, name=f"free{n}")
            except ValueError:
                continue
        if len(C.morphisms) <= max_morphisms:
            return C


def random_category(rng: np.random.Generator) -> FinCat:
    """A small category that is usually not a delta (monoid-like pieces)."""
    choice = int(rng.integers(0, 3))
    if choice == 0:
        return fincat.idempotent_monoid()
    if choice == 1:
        prod = {(x, y): str((int(x) + int(y)) % 2) for x in "01" for y in "01"}
        return fincat.monoid_category(["0", "1"], prod, "0", name="Z2")
    return fincat.product(fincat.idempotent_monoid(), fincat.interval(), name="idem x interval")


# -- random diagrams --------------------------------------------------------------------------------


def _generator_path(C: FinCat, v) -> tuple | None:
    """Generator path of a morphism of a free category (None for collapsed or identity ids)."""
    if C.is_identity(v) or not isinstance(v, str) or "<" in v:
        return None
    return tuple(v.split("."))


def random_diagram(C: FinCat, F: Field, rng: np.random.Generator, max_dim: int = 3) -> Diagram:
    """Truncated polynomial algebras k[x]/x^n_i with phi^v: x |-> lambda_v x.

    n_dom <= n_cod along every arrow so the maps exist; lambda_v combines a
    coboundary of per-object scalars with per-generator scalars on free categories.
    """
    order = C.topological_order()
    n = {}
    for i in order:
        lo = max([n[C.dom(v)] for v in C.into(i) if C.dom(v) in n] + [1])
        n[i] = int(rng.integers(lo, max_dim + 1))
    algs = {}
    cache = {}
    for i in C.objects:
        if n[i] not in cache:
            cache[n[i]] = ralg.truncated_polynomial(F, n[i])
        algs[i] = cache[n[i]]
    c = {i: int(rng.integers(1, F.p if F.p else 5)) for i in C.objects}
    free = all(_generator_path(C, v) is not None for v in C.nonidentity())
    rho = {}
    for v in C.nonidentity():
        path = _generator_path(C, v) if free else None
        for g in path or ():
            if g not in rho:
                rho[g] = int(rng.integers(0, 4))
    phi = {}
    for v in C.morphisms:
        d, cd = C.dom(v), C.cod(v)
        lam = F.scalar(c[d]) * F.inv(F.scalar(c[cd]))
        path = _generator_path(C, v) if free else None
        for g in path or ():
            lam = lam * rho[g]
        lam = F.scalar(lam)
        m = F.zeros(n[d], n[cd])
        for k in range(n[d]):
            m[k, k] = F.scalar(lam ** k)
        phi[v] = m
    return Diagram(C, algs, phi, name="random").validate()


def split_interval_diagram(F: Field) -> Diagram:
    """Interval with A^0 = k x k, A^1 = k and phi: k -> k x k the diagonal."""
    C = fincat.interval()
    kk, k = ralg.product_algebra(F, 2), ralg.ground_algebra(F)
    phi = {"id_0": F.eye(2), "id_1": F.eye(1), "0<1": F.array([[1], [1]])}
    return Diagram(C, {"0": kk, "1": k}, phi, name="kxk->k").validate()


def semisimple_interval_diagram(F: Field) -> Diagram:
    return dg.constant_diagram(fincat.interval(), ralg.matrix_algebra(F, 2), name="const M2")


# -- random modules -------------------------------------------------------------------------------------


def induced(A: Diagram, j) -> DiagModule:
    from .homalg import InducedModule
    return InducedModule(A, [j]).as_diag_module()


def random_module(A: Diagram, rng: np.random.Generator, max_dim: int = 3, tries: int = 20) -> DiagModule:
    """A quotient of one or two induced modules F_j(k), cut down until every M^i has dimension <= max_dim."""
    F, C = A.field, A.base
    objs = list(C.objects)
    for _ in range(tries):
        parts = [induced(A, objs[int(rng.integers(len(objs)))]) for _ in range(int(rng.integers(1, 3)))]
        M = parts[0] if len(parts) == 1 else dg.direct_sum(parts)
        while True:
            big = [i for i in objs if M.dim(i) > max_dim]
            if not big and rng.random() < 0.5:
                break
            pool = big or [i for i in objs if M.dim(i) > 0]
            if not pool:
                break
            i = pool[int(rng.integers(len(pool)))]
            v = F.random(rng, (M.dim(i), 1))
            sub = dg.generated_submodule(M, {i: v})
            M = dg.quotient_module(M, sub).module
        if rng.random() < 0.5:
            M = top_quotient(M)
        if M.total_dim() > 0 and all(M.dim(i) <= max_dim for i in objs):
            return M.validate()
    return dg.regular_diag_module(A)


def top_quotient(M: DiagModule) -> DiagModule:
    """M / rad(A) M, with rad taken objectwise (trace-form radical)."""
    from .homalg import radical_basis
    F, C = M.field, M.base
    gens = {}
    for i in C.objects:
        if M.dim(i) == 0:
            continue
        R = radical_basis(M.diagram.algebras[i])
        cols = [M.modules[i].act(R[:, r]) for r in range(R.shape[1])]
        if cols:
            gens[i] = np.concatenate(cols, axis=1)
    if not gens:
        return M
    return dg.quotient_module(M, dg.generated_submodule(M, gens)).module


def trivial_module(A: Diagram) -> DiagModule:
    """k at every object with the radical acting by zero and identity transitions (A local, phi radical-preserving)."""
    F, C = A.field, A.base
    mods = {}
    for i in C.objects:
        B = A.algebras[i]
        act = F.zeros(B.dim, 1, 1)
        act[:, 0, 0] = B.unit  # augmentation: coefficient of the unit in the monomial basis
        mods[i] = ralg.AlgModule(B, act)
    return DiagModule(A, mods, {v: F.eye(1) for v in C.morphisms}, name="k").validate()


def random_bimodule(A: Diagram, rng: np.random.Generator, max_dim: int = 3) -> DiagModule:
    return random_module(A.enveloping(), rng, max_dim)


# -- the canonical corpus ---------------------------------------------------------------------------


def fixed_entries(F: Field) -> list[CorpusEntry]:
    k = ralg.ground_algebra(F)
    d2 = ralg.truncated_polynomial(F, 2)
    out = []
    for C in [fincat.interval(), fincat.chain(3), fincat.square(), fincat.parallel_pair()]:
        A = dg.constant_diagram(C, k, name=f"k on {C.name}")
        out.append(CorpusEntry(f"{C.name}/k", A, [dg.regular_diag_module(A)], [dg.regular_bimodule(A)]))
    A = dg.constant_diagram(fincat.interval(), d2, name="k[x]/x^2 on interval")
    out.append(CorpusEntry("interval/k[x]/x^2", A, [trivial_module(A), dg.regular_diag_module(A)], [dg.regular_bimodule(A)]))
    A = dg.constant_diagram(fincat.parallel_pair(), d2, name="k[x]/x^2 on parallel pair")
    out.append(CorpusEntry("parallel_pair/k[x]/x^2", A, [trivial_module(A)], [dg.regular_bimodule(A)]))
    A = split_interval_diagram(F)
    out.append(CorpusEntry("interval/kxk->k", A, [dg.regular_diag_module(A)], [dg.regular_bimodule(A)]))
    return out


def random_entries(F: Field, count: int, seed: int = 0, max_objects: int = 4, max_morphisms: int = 12,
                   modules: int = 2, bimodules: int = 1) -> list[CorpusEntry]:
    rng = np.random.default_rng(seed)
    out = []
    for t in range(count):
        s = int(rng.integers(2 ** 31))
        r = np.random.default_rng(s)
        C = random_delta(r, max_objects, max_morphisms)
        A = random_diagram(C, F, r)
        mods = [random_module(A, r) for _ in range(modules)]
        bims = [dg.regular_bimodule(A)] + [random_bimodule(A, r) for _ in range(bimodules - 1)]
        out.append(CorpusEntry(f"random{t}:{C.name}", A, mods, bims, seed=s))
    return out


def canonical_corpus(F: Field | None = None, random_count: int = 14, seed: int = 2024, **kw) -> list[CorpusEntry]:
    F = F or Field()
    fixed = fixed_entries(F)
    rng = np.random.default_rng(seed)
    for e in fixed:
        e.modules.append(random_module(e.diagram, rng))
    return fixed + random_entries(F, random_count, seed, **kw)
