"""Matrix-style algebras A! of diagrams over finite posets, and the bimodules M!.

A! has basis a^i phi^{ij} (i <= j, a^i a basis element of A^i), ordered
lexicographically by (i, j, local index) along a fixed topological order.
The product is (a^h phi^{hi})(a^j phi^{jl}) = a^h phi^{hi}(a^j) phi^{hl} when
i = j and zero otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import diagram as dg
from . import homalg, ralg
from .diagram import DiagMap, DiagModule, Diagram
from .fincat import FinCat, is_delta, is_poset, label
from .ralg import AlgModule, Algebra


# above this many coboundary entries the auto route switches to the relative complex
STANDARD_ROUTE_LIMIT = 2_000_000


class NotAPoset(ValueError):
    pass


def _relation(C: FinCat, i, j):
    hom = C.hom(i, j)
    return hom[0] if hom else None


@dataclass
class BangAlgebra:
    diagram: Diagram
    algebra: Algebra
    pairs: list  # (i, j) with i <= j, in basis order
    offsets: dict  # (i, j) -> first basis index

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def element(self, i, j, a: np.ndarray | None = None) -> np.ndarray:
        """a phi^{ij} as a vector of A! (a defaults to 1_i)."""
        F = self.algebra.field
        Ai = self.diagram.algebras[i]
        a = Ai.unit if a is None else a
        v = F.zeros(self.dim)
        off = self.offsets[(i, j)]
        v[off:off + Ai.dim] = a
        return v

    def idempotents(self) -> list[np.ndarray]:
        """1_i phi^{ii}, one per object; orthogonal and summing to the unit."""
        return [self.element(i, i) for i in self.order]

    @property
    def order(self) -> list:
        seen = []
        for i, _ in self.pairs:
            if i not in seen:
                seen.append(i)
        return seen

    def basis_labels(self) -> list[str]:
        out = []
        for (i, j) in self.pairs:
            for s in range(self.diagram.algebras[i].dim):
                out.append(f"e{s}@{label(i)}<={label(j)}")
        return out


def _pairs(C: FinCat) -> tuple[list, list]:
    order = C.topological_order()
    pairs = [(i, j) for i in order for j in order if C.hom(i, j)]
    return order, pairs


def bang_algebra(A: Diagram) -> BangAlgebra:
    C, F = A.base, A.field
    if not is_poset(C):
        raise NotAPoset(f"{C!r} is not a poset")
    order, pairs = _pairs(C)
    offsets, n = {}, 0
    for (i, j) in pairs:
        offsets[(i, j)] = n
        n += A.algebras[i].dim
    mult = F.zeros(n, n, n)
    for (h, i) in pairs:
        Ah = A.algebras[h]
        phi = A.phi[_relation(C, h, i)]  # A^i -> A^h
        # e_s * phi(e_t) in A^h
        prod = F.reduce(np.einsum("suc,ut->stc", Ah.mult, phi))
        for (i2, l) in pairs:
            if i2 != i:
                continue
            r, c, o = offsets[(h, i)], offsets[(i, l)], offsets[(h, l)]
            mult[r:r + Ah.dim, c:c + A.algebras[i].dim, o:o + Ah.dim] = prod
    unit = F.zeros(n)
    for i in order:
        off = offsets[(i, i)]
        unit[off:off + A.algebras[i].dim] = A.algebras[i].unit
    B = Algebra(F, mult, unit, name=f"{A.name or 'A'}!")
    return BangAlgebra(A, B, pairs, offsets)


def matrix_model_product(Ab: BangAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product computed as C x C matrices with entries a_{ij} in A^i: c_{hl} = sum_i a_{hi} phi^{hi}(b_{il})."""
    A = Ab.diagram
    C, F = A.base, A.field

    def entries(v):
        return {(i, j): v[Ab.offsets[(i, j)]:Ab.offsets[(i, j)] + A.algebras[i].dim] for (i, j) in Ab.pairs}

    a, b = entries(x), entries(y)
    out = F.zeros(Ab.dim)
    for (h, l) in Ab.pairs:
        acc = F.zeros(A.algebras[h].dim)
        for i in C.objects:
            if (h, i) in a and (i, l) in b:
                moved = F.matmul(A.phi[_relation(C, h, i)], b[(i, l)].reshape(-1, 1)).ravel()
                acc = F.reduce(acc + A.algebras[h].product(a[(h, i)], moved))
        out[Ab.offsets[(h, l)]:Ab.offsets[(h, l)] + A.algebras[h].dim] = acc
    return out


def matrix_model_check(Ab: BangAlgebra, samples: int = 10, seed: int = 0) -> bool:
    F = Ab.algebra.field
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = F.random(rng, (Ab.dim,))
        y = F.random(rng, (Ab.dim,))
        if not F.equal(Ab.algebra.product(x, y), matrix_model_product(Ab, x, y)):
            return False
    return True


@dataclass
class BangModule:
    bang: BangAlgebra
    source: DiagModule
    left: np.ndarray = dc_field(repr=False)
    right: np.ndarray = dc_field(repr=False)
    offsets: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.left.shape[1]

    @cached_property
    def module(self) -> AlgModule:
        """The same bimodule as a left module over (A!)^e (dim A!^2 action matrices, built on demand)."""
        B = self.bang.algebra
        if self.dim == 0:
            return ralg.zero_module(ralg.enveloping_algebra(B))
        return ralg.bimodule_to_left(B, self.left, self.right)


def _sides(M: DiagModule, i):
    X = M.modules[i]
    if X.dim == 0:
        d = M.diagram.algebras[i].factors[0].dim
        F = M.field
        return F.zeros(d, 0, 0), F.zeros(d, 0, 0)
    return ralg.bimodule_sides(X)


def bang_module(Ab: BangAlgebra, M: DiagModule) -> BangModule:
    """M! for a bimodule M given as a left module over the enveloping diagram of Ab.diagram."""
    A = Ab.diagram
    C, F = A.base, A.field
    if not is_poset(C):
        raise NotAPoset(f"{C!r} is not a poset")
    offsets, n = {}, 0
    for (i, j) in Ab.pairs:
        offsets[(i, j)] = n
        n += M.dim(i)
    sides = {i: _sides(M, i) for i in C.objects}
    nb = Ab.dim
    left = F.zeros(nb, n, n)
    right = F.zeros(nb, n, n)
    for (h, i) in Ab.pairs:
        Ah = A.algebras[h]
        v = _relation(C, h, i)
        lh, rh = sides[h]
        mh, mi = M.dim(h), M.dim(i)
        b0 = Ab.offsets[(h, i)]
        for (i2, l) in Ab.pairs:
            if i2 != i:
                continue
            # (a^h phi^{hi})(m^i phi^{il}) = a^h T^{hi}(m^i) phi^{hl}
            src, dst = offsets[(i, l)], offsets[(h, l)]
            if mh and mi:
                for s in range(Ah.dim):
                    left[b0 + s, dst:dst + mh, src:src + mi] = F.matmul(lh[s], M.T[v])
        # (m^h phi^{hi})(a^i phi^{il}) = m^h phi^{hi}(a^i) phi^{hl}
        if mh == 0:
            continue
        phi = A.phi[v]
        Ai = A.algebras[i]
        for (i3, l) in Ab.pairs:
            if i3 != i:
                continue
            c0 = Ab.offsets[(i, l)]
            src, dst = offsets[(h, i)], offsets[(h, l)]
            for t in range(Ai.dim):
                mat = np.einsum("u,uab->ab", phi[:, t], rh)
                right[c0 + t, dst:dst + mh, src:src + mh] = F.reduce(mat)
    return BangModule(Ab, M, left, right, offsets)


def bang_map(eta: DiagMap, Ms: BangModule, Mt: BangModule) -> np.ndarray:
    """eta!(n^i phi^{ij}) = eta^i(n^i) phi^{ij}, as a matrix Mt.dim x Ms.dim."""
    F = eta.source.field
    out = F.zeros(Mt.dim, Ms.dim)
    for (i, j) in Ms.bang.pairs:
        e = eta.comps[i]
        r, c = Mt.offsets[(i, j)], Ms.offsets[(i, j)]
        out[r:r + e.shape[0], c:c + e.shape[1]] = e
    return out


def bang_hom_check(Ab: BangAlgebra, M: DiagModule, N: DiagModule) -> tuple[int, int]:
    """(dim Hom_{A^e}(M, N), dim Hom_{(A!)^e}(M!, N!))."""
    left = len(dg.hom_space(M, N))
    Mb, Nb = bang_module(Ab, M), bang_module(Ab, N)
    right = ralg.intertwiners(Ab.algebra.field, list(Mb.left) + list(Mb.right), list(Nb.left) + list(Nb.right)).dim
    return left, right


# -- compatibility and comparison pipelines --------------------------------------------------------------


@dataclass
class CompatReport:
    ok: bool
    differences: list


def subdivide_compat_check(A: Diagram) -> CompatReport:
    """(A')^e and (A^e)' built independently and compared entry by entry."""
    sub = dg.subdivide_diagram(A)
    lhs = sub.primed.enveloping()
    rhs = dg.subdivide_diagram(A.enveloping()).primed
    diffs = dg.diagrams_equal(lhs, rhs)
    return CompatReport(not diffs, diffs)


def bimodule_subdivided(M: DiagModule, sub: dg.Subdivided) -> DiagModule:
    """M' for a bimodule M, as a left module over (A')^e."""
    Ae = M.diagram
    sub_e = dg.Subdivided(Ae, sub.base, sub.d, dg.pullback(sub.d, Ae))
    Mp = sub_e.module(M)
    return dg.rebase(Mp, sub.primed.enveloping())


def hochschild_bang(Ab: BangAlgebra, X: BangModule, n_max: int, route: str = "auto",
                    budget: int | None = None) -> tuple[list[int], str]:
    """HH^n(A!, X) through the standard complex when it fits, else relative to the 1_i phi^{ii}."""
    B = Ab.algebra
    lim = homalg.budget_limit(budget)
    need = X.dim * B.dim ** (n_max + 1) * X.dim * B.dim ** n_max
    if route == "standard" or (route == "auto" and need <= min(lim, STANDARD_ROUTE_LIMIT)):
        return homalg.hochschild_algebra(B, X.module, n_max, budget), "standard"
    return homalg.hochschild_relative(B, (X.left, X.right), Ab.idempotents(), n_max, budget), "relative"


@dataclass
class ComparisonReport:
    kind: str
    diagram_side: list
    algebra_side: list
    route: str
    variant: str = ""
    extra: dict = dc_field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return self.diagram_side == self.algebra_side


def scct_compare(A: Diagram, M: DiagModule | None = None, n_max: int = 2, route: str = "auto",
                 budget: int | None = None) -> ComparisonReport:
    """Ext over A^e of A into M against HH(A!, M!), for A over a poset."""
    if M is None:
        M = dg.regular_bimodule(A)
    lhs = homalg.diagram_cohomology(A, M, n_max, budget=budget)
    Ab = bang_algebra(A)
    X = bang_module(Ab, dg.rebase(M, A.enveloping()))
    rhs, used = hochschild_bang(Ab, X, n_max, route, budget)
    return ComparisonReport("scct", lhs, rhs, used, extra={"dim_bang": Ab.dim, "dim_module": X.dim})


def gcct_pipeline(A: Diagram, M: DiagModule | None = None, n_max: int = 2, double: bool = False,
                  route: str = "auto", budget: int | None = None) -> list[ComparisonReport]:
    """Diagram cohomology H(A, M) against HH((A')!, M'!) and, with ``double`` (or when C' is not a poset), (A'')!."""
    if not is_delta(A.base):
        from .subdivision import NotADelta
        raise NotADelta(f"{A.base!r} is not a delta")
    if M is None:
        M = dg.regular_bimodule(A)
    lhs = homalg.diagram_cohomology(A, M, n_max, budget=budget)
    reports = []
    sub1 = dg.subdivide_diagram(A)
    M1 = bimodule_subdivided(M, sub1)
    variants = []
    if is_poset(sub1.base):
        variants.append(("C'", sub1.primed, M1))
    if double or not variants:
        sub2 = dg.subdivide_diagram(sub1.primed)
        variants.append(("C''", sub2.primed, bimodule_subdivided(M1, sub2)))
    for name, Ap, Mp in variants:
        Ab = bang_algebra(Ap)
        X = bang_module(Ab, Mp)
        rhs, used = hochschild_bang(Ab, X, n_max, route, budget)
        reports.append(ComparisonReport("gcct", lhs, rhs, used, name, {"dim_bang": Ab.dim, "dim_module": X.dim,
                                                                       "objects": len(Ap.base.objects)}))
    return reports
