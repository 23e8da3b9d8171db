"""Resolutions by induced modules, relative Ext, Hochschild cohomology, spread-out complexes.

Induced modules.  For an object j and a vector space V,
``F_j(V)^i = sum_{w in Hom(i, j)} A^i (x) V`` with ``e_s`` acting on the
coefficient and ``T^v (a (x) x)_w = (phi^v(a) (x) x)_{vw}``.  A map
``F_j(V) -> N`` is the same as a linear map ``V -> N^j`` (images of the
generators ``(1 (x) x)_{id}``), which is what makes these modules relative
projective and what the Ext computation uses: Hom(P_n, N) is the direct sum
of the N^j over the generators of P_n.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import diagram as dg
from . import ralg
from .complexes import (
    ChainComplex, ChainMap, DoubleComplex, RelQisoReport, TotalizationReport, complex_from,
    is_rel_qiso, total, totalization_identities,
)
from .diagram import DiagMap, DiagModule, Diagram
from .field import Field
from .fincat import is_delta, label
from .ralg import AlgModule, Algebra

from .budget import DEFAULT_BUDGET, BudgetExceeded, budget_limit  # noqa: F401  (re-exported)


# -- induced modules -------------------------------------------------------------------------


class InducedModule:
    """Direct sum of F_{gens[q]}(k) over generators q (grouped by object)."""

    def __init__(self, A: Diagram, gens: list):
        self.diagram = A
        self.gens = list(gens)
        C = A.base
        self.layout = {}
        self.offset = {}
        self.by_object = {j: [q for q, g in enumerate(self.gens) if g == j] for j in C.objects}
        for i in C.objects:
            lay = [(q, w) for q, j in enumerate(self.gens) for w in C.hom(i, j)]
            d = A.algebras[i].dim
            self.layout[i] = lay
            self.offset[i] = {qw: n * d for n, qw in enumerate(lay)}
        self._tidx = {}
        self._diag = None

    @property
    def field(self) -> Field:
        return self.diagram.field

    def dim(self, i) -> int:
        return len(self.layout[i]) * self.diagram.algebras[i].dim

    def dims(self) -> dict:
        return {i: self.dim(i) for i in self.diagram.base.objects}

    def generator_section(self, i) -> np.ndarray:
        """Columns: the generators sitting at i, as vectors (1 (x) x)_{id_i} in F^i."""
        F = self.field
        A = self.diagram.algebras[i]
        qs = self.by_object[i]
        out = F.zeros(self.dim(i), len(qs))
        idi = self.diagram.base.identity(i)
        for c, q in enumerate(qs):
            off = self.offset[i][(q, idi)]
            out[off:off + A.dim, c] = A.unit
        return out

    def apply_T(self, v, X: np.ndarray) -> np.ndarray:
        """T^v X for v: h -> i and X with rows indexed by F^i."""
        A, F = self.diagram, self.field
        C = A.base
        h, i = C.dom(v), C.cod(v)
        dh, di = A.algebras[h].dim, A.algebras[i].dim
        nb_i, nb_h = len(self.layout[i]), len(self.layout[h])
        k = X.shape[1]
        if v not in self._tidx:
            self._tidx[v] = np.array([self.offset[h][(q, C.compose(v, w))] // dh for (q, w) in self.layout[i]], dtype=np.int64)
        out = F.zeros(nb_h, dh, k)
        if nb_i and k:
            Xb = X.reshape(nb_i, di, k).transpose(1, 0, 2).reshape(di, nb_i * k)
            Y = F.matmul(A.phi[v], Xb).reshape(dh, nb_i, k).transpose(1, 0, 2)
            np.add.at(out, self._tidx[v], Y)
        return F.reduce(out.reshape(nb_h * dh, k))

    def apply_act(self, i, s: int, X: np.ndarray) -> np.ndarray:
        A, F = self.diagram, self.field
        d = A.algebras[i].dim
        nb = len(self.layout[i])
        k = X.shape[1]
        if nb == 0 or k == 0:
            return F.zeros(nb * d, k)
        Xb = X.reshape(nb, d, k).transpose(1, 0, 2).reshape(d, nb * k)
        Y = F.matmul(A.algebras[i].left_mats[s], Xb).reshape(d, nb, k).transpose(1, 0, 2)
        return Y.reshape(nb * d, k)

    def as_diag_module(self) -> DiagModule:
        """Materialized action and transition matrices (cached)."""
        if self._diag is None:
            A, F = self.diagram, self.field
            C = A.base
            mods = {}
            for i in C.objects:
                Ai = A.algebras[i]
                n = self.dim(i)
                act = np.stack([self.apply_act(i, s, F.eye(n)) for s in range(Ai.dim)]) if n else F.zeros(Ai.dim, 0, 0)
                mods[i] = AlgModule(Ai, act)
            T = {v: self.apply_T(v, F.eye(self.dim(C.cod(v)))) for v in C.morphisms}
            self._diag = DiagModule(A, mods, T)
        return self._diag


class _ModOps:
    """Uniform T / action access for DiagModules and InducedModules."""

    def __init__(self, N):
        self.N = N
        self.induced = isinstance(N, InducedModule)

    def dim(self, i) -> int:
        return self.N.dim(i)

    def T(self, v, X):
        if self.induced:
            return self.N.apply_T(v, X)
        return self.N.field.matmul(self.N.T[v], X)

    def act(self, i, s, X):
        if self.induced:
            return self.N.apply_act(i, s, X)
        return self.N.field.matmul(self.N.modules[i].action[s], X)


def induced_map_matrix(P: InducedModule, target, images: dict, i) -> np.ndarray:
    """Matrix at i of the map P -> target sending generator q to images[gens[q]][:, rank of q]."""
    A, F = P.diagram, P.field
    C = A.base
    ops = _ModOps(target)
    Ai = A.algebras[i]
    out = F.zeros(ops.dim(i), P.dim(i))
    for j in C.objects:
        qs = P.by_object[j]
        if not qs:
            continue
        Yj = images[j]
        for w in C.hom(i, j):
            Z = ops.T(w, Yj)
            for s in range(Ai.dim):
                col = ops.act(i, s, Z)
                for c, q in enumerate(qs):
                    out[:, P.offset[i][(q, w)] + s] = col[:, c]
    return out


# -- resolutions ------------------------------------------------------------------------------------


@dataclass
class Resolution:
    """Certificate for P_L -> ... -> P_0 -> M -> 0.

    terms[n] is P_n (an InducedModule: the relative projective presentation),
    images[n][j] are the images of the generators of P_n at j (in P_{n-1}^j, or
    M^j for n = 0), d[n][i] the differential at i, kernels[n][i] a basis of
    ker d_n at i (kernels[-1] stands for M itself).
    """

    module: DiagModule
    method: str
    terms: list
    images: list
    d: list
    kernels: list
    _contraction: list | None = dc_field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def diagram(self) -> Diagram:
        return self.module.diagram

    def target(self, n: int):
        return self.module if n == 0 else self.terms[n - 1]

    def generator_counts(self, n: int) -> dict:
        return {j: len(self.terms[n].by_object[j]) for j in self.diagram.base.objects}

    def verify(self) -> list[str]:
        """Exactness (ranks), d^2 = 0 and allowability witnesses, objectwise."""
        F = self.module.field
        C = self.diagram.base
        bad = []
        for i in C.objects:
            if F.rank(self.d[0][i]) != self.module.dim(i):
                bad.append(f"augmentation not onto at {label(i)}")
            for n in range(1, self.length + 1):
                if not F.is_zero(F.matmul(self.d[n - 1][i], self.d[n][i])):
                    bad.append(f"d^2 != 0 in degree {n} at {label(i)}")
                if F.rank(self.d[n][i]) != self.kernels[n - 1][i].shape[1]:
                    bad.append(f"not exact at P_{n - 1}, object {label(i)}")
        for n, wit in enumerate(self.allowability_witnesses()):
            for i, k in wit.items():
                e = self.d[n][i]
                if not F.equal(F.mul(e, k, e), e):
                    bad.append(f"allowability witness fails for d_{n} at {label(i)}")
        return bad

    def allowability_witnesses(self) -> list[dict]:
        """k with d k d = d per differential; the contraction when available, else a pseudo-inverse."""
        F = self.module.field
        C = self.diagram.base
        if self.method == "natural":
            t = self.contraction()
            return [{i: t[n][i] for i in C.objects} for n in range(self.length + 1)]
        return [{i: F.pseudo_inverse(self.d[n][i]) for i in C.objects} for n in range(self.length + 1)]

    def contraction(self) -> list:
        """t[0]: M -> P_0 and t[h+1]: P_h -> P_{h+1}, objectwise, natural in M.

        t[0] sends m to (1 (x) m)_{id}; t[h+1] = s(K_h) (id - t[h] d_h) with
        s(K_h) the same section for the kernel K_h.
        """
        if self.method != "natural":
            raise ValueError("only the natural resolution carries the natural contraction")
        if self._contraction is None:
            F = self.module.field
            C = self.diagram.base
            t = []
            for n in range(self.length + 1):
                comps = {}
                for i in C.objects:
                    sec = self.terms[n].generator_section(i)
                    if n == 0:
                        comps[i] = sec
                    else:
                        K = self.kernels[n - 1][i]
                        proj = F.reduce(F.eye(K.shape[0]) - F.matmul(t[n - 1][i], self.d[n - 1][i]))
                        comps[i] = F.mul(sec, F.left_inverse(K), proj) if K.shape[1] else F.zeros(self.terms[n].dim(i), K.shape[0])
                t.append(comps)
            self._contraction = t
        return self._contraction

    def kernel_section(self, n: int) -> dict:
        """t^{n+1} onto the last kernel: P_n -> K_n coordinates, (id - t^n d_n) then coordinates."""
        F = self.module.field
        C = self.diagram.base
        t = self.contraction()
        out = {}
        for i in C.objects:
            K = self.kernels[n][i]
            proj = F.reduce(F.eye(K.shape[0]) - F.matmul(t[n][i], self.d[n][i]))
            out[i] = F.matmul(F.left_inverse(K), proj) if K.shape[1] else F.zeros(0, K.shape[0])
        return out

    def complex(self, cap: bool = False) -> tuple[ChainComplex, DiagMap]:
        """P_• as a ChainComplex of DiagModules and the augmentation P_0 -> M.

        With ``cap`` the kernel of the last differential is appended as an
        extra top term, which keeps the truncated complex exact.
        """
        terms = [P.as_diag_module() for P in self.terms]
        maps = [DiagMap(terms[n], terms[n - 1], {i: self.d[n][i] for i in self.diagram.base.objects}) for n in range(1, len(terms))]
        if cap:
            K, inc = dg.submodule(terms[-1], self.kernels[self.length])
            terms.append(K)
            maps.append(inc)
        aug = DiagMap(terms[0], self.module, {i: self.d[0][i] for i in self.diagram.base.objects})
        return complex_from(terms, maps), aug


def radical_basis(A: Algebra) -> np.ndarray:
    """Kernel of the trace form (x, y) |-> tr(L_x L_y), as columns; contains the radical."""
    F = A.field
    n = A.dim
    L = A.left_mats
    G = F.zeros(n, n)
    for s in range(n):
        for t in range(n):
            G[s, t] = np.trace(F.matmul(L[s], L[t])) if F.p is None else int(np.trace(F.matmul(L[s], L[t]))) % F.p
    return F.nullspace(G)


def _generated_at(P_ops: _ModOps, A: Diagram, j, gens_so_far: dict) -> np.ndarray:
    """Span at j of the submodule generated by the chosen generators (columns)."""
    F = A.field
    C = A.base
    cols = []
    Aj = A.algebras[j]
    for l, Y in gens_so_far.items():
        if Y.shape[1] == 0:
            continue
        for w in C.hom(j, l):
            Z = P_ops.T(w, Y)
            for s in range(Aj.dim):
                cols.append(P_ops.act(j, s, Z))
    if not cols:
        return F.zeros(P_ops.dim(j), 0)
    return np.concatenate(cols, axis=1)


def _choose_generators(target, A: Diagram, K: dict, method: str) -> dict:
    """Generators (as columns in target^j) of the submodule with bases K[j]."""
    F = A.field
    C = A.base
    if method == "natural":
        return {j: K[j] for j in C.objects}
    ops = _ModOps(target)
    order = list(reversed(C.topological_order())) if is_delta(C) else list(C.objects)
    chosen = {j: F.zeros(ops.dim(j), 0) for j in C.objects}
    for j in order:
        Kj = K[j]
        if Kj.shape[1] == 0:
            continue
        S = _generated_at(ops, A, j, chosen)
        rad = radical_basis(A.algebras[j])
        Aj = A.algebras[j]
        R = [ops.act(j, 0, Kj) * 0]
        for r in range(rad.shape[1]):
            x = rad[:, r]
            acc = F.zeros(Kj.shape[0], Kj.shape[1])
            for s in range(Aj.dim):
                if x[s] != 0:
                    acc = F.reduce(acc + x[s] * ops.act(j, s, Kj))
            R.append(acc)
        base = np.concatenate([S] + R, axis=1)
        rb = F.rank(base) if base.shape[1] else 0
        picked = []
        cur, rc = base, rb
        for c in range(Kj.shape[1]):
            trial = np.concatenate([cur, Kj[:, c:c + 1]], axis=1)
            rt = F.rank(trial)
            if rt > rc:
                picked.append(c)
                cur, rc = trial, rt
        pool = Kj[:, picked]
        full = Kj.shape[1]
        # generic combinations of the top generate more than basis vectors (e.g. an invertible matrix)
        rng = np.random.default_rng(pool.shape[1] * 7919 + full)
        gens, rank = F.zeros(Kj.shape[0], 0), F.rank(S) if S.shape[1] else 0
        for _ in range(2 * pool.shape[1] + 2):
            if rank == full:
                break
            trial = np.concatenate([gens, F.matmul(pool, F.random(rng, (pool.shape[1], 1)))], axis=1)
            r2 = F.rank(_generated_at(ops, A, j, {**chosen, j: trial}))
            if r2 > rank:
                gens, rank = trial, r2
        chosen[j] = gens
        # deterministic completion if the random search stalled
        for c in range(pool.shape[1]):
            if rank == full:
                break
            trial = np.concatenate([chosen[j], pool[:, c:c + 1]], axis=1)
            r2 = F.rank(_generated_at(ops, A, j, {**chosen, j: trial}))
            if r2 > rank:
                chosen[j], rank = trial, r2
        if rank < full:
            for c in range(full):
                trial = np.concatenate([chosen[j], Kj[:, c:c + 1]], axis=1)
                r2 = F.rank(_generated_at(ops, A, j, {**chosen, j: trial}))
                if r2 > rank:
                    chosen[j], rank = trial, r2
    return chosen


def resolve(M: DiagModule, length: int = 3, method: str = "natural", budget: int | None = None) -> Resolution:
    """Resolution P_0..P_length of M by induced modules.

    ``natural``: P_{n+1} is the natural cover sum_j F_j(K_n^j) of the kernel.
    ``minimal``: generators of each kernel are picked object by object (codomains
    first) among combinations of a complement of what is already generated plus
    the radical part, keeping only those that enlarge the generated submodule.
    """
    if method not in ("natural", "minimal"):
        raise ValueError(f"unknown resolution method {method!r}")
    A = M.diagram
    C, F = A.base, A.field
    lim = budget_limit(budget)
    terms, images, d, kernels = [], [], [], []
    K = {j: F.eye(M.dim(j)) for j in C.objects}
    target = M
    for n in range(length + 1):
        imgs = _choose_generators(target, A, K, method)
        gens = [j for j in C.objects for _ in range(imgs[j].shape[1])]
        P = InducedModule(A, gens)
        for i in C.objects:
            tdim = target.dim(i)
            if P.dim(i) * max(tdim, 1) > lim:
                raise BudgetExceeded(f"resolution degree {n}", P.dim(i) * tdim, lim)
        dn = {i: induced_map_matrix(P, target, imgs, i) for i in C.objects}
        Kn = {i: F.nullspace(dn[i]) if P.dim(i) else F.zeros(0, 0) for i in C.objects}
        terms.append(P)
        images.append(imgs)
        d.append(dn)
        kernels.append(Kn)
        K = Kn
        target = P
    return Resolution(M, method, terms, images, d, kernels)


def is_induced(M: DiagModule) -> bool:
    """Whether the minimal cover of M is already an isomorphism (M is a sum of F_j(V))."""
    res = resolve(M, 0, "minimal")
    return all(res.terms[0].dim(i) == M.dim(i) for i in M.base.objects)


# -- Ext ---------------------------------------------------------------------------------------------


def _cochain_layout(P: InducedModule, N: DiagModule):
    offs, off = [], 0
    for q, j in enumerate(P.gens):
        offs.append(off)
        off += N.dim(j)
    return offs, off


def ext_coboundary(res: Resolution, n: int, N: DiagModule, budget: int | None = None) -> np.ndarray:
    """delta^n: Hom(P_n, N) -> Hom(P_{n+1}, N), both identified with sums of N^j over generators."""
    A, F = res.diagram, res.module.field
    C = A.base
    P, Q = res.terms[n], res.terms[n + 1]
    offs, width = _cochain_layout(P, N)
    roffs, height = _cochain_layout(Q, N)
    lim = budget_limit(budget)
    if width * height > lim:
        raise BudgetExceeded(f"Ext coboundary in degree {n}", width * height, lim)
    delta = F.zeros(height, width)
    for l in C.objects:
        qps = Q.by_object[l]
        if not qps:
            continue
        Zl = res.images[n + 1][l]  # P^l x g'
        gp = len(qps)
        nl = N.dim(l)
        if nl == 0:
            continue
        dl = A.algebras[l].dim
        r0 = roffs[qps[0]]
        for w in C.out_of(l):
            J = C.cod(w)
            qs = P.by_object[J]
            nJ = N.dim(J)
            if not qs or nJ == 0:
                continue
            Qstack = np.stack([F.matmul(N.modules[l].action[s], N.T[w]) for s in range(dl)])  # dl x nl x nJ
            rows = np.concatenate([Zl[P.offset[l][(q, w)]:P.offset[l][(q, w)] + dl, :] for q in qs], axis=0)  # (nq*dl) x g'
            Zw = rows.reshape(len(qs), dl, gp).transpose(0, 2, 1).reshape(len(qs) * gp, dl)
            R = F.matmul(Zw, Qstack.reshape(dl, nl * nJ)).reshape(len(qs), gp, nl, nJ)
            blk = R.transpose(1, 2, 0, 3).reshape(gp * nl, len(qs) * nJ)
            c0 = offs[qs[0]]
            delta[r0:r0 + gp * nl, c0:c0 + len(qs) * nJ] = F.reduce(delta[r0:r0 + gp * nl, c0:c0 + len(qs) * nJ] + blk)
    return delta


def ext_from_resolution(res: Resolution, N: DiagModule, n_max: int, budget: int | None = None) -> list[int]:
    if res.length < n_max + 1:
        raise ValueError(f"resolution of length {res.length} cannot give Ext up to degree {n_max}")
    F = N.field
    ranks = [0]
    dims = []
    for n in range(n_max + 1):
        dims.append(_cochain_layout(res.terms[n], N)[1])
        ranks.append(F.rank(ext_coboundary(res, n, N, budget)))
    # ranks[n + 1] = rank delta^n
    return [dims[n] - ranks[n + 1] - ranks[n] for n in range(n_max + 1)]


def ext_diagram(A: Diagram, M: DiagModule, N: DiagModule, n_max: int = 3, method: str = "minimal",
                budget: int | None = None) -> list[int]:
    """dim Ext^n_{A,k}(M, N) for n = 0..n_max, as cohomology of Hom(P_•, N)."""
    res = resolve(M, n_max + 1, method, budget)
    return ext_from_resolution(res, N, n_max, budget)


def diagram_cohomology(A: Diagram, M: DiagModule, n_max: int = 2, method: str = "minimal",
                       budget: int | None = None) -> list[int]:
    """H^n(A, M) = Ext^n_{A^e,k}(A, M) for a bimodule M given over A^e."""
    X = dg.regular_bimodule(A)
    if M.diagram is not X.diagram:
        M = dg.rebase(M, X.diagram)
    return ext_diagram(X.diagram, X, M, n_max, method, budget)


# -- Hochschild cohomology of a single algebra ------------------------------------------------------------


def hochschild_coboundary(B: Algebra, X: AlgModule, n: int, budget: int | None = None) -> np.ndarray:
    """Standard coboundary C^n(B, X) -> C^{n+1}(B, X) on row-major flattened cochains.

    A cochain is an x-by-b^n matrix f with f[:, (t_1..t_n)] = f(e_{t_1}, ..., e_{t_n}).
    """
    F = B.field
    b, x = B.dim, X.dim
    lim = budget_limit(budget)
    size = x * b ** (n + 1) * x * b ** n
    if size > lim:
        raise BudgetExceeded(f"Hochschild coboundary in degree {n}", size, lim)
    left, right = ralg.bimodule_sides(X)
    bn = b ** n
    In = F.eye(bn)
    # b_1 f(b_2, ..., b_{n+1}): rows (r, t1, u), cols (r', u)
    T0 = np.einsum("trs,uv->rtusv", left, In).reshape(x * b * bn, x * bn)
    out = F.reduce(T0)
    # f(b_1, ..., b_i b_{i+1}, ...)
    Mu = np.transpose(B.mult, (2, 0, 1)).reshape(b, b * b)  # Mu[c, (s, t)]
    for i in range(1, n + 1):
        Mi = F.kron(F.kron(F.eye(b ** (i - 1)), Mu), F.eye(b ** (n - i)))  # b^n x b^(n+1)
        term = F.kron(F.eye(x), Mi.T)
        out = F.reduce(out + term) if i % 2 == 0 else F.reduce(out - term)
    # f(b_1, ..., b_n) b_{n+1}: rows (r, u, t), cols (r', u)
    T2 = F.reduce(np.einsum("trs,uv->rutsv", right, In).reshape(x * bn * b, x * bn))
    out = F.reduce(out + T2) if (n + 1) % 2 == 0 else F.reduce(out - T2)
    return out


def hochschild_algebra(B: Algebra, X: AlgModule | None = None, n_max: int = 2, budget: int | None = None) -> list[int]:
    """Dimensions of HH^n(B, X), n = 0..n_max, from the standard cochain complex."""
    F = B.field
    if X is None:
        X = ralg.regular_bimodule(B)
    ranks = [0]
    dims = []
    for n in range(n_max + 1):
        dims.append(X.dim * B.dim ** n)
        ranks.append(F.rank(hochschild_coboundary(B, X, n, budget)))
    return [dims[n] - ranks[n + 1] - ranks[n] for n in range(n_max + 1)]


@dataclass
class _Peirce:
    """Bases of e_i Y e_j (columns) with coordinate maps, for Y = B or X."""

    basis: dict
    coords: dict


def _peirce(F: Field, left, right, idem: list, quotient_diag: np.ndarray | None = None) -> _Peirce:
    m = len(idem)
    basis, coords = {}, {}
    dim = left.shape[1]
    for a in range(m):
        La = F.matmul(idem[a].reshape(1, -1), left.reshape(left.shape[0], -1)).reshape(dim, dim)
        for c in range(m):
            Rc = F.matmul(idem[c].reshape(1, -1), right.reshape(right.shape[0], -1)).reshape(dim, dim)
            P = F.matmul(La, Rc)
            cols = F.colspace(P) if not F.is_zero(P) else F.zeros(dim, 0)
            if quotient_diag is not None and a == c and cols.shape[1]:
                # drop the line spanned by the idempotent itself
                e = quotient_diag[:, a:a + 1]
                rows, piv = F.rref(np.concatenate([e, cols], axis=1))
                keep = [p - 1 for p in piv if p >= 1]
                cols = cols[:, keep]
                # coordinates modulo e: solve against [e | cols] and drop the e coefficient
                full = np.concatenate([e, cols], axis=1)
                coords[(a, c)] = F.matmul(F.left_inverse(full)[1:, :], P)
            else:
                coords[(a, c)] = F.matmul(F.left_inverse(cols), P) if cols.shape[1] else F.zeros(0, dim)
            basis[(a, c)] = cols
    return _Peirce(basis, coords)


def hochschild_relative(B: Algebra, X: AlgModule | tuple | None = None, idempotents: list | None = None, n_max: int = 2,
                        budget: int | None = None) -> list[int]:
    """HH^n(B, X) via the complex normalized relative to E = span of orthogonal idempotents.

    Cochains on B̄ = B / E are sums over sequences (i_0..i_n) of
    Hom(B̄_{i0 i1} (x) ... (x) B̄_{i(n-1) in}, e_{i0} X e_{in}).  E is separable,
    so the result is the ordinary Hochschild cohomology.  X is a module over
    the enveloping algebra or a pair (left, right) of action arrays.
    """
    F = B.field
    if X is None:
        X = ralg.regular_bimodule(B)
    if idempotents is None:
        idempotents = [B.unit]
    idem = [F.array(e) if not isinstance(e, np.ndarray) else e for e in idempotents]
    m = len(idem)
    E = np.stack(idem, axis=1)
    Bp = _peirce(F, B.left_mats, B.right_mats, idem, quotient_diag=E)
    xl, xr = X if isinstance(X, tuple) else ralg.bimodule_sides(X)
    Xp = _peirce(F, xl, xr, idem)
    bdim = {k: v.shape[1] for k, v in Bp.basis.items()}
    xdim = {k: v.shape[1] for k, v in Xp.basis.items()}

    def sequences(n):
        if n == 0:
            return [(a,) for a in range(m)]
        out = []
        for s in sequences(n - 1):
            for c in range(m):
                if bdim[(s[-1], c)]:
                    out.append(s + (c,))
        return out

    def block_dim(s):
        d = xdim[(s[0], s[-1])]
        for a, c in zip(s, s[1:]):
            d *= bdim[(a, c)]
        return d

    lim = budget_limit(budget)
    seqs = [sequences(n) for n in range(n_max + 2)]

    def layout(n):
        offs, off = {}, 0
        for s in seqs[n]:
            offs[s] = off
            off += block_dim(s)
        return offs, off

    lays = [layout(n) for n in range(n_max + 2)]

    acting = {}

    def xact(side, pair, t, a, c, a2, c2):
        """Matrix X_{(a,c)} -> X_{(a2,c2)} of left/right multiplication by basis vector t of B̄_pair."""
        key = (side, pair, t)
        if key not in acting:
            acts = xl if side == "l" else xr
            vec = Bp.basis[pair][:, t]
            acting[key] = F.matmul(vec.reshape(1, -1), acts.reshape(acts.shape[0], -1)).reshape(xl.shape[1], xl.shape[1])
        return F.mul(Xp.coords[(a2, c2)], acting[key], Xp.basis[(a, c)])

    products = {}

    def mu(a, mid, c):
        """Multiplication B̄_{(a,mid)} (x) B̄_{(mid,c)} -> B̄_{(a,c)} in Peirce coordinates."""
        if (a, mid, c) not in products:
            Ba, Bc = Bp.basis[(a, mid)], Bp.basis[(mid, c)]
            p1, q1 = Ba.shape[1], Bc.shape[1]
            M = F.zeros(bdim[(a, c)], p1 * q1)
            for p in range(p1):
                for q in range(q1):
                    prod = B.product(Ba[:, p], Bc[:, q])
                    M[:, p * q1 + q] = F.matmul(Bp.coords[(a, c)], prod.reshape(-1, 1)).ravel()
            products[(a, mid, c)] = M
        return products[(a, mid, c)]

    def coboundary(n):
        offs, width = lays[n]
        roffs, height = lays[n + 1]
        if width * height > lim:
            raise BudgetExceeded(f"relative Hochschild coboundary in degree {n}", width * height, lim)
        delta = F.zeros(height, width)
        for s2 in seqs[n + 1]:
            r0 = roffs[s2]
            bd = [bdim[(a, c)] for a, c in zip(s2, s2[1:])]
            xo = xdim[(s2[0], s2[-1])]
            shape_out = [xo] + bd
            # left term: b_1 f(b_2..b_{n+1})
            src = s2[1:]
            if src in offs:
                xi = xdim[(src[0], src[-1])]
                Lm = np.stack([xact("l", (s2[0], s2[1]), t, src[0], src[-1], s2[0], s2[-1]) for t in range(bd[0])]) if xi else F.zeros(bd[0], xo, 0)
                rest = int(np.prod(bd[1:])) if len(bd) > 1 else 1
                blk = np.einsum("trs,uv->rtusv", Lm, F.eye(rest)).reshape(xo * bd[0] * rest, xi * rest)
                c0 = offs[src]
                delta[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = F.reduce(delta[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] + blk)
            # middle terms
            for t in range(1, n + 1):
                a, mid, c = s2[t - 1], s2[t], s2[t + 1]
                src = s2[:t] + s2[t + 1:]
                if src not in offs:
                    continue
                Mu = mu(a, mid, c)
                before = int(np.prod(bd[: t - 1])) if t > 1 else 1
                after = int(np.prod(bd[t + 1:])) if t + 1 < len(bd) else 1
                blk = F.kron(F.kron(F.kron(F.eye(xo), F.eye(before)), Mu.T), F.eye(after))
                c0 = offs[src]
                sign = 1 if t % 2 == 0 else -1
                delta[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = F.reduce(delta[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] + sign * blk)
            # right term: f(b_1..b_n) b_{n+1}
            src = s2[:-1]
            if src in offs:
                xi = xdim[(src[0], src[-1])]
                Rm = np.stack([xact("r", (s2[-2], s2[-1]), t, src[0], src[-1], s2[0], s2[-1]) for t in range(bd[-1])]) if xi else F.zeros(bd[-1], xo, 0)
                rest = int(np.prod(bd[:-1])) if len(bd) > 1 else 1
                blk = np.einsum("trs,uv->rutsv", Rm, F.eye(rest)).reshape(xo * rest * bd[-1], xi * rest)
                c0 = offs[src]
                sign = 1 if (n + 1) % 2 == 0 else -1
                delta[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = F.reduce(delta[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] + sign * blk)
        return delta

    ranks = [0]
    for n in range(n_max + 1):
        ranks.append(F.rank(coboundary(n)))
    return [lays[n][1] - ranks[n + 1] - ranks[n] for n in range(n_max + 1)]


# -- spread-out resolutions -------------------------------------------------------------------------------


def lift_to_resolutions(g: DiagMap, RM: Resolution, RN: Resolution) -> tuple[list, dict]:
    """Natural extension of g: M -> N to the natural resolutions.

    Returns the matrices of P(g)_n objectwise and the induced map on the last kernel.
    """
    A = RM.diagram
    C, F = A.base, A.field
    comps = []
    gK = {i: g.comps[i] for i in C.objects}  # map on K_{n-1} (coordinates); K_{-1} = M
    for n in range(RM.length + 1):
        PM, PN = RM.terms[n], RN.terms[n]
        imgs = {}
        for j in C.objects:
            # generator (1 (x) x)_{id} at j goes to (1 (x) g x)_{id}
            imgs[j] = F.matmul(PN.generator_section(j), gK[j]) if PM.by_object[j] else F.zeros(PN.dim(j), 0)
        mats = {i: induced_map_matrix(PM, PN, imgs, i) for i in C.objects}
        comps.append(mats)
        nxt = {}
        for i in C.objects:
            KM, KN = RM.kernels[n][i], RN.kernels[n][i]
            if KM.shape[1] == 0:
                nxt[i] = F.zeros(KN.shape[1], 0)
            elif KN.shape[1] == 0:
                nxt[i] = F.zeros(0, KM.shape[1])
            else:
                nxt[i] = F.mul(F.left_inverse(KN), mats[i], KM)
        gK = nxt
    return comps, gK


@dataclass
class SpreadOut:
    complex: ChainComplex  # UM over A'
    eps: ChainMap  # UM -> M'
    double: DoubleComplex
    totalization: TotalizationReport
    eps_report: RelQisoReport
    pushforward_report: RelQisoReport | None
    resolutions: list


def spread_out(M: ChainComplex, columns: int | None = None, sub: dg.Subdivided | None = None,
               check_pushforward: bool = True) -> SpreadOut:
    """Resolve each term of M' = d*M termwise, assemble the double complex, totalize.

    ``columns`` resolution terms are used per row; the kernel of the last one is
    appended as a final column so that every row stays exact.
    """
    A = M.diagram
    if not is_delta(A.base):
        from .subdivision import NotADelta
        raise NotADelta("spread_out needs a delta base")
    sub = sub or dg.subdivide_diagram(A)
    Ap = sub.primed
    Cp, F = Ap.base, Ap.field
    L = M.top + 1
    H = columns if columns is not None else L + 2
    if H < 1:
        raise ValueError("spread_out needs at least one resolution column")
    Mp_terms = [sub.module(t) for t in M.terms]
    Mp_maps = [sub.map(M.d[n], Mp_terms[n], Mp_terms[n - 1]) for n in range(1, L)]
    Mp = complex_from(Mp_terms, Mp_maps)
    res = [resolve(Mp_terms[i], H - 1, "natural") for i in range(L)]
    cplx = [r.complex(cap=True) for r in res]  # H resolution terms plus the kernel cap
    W = H + 1
    X = [[cplx[i][0].terms[h] for i in range(L)] for h in range(W)]
    horiz = [[None] * L] + [[cplx[i][0].d[h] for i in range(L)] for h in range(1, W)]
    eps = [cplx[i][1] for i in range(L)]
    vert = [[None] * L for _ in range(W)]
    for i in range(1, L):
        mats, gK = lift_to_resolutions(Mp_maps[i - 1], res[i], res[i - 1])
        for h in range(H):
            vert[h][i] = DiagMap(X[h][i], X[h][i - 1], mats[h])
        vert[H][i] = DiagMap(X[H][i], X[H][i - 1], gK)
    t = []
    for h in range(W):
        if h < H:
            t.append([res[i].contraction()[h] for i in range(L)])
        else:
            t.append([res[i].kernel_section(H - 1) for i in range(L)])
    Xc = DoubleComplex(X, horiz, vert, Mp, eps, t)
    rep = totalization_identities(Xc)
    Tot, layout = total(Xc)
    eps_comps = []
    for n in range(Tot.top + 1):
        comps = {}
        for o in Cp.objects:
            rows = Mp.term(n).dim(o)
            blocks = F.zeros(rows, Tot.term(n).dim(o))
            off = 0
            for (h, i) in layout[n]:
                dim = X[h][i].dim(o)
                if h == 0:
                    blocks[:, off:off + dim] = eps[i].comps[o]
                off += dim
            comps[o] = blocks
        eps_comps.append(DiagMap(Tot.term(n), Mp.term(n), comps))
    Mpp = Mp.padded(Tot.top)
    eps_map = ChainMap(Tot, Mpp, [DiagMap(Tot.term(n), Mpp.term(n), eps_comps[n].comps) for n in range(Tot.top + 1)])
    eps_rep = is_rel_qiso(eps_map)
    push = pushforward_check(eps_map, M, sub) if check_pushforward else None
    return SpreadOut(Tot, eps_map, Xc, rep, eps_rep, push, res)


def pushforward_check(eps: ChainMap, M: ChainComplex, sub: dg.Subdivided) -> RelQisoReport:
    """d_!(eps) followed by the counit d_!M' -> M, tested for being a relative quasi-isomorphism."""
    A = M.diagram
    Ap = sub.primed
    U, Mp = eps.source, eps.target
    shU = [dg.shriek(sub.d, t, A) for t in U.terms]
    shM = [dg.shriek(sub.d, t, A) for t in Mp.terms]
    Mpad = M.padded(Mp.top)
    dU = [None] + [shU[n].on_map(U.d[n], shU[n - 1]) for n in range(1, U.top + 1)]
    DU = ChainComplex([s.module for s in shU], [None] + [DiagMap(shU[n].module, shU[n - 1].module, dU[n].comps) for n in range(1, U.top + 1)])
    comps = []
    for n in range(U.top + 1):
        pe = shU[n].on_map(eps.comps[n], shM[n])
        cu = dg.counit(sub.d, Mpad.term(n), shM[n])
        comps.append(DiagMap(DU.terms[n], Mpad.term(n), pe.then(cu).comps))
    return is_rel_qiso(ChainMap(DU, Mpad, comps))
