"""Bounded chain complexes of diagram modules and of vector spaces.

Complexes live in degrees 0..top with ``d[n]: X_n -> X_{n-1}`` (``d[0]`` is the
zero map to 0).  Sign conventions:

* cone: ``C(f)_n = M_{n-1} + N_n``, ``D(m, x) = (-d m, f m + d x)``;
* shift: ``(M[i])_n = M_{n-i}`` with differential ``(-1)^i d``;
* total complex: ``Tot_n = sum_{h+i=n} X_{h,i}``, ``D = d_horizontal + (-1)^h d^vertical``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import diagram as dg
from .budget import BudgetExceeded, budget_limit
from .diagram import DiagMap, DiagModule
from .field import Field
from .fincat import label


class ComplexError(ValueError):
    pass


class HypothesisError(ComplexError):
    """A double complex fails the row-contraction or commutation hypotheses."""


# -- complexes of vector spaces ---------------------------------------------------------


@dataclass
class VecComplex:
    field: Field
    dims: list
    d: list  # d[n]: dims[n] -> dims[n-1], d[0] has 0 rows

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def diff(self, n: int) -> np.ndarray:
        if n <= 0 or n > self.top:
            lo = self.dims[n - 1] if 0 <= n - 1 <= self.top else 0
            hi = self.dims[n] if 0 <= n <= self.top else 0
            return self.field.zeros(lo, hi)
        return self.d[n]

    def homology(self) -> list[int]:
        F = self.field
        ranks = [F.rank(self.diff(n)) for n in range(self.top + 2)]
        return [self.dims[n] - ranks[n] - ranks[n + 1] for n in range(self.top + 1)]

    def is_complex(self) -> bool:
        F = self.field
        return all(F.is_zero(F.matmul(self.diff(n - 1), self.diff(n))) for n in range(2, self.top + 1))


def contraction(X: VecComplex) -> list | None:
    """s[n]: X_n -> X_{n+1} with d s + s d = id, or None when X is not exact."""
    F = X.field
    s = []
    prev = None  # s[n-1]
    for n in range(X.top + 1):
        # need d_{n+1} s_n = id - s_{n-1} d_n on X_n
        rhs = F.eye(X.dims[n])
        if prev is not None and X.dims[n]:
            rhs = F.reduce(rhs - F.matmul(prev, X.diff(n)))
        if n == X.top:
            if not F.is_zero(rhs):
                return None
            s.append(F.zeros(0, X.dims[n]))
            break
        dn1 = X.diff(n + 1)
        sol = F.solve(dn1, rhs) if X.dims[n] else F.zeros(X.dims[n + 1], 0)
        if sol is None:
            return None
        s.append(sol)
        prev = sol
    return s


def check_contraction(X: VecComplex, s: list) -> bool:
    F = X.field
    for n in range(X.top + 1):
        lhs = F.zeros(X.dims[n], X.dims[n])
        if n < X.top:
            lhs = F.reduce(lhs + F.matmul(X.diff(n + 1), s[n]))
        if n > 0:
            lhs = F.reduce(lhs + F.matmul(s[n - 1], X.diff(n)))
        if not F.equal(lhs, F.eye(X.dims[n])):
            return False
    return True


@dataclass
class Contractibility:
    ok: bool
    contraction: list | None


def is_contractible_k(X: VecComplex) -> Contractibility:
    """Over a field: contractible iff exact; the contraction is built and verified."""
    s = contraction(X)
    if s is None:
        return Contractibility(False, None)
    if not check_contraction(X, s):
        raise ComplexError("constructed contraction failed verification")
    return Contractibility(True, s)


# -- complexes of diagram modules ---------------------------------------------------------


class ChainComplex:
    def __init__(self, terms: list[DiagModule], d: list):
        self.terms = list(terms)
        self.d = list(d)  # d[n]: terms[n] -> terms[n-1]; d[0] is None
        if self.d and self.d[0] is not None:
            raise ComplexError("d[0] must be None (complexes stop at degree 0)")

    @property
    def top(self) -> int:
        return len(self.terms) - 1

    @property
    def diagram(self):
        return self.terms[0].diagram

    @property
    def field(self) -> Field:
        return self.terms[0].field

    def term(self, n: int) -> DiagModule:
        if 0 <= n <= self.top:
            return self.terms[n]
        return dg.zero_diag_module(self.diagram)

    def dmat(self, n: int, i) -> np.ndarray:
        if 1 <= n <= self.top:
            return self.d[n].comps[i]
        return self.field.zeros(self.term(n - 1).dim(i), self.term(n).dim(i))

    def at(self, i) -> VecComplex:
        return VecComplex(self.field, [t.dim(i) for t in self.terms], [None] + [self.d[n].comps[i] for n in range(1, self.top + 1)])

    def violations(self) -> list[str]:
        bad = []
        for n in range(1, self.top + 1):
            if self.d[n].source is not self.terms[n] or self.d[n].target is not self.terms[n - 1]:
                bad.append(f"d[{n}] has wrong endpoints")
            bad += [f"d[{n}]: {x}" for x in self.d[n].violations()]
        F = self.field
        for n in range(2, self.top + 1):
            for i in self.diagram.base.objects:
                if not F.is_zero(F.matmul(self.d[n - 1].comps[i], self.d[n].comps[i])):
                    bad.append(f"d^2 != 0 in degree {n} at {label(i)}")
        return bad

    def validate(self) -> "ChainComplex":
        bad = self.violations()
        if bad:
            raise ComplexError("; ".join(bad[:6]))
        return self

    def padded(self, top: int) -> "ChainComplex":
        if top <= self.top:
            return self
        terms = self.terms + [dg.zero_diag_module(self.diagram) for _ in range(top - self.top)]
        d = list(self.d)
        for n in range(self.top + 1, top + 1):
            d.append(dg.zero_map(terms[n], terms[n - 1]))
        return ChainComplex(terms, d)


def single(M: DiagModule) -> ChainComplex:
    return ChainComplex([M], [None])


def complex_from(terms: list[DiagModule], maps: list[DiagMap]) -> ChainComplex:
    """terms[0..L] with maps[n-1]: terms[n] -> terms[n-1]."""
    return ChainComplex(terms, [None] + list(maps))


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    comps: list  # DiagMap per degree, 0..max(top)

    def comp(self, n: int) -> DiagMap:
        if n < len(self.comps):
            return self.comps[n]
        return dg.zero_map(self.source.term(n), self.target.term(n))

    def mat(self, n: int, i) -> np.ndarray:
        if n < len(self.comps):
            return self.comps[n].comps[i]
        return self.source.field.zeros(self.target.term(n).dim(i), self.source.term(n).dim(i))

    @property
    def top(self) -> int:
        return max(self.source.top, self.target.top)

    def violations(self) -> list[str]:
        F = self.source.field
        bad = []
        for n, c in enumerate(self.comps):
            bad += [f"degree {n}: {x}" for x in c.violations()]
        for n in range(1, self.top + 1):
            for i in self.source.diagram.base.objects:
                lhs = F.matmul(self.target.dmat(n, i), self.mat(n, i))
                rhs = F.matmul(self.mat(n - 1, i), self.source.dmat(n, i))
                if not F.equal(lhs, rhs):
                    bad.append(f"does not commute with d in degree {n} at {label(i)}")
        return bad

    def validate(self) -> "ChainMap":
        bad = self.violations()
        if bad:
            raise ComplexError("; ".join(bad[:6]))
        return self

    def then(self, other: "ChainMap") -> "ChainMap":
        top = max(self.top, other.top)
        comps = [self.comp(n).then(other.comp(n)) for n in range(top + 1)]
        return ChainMap(self.source, other.target, comps)


def identity_chain_map(M: ChainComplex) -> ChainMap:
    return ChainMap(M, M, [dg.identity_map(t) for t in M.terms])


def zero_chain_map(M: ChainComplex, N: ChainComplex) -> ChainMap:
    top = max(M.top, N.top)
    return ChainMap(M, N, [dg.zero_map(M.term(n), N.term(n)) for n in range(top + 1)])


def _block(F: Field, rows: list, cols: list, blocks: dict) -> np.ndarray:
    out = F.zeros(sum(rows), sum(cols))
    ro = np.cumsum([0] + rows)
    co = np.cumsum([0] + cols)
    for (a, b), m in blocks.items():
        if m.size:
            out[ro[a]:ro[a + 1], co[b]:co[b + 1]] = m
    return out


def cone(f: ChainMap) -> ChainComplex:
    M, N = f.source, f.target
    F = M.field
    C = M.diagram.base
    top = max(M.top + 1, N.top)
    terms = [dg.direct_sum([M.term(n - 1), N.term(n)]) for n in range(top + 1)]
    d = [None]
    for n in range(1, top + 1):
        comps = {}
        for i in C.objects:
            rows = [M.term(n - 2).dim(i), N.term(n - 1).dim(i)]
            cols = [M.term(n - 1).dim(i), N.term(n).dim(i)]
            comps[i] = _block(F, rows, cols, {
                (0, 0): F.reduce(-M.dmat(n - 1, i)),
                (1, 0): f.mat(n - 1, i),
                (1, 1): N.dmat(n, i),
            })
        d.append(DiagMap(terms[n], terms[n - 1], comps))
    return ChainComplex(terms, d)


def shift(M: ChainComplex, i: int) -> ChainComplex:
    """M[i] for i >= 0."""
    if i < 0:
        raise ComplexError("only nonnegative shifts keep complexes in degrees >= 0")
    F = M.field
    sign = 1 if i % 2 == 0 else -1
    zeros = [dg.zero_diag_module(M.diagram) for _ in range(i)]
    terms = zeros + M.terms
    d = [None]
    for n in range(1, len(terms)):
        if n - i >= 1:
            old = M.d[n - i]
            d.append(DiagMap(terms[n], terms[n - 1], {o: F.reduce(sign * m) for o, m in old.comps.items()}))
        else:
            d.append(dg.zero_map(terms[n], terms[n - 1]))
    return ChainComplex(terms, d)


# -- relative quasi-isomorphisms -------------------------------------------------------------


@dataclass
class QisoWitness:
    """Per object: gamma (chain map N -> M), kappa on M, h on N, degreewise lists."""

    gamma: list
    kappa: list
    h: list


@dataclass
class RelQisoReport:
    ok: bool
    failing: list  # objects whose cone is not exact
    witnesses: dict = dc_field(default_factory=dict)  # object -> QisoWitness


def _vec_map_ok(F: Field, src: VecComplex, tgt: VecComplex, g: list) -> bool:
    top = max(src.top, tgt.top)
    for n in range(1, top + 1):
        if not F.equal(F.matmul(tgt.diff(n), g[n]), F.matmul(g[n - 1], src.diff(n))):
            return False
    return True


def _homotopy_ok(F: Field, X: VecComplex, Y: VecComplex, lhs: list, s: list) -> bool:
    """lhs[n] = d s[n-1] ... : checks lhs_n = d_{n+1} s_n + s_{n-1} d_n for maps X -> Y."""
    top = max(X.top, Y.top)
    for n in range(top + 1):
        acc = F.zeros(lhs[n].shape[0], lhs[n].shape[1])
        if n + 1 <= top:
            acc = F.reduce(acc + F.matmul(Y.diff(n + 1), s[n]))
        if n >= 1:
            acc = F.reduce(acc + F.matmul(s[n - 1], X.diff(n)))
        if not F.equal(acc, lhs[n]):
            return False
    return True


def _padded_vec(X: VecComplex, top: int) -> VecComplex:
    dims = list(X.dims) + [0] * (top - X.top)
    d = [X.diff(n) for n in range(top + 1)]
    return VecComplex(X.field, dims, d)


def is_rel_qiso(f: ChainMap) -> RelQisoReport:
    """Cone of f^i exact at every object; when it is, the gamma witness is built and checked."""
    F = f.source.field
    C = f.source.diagram.base
    cf = cone(f)
    top = max(f.source.top, f.target.top)
    failing, wits = [], {}
    for i in C.objects:
        res = is_contractible_k(cf.at(i))
        if not res.ok:
            failing.append(i)
            continue
        s = res.contraction
        Mi, Ni = _padded_vec(f.source.at(i), top + 1), _padded_vec(f.target.at(i), top + 1)
        gamma, kappa, h = [], [], []
        for n in range(top + 2):
            sn = s[n] if n < len(s) else F.zeros(0, 0)
            m_prev = Mi.dims[n - 1] if n >= 1 else 0
            m_n, x_n = Mi.dims[n], Ni.dims[n]
            x_next = Ni.dims[n + 1] if n + 1 <= top + 1 else 0
            # s_n: M_{n-1} + N_n -> M_n + N_{n+1}
            if sn.size == 0:
                sn = F.zeros(m_n + x_next, m_prev + x_n)
            gamma.append(sn[:m_n, m_prev:])
            kappa.append(sn[:m_n, :m_prev])
            h.append(sn[m_n:, m_prev:])
        wit = QisoWitness(gamma, kappa, h)
        if not check_gamma_witness(f, i, wit):
            raise ComplexError(f"gamma witness failed verification at {label(i)}")
        wits[i] = wit
    return RelQisoReport(not failing, failing, wits)


def check_gamma_witness(f: ChainMap, i, w: QisoWitness) -> bool:
    """gamma chain map, gamma f - id = d kappa + kappa d, id - f gamma = d h + h d."""
    F = f.source.field
    top = max(f.source.top, f.target.top) + 1
    M, N = _padded_vec(f.source.at(i), top), _padded_vec(f.target.at(i), top)
    fm = [f.mat(n, i) for n in range(top + 1)]
    if not _vec_map_ok(F, N, M, w.gamma):
        return False
    lhs_m = [F.reduce(F.matmul(w.gamma[n], fm[n]) - F.eye(M.dims[n])) for n in range(top + 1)]
    # kappa[n]: M_{n-1} -> M_n, i.e. the homotopy of degree +1 starting at n-1
    kap = [w.kappa[n + 1] if n + 1 < len(w.kappa) else F.zeros(M.dims[n + 1] if n + 1 <= top else 0, M.dims[n]) for n in range(top + 1)]
    if not _homotopy_ok(F, M, M, lhs_m, kap):
        return False
    lhs_n = [F.reduce(F.eye(N.dims[n]) - F.matmul(fm[n], w.gamma[n])) for n in range(top + 1)]
    return _homotopy_ok(F, N, N, lhs_n, w.h[: top + 1])


def gamma_system_solvable(f: ChainMap, i, budget: int | None = None) -> bool:
    """Independent route: solve jointly for (gamma, kappa, h) as one linear system."""
    F = f.source.field
    top = max(f.source.top, f.target.top) + 1
    M, N = _padded_vec(f.source.at(i), top), _padded_vec(f.target.at(i), top)
    md, nd = M.dims, N.dims
    # unknown blocks
    blocks = []
    for n in range(top + 1):
        blocks.append(("g", n, md[n], nd[n]))
    for n in range(top):
        blocks.append(("k", n, md[n + 1], md[n]))
        blocks.append(("h", n, nd[n + 1], nd[n]))
    offs, off = {}, 0
    for kind, n, r, c in blocks:
        offs[(kind, n)] = (off, r, c)
        off += r * c
    nvar = off
    neq = sum(md[n - 1] * nd[n] for n in range(1, top + 1)) + sum(x * x for x in md) + sum(x * x for x in nd)
    lim = budget_limit(budget)
    if neq * nvar > lim:
        raise BudgetExceeded(f"joint gamma system at {label(i)}", neq * nvar, lim)
    rows, rhs = [], []

    def var_left(kind, n, A):
        """Coefficient matrix of X |-> A X (X the block (kind, n)), row-major vec."""
        o, r, c = offs[(kind, n)]
        blk = F.zeros(A.shape[0] * c, nvar)
        blk[:, o:o + r * c] = F.kron(A, F.eye(c))
        return blk

    def var_right(kind, n, B):
        """Coefficient matrix of X |-> X B."""
        o, r, c = offs[(kind, n)]
        blk = F.zeros(r * B.shape[1], nvar)
        blk[:, o:o + r * c] = F.kron(F.eye(r), B.T)
        return blk

    fm = [f.mat(n, i) if n <= max(f.source.top, f.target.top) else F.zeros(nd[n], md[n]) for n in range(top + 1)]
    # gamma chain map: d_M g_n - g_{n-1} d_N = 0
    for n in range(1, top + 1):
        if md[n - 1] * nd[n] == 0:
            continue
        rows.append(F.reduce(var_left("g", n, M.diff(n)) - var_right("g", n - 1, N.diff(n))))
        rhs.append(F.zeros(md[n - 1] * nd[n], 1))
    # g_n f_n - d k_{n-1}... : g f - id = d_{n+1} k_n + k_{n-1} d_n on M_n
    for n in range(top + 1):
        if md[n] == 0:
            continue
        eq = var_right("g", n, fm[n])
        if n < top:
            eq = F.reduce(eq - var_left("k", n, M.diff(n + 1)))
        if n >= 1:
            eq = F.reduce(eq - var_right("k", n - 1, M.diff(n)))
        rows.append(eq)
        rhs.append(F.eye(md[n]).reshape(-1, 1))
    # id - f g = d h + h d on N_n
    for n in range(top + 1):
        if nd[n] == 0:
            continue
        eq = var_left("g", n, fm[n])
        if n < top:
            eq = F.reduce(eq + var_left("h", n, N.diff(n + 1)))
        if n >= 1:
            eq = F.reduce(eq + var_right("h", n - 1, N.diff(n)))
        rows.append(eq)
        rhs.append(F.eye(nd[n]).reshape(-1, 1))
    if not rows:
        return True
    A = np.concatenate(rows, axis=0)
    b = np.concatenate(rhs, axis=0)
    return F.solve(A, b) is not None


# -- homotopy classes ---------------------------------------------------------------------------


@dataclass
class HomotopyClasses:
    dim: int
    cycles: list  # basis of chain maps P -> M, as lists of DiagMaps
    boundaries_rank: int
    representatives: list  # chain maps whose classes form a basis
    coords: np.ndarray = dc_field(repr=False)  # chain-map basis in flattened coordinates
    bdry: np.ndarray = dc_field(repr=False)  # null-homotopic maps, flattened


def _flat_chain(maps: list[DiagMap]) -> np.ndarray:
    return np.concatenate([dg.flatten(m) for m in maps]) if maps else np.zeros(0)


def _hom_bases(P: ChainComplex, M: ChainComplex, top: int, shift_by: int = 0):
    return [dg.hom_space(P.term(n), M.term(n + shift_by)) for n in range(top + 1)]


def homotopy_classes(P: ChainComplex, M: ChainComplex) -> HomotopyClasses:
    """Chain maps P -> M modulo homotopy: dimension and representatives."""
    F = P.field
    C = P.diagram.base
    top = max(P.top, M.top)
    H = _hom_bases(P, M, top)
    S = _hom_bases(P, M, top, 1)
    # coordinates: concatenation over degrees of Hom basis coefficients
    offs, off = [], 0
    for n in range(top + 1):
        offs.append(off)
        off += len(H[n])
    nvar = off

    def flat_deg(n, m: DiagMap):
        return dg.flatten(m)

    flat_basis = [np.stack([dg.flatten(h) for h in H[n]], axis=1) if H[n] else F.zeros(sum(P.term(n).dim(i) * M.term(n).dim(i) for i in C.objects), 0) for n in range(top + 1)]
    # chain condition: d_M f_n - f_{n-1} d_P = 0 in Hom(P_n, M_{n-1})
    rows = []
    for n in range(1, top + 1):
        width = sum(M.term(n - 1).dim(i) * P.term(n).dim(i) for i in C.objects)
        if width == 0:
            continue
        blk = F.zeros(width, nvar)
        for a, h in enumerate(H[n]):
            img = DiagMap(P.term(n), M.term(n - 1), {i: F.matmul(M.dmat(n, i), h.comps[i]) for i in C.objects})
            blk[:, offs[n] + a] = dg.flatten(img)
        for a, h in enumerate(H[n - 1]):
            img = DiagMap(P.term(n), M.term(n - 1), {i: F.matmul(h.comps[i], P.dmat(n, i)) for i in C.objects})
            blk[:, offs[n - 1] + a] = F.reduce(blk[:, offs[n - 1] + a] - dg.flatten(img))
        rows.append(blk)
    Z = F.nullspace(np.concatenate(rows, axis=0)) if rows else F.eye(nvar)
    # null-homotopic maps: d s_n + s_{n-1} d for s_n in Hom(P_n, M_{n+1})
    bcols = []
    for n in range(top + 1):
        for s in S[n]:
            vec = F.zeros(nvar)
            # contributes to degree n via d_{n+1} s_n and to degree n+1 via s_n d_{n+1}
            img_n = {i: F.matmul(M.dmat(n + 1, i), s.comps[i]) for i in C.objects}
            vec[offs[n]:offs[n] + len(H[n])] = _coords(F, flat_basis[n], _flat_dict(C, img_n))
            if n + 1 <= top:
                img_n1 = {i: F.matmul(s.comps[i], P.dmat(n + 1, i)) for i in C.objects}
                vec[offs[n + 1]:offs[n + 1] + len(H[n + 1])] = _coords(F, flat_basis[n + 1], _flat_dict(C, img_n1))
            bcols.append(vec)
    B = np.stack(bcols, axis=1) if bcols else F.zeros(nvar, 0)
    rb = F.rank(B)
    dim = Z.shape[1] - rb
    # representatives: chain-map basis vectors completing the boundary span
    reps = []
    if dim:
        cur = B.copy()
        r = rb
        for c in range(Z.shape[1]):
            trial = np.concatenate([cur, Z[:, c:c + 1]], axis=1)
            rt = F.rank(trial)
            if rt > r:
                cur, r = trial, rt
                reps.append(_unflatten_chain(F, P, M, H, offs, Z[:, c]))
    cycles = [_unflatten_chain(F, P, M, H, offs, Z[:, c]) for c in range(Z.shape[1])]
    return HomotopyClasses(dim, cycles, rb, reps, Z, B)


def _flat_dict(C, comps: dict) -> np.ndarray:
    parts = [comps[i].ravel() for i in C.objects]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _coords(F: Field, basis: np.ndarray, vec: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return F.zeros(0)
    x = F.solve(basis, vec.reshape(-1, 1))
    if x is None:
        raise ComplexError("map is not in the span of the Hom basis")
    return x.ravel()


def _unflatten_chain(F, P, M, H, offs, vec) -> ChainMap:
    C = P.diagram.base
    comps = []
    for n in range(len(H)):
        acc = {i: F.zeros(M.term(n).dim(i), P.term(n).dim(i)) for i in C.objects}
        for a, h in enumerate(H[n]):
            c = vec[offs[n] + a]
            if c != 0:
                for i in C.objects:
                    acc[i] = F.reduce(acc[i] + c * h.comps[i])
        comps.append(DiagMap(P.term(n), M.term(n), acc))
    return ChainMap(P, M, comps)


def chain_map_coords(F: Field, P: ChainComplex, M: ChainComplex, g: ChainMap) -> np.ndarray:
    """Coordinates of g in the degreewise Hom bases used by homotopy_classes."""
    C = P.diagram.base
    top = max(P.top, M.top)
    H = _hom_bases(P, M, top)
    parts = []
    for n in range(top + 1):
        basis = np.stack([dg.flatten(h) for h in H[n]], axis=1) if H[n] else F.zeros(0, 0)
        parts.append(_coords(F, basis, dg.flatten(g.comp(n))) if H[n] else F.zeros(0))
    return np.concatenate(parts) if parts else F.zeros(0)


@dataclass
class LiftReport:
    surjective: bool
    lifts: list  # (class representative in [P, N], chain map P -> M lifting it)


def lift_classes(P: ChainComplex, f: ChainMap) -> LiftReport:
    """For each class of [P, N] find g: P -> M with f g homotopic to it (f: M -> N)."""
    F = P.field
    M, N = f.source, f.target
    hm = homotopy_classes(P, M)
    hn = homotopy_classes(P, N)
    top = max(P.top, M.top, N.top)
    Pp, Mp, Np = P.padded(top), M.padded(top), N.padded(top)
    fp = ChainMap(Mp, Np, [f.comp(n) for n in range(top + 1)])
    # images f . z for the cycle basis of [P, M], in N-coordinates
    imgs = []
    for z in hm.cycles:
        zp = ChainMap(Pp, Mp, [z.comp(n) for n in range(top + 1)])
        imgs.append(chain_map_coords(F, Pp, Np, zp.then(fp)))
    width = hn.coords.shape[0]
    Fimg = np.stack(imgs, axis=1) if imgs else F.zeros(width, 0)
    lifts = []
    for rep in hn.representatives:
        target = chain_map_coords(F, Pp, Np, ChainMap(Pp, Np, [rep.comp(n) for n in range(top + 1)]))
        sysm = np.concatenate([Fimg, hn.bdry], axis=1)
        sol = F.solve(sysm, target.reshape(-1, 1))
        if sol is None:
            return LiftReport(False, lifts)
        coef = sol[: Fimg.shape[1], 0]
        g = None
        for c, z in zip(coef, hm.cycles):
            if c == 0:
                continue
            term = ChainMap(P, M, [DiagMap(zc.source, zc.target, {i: F.reduce(c * m) for i, m in zc.comps.items()}) for zc in z.comps])
            g = term if g is None else ChainMap(P, M, [DiagMap(a.source, a.target, {i: F.reduce(a.comps[i] + b.comps[i]) for i in a.comps}) for a, b in zip(g.comps, term.comps)])
        if g is None:
            g = zero_chain_map(P, M)
        lifts.append((rep, g))
    return LiftReport(True, lifts)


# -- double complexes ------------------------------------------------------------------------------


@dataclass
class DoubleComplex:
    """Grid X[h][i] (h = column, i = row) with augmentation column M.

    horiz[h][i]: X_{h,i} -> X_{h-1,i} (h >= 1), eps[i]: X_{0,i} -> M_i,
    vert[h][i]: X_{h,i} -> X_{h,i-1} (i >= 1), M a ChainComplex.
    Optional contractions: t[h][i] for h >= 1 maps X_{h-1,i} -> X_{h,i} and
    t[0][i] maps M_i -> X_{0,i}; these are objectwise k-linear matrices (dicts).
    """

    X: list
    horiz: list
    vert: list
    M: ChainComplex
    eps: list
    t: list | None = None

    @property
    def width(self) -> int:
        return len(self.X)

    @property
    def height(self) -> int:
        return len(self.X[0])


def _term(Xc: DoubleComplex, h, i):
    return Xc.X[h][i]


def total(Xc: DoubleComplex) -> tuple[ChainComplex, list]:
    """Tot of the grid (without the augmentation column) and its degree layout."""
    H, L = Xc.width, Xc.height
    A = Xc.M.diagram
    C, F = A.base, A.field
    layout = []
    terms = []
    for n in range(H + L - 1):
        cells = [(h, n - h) for h in range(H) if 0 <= n - h < L]
        layout.append(cells)
        terms.append(dg.direct_sum([_term(Xc, h, i) for h, i in cells]) if cells else dg.zero_diag_module(A))
    d = [None]
    for n in range(1, len(terms)):
        comps = {}
        src, dst = layout[n], layout[n - 1]
        for o in C.objects:
            rows = [_term(Xc, h, i).dim(o) for h, i in dst]
            cols = [_term(Xc, h, i).dim(o) for h, i in src]
            blocks = {}
            for b, (h, i) in enumerate(src):
                if h >= 1:
                    a = dst.index((h - 1, i))
                    blocks[(a, b)] = Xc.horiz[h][i].comps[o]
                if i >= 1:
                    a = dst.index((h, i - 1))
                    m = Xc.vert[h][i].comps[o]
                    blocks[(a, b)] = m if h % 2 == 0 else F.reduce(-m)
            comps[o] = _block(F, rows, cols, blocks)
        d.append(DiagMap(terms[n], terms[n - 1], comps))
    return ChainComplex(terms, d), layout


@dataclass
class TotalizationReport:
    hypotheses_ok: bool
    eps_t0_identity: bool
    homotopy_ok: bool
    eps_chain_map: bool
    t0_chain_map: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.hypotheses_ok and self.eps_t0_identity and self.homotopy_ok and self.eps_chain_map and self.t0_chain_map


def check_hypotheses(Xc: DoubleComplex) -> list[str]:
    """Row contraction identities and commutation of t with vertical maps, objectwise."""
    A = Xc.M.diagram
    C, F = A.base, A.field
    H, L = Xc.width, Xc.height
    t = Xc.t
    bad = []
    if t is None:
        return ["no row contractions supplied"]
    for o in C.objects:
        for i in range(L):
            def dh(h):  # horizontal map out of column h (h=0 is eps)
                return Xc.eps[i].comps[o] if h == 0 else Xc.horiz[h][i].comps[o]

            def tt(h):
                if h <= H:
                    return t[h][i][o] if h < H + 1 and t[h][i] is not None else None
                return None

            # on M_i: eps t^0 = id
            if not F.equal(F.matmul(dh(0), t[0][i][o]), F.eye(Xc.M.term(i).dim(o))):
                bad.append(f"row {i}: eps t^0 != id at {label(o)}")
            for h in range(H):
                dim = Xc.X[h][i].dim(o)
                acc = F.matmul(t[h][i][o], dh(h))
                if h + 1 < H:
                    acc = F.reduce(acc + F.matmul(dh(h + 1), t[h + 1][i][o]))
                if not F.equal(acc, F.eye(dim)):
                    bad.append(f"row {i}: d t + t d != id on X[{h}] at {label(o)}")
            if i >= 1:
                # vertical commutation: d^h t_i^h = t_{i-1}^h d^{h-1}
                if not F.equal(F.matmul(Xc.vert[0][i].comps[o], t[0][i][o]), F.matmul(t[0][i - 1][o], Xc.M.dmat(i, o))):
                    bad.append(f"t^0 does not commute with the vertical maps between rows {i},{i - 1} at {label(o)}")
                for h in range(1, H):
                    lhs = F.matmul(Xc.vert[h][i].comps[o], t[h][i][o])
                    rhs = F.matmul(t[h][i - 1][o], Xc.vert[h - 1][i].comps[o])
                    if not F.equal(lhs, rhs):
                        bad.append(f"t does not commute with the vertical maps at column {h} between rows {i},{i - 1} at {label(o)}")
    # squares of the grid commute
    for o in C.objects:
        for i in range(1, L):
            if not F.equal(F.matmul(Xc.eps[i - 1].comps[o], Xc.vert[0][i].comps[o]), F.matmul(Xc.M.dmat(i, o), Xc.eps[i].comps[o])):
                bad.append(f"augmentation square fails at row {i}, {label(o)}")
            for h in range(1, H):
                if not F.equal(F.matmul(Xc.horiz[h][i - 1].comps[o], Xc.vert[h][i].comps[o]), F.matmul(Xc.vert[h - 1][i].comps[o], Xc.horiz[h][i].comps[o])):
                    bad.append(f"grid square fails at ({h},{i}), {label(o)}")
    return bad


def totalization_identities(Xc: DoubleComplex, strict: bool = True) -> TotalizationReport:
    """eps t^0 = id on M and t^0 eps homotopic to id on Tot, with the homotopy built and verified."""
    A = Xc.M.diagram
    C, F = A.base, A.field
    H, L = Xc.width, Xc.height
    bad = check_hypotheses(Xc)
    if bad:
        if strict:
            raise HypothesisError("; ".join(bad[:6]))
        return TotalizationReport(False, False, False, False, False, bad)
    Tot, layout = total(Xc)
    top = Tot.top
    Mc = Xc.M
    failures = []

    def eps_mat(n, o):
        rows = Mc.term(n).dim(o)
        cols = [Xc.X[h][i].dim(o) for h, i in layout[n]]
        blocks = {}
        for b, (h, i) in enumerate(layout[n]):
            if h == 0:
                blocks[(0, b)] = Xc.eps[i].comps[o]
        return _block(F, [rows], cols, blocks)

    def t0_mat(n, o):
        rows = [Xc.X[h][i].dim(o) for h, i in layout[n]]
        blocks = {}
        for a, (h, i) in enumerate(layout[n]):
            if h == 0:
                blocks[(a, 0)] = Xc.t[0][i][o]
        return _block(F, rows, [Mc.term(n).dim(o)], blocks)

    def hom_mat(n, o):
        """H: Tot_n -> Tot_{n+1}, equal to t^{h+1} on X_{h,i}."""
        rows = [Xc.X[h][i].dim(o) for h, i in layout[n + 1]] if n + 1 <= top else []
        cols = [Xc.X[h][i].dim(o) for h, i in layout[n]]
        blocks = {}
        for b, (h, i) in enumerate(layout[n]):
            if h + 1 < H:
                a = layout[n + 1].index((h + 1, i))
                blocks[(a, b)] = Xc.t[h + 1][i][o]
        return _block(F, rows, cols, blocks)

    eps_ok = t0_ok = id_ok = hom_ok = True
    for o in C.objects:
        for n in range(top + 1):
            Mn = Mc.term(n).dim(o) if n <= Mc.top else 0
            if n <= Mc.top:
                e, t0 = eps_mat(n, o), t0_mat(n, o)
                if not F.equal(F.matmul(e, t0), F.eye(Mn)):
                    id_ok = False
                    failures.append(f"eps t0 != id in degree {n} at {label(o)}")
                if n >= 1:
                    if not F.equal(F.matmul(Mc.dmat(n, o), e), F.matmul(eps_mat(n - 1, o), Tot.dmat(n, o))):
                        eps_ok = False
                        failures.append(f"eps not a chain map in degree {n} at {label(o)}")
                    if not F.equal(F.matmul(Tot.dmat(n, o), t0), F.matmul(t0_mat(n - 1, o), Mc.dmat(n, o))):
                        t0_ok = False
                        failures.append(f"t0 not a chain map in degree {n} at {label(o)}")
                proj = F.matmul(t0, e)
            else:
                proj = F.zeros(Tot.term(n).dim(o), Tot.term(n).dim(o))
            dim = Tot.term(n).dim(o)
            acc = F.zeros(dim, dim)
            if n + 1 <= top:
                acc = F.reduce(acc + F.matmul(Tot.dmat(n + 1, o), hom_mat(n, o)))
            if n >= 1:
                acc = F.reduce(acc + F.matmul(hom_mat(n - 1, o), Tot.dmat(n, o)))
            if not F.equal(acc, F.reduce(F.eye(dim) - proj)):
                hom_ok = False
                failures.append(f"DH + HD != id - t0 eps in degree {n} at {label(o)}")
    return TotalizationReport(True, id_ok, hom_ok, eps_ok, t0_ok, failures)
