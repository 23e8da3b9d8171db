"""Finite-dimensional unital algebras, their morphisms and modules.

An algebra of dimension n is stored by structure constants ``mult[s, t, r]``
(``e_s e_t = sum_r mult[s, t, r] e_r``) and a unit vector.  A module of
dimension m is stored by one ``m x m`` action matrix per basis element.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .field import Field


class AlgebraError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:6]))


class Algebra:
    def __init__(self, field: Field, mult=None, unit=None, name: str = "", factors=None):
        self.field = field
        self.name = name
        self.factors = factors
        if factors is not None:
            A, B = factors
            self.dim = A.dim * B.dim
            self.unit = field.reduce(np.kron(A.unit, B.unit))
            self._mult = None
        else:
            self._mult = field.array(mult) if not isinstance(mult, np.ndarray) else mult
            self.dim = self._mult.shape[0]
            self.unit = field.array(unit) if not isinstance(unit, np.ndarray) else unit

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field.name})"

    @property
    def mult(self) -> np.ndarray:
        if self._mult is None:
            A, B = self.factors
            n = self.dim
            m = np.einsum("abc,def->adbecf", A.mult, B.mult).reshape(n, n, n)
            self._mult = self.field.reduce(m)
        return self._mult

    @cached_property
    def left_mats(self) -> np.ndarray:
        """left_mats[s] is the matrix of x |-> e_s x."""
        if self.factors is not None:
            A, B = self.factors
            return np.array([self.field.kron(a, b) for a in A.left_mats for b in B.left_mats])
        return np.transpose(self.mult, (0, 2, 1)).copy()

    @cached_property
    def right_mats(self) -> np.ndarray:
        """right_mats[t] is the matrix of x |-> x e_t."""
        if self.factors is not None:
            A, B = self.factors
            return np.array([self.field.kron(a, b) for a in A.right_mats for b in B.right_mats])
        return np.transpose(self.mult, (1, 2, 0)).copy()

    def basis_vector(self, s: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[s] = 1
        return v

    def product(self, x, y) -> np.ndarray:
        F = self.field
        return F.matmul(F.matmul(x.reshape(1, -1), self.left_mats.reshape(self.dim, -1)).reshape(self.dim, self.dim), y.reshape(-1, 1)).ravel()

    def left_mult(self, x) -> np.ndarray:
        F = self.field
        return F.matmul(x.reshape(1, -1), self.left_mats.reshape(self.dim, -1)).reshape(self.dim, self.dim)

    def generators(self) -> list[np.ndarray]:
        """A generating set as vectors (the basis, or factor bases for a tensor product)."""
        if self.factors is not None:
            A, B = self.factors
            gens = [self.field.reduce(np.kron(A.basis_vector(s), B.unit)) for s in range(A.dim)]
            gens += [self.field.reduce(np.kron(A.unit, B.basis_vector(t))) for t in range(B.dim)]
            return gens
        return [self.basis_vector(s) for s in range(self.dim)]

    def violations(self) -> list[str]:
        F = self.field
        n = self.dim
        bad = []
        if self.factors is not None:
            for f in self.factors:
                bad += f.violations()
            return bad
        if self.unit.shape != (n,):
            return ["unit has wrong length"]
        lu = F.matmul(self.unit.reshape(1, -1), self.mult.reshape(n, n * n)).reshape(n, n)
        ru = F.matmul(np.transpose(self.mult, (0, 2, 1)).reshape(n * n, n), self.unit.reshape(-1, 1)).reshape(n, n)
        eye = F.eye(n)
        if not F.equal(lu, eye):
            bad.append("unit is not a left identity")
        if not F.equal(ru, eye):
            bad.append("unit is not a right identity")
        # (e_s e_t) e_u against e_s (e_t e_u)
        lhs = F.matmul(self.mult.reshape(n * n, n), self.mult.reshape(n, n * n)).reshape(n, n, n, n)
        rhs = np.stack([F.matmul(self.mult.reshape(n * n, n), self.mult[s]).reshape(n, n, n) for s in range(n)])
        lhs = F.reduce(lhs)
        diff = F.reduce(lhs - rhs)
        if not F.is_zero(diff):
            idx = np.argwhere(np.any(diff != 0, axis=3))
            for s, t, w in idx[:5]:
                bad.append(f"associativity fails at basis triple ({s},{t},{w})")
        return bad

    def validate(self) -> "Algebra":
        bad = self.violations()
        if bad:
            raise AlgebraError(bad)
        return self


def algebra_from_matrices(F: Field, mats, name: str = "") -> Algebra:
    """Subalgebra of a matrix algebra spanned by ``mats`` (must be closed and contain I)."""
    mats = [F.array(m) for m in mats]
    n = len(mats)
    k = mats[0].shape[0]
    B = np.stack([m.ravel() for m in mats], axis=1)
    L = F.left_inverse(B)
    mult = F.zeros(n, n, n)
    for s in range(n):
        for t in range(n):
            prod = F.matmul(mats[s], mats[t]).ravel().reshape(-1, 1)
            c = F.matmul(L, prod).ravel()
            if not F.equal(F.matmul(B, c.reshape(-1, 1)).ravel(), prod.ravel()):
                raise AlgebraError([f"span not closed under product ({s},{t})"])
            mult[s, t] = c
    unit = F.matmul(L, F.eye(k).ravel().reshape(-1, 1)).ravel()
    return Algebra(F, mult, unit, name=name).validate()


@dataclass
class AlgMorphism:
    source: Algebra
    target: Algebra
    matrix: np.ndarray  # target.dim x source.dim

    def __call__(self, x):
        return self.source.field.matmul(self.matrix, x.reshape(-1, 1)).ravel()

    def violations(self) -> list[str]:
        F = self.source.field
        S, T, M = self.source, self.target, self.matrix
        if M.shape != (T.dim, S.dim):
            return [f"matrix shape {M.shape} != {(T.dim, S.dim)}"]
        bad = []
        if not F.equal(self(S.unit), T.unit):
            bad.append("unit is not preserved")
        n = S.dim
        lhs = F.matmul(S.mult.reshape(n * n, n), M.T).reshape(n, n, T.dim)
        # rhs[s, t] = M[:, s] * M[:, t] in the target
        TL = T.left_mats.reshape(T.dim, -1)
        left = F.matmul(M.T, TL).reshape(n, T.dim, T.dim)  # left[s] = mult by phi(e_s)
        rhs = np.stack([F.matmul(left[s], M).T for s in range(n)])
        if not F.equal(lhs, rhs):
            for s, t in np.argwhere(np.any(F.reduce(lhs - rhs) != 0, axis=2))[:5]:
                bad.append(f"not multiplicative at basis pair ({s},{t})")
        return bad

    def validate(self) -> "AlgMorphism":
        bad = self.violations()
        if bad:
            raise AlgebraError(bad)
        return self

    def then(self, other: "AlgMorphism") -> "AlgMorphism":
        """Apply self, then other."""
        return AlgMorphism(self.source, other.target, self.source.field.matmul(other.matrix, self.matrix))


def identity_morphism(A: Algebra) -> AlgMorphism:
    return AlgMorphism(A, A, A.field.eye(A.dim))


def unit_morphism(F: Field, A: Algebra, k: Algebra | None = None) -> AlgMorphism:
    k = k or ground_algebra(F)
    return AlgMorphism(k, A, A.unit.reshape(-1, 1).copy())


class AlgModule:
    """Left module over ``algebra`` with ``action[s]`` the matrix of e_s."""

    def __init__(self, algebra: Algebra, action, name: str = ""):
        F = algebra.field
        self.algebra = algebra
        self.field = F
        self.action = action if isinstance(action, np.ndarray) else F.array(action)
        if self.action.ndim != 3:
            raise AlgebraError(["action must be a stack of square matrices"])
        self.dim = self.action.shape[1]
        self.name = name

    def __repr__(self):
        return f"AlgModule(dim={self.dim} over {self.algebra!r})"

    def act(self, x) -> np.ndarray:
        """Matrix of the algebra element with coordinate vector x."""
        F = self.field
        n, m = self.algebra.dim, self.dim
        if m == 0:
            return F.zeros(0, 0)
        return F.matmul(x.reshape(1, -1), self.action.reshape(n, m * m)).reshape(m, m)

    def violations(self) -> list[str]:
        F = self.field
        A = self.algebra
        n, m = A.dim, self.dim
        if self.action.shape != (n, m, m):
            return [f"action shape {self.action.shape} != {(n, m, m)}"]
        if m == 0:
            return []
        bad = []
        if not F.equal(self.act(A.unit), F.eye(m)):
            bad.append("unit does not act as the identity")
        if A.factors is not None:
            P, Qop = A.factors
            left = [self.act(g) for g in A.generators()[: P.dim]]
            right = [self.act(g) for g in A.generators()[P.dim:]]
            bad += _module_law(F, P, np.array(left) if left else F.zeros(0, m, m), "left factor")
            bad += _module_law(F, Qop, np.array(right) if right else F.zeros(0, m, m), "right factor")
            for s, a in enumerate(left):
                for t, b in enumerate(right):
                    if not F.equal(F.matmul(a, b), F.matmul(b, a)):
                        bad.append(f"factor actions do not commute at ({s},{t})")
                    elif not F.equal(F.matmul(a, b), self.action[s * Qop.dim + t]):
                        bad.append(f"action of basis ({s},{t}) is not the product of factor actions")
            return bad
        return bad + _module_law(F, A, self.action, "action")

    def validate(self) -> "AlgModule":
        bad = self.violations()
        if bad:
            raise AlgebraError(bad)
        return self


def _module_law(F: Field, A: Algebra, action: np.ndarray, what: str) -> list[str]:
    n = A.dim
    m = action.shape[1]
    if m == 0:
        return []
    flat = action.reshape(n, m * m)
    lhs = np.stack([F.matmul(action[s].reshape(m, m), action.transpose(1, 0, 2).reshape(m, n * m)).reshape(m, n, m).transpose(1, 0, 2) for s in range(n)])
    rhs = F.matmul(A.mult.reshape(n * n, n), flat).reshape(n, n, m, m)
    if F.equal(lhs, rhs):
        return []
    bad = []
    for s, t in np.argwhere(np.any(F.reduce(lhs - rhs).reshape(n, n, -1) != 0, axis=2))[:5]:
        bad.append(f"{what} violates e_{s} e_{t} relation")
    return bad


@dataclass
class LinMapSpace:
    """Basis of a space of linear maps ``rows x cols``."""

    basis: list
    shape: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


# -- constructions --------------------------------------------------------------------


def ground_algebra(F: Field) -> Algebra:
    return Algebra(F, F.array([[[1]]]), F.array([1]), name="k")


def product_algebra(F: Field, n: int) -> Algebra:
    """k x ... x k (n factors), basis of orthogonal idempotents."""
    mult = F.zeros(n, n, n)
    for s in range(n):
        mult[s, s, s] = 1
    return Algebra(F, mult, F.array([1] * n), name="k" + "x k" * (n - 1))


def truncated_polynomial(F: Field, n: int) -> Algebra:
    """k[x]/(x^n), basis 1, x, ..., x^(n-1)."""
    mult = F.zeros(n, n, n)
    for s in range(n):
        for t in range(n):
            if s + t < n:
                mult[s, t, s + t] = 1
    unit = F.zeros(n)
    unit[0] = 1
    return Algebra(F, mult, unit, name=f"k[x]/x^{n}")


def matrix_algebra(F: Field, n: int) -> Algebra:
    """M_n(k) on the basis of matrix units E_ab (index a*n + b)."""
    d = n * n
    mult = F.zeros(d, d, d)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                mult[a * n + b, b * n + c, a * n + c] = 1
    unit = F.zeros(d)
    for a in range(n):
        unit[a * n + a] = 1
    return Algebra(F, mult, unit, name=f"M_{n}")


def upper_triangular(F: Field, n: int = 2) -> Algebra:
    mats = []
    for a in range(n):
        for b in range(a, n):
            m = F.zeros(n, n)
            m[a, b] = 1
            mats.append(m)
    return algebra_from_matrices(F, mats, name=f"T_{n}")


def direct_product(F: Field, A: Algebra, B: Algebra) -> Algebra:
    n = A.dim + B.dim
    mult = F.zeros(n, n, n)
    mult[: A.dim, : A.dim, : A.dim] = A.mult
    mult[A.dim:, A.dim:, A.dim:] = B.mult
    return Algebra(F, mult, np.concatenate([A.unit, B.unit]), name=f"({A.name})x({B.name})")


def tensor_algebra(A: Algebra, B: Algebra) -> Algebra:
    """A (x)_k B with basis e_s (x) f_t at index s * dim B + t."""
    return Algebra(A.field, factors=(A, B), name=f"{A.name}(x){B.name}")


def opposite_algebra(A: Algebra) -> Algebra:
    if A.factors is not None:
        P, Q = A.factors
        return tensor_algebra(opposite_algebra(P), opposite_algebra(Q))
    return Algebra(A.field, np.transpose(A.mult, (1, 0, 2)).copy(), A.unit.copy(), name=f"{A.name}^op")


def enveloping_algebra(A: Algebra) -> Algebra:
    return tensor_algebra(A, opposite_algebra(A))


def regular_module(A: Algebra) -> AlgModule:
    return AlgModule(A, A.left_mats.copy(), name=f"{A.name}-regular")


def bimodule_to_left(A: Algebra, left, right) -> AlgModule:
    """Bimodule (left actions of e_s, right actions of e_t) as an A (x) A^op module."""
    F = A.field
    left = np.asarray(left)
    right = np.asarray(right)
    m = left.shape[1] if left.ndim == 3 else 0
    Ae = enveloping_algebra(A)
    action = F.zeros(A.dim * A.dim, m, m)
    for s in range(A.dim):
        for t in range(A.dim):
            action[s * A.dim + t] = F.matmul(left[s], right[t])
    return AlgModule(Ae, action)


def regular_bimodule(A: Algebra) -> AlgModule:
    return bimodule_to_left(A, A.left_mats, A.right_mats)


def bimodule_sides(X: AlgModule) -> tuple[np.ndarray, np.ndarray]:
    """Left and right action matrices of a module over an enveloping algebra."""
    Ae = X.algebra
    if Ae.factors is None:
        raise AlgebraError(["module is not over a tensor product algebra"])
    P, Q = Ae.factors
    F = X.field
    m = X.dim
    act = X.action.reshape(P.dim, Q.dim, m, m)
    # e_s (x) 1 and 1 (x) f_t, contracted against the other factor's unit
    left = F.reduce(sum(Q.unit[t] * act[:, t] for t in np.flatnonzero(Q.unit)))
    right = F.reduce(sum(P.unit[s] * act[s] for s in np.flatnonzero(P.unit)))
    return left, right


def zero_module(A: Algebra) -> AlgModule:
    return AlgModule(A, A.field.zeros(A.dim, 0, 0))


def restrict_module(M: AlgModule, phi: AlgMorphism) -> AlgModule:
    """|M|_phi: the module M over phi.target viewed over phi.source."""
    F = M.field
    n, m = phi.source.dim, M.dim
    if m == 0:
        return zero_module(phi.source)
    act = F.matmul(phi.matrix.T, M.action.reshape(phi.target.dim, m * m)).reshape(n, m, m)
    return AlgModule(phi.source, act)


def quotient(F: Field, sub: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Projection F^n -> F^n / span(sub) and the section through pivot-free coordinates."""
    if sub.shape[1] == 0 or F.is_zero(sub):
        return F.eye(n), F.eye(n)
    rows, piv = F.rref(sub.T)
    pset = set(piv)
    free = [j for j in range(n) if j not in pset]
    q = len(free)
    proj = F.zeros(q, n)
    for c, j in enumerate(free):
        proj[c, j] = 1
    for k, pj in enumerate(piv):
        proj[:, pj] = F.reduce(-rows[k, free])
    lift = F.zeros(n, q)
    for c, j in enumerate(free):
        lift[j, c] = 1
    return proj, lift


def induced_quotient_module(M: AlgModule, proj, lift) -> AlgModule:
    F = M.field
    q = proj.shape[0]
    if q == 0:
        return zero_module(M.algebra)
    act = np.stack([F.mul(proj, M.action[s], lift) for s in range(M.algebra.dim)])
    return AlgModule(M.algebra, act)


@dataclass
class TwistedTensor:
    """A (x)_phi M presented as a quotient of the plain tensor space A (x)_k M."""

    module: AlgModule
    proj: np.ndarray  # canonical surjection A (x)_k M -> A (x)_phi M
    lift: np.ndarray


def twisted_tensor(phi: AlgMorphism, M: AlgModule, generic: bool = False) -> TwistedTensor:
    """A^{dv} (x)_v M = A^{dv} (x)_k M modulo a (x) b m - a phi(b) (x) m.

    For phi onto, the quotient M / (ker phi) M is used unless ``generic``.
    """
    F = M.field
    T, S = phi.target, phi.source
    nt, ns, m = T.dim, S.dim, M.dim
    plain = AlgModule(T, np.stack([F.kron(T.left_mats[a], F.eye(m)) for a in range(nt)]) if m else F.zeros(nt, 0, 0))
    if m == 0:
        return TwistedTensor(zero_module(T), F.zeros(0, 0), F.zeros(0, 0))
    if not generic and F.rank(phi.matrix) == nt:
        return _twisted_tensor_onto(phi, M)
    rels = []
    eye_m = F.eye(m)
    for a in range(nt):
        ea = T.basis_vector(a)
        for b in range(ns):
            aphib = T.product(ea, phi.matrix[:, b])
            # columns j: e_a (x) (e_b . m_j) - (e_a phi(e_b)) (x) m_j
            first = F.kron(ea.reshape(-1, 1), M.action[b])
            second = F.kron(aphib.reshape(-1, 1), eye_m)
            rels.append(F.reduce(first - second))
    R = np.concatenate(rels, axis=1)
    proj, lift = quotient(F, R, nt * m)
    return TwistedTensor(induced_quotient_module(plain, proj, lift), proj, lift)


def _twisted_tensor_onto(phi: AlgMorphism, M: AlgModule) -> TwistedTensor:
    """For phi onto: A (x)_phi M = M / (ker phi) M, with a (x) m |-> [s(a) m] for a section s."""
    F = M.field
    T, S = phi.target, phi.source
    m = M.dim
    ker = F.nullspace(phi.matrix)
    sec = F.pseudo_inverse(phi.matrix)  # phi sec = id on T
    sub = [M.act(ker[:, c]) for c in range(ker.shape[1])]
    qproj, qlift = quotient(F, np.concatenate(sub, axis=1) if sub else F.zeros(m, 0), m)
    proj = np.concatenate([F.matmul(qproj, M.act(sec[:, a])) for a in range(T.dim)], axis=1)
    lift = F.kron(T.unit.reshape(-1, 1), qlift)
    q = qproj.shape[0]
    if q == 0:
        return TwistedTensor(zero_module(T), F.zeros(0, T.dim * m), F.zeros(T.dim * m, 0))
    act = np.stack([F.mul(qproj, M.act(sec[:, a]), qlift) for a in range(T.dim)])
    return TwistedTensor(AlgModule(T, act), proj, lift)


def hom_space(M: AlgModule, N: AlgModule) -> LinMapSpace:
    """Basis of Hom_A(M, N) as N.dim x M.dim matrices."""
    gens = M.algebra.generators()
    return intertwiners(M.field, [M.act(g) for g in gens], [N.act(g) for g in gens])


def intertwiners(F: Field, mats_M: list, mats_N: list) -> LinMapSpace:
    """Basis of {X : X Mg = Ng X for every pair}; M and N are given by the actions of a generating set."""
    m = mats_M[0].shape[0] if mats_M else 0
    n = mats_N[0].shape[0] if mats_N else 0
    if m == 0 or n == 0:
        return LinMapSpace([], (n, m))
    # cut the solution space down one generator at a time, X row-major flattened
    sol = F.eye(n * m)
    for Mg, Ng in zip(mats_M, mats_N):
        block = F.reduce(F.kron(F.eye(n), Mg.T) - F.kron(Ng, F.eye(m)))
        sol = F.matmul(sol, F.nullspace(F.matmul(block, sol)))
        if sol.shape[1] == 0:
            break
    return LinMapSpace([sol[:, c].reshape(n, m) for c in range(sol.shape[1])], (n, m))


def is_module_map(M: AlgModule, N: AlgModule, X: np.ndarray) -> bool:
    F = M.field
    if M.dim == 0 or N.dim == 0:
        return True
    return all(F.equal(F.matmul(X, M.act(g)), F.matmul(N.act(g), X)) for g in M.algebra.generators())


def direct_sum(mods: list[AlgModule], A: Algebra | None = None) -> AlgModule:
    A = A or mods[0].algebra
    F = A.field
    total = sum(M.dim for M in mods)
    act = F.zeros(A.dim, total, total)
    off = 0
    for M in mods:
        act[:, off:off + M.dim, off:off + M.dim] = M.action
        off += M.dim
    return AlgModule(A, act)


@dataclass
class Colimit:
    module: AlgModule
    injections: dict  # index object -> matrix F(x) -> colim
    proj: np.ndarray  # direct sum -> colim
    lift: np.ndarray  # a section of proj
    offsets: dict  # index object -> first coordinate in the direct sum


def module_colimit(J, values: dict, maps: dict, contravariant: bool = False, check: bool = True) -> Colimit:
    """Colimit of a functor from the finite category J to modules over one algebra.

    ``values[x]`` is an AlgModule and ``maps[g]`` the matrix of F(g), which runs
    F(dom g) -> F(cod g), or F(cod g) -> F(dom g) when ``contravariant`` (then the
    colimit is over J^op).  Presented as the direct sum modulo x - F(g) x.
    """
    objs = list(J.objects)
    if not objs:
        raise ValueError("empty index category; the colimit is the zero module over the caller's algebra")
    A = values[objs[0]].algebra
    F = A.field

    def ends(g):
        d, c = J.dom(g), J.cod(g)
        return (c, d) if contravariant else (d, c)

    if check:
        bad = []
        for o in objs:
            if not F.equal(maps[J.identity(o)], F.eye(values[o].dim)):
                bad.append(f"identity at {o} not sent to identity")
        for u, v in J.composable_pairs():
            expect = F.matmul(maps[u], maps[v]) if contravariant else F.matmul(maps[v], maps[u])
            if not F.equal(maps[J.compose(u, v)], expect):
                bad.append(f"composition not preserved at ({u},{v})")
                break
        for g in J.morphisms:
            src, dst = ends(g)
            if not is_module_map(values[src], values[dst], maps[g]):
                bad.append(f"map for {g} is not linear over the algebra")
                break
        if bad:
            raise AlgebraError(bad)
    offsets = {}
    off = 0
    for o in objs:
        offsets[o] = off
        off += values[o].dim
    total = off
    rels = []
    for g in J.nonidentity():
        src, dst = ends(g)
        ms, md = values[src].dim, values[dst].dim
        if ms == 0:
            continue
        r = F.zeros(total, ms)
        r[offsets[src]:offsets[src] + ms, :] = F.eye(ms)
        r[offsets[dst]:offsets[dst] + md, :] = F.reduce(r[offsets[dst]:offsets[dst] + md, :] - maps[g])
        rels.append(r)
    summ = direct_sum([values[o] for o in objs], A)
    R = np.concatenate(rels, axis=1) if rels else F.zeros(total, 0)
    proj, lift = quotient(F, R, total)
    colim = induced_quotient_module(summ, proj, lift)
    inj = {o: proj[:, offsets[o]:offsets[o] + values[o].dim] for o in objs}
    return Colimit(colim, inj, proj, lift, offsets)
