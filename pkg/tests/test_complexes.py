import copy

import numpy as np
import pytest

from presheafcoh import complexes as cx
from presheafcoh import corpus, fincat, homalg, ralg
from presheafcoh import diagram as dg
from presheafcoh.field import Field

from helpers import augmentation, chain_of, lifted, scaled

F = Field(101)


def vec(dims, diffs):
    return cx.VecComplex(F, dims, [None] + [F.array(d) for d in diffs])


def test_contractibility_examples():
    assert cx.is_contractible_k(vec([0], [])).ok
    r = cx.is_contractible_k(vec([1, 1], [[[1]]]))
    assert r.ok and cx.check_contraction(vec([1, 1], [[[1]]]), r.contraction)
    assert not cx.is_contractible_k(vec([1], [])).ok
    assert not cx.is_contractible_k(vec([1, 1], [[[0]]])).ok


def _interval_module():
    A = dg.constant_diagram(fincat.interval(), ralg.truncated_polynomial(F, 2))
    return A, corpus.trivial_module(A)


def test_cone_of_identity_contractible():
    A, M = _interval_module()
    R = homalg.resolve(M, 2)
    P, _ = R.complex(cap=True)
    ident = cx.identity_chain_map(P)
    c = cx.cone(ident)
    assert not c.violations()
    for i in A.base.objects:
        assert cx.is_contractible_k(c.at(i)).ok
    rep = cx.is_rel_qiso(ident)
    assert rep.ok
    for i, w in rep.witnesses.items():
        assert cx.check_gamma_witness(ident, i, w)


def test_shift_composes():
    A, M = _interval_module()
    P, _ = homalg.resolve(M, 2).complex()
    a, b = cx.shift(cx.shift(P, 1), 1), cx.shift(P, 2)
    assert a.top == b.top
    for n in range(a.top + 1):
        for i in A.base.objects:
            assert a.term(n).dim(i) == b.term(n).dim(i)
            assert F.equal(a.dmat(n, i), b.dmat(n, i))


def test_resolution_augmentation_is_rel_qiso():
    A, M = _interval_module()
    for method in ("natural", "minimal"):
        R = homalg.resolve(M, 2, method)
        _, f = augmentation(R, cap=True)
        assert cx.is_rel_qiso(f).ok
        _, g = augmentation(R, cap=False)  # truncated: homology at the top
        rep = cx.is_rel_qiso(g)
        assert not rep.ok and rep.failing


def test_gamma_witness_equivalence_both_directions(canonical):
    seen_true = seen_false = 0
    for e in canonical[:12]:
        M = e.modules[0]
        R = homalg.resolve(M, 2, "minimal")
        for cap in (True, False):
            _, f = augmentation(R, cap)
            rep = cx.is_rel_qiso(f)
            for i in e.base.objects:
                assert cx.gamma_system_solvable(f, i) == (i not in rep.failing)
            seen_true += rep.ok
            seen_false += not rep.ok
    assert seen_true and seen_false


def test_homotopy_classes_single_terms():
    A, M = _interval_module()
    P = homalg.InducedModule(A, ["1"]).as_diag_module()
    hc = cx.homotopy_classes(cx.single(P), cx.single(M))
    assert hc.dim == len(dg.hom_space(P, M))


def test_no_maps_into_cones_and_lifting(canonical):
    for e in canonical[:8]:
        M, N = e.modules[0], e.modules[-1]
        P, _ = homalg.resolve(M, 1).complex()
        _, f = augmentation(homalg.resolve(N, 1))
        assert cx.is_rel_qiso(f).ok
        assert cx.homotopy_classes(P, cx.cone(f)).dim == 0
        assert cx.lift_classes(P, f).surjective


def test_two_out_of_three(canonical):
    for e in canonical[:8]:
        M = e.modules[0]
        RM = homalg.resolve(M, 2)
        for g in [scaled(M, 3), scaled(M, 0)] + dg.hom_space(M, M)[:2]:
            Pg, fM, fM2 = lifted(g, RM, RM)
            gf = fM.then(chain_of(g, fM.target.top))  # g after the augmentation
            fg = Pg.then(fM2)
            assert fg.target is fM2.target
            flags = [cx.is_rel_qiso(Pg).ok, cx.is_rel_qiso(fM2).ok, cx.is_rel_qiso(fg).ok]
            assert sum(flags) != 2
            assert cx.is_rel_qiso(gf).ok == flags[2]


def test_total_of_one_row_is_the_row():
    A, M = _interval_module()
    R = homalg.resolve(M, 2)
    P, aug = R.complex(cap=True)
    X = [[P.term(h)] for h in range(P.top + 1)]
    horiz = [[None]] + [[P.d[h]] for h in range(1, P.top + 1)]
    vert = [[None] for _ in X]
    t = [[R.contraction()[h]] for h in range(R.length + 1)] + [[R.kernel_section(R.length)]]
    Xc = cx.DoubleComplex(X, horiz, vert, cx.single(M), [aug], t)
    Tot, _ = cx.total(Xc)
    assert [Tot.term(n).dims() for n in range(Tot.top + 1)] == [P.term(n).dims() for n in range(P.top + 1)]
    assert cx.totalization_identities(Xc).ok


def _two_term_complex():
    A = dg.constant_diagram(fincat.interval(), ralg.ground_algebra(F))
    M0 = dg.regular_diag_module(A)
    S1 = dg.quotient_module(M0, dg.generated_submodule(M0, {"0": F.array([[1]])})).module
    M1 = homalg.InducedModule(A, ["1"]).as_diag_module()
    d1 = dg.hom_space(M1, M0)[0]
    return A, cx.complex_from([M0, M1], [d1])


def test_spread_out_two_term_complex():
    A, M = _two_term_complex()
    assert not M.violations()
    so = homalg.spread_out(M)
    assert so.totalization.ok
    assert so.eps_report.ok
    assert so.pushforward_report.ok


def test_broken_naturality_raises():
    A, M = _two_term_complex()
    so = homalg.spread_out(M, check_pushforward=False)
    Xc = so.double
    t = copy.deepcopy(Xc.t)
    rng = np.random.default_rng(5)
    i = 1
    for o in so.complex.diagram.base.objects:
        z = F.random(rng, (Xc.X[1][i].dim(o), Xc.M.term(i).dim(o)))
        d1 = Xc.horiz[1][i].comps[o]
        t[0][i][o] = F.reduce(t[0][i][o] + F.matmul(d1, z))
        t[1][i][o] = F.reduce(t[1][i][o] - F.matmul(z, Xc.eps[i].comps[o]))
    broken = cx.DoubleComplex(Xc.X, Xc.horiz, Xc.vert, Xc.M, Xc.eps, t)
    bad = cx.check_hypotheses(broken)
    assert bad and all("does not commute with the vertical maps" in b for b in bad)
    with pytest.raises(cx.HypothesisError):
        cx.totalization_identities(broken)
