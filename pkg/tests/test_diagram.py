import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from presheafcoh import corpus, fincat, ralg
from presheafcoh import diagram as dg
from presheafcoh.bang import subdivide_compat_check
from presheafcoh.field import Field
from presheafcoh.fincat import is_delta

import oracles

F = Field(101)


def test_constant_and_split_diagrams_valid():
    for A in [dg.constant_diagram(fincat.square(), ralg.truncated_polynomial(F, 2)),
              corpus.split_interval_diagram(F), corpus.semisimple_interval_diagram(F)]:
        assert not A.violations()
        assert not A.enveloping().violations()


def test_broken_transition_detected():
    A = corpus.split_interval_diagram(F)
    phi = dict(A.phi)
    phi["0<1"] = F.array([[1], [0]])  # not unital
    assert dg.Diagram(A.base, A.algebras, phi).violations()


def test_nonfunctorial_module_detected():
    A = dg.constant_diagram(fincat.chain(3), ralg.ground_algebra(F))
    M = dg.regular_diag_module(A)
    T = dict(M.T)
    T["0<1"] = F.array([[2]])
    assert dg.DiagModule(A, M.modules, T).violations()


@settings(max_examples=25)
@given(st.integers(0, 2 ** 31))
def test_random_modules_valid(seed):
    rng = np.random.default_rng(seed)
    C = corpus.random_delta(rng, max_objects=4, max_morphisms=12)
    A = corpus.random_diagram(C, F, rng)
    M = corpus.random_module(A, rng)
    assert not M.violations()
    K, inc = dg.kernel(dg.identity_map(M))
    assert K.total_dim() == 0 and not inc.violations()


def test_quotient_and_kernel_exact():
    A = dg.constant_diagram(fincat.chain(3), ralg.truncated_polynomial(F, 2))
    M = dg.regular_diag_module(A)
    gens = {"1": F.array([[0], [1]])}
    sub = dg.generated_submodule(M, gens)
    q = dg.quotient_module(M, sub)
    assert not q.module.violations()
    K, inc = dg.kernel(q.proj)
    for i in A.base.objects:
        assert K.dim(i) == sub[i].shape[1]
        assert K.dim(i) + q.module.dim(i) == M.dim(i)


def test_shriek_along_identity_is_trivial():
    A = corpus.split_interval_diagram(F)
    assert dg.shriek_identity_check(dg.regular_diag_module(A))


def _delta_pairs(canonical):
    for e in canonical:
        if is_delta(e.base):
            for M in e.modules:
                yield e, M


def test_adjunction_on_corpus(canonical):
    n = 0
    for e, M in _delta_pairs(canonical):
        sub = dg.subdivide_diagram(e.diagram)
        Mp = sub.module(M)
        rep = dg.adjunction_check(sub.d, Mp, M)
        assert rep.ok, (e.name, rep)
        n += 1
    assert n >= 20


def test_counit_invertible_on_corpus(canonical):
    for e, M in _delta_pairs(canonical):
        sub = dg.subdivide_diagram(e.diagram)
        eps = dg.counit(sub.d, M)
        for i, m in eps.comps.items():
            assert m.shape[0] == m.shape[1] and F.rank(m) == m.shape[0], e.name


def test_hom_dims_match_oracle_and_survive_subdivision(canonical):
    for e in canonical[:10]:
        mods = e.modules
        sub = dg.subdivide_diagram(e.diagram)
        for M in mods:
            for N in mods:
                H = dg.hom_space(M, N)
                assert len(H) == oracles.hom_dim(oracles.module_data(M), oracles.module_data(N))
                Mp, Np = sub.module(M), sub.module(N)
                assert len(dg.hom_space(Mp, Np)) == len(H)
                primes = [sub.map(h, Mp, Np) for h in H]
                assert dg.maps_rank(primes) == len(H)


def test_allowable_maps():
    A = dg.constant_diagram(fincat.interval(), ralg.truncated_polynomial(F, 2))
    M = dg.regular_diag_module(A)
    ok, wit = dg.is_allowable(dg.zero_map(M, M))
    assert ok
    ok, wit = dg.is_allowable(dg.identity_map(M))
    assert ok and all(F.equal(k, F.eye(2)) for k in wit.values())


def test_enveloping_compatibility(canonical):
    for e in canonical:
        if is_delta(e.base):
            rep = subdivide_compat_check(e.diagram)
            assert rep.ok, rep.differences


def test_bimodule_as_left_matches_regular():
    A = corpus.split_interval_diagram(F)
    left = {i: B.left_mats for i, B in A.algebras.items()}
    right = {i: B.right_mats for i, B in A.algebras.items()}
    X = dg.bimodule_as_left(A, left, right, dict(A.phi))
    R = dg.regular_bimodule(A)
    for i in A.base.objects:
        assert F.equal(X.modules[i].action, R.modules[i].action)
    assert not X.violations()


def test_noncommuting_sides_rejected():
    B = ralg.matrix_algebra(F, 2)
    A = dg.constant_diagram(fincat.terminal(), B)
    o = A.base.objects[0]
    with pytest.raises(dg.DiagramError):
        dg.bimodule_as_left(A, {o: B.left_mats}, {o: B.left_mats}, {A.base.identity(o): F.eye(4)})


def test_pullback_along_d_uses_first_vertex():
    A = corpus.split_interval_diagram(F)
    sub = dg.subdivide_diagram(A)
    for tau in sub.base.objects:
        assert sub.primed.algebras[tau] is A.algebras[tau.first]
