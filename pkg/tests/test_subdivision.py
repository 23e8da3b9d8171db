import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from presheafcoh import corpus, fincat, subdivision
from presheafcoh.fincat import inclusion_functor, is_delta, is_poset, label

import oracles


def counts(C):
    return len(C.objects), len(C.morphisms)


def test_small_examples():
    assert counts(subdivision.subdivide(fincat.terminal())) == (1, 1)
    assert counts(subdivision.subdivide(fincat.interval())) == (3, 5)
    Cp = subdivision.subdivide(fincat.parallel_pair())
    assert counts(Cp) == (4, 8) and is_poset(Cp)


@pytest.mark.parametrize("C", [fincat.interval(), fincat.chain(3), fincat.square(), fincat.parallel_pair()],
                         ids=lambda C: C.name)
def test_counts_match_enumeration(C):
    Cp = subdivision.subdivide(C, validate=True)
    assert counts(Cp) == oracles.subdivision_counts(C.to_dict())
    Cpp = subdivision.subdivide(Cp)
    assert counts(Cpp) == oracles.subdivision_counts(Cp.relabeled().to_dict())


def test_second_subdivision_of_parallel_pair():
    Cpp = subdivision.subdivide(subdivision.subdivide(fincat.parallel_pair()))
    assert counts(Cpp) == (8, 16) and is_poset(Cpp)


@settings(max_examples=60)
@given(st.integers(0, 2 ** 31))
def test_subdivision_is_delta_then_poset(seed):
    C = corpus.random_delta(np.random.default_rng(seed), max_objects=4, max_morphisms=14)
    Cp = subdivision.subdivide(C)
    assert is_delta(Cp)
    assert is_poset(subdivision.subdivide(Cp))


@settings(max_examples=30)
@given(st.integers(0, 2 ** 31))
def test_no_maps_to_higher_simplices(seed):
    C = corpus.random_delta(np.random.default_rng(seed), max_objects=4, max_morphisms=14)
    Cp = subdivision.subdivide(C)
    for (tau, sigma, v) in Cp.morphisms:
        assert tau.dim >= sigma.dim
        assert C.dom(v) == tau.first and C.cod(v) == sigma.first


def test_capped_on_idempotent():
    C = fincat.idempotent_monoid()
    with pytest.raises(subdivision.NotADelta):
        subdivision.subdivide(C)
    T = subdivision.subdivide_capped(C, 2)
    assert sorted(s.dim for s in T.objects) == [0, 1, 2]
    assert is_delta(T)
    T0 = subdivision.subdivide_capped(fincat.square(), 0)
    assert counts(T0) == (4, 4)


def test_cap_inactive_for_deltas():
    C = fincat.square()
    assert subdivision.subdivide_capped(C, 10) == subdivision.subdivide(C)


@pytest.mark.parametrize("seed", range(4))
def test_non_deltas_capped_are_deltas(seed):
    C = corpus.random_category(np.random.default_rng(seed))
    assert is_delta(subdivision.subdivide_capped(C, 3))


def test_d_functor():
    C = fincat.parallel_pair()
    Cp = subdivision.subdivide(C)
    d = subdivision.d_functor(C, Cp)
    assert not d.violations()
    for tau in Cp.objects:
        assert d.mor(Cp.identity(tau)) == C.identity(tau.first)
    # every arrow of C is the carrier of a map out of its own 1-simplex
    for u in C.nonidentity():
        tau = subdivision.simplex_from_ids(C, [u])
        assert u in {d.mor(m) for m in Cp.out_of(tau)}
    one = subdivision.simplex_from_ids(fincat.interval(), ["0<1"])
    assert subdivision.d_functor(fincat.interval()).obj(one) == "0"


def test_induced_functor_naturality():
    D, C = fincat.interval(), fincat.chain(3)
    f = fincat.CatFunctor(D, C, {"0": "0", "1": "1"}, {"id_0": "id_0", "id_1": "id_1", "0<1": "0<1"})
    assert not f.violations()
    fp = subdivision.subdivide_functor(f)
    assert not fp.violations()
    dD, dC = subdivision.d_functor(D, fp.source), subdivision.d_functor(C, fp.target)
    for m in fp.source.morphisms:
        assert dC.mor(fp.mor(m)) == f.mor(dD.mor(m))
    ident = subdivision.subdivide_functor(fincat.identity_functor(C))
    assert all(ident.obj(t) == t for t in ident.source.objects)


def test_collapse_raises():
    D, C = fincat.interval(), fincat.terminal()
    f = fincat.constant_functor(D, C, C.objects[0])
    with pytest.raises(subdivision.DegeneracyCollapse):
        subdivision.subdivide_functor(f)


def test_simplex_serialization():
    C = fincat.chain(3)
    for s in subdivision.simplices(C):
        assert subdivision.simplex_from_ids(C, s.ids(C)) == s
    with pytest.raises(ValueError):
        subdivision.simplex_from_ids(C, ["0<1", "id_1"])


def test_subdivision_reenters_validation():
    Cp = subdivision.subdivide(fincat.square())
    again = fincat.validate_category(Cp.relabeled().to_dict())
    assert counts(again) == counts(Cp)
    assert all(isinstance(label(o), str) for o in again.objects)
