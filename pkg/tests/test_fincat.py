import pytest

from presheafcoh import fincat
from presheafcoh.fincat import CategoryError, validate_category


def test_builtins_are_valid():
    for C in [fincat.terminal(), fincat.interval(), fincat.chain(3), fincat.square(), fincat.parallel_pair(),
              fincat.idempotent_monoid()]:
        assert not fincat.check_laws(C)


def test_counts_and_shapes():
    assert (len(fincat.interval().objects), len(fincat.interval().morphisms)) == (2, 3)
    assert len(fincat.chain(3).morphisms) == 6
    assert len(fincat.square().morphisms) == 9
    pp = fincat.parallel_pair()
    assert len(pp.morphisms) == 4 and fincat.is_delta(pp) and not fincat.is_poset(pp)
    assert fincat.is_poset(fincat.square())
    assert not fincat.is_delta(fincat.idempotent_monoid())


def test_dict_round_trip():
    for C in [fincat.square(), fincat.parallel_pair()]:
        assert validate_category(C.to_dict()) == C


def test_broken_composition_is_named():
    d = fincat.interval().to_dict()
    d["compose"] = [c for c in d["compose"] if c[:2] != ["id_0", "0<1"]]
    with pytest.raises(CategoryError) as exc:
        validate_category(d)
    assert any("id_0" in v for v in exc.value.violations)


def test_wrong_composite_endpoints():
    d = fincat.square().to_dict()
    for c in d["compose"]:
        if c[0] != c[2] and c[1] != c[2]:
            c[2] = d["identities"][d["objects"][0]]
            break
    with pytest.raises(CategoryError):
        validate_category(d)


def test_associativity_violation_detected():
    # a monoid {1, a, b} whose table is not associative
    elems = ["1", "a", "b"]
    prod = {("1", x): x for x in elems} | {(x, "1"): x for x in elems}
    prod |= {("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"}
    with pytest.raises(CategoryError) as exc:
        validate_category(fincat.monoid_category(elems, prod, "1"))
    assert any("assoc" in v.lower() for v in exc.value.violations)


def test_cap():
    with pytest.raises(fincat.CapExceeded):
        validate_category(fincat.chain(3), cap=(2, 100))


def test_from_generators_paths():
    C = fincat.from_generators(["a", "b", "c"], {"f": ("a", "b"), "g": ("b", "c")})
    assert C.compose("f", "g") == "f.g"
    assert C.dom("f.g") == "a" and C.cod("f.g") == "c"


def test_product_and_dot():
    P = fincat.product(fincat.interval(), fincat.interval())
    assert len(P.objects) == 4 and len(P.morphisms) == 9
    dot = fincat.to_dot(fincat.interval())
    assert dot.startswith("digraph") and "0<1" in dot


def test_topological_order_respects_arrows():
    C = fincat.square()
    order = C.topological_order()
    for u in C.nonidentity():
        assert order.index(C.dom(u)) < order.index(C.cod(u))
