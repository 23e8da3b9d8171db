from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from presheafcoh.field import Field

import oracles

F101 = Field(101)
QQ = Field(None)

small = st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=5)


def test_names_round_trip():
    assert Field.from_name("F7").p == 7
    assert Field.from_name("Q").p is None
    assert Field.from_name(F101.name) == F101
    with pytest.raises(ValueError):
        Field(12)


def test_parse_rationals_mod_p():
    assert F101.parse("1/2") == 51
    assert QQ.parse(" -3/7 ") == Fraction(-3, 7)
    assert F101.format(F101.parse("-1")) == "100"


@given(small)
def test_rank_matches_plain_elimination(rows):
    a = F101.array(rows)
    assert F101.rank(a) == oracles.rank_mod_p(rows)


@given(small)
def test_nullspace_is_kernel(rows):
    for K in (F101, QQ):
        a = K.array(rows)
        N = K.nullspace(a)
        assert N.shape[1] == a.shape[1] - K.rank(a)
        assert K.is_zero(K.matmul(a, N))


@given(small)
def test_pseudo_inverse_splits(rows):
    for K in (F101, QQ):
        a = K.array(rows)
        g = K.pseudo_inverse(a)
        assert K.equal(K.mul(a, g, a), a)


@given(small, st.lists(st.integers(-5, 5), min_size=1, max_size=5))
def test_solve_when_consistent(rows, coeffs):
    a = F101.array(rows)
    x = F101.array([[c] for c in (coeffs * 4)[:4]])
    b = F101.matmul(a, x)
    y = F101.solve(a, b)
    assert y is not None and F101.equal(F101.matmul(a, y), b)


def test_matmul_large_entries_exact():
    rng = np.random.default_rng(0)
    a, b = F101.random(rng, (30, 40)), F101.random(rng, (40, 20))
    ref = (a.astype(object) @ b.astype(object)) % 101
    assert np.array_equal(F101.matmul(a, b), ref.astype(np.int64))


def test_rational_rank_differs_from_mod_p():
    a = [[101, 0], [0, 1]]
    assert QQ.rank(QQ.array(a)) == 2
    assert F101.rank(F101.array(a)) == 1
