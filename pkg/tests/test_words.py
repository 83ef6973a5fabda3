from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from kv_atelier.words import (
    AssocPoly,
    CyclicVec,
    assoc_exp,
    assoc_log,
    assoc_mul,
    cyclic_project,
    necklace_basis,
    necklace_canon,
    necklace_dim,
)

from reference_values import C6, C8, CY2_DIMS, word_str

x, y = AssocPoly.word("1"), AssocPoly.word("2")

words = st.text(alphabet="12", min_size=1, max_size=5)
coeffs = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 6))
polys = st.dictionaries(words, coeffs, max_size=5).map(AssocPoly)


def test_mul_basic():
    assert assoc_mul(x, y) == AssocPoly.word("12")
    assert assoc_mul(x + y, x + y) == AssocPoly({"11": 1, "12": 1, "21": 1, "22": 1})
    assert assoc_mul(AssocPoly.word("12"), x, 2) == 0


def test_exp():
    assert assoc_exp(AssocPoly(), 4) == AssocPoly.one()
    assert assoc_exp(x, 2) == AssocPoly({"": 1, "1": 1, "11": Fraction(1, 2)})
    assert assoc_mul(assoc_exp(x, 6), assoc_exp(-x, 6), 6) == AssocPoly.one()
    with pytest.raises(ValueError):
        assoc_exp(AssocPoly.one(), 3)


def test_log():
    assert assoc_log(AssocPoly.one(), 5) == 0
    assert assoc_log(assoc_exp(x, 6), 6) == x
    z = assoc_log(assoc_mul(assoc_exp(x, 3), assoc_exp(y, 3), 3), 3)
    assert z.degree_part(2) == (AssocPoly.word("12") - AssocPoly.word("21")) * Fraction(1, 2)
    with pytest.raises(ValueError):
        assoc_log(x, 3)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_exp_log_round_trip(a):
    a = a - AssocPoly({"": a.constant})
    assert assoc_log(assoc_exp(a, 6), 6) == a.truncate(6)


def test_necklace_canon():
    assert necklace_canon("21") == "12"
    assert necklace_canon("2112") == "1122"
    assert necklace_canon("1212") == "1212"
    with pytest.raises(ValueError):
        necklace_canon("")


def test_cyclic_project_examples():
    assert cyclic_project(AssocPoly.word("12") - AssocPoly.word("21")) == 0
    assert cyclic_project(AssocPoly({"112": 1, "121": 2})) == CyclicVec({"112": 3})
    assert cyclic_project(x) == CyclicVec({"1": 1})


def test_cyclic_project_drops_constant(caplog):
    assert cyclic_project(AssocPoly({"": 2, "1": 1})) == CyclicVec({"1": 1})
    assert "constant term" in caplog.text


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_commutators_vanish_cyclically(a, b):
    assert cyclic_project(assoc_mul(a, b) - assoc_mul(b, a)) == 0


@given(words, st.integers(0, 10), coeffs)
def test_projection_rotation_invariant(w, k, c):
    k %= len(w)
    assert cyclic_project(AssocPoly({w: c})) == cyclic_project(AssocPoly({w[k:] + w[:k]: c}))


def test_necklace_dim_table():
    assert [necklace_dim(n) for n in range(1, 17)] == CY2_DIMS


@pytest.mark.parametrize("n", range(1, 13))
def test_necklace_basis_size_and_canonical(n):
    basis = necklace_basis(n)
    assert len(basis) == necklace_dim(n)
    assert basis == sorted(basis)
    assert all(necklace_canon(w) == w for w in basis)


@pytest.mark.parametrize("n", range(1, 11))
def test_necklace_basis_by_enumeration(n):
    brute = {necklace_canon("".join(p)) for p in product("12", repeat=n)}
    assert set(necklace_basis(n)) == brute


def test_small_bases():
    assert necklace_basis(1) == ["1", "2"]
    assert necklace_basis(2) == ["11", "12", "22"]


@pytest.mark.parametrize("listed, n", [(C6, 6), (C8, 8)])
def test_reference_bases_are_complete(listed, n):
    canon = {necklace_canon(word_str(w)) for w in listed}
    assert len(canon) == len(listed)
    assert canon == set(necklace_basis(n))
