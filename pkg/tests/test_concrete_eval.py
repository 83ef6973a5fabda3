from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kv_atelier.concrete_eval import (
    COUNTEREXAMPLE_WORDS,
    DEFECT_X,
    DEFECT_Y,
    bch_matrix_oracle,
    bch_matrix_value,
    eval_cyclic,
    filter_by_letter_degree,
    read_matrix_json,
    word_trace,
)
from kv_atelier.kv_solution import trace_defect
from kv_atelier.words import CyclicVec

from reference_values import COUNTEREXAMPLE_TRACES, COUNTEREXAMPLE_X, COUNTEREXAMPLE_Y

E12 = [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
E23 = [[0, 0, 0], [0, 0, 1], [0, 0, 0]]


def test_matrices_match_reference():
    assert [list(r) for r in DEFECT_X] == COUNTEREXAMPLE_X
    assert [list(r) for r in DEFECT_Y] == COUNTEREXAMPLE_Y


def test_defect_word_traces():
    assert {w: word_trace(w, DEFECT_X, DEFECT_Y) for w in COUNTEREXAMPLE_WORDS} == COUNTEREXAMPLE_TRACES


def test_trace_by_hand():
    assert word_trace("1", DEFECT_X, DEFECT_Y) == 1
    assert word_trace("2", DEFECT_X, DEFECT_Y) == 0
    # XY = [[1,0,0],[0,-1,0],[0,0,0]]
    assert word_trace("12", DEFECT_X, DEFECT_Y) == 0
    assert word_trace("11", DEFECT_X, DEFECT_Y) == 1


def test_defect_evaluates_nonzero():
    defect = trace_defect(8)
    value = eval_cyclic(defect, DEFECT_X, DEFECT_Y)
    assert value == Fraction(-16, 21772800)
    part = filter_by_letter_degree(defect, "2", 3)
    assert eval_cyclic(part, DEFECT_X, DEFECT_Y) * 21772800 == -16


small_mats = st.integers(2, 4).flatmap(
    lambda n: st.tuples(*[st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)] * 2)
)


@settings(max_examples=40, deadline=None)
@given(small_mats, st.text("12", min_size=1, max_size=7))
def test_trace_is_rotation_invariant(mats, w):
    X, Y = mats
    t = word_trace(w, X, Y)
    for k in range(len(w)):
        assert word_trace(w[k:] + w[:k], X, Y) == t


@settings(max_examples=40, deadline=None)
@given(small_mats, st.integers(-3, 3), st.integers(-3, 3))
def test_eval_is_linear(mats, a, b):
    X, Y = mats
    u = CyclicVec({"112": 1, "2": Fraction(1, 2)})
    v = CyclicVec({"12": 3, "1122": -1})
    assert eval_cyclic(u * a + v * b, X, Y) == a * eval_cyclic(u, X, Y) + b * eval_cyclic(v, X, Y)


def test_filter():
    v = CyclicVec({"112": 1, "122": 2, "1": 5})
    assert filter_by_letter_degree(v, "2", 1) == CyclicVec({"112": 1})
    assert filter_by_letter_degree(v, "1", 1) == CyclicVec({"122": 2, "1": 5})


def test_bch_oracle_on_elementary_matrices():
    assert bch_matrix_oracle(E12, E23)
    z = bch_matrix_value(E12, E23)
    assert z[0, 1] == 1 and z[1, 2] == 1 and z[0, 2] == Fraction(1, 2)


def test_bch_oracle_random_nilpotent_pairs():
    rng = np.random.default_rng(20261015)
    for trial in range(50):
        n = 3 + trial % 4
        X = np.triu(rng.integers(-3, 4, size=(n, n)), 1).tolist()
        Y = np.triu(rng.integers(-3, 4, size=(n, n)), 1).tolist()
        assert bch_matrix_oracle(X, Y), (X, Y)


def test_size_and_shape_errors():
    with pytest.raises(ValueError):
        word_trace("12", [[0, 1], [0, 0]], E12)
    with pytest.raises(ValueError):
        read_matrix_json("[[1, 2, 3], [4, 5, 6]]")
    with pytest.raises(ValueError):
        bch_matrix_value(DEFECT_X, DEFECT_Y)
    with pytest.raises(ValueError):
        word_trace("", E12, E23)


def test_read_matrix_json():
    assert read_matrix_json("[[1, 1, 0], [0, 0, 1], [0, 0, 0]]").tolist() == COUNTEREXAMPLE_X
