"""Evaluation of words and cyclic vectors on explicit integer matrices."""
from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce

import numpy as np

from .bch import bch_series
from .free_lie import lie_to_assoc
from .words import CyclicVec

# 3x3 pair separating the degree-8 defect from zero: traces of the defect words are
# read off the standard representation of gl(3).
DEFECT_X = ((1, 1, 0), (0, 0, 1), (0, 0, 0))
DEFECT_Y = ((0, 0, 0), (1, 0, 0), (0, -1, 0))

COUNTEREXAMPLE_WORDS = ("11112212", "11112122", "11121122", "11122112")


def int_mat(rows) -> np.ndarray:
    a = np.array([[int(v) for v in row] for row in rows], dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    return a


def read_matrix_json(text: str) -> np.ndarray:
    return int_mat(json.loads(text))


def _pair(X, Y) -> tuple[np.ndarray, np.ndarray]:
    X, Y = int_mat(X), int_mat(Y)
    if X.shape != Y.shape:
        raise ValueError(f"size mismatch: {X.shape} vs {Y.shape}")
    return X, Y


def _word_product(w: str, X, Y):
    return reduce(lambda acc, c: acc.dot(X if c == "1" else Y), w[1:], X if w[0] == "1" else Y)


def word_trace(w: str, X, Y) -> int:
    if not w:
        raise ValueError("empty word")
    X, Y = _pair(X, Y)
    return int(np.trace(_word_product(w, X, Y)))


def eval_cyclic(v: CyclicVec, X, Y) -> Fraction:
    X, Y = _pair(X, Y)
    return sum((c * int(np.trace(_word_product(w, X, Y))) for w, c in v), Fraction(0))


def filter_by_letter_degree(v: CyclicVec, letter: str, k: int) -> CyclicVec:
    return CyclicVec._from_clean({w: c for w, c in v if w.count(letter) == k})


# -- nilpotent BCH check -----------------------------------------------------------


def _is_strictly_upper(a: np.ndarray) -> bool:
    n = a.shape[0]
    return all(a[i, j] == 0 for i in range(n) for j in range(i + 1))


def _mat_exp_nilpotent(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    eye = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    out, power = eye.copy(), eye.copy()
    for k in range(1, n):
        power = power.dot(a) * Fraction(1, k)
        out = out + power
    return out


def _mat_log_unipotent(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    eye = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    h = m - eye
    out = np.zeros((n, n), dtype=object) + Fraction(0)
    power = eye
    for k in range(1, n):
        power = power.dot(h)
        out = out + power * Fraction((-1) ** (k + 1), k)
    return out


def bch_matrix_value(X, Y) -> np.ndarray:
    """Z(X, Y) evaluated on strictly upper-triangular matrices via the Lie series."""
    X, Y = _pair(X, Y)
    if not (_is_strictly_upper(X) and _is_strictly_upper(Y)):
        raise ValueError("matrices must be strictly upper triangular")
    n = X.shape[0]
    out = np.zeros((n, n), dtype=object) + Fraction(0)
    if n < 2:
        return out
    for w, c in lie_to_assoc(bch_series(n - 1)):
        out = out + _word_product(w, X, Y) * c
    return out


def bch_matrix_oracle(X, Y) -> bool:
    """Compare the Lie series against log(exp(X) exp(Y)) computed with finite sums."""
    Xa, Ya = _pair(X, Y)
    series_value = bch_matrix_value(Xa, Ya)
    Xf = Xa * Fraction(1)
    Yf = Ya * Fraction(1)
    direct = _mat_log_unipotent(_mat_exp_nilpotent(Xf).dot(_mat_exp_nilpotent(Yf)))
    return bool((series_value == direct).all())
