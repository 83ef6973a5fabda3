import io
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from kv_atelier.free_lie import lie_bracket, LieElt, parse_bracket
from kv_atelier.kv2_solver import (
    DEFAULT_PRIMES,
    SparseFormatError,
    SparseMatQ,
    assemble_system,
    decode_solution,
    export_sparse,
    import_sparse,
    kernel_basis,
    kernel_dim_exact,
    rank_mod_p,
    rank_mod_primes,
    system_shape,
)
from kv_atelier.kv_solution import divergence

from reference_values import CY2_DIMS, KV2_A8, KV2_B8, KV2_DIMS, LIE2_DIMS

x, y = LieElt.gens()


def sympy_nullity(m: SparseMatQ) -> int:
    dense = sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(str(m.entries.get((i + 1, j + 1), 0))))
    return m.cols - dense.rank()


@pytest.mark.parametrize("n", range(1, 13))
def test_shape(n):
    rows, cols = system_shape(n)
    assert (rows, cols) == (LIE2_DIMS[n] + CY2_DIMS[n - 1], 2 * LIE2_DIMS[n - 1])
    assert assemble_system(n).shape == (rows, cols)


@pytest.mark.parametrize("n", range(1, 13))
def test_exact_nullity(n):
    report = kernel_dim_exact(assemble_system(n), degree=n)
    assert report.nullity == KV2_DIMS[n - 1]
    assert not report.upper_bound_only


@pytest.mark.parametrize("n", range(1, 8))
def test_nullity_against_dense_rank(n):
    m = assemble_system(n)
    assert kernel_dim_exact(m).nullity == sympy_nullity(m)


@pytest.mark.parametrize("n", [4, 8, 10])
def test_modular_matches_exact(n):
    m = assemble_system(n)
    exact = kernel_dim_exact(m).nullity
    for report in rank_mod_primes(m, DEFAULT_PRIMES, degree=n, threads=1):
        assert report.nullity == exact
        assert report.upper_bound_only


def test_parallel_primes_agree_with_serial():
    m = assemble_system(8)
    serial = [r.nullity for r in rank_mod_primes(m, DEFAULT_PRIMES[:2], threads=1)]
    parallel = [r.nullity for r in rank_mod_primes(m, DEFAULT_PRIMES[:2], threads=2)]
    assert serial == parallel == [1, 1]


def test_degree_one_kernel_is_the_trivial_pair():
    (v,) = kernel_basis(assemble_system(1))
    a, b = decode_solution(1, v)
    assert (a, b) == (y, x) or (a, b) == (-y, -x)


def test_degree_eight_kernel_matches_reference_pair():
    (v,) = kernel_basis(assemble_system(8))
    a, b = decode_solution(8, v)
    pa, pb = parse_bracket(KV2_A8), parse_bracket(KV2_B8)
    word, coeff = next(iter(pa.terms.items()))
    lam = a[word] / coeff
    assert lam != 0
    assert a == pa * lam and b == pb * lam


@pytest.mark.parametrize("n", [8, 10, 11, 12])
def test_kernel_vectors_satisfy_both_equations(n):
    for v in kernel_basis(assemble_system(n)):
        a, b = decode_solution(n, v)
        assert lie_bracket(x, a) + lie_bracket(y, b) == 0
        assert divergence(a, b) == 0


entries = st.dictionaries(
    st.tuples(st.integers(1, 6), st.integers(1, 6)),
    st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4)),
    max_size=20,
)


@settings(max_examples=60, deadline=None)
@given(entries, st.sampled_from([2, 3, 5, 7, 2147483647]))
def test_modular_nullity_bounds_exact(ent, p):
    ent = {k: v for k, v in ent.items() if v.denominator % p}
    m = SparseMatQ(6, 6, ent)
    exact = kernel_dim_exact(m).nullity
    assert exact == sympy_nullity(m)
    assert rank_mod_p(m, p).nullity >= exact


@settings(max_examples=40, deadline=None)
@given(entries)
def test_kernel_basis_is_verified_and_primitive(ent):
    m = SparseMatQ(6, 6, ent)
    basis = kernel_basis(m)
    assert len(basis) == kernel_dim_exact(m).nullity
    for v in basis:
        assert not any(m.matvec(v))
        assert all(c.denominator == 1 for c in v)
        assert next(c for c in v if c) > 0


def test_bad_primes_rejected():
    m = SparseMatQ(2, 2, {(1, 1): Fraction(1, 3)})
    with pytest.raises(ValueError):
        rank_mod_p(m, 4)
    with pytest.raises(ValueError):
        rank_mod_p(m, 3)


def test_sparse_round_trip():
    m = assemble_system(6)
    buf = io.StringIO()
    export_sparse(m, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == f"{m.rows} {m.cols} {m.nnz}"
    back = import_sparse(io.StringIO(text))
    assert back == m


@settings(max_examples=40, deadline=None)
@given(entries)
def test_sparse_round_trip_random(ent):
    m = SparseMatQ(6, 6, ent)
    buf = io.StringIO()
    export_sparse(m, buf)
    assert import_sparse(io.StringIO(buf.getvalue())) == m


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("2 2\n", 1),
    ("2 2 1\n1 1 x\n", 2),
    ("2 2 1\n3 1 1\n", 2),
    ("2 2 2\n1 1 1\n1 1 2\n", 3),
    ("2 2 2\n1 1 1\n", 3),
])
def test_sparse_import_errors(text, line):
    with pytest.raises(SparseFormatError) as err:
        import_sparse(io.StringIO(text))
    assert err.value.line == line


def test_entries_outside_shape_rejected():
    with pytest.raises(IndexError):
        SparseMatQ(2, 2, {(3, 1): 1})
