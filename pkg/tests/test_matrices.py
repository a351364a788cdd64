from __future__ import annotations

import io

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hubbard_geometry.matrices import (
    ComplexMatrix, dump_matrix, embed_pair, kron, load_matrix, partial_trace_first,
    partial_transpose_second, permutation_matrix,
)

rng = np.random.default_rng(1)


def random_matrix(dim, seed):
    r = np.random.default_rng(seed)
    return r.normal(size=(dim, dim)) + 1j * r.normal(size=(dim, dim))


def to_cm(a):
    return ComplexMatrix.from_dense([[complex(v) for v in row] for row in a], 64)


def test_product_and_kron_match_numpy():
    a, b = random_matrix(4, 1), random_matrix(4, 2)
    assert np.allclose((to_cm(a) @ to_cm(b)).to_numpy(), a @ b)
    assert np.allclose(kron(to_cm(a), to_cm(b)).to_numpy(), np.kron(a, b))


def test_embed_pair_matches_kron():
    a, b, c = random_matrix(4, 3), random_matrix(4, 4), random_matrix(4, 5)
    op = np.kron(a, b)
    full = np.kron(np.kron(a, np.eye(4)), b)
    assert np.allclose(embed_pair(to_cm(op), 0, 2, 3).to_numpy(), full)
    full2 = np.kron(np.eye(4), np.kron(a, c))
    assert np.allclose(embed_pair(to_cm(np.kron(a, c)), 1, 2, 3).to_numpy(), full2)


def test_embed_pair_reversed_order_uses_permutation():
    op = random_matrix(16, 6)
    P = permutation_matrix(4, 64).to_numpy()
    assert np.allclose(embed_pair(to_cm(op), 1, 0, 2).to_numpy(), P @ op @ P)


def test_partial_operations():
    a, b = random_matrix(4, 7), random_matrix(4, 8)
    assert np.allclose(partial_transpose_second(to_cm(np.kron(a, b))).to_numpy(), np.kron(a, b.T))
    assert np.allclose(partial_trace_first(to_cm(np.kron(a, b))).to_numpy(), np.trace(a) * b)


def test_permutation_matrix():
    P = permutation_matrix(4, 64)
    assert P @ P == ComplexMatrix.identity(16, 64)
    assert P.entry(2, 5) == 1 and P.entry(2, 2) == 0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        ComplexMatrix.identity(4) @ ComplexMatrix.identity(16)
    with pytest.raises(IndexError):
        ComplexMatrix.from_entries(2, {(2, 0): 1})


@given(st.integers(0, 10_000))
def test_dump_roundtrip(seed):
    with mpmath.workprec(128):
        r = np.random.default_rng(seed)
        entries = {(int(i), int(j)): mpmath.mpc(mpmath.mpf(r.normal()) / 3, mpmath.mpf(r.normal()) * 1e-30)
                   for i, j in r.integers(0, 4, size=(5, 2))}
    A = ComplexMatrix.from_entries(4, entries, 128)
    buf = io.StringIO()
    dump_matrix(A, buf)
    buf.seek(0)
    B = load_matrix(buf)
    with mpmath.workprec(128):
        assert (A - B).max_abs() <= mpmath.mpf(2) ** -120 * max(A.max_abs(), 1)


def test_load_rejects_foreign_file():
    with pytest.raises(ValueError):
        load_matrix(io.StringIO("hello\n"))
