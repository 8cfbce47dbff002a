import random

import numpy as np
import pytest

from fiberres import linalg


def brute_rank(mat, p):
    """Row-reduce with fraction-free elimination, counting pivots."""
    rows = [list(int(x) % p for x in row) for row in mat]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def random_matrix(rng, m, n, p):
    return np.array([[rng.randrange(p) for _ in range(n)] for _ in range(m)],
                    dtype=np.int64)


def test_rref_against_brute_force():
    rng = random.Random(101)
    for p in (2, 5, 32003):
        for _ in range(25):
            m, n = rng.randrange(1, 7), rng.randrange(1, 7)
            mat = random_matrix(rng, m, n, p)
            R, pivots = linalg.rref(mat, p)
            assert len(pivots) == brute_rank(mat, p)
            # pivot columns are unit columns
            for r, c in enumerate(pivots):
                col = np.zeros(m, dtype=np.int64)
                col[r] = 1
                assert np.array_equal(R[:, c], col)
            # row space is preserved
            assert linalg.rank(np.vstack([mat, R]), p) == len(pivots)


def test_kernel_basis_properties():
    rng = random.Random(202)
    p = 5
    for _ in range(40):
        m, n = rng.randrange(0, 6), rng.randrange(0, 6)
        mat = random_matrix(rng, m, n, p) if m and n else np.zeros((m, n), dtype=np.int64)
        ker = linalg.kernel_basis(mat, p)
        assert ker.shape[0] == n - linalg.rank(mat, p)
        if ker.size and mat.size:
            assert not np.any((mat @ ker.T) % p)
        assert linalg.rank(ker, p) == ker.shape[0]


def test_solve_particular_and_inconsistent():
    p = 7
    mat = np.array([[1, 2, 3], [2, 4, 6]], dtype=np.int64)
    rhs = np.array([3, 6], dtype=np.int64)
    x = linalg.solve(mat, rhs, p)
    assert np.array_equal((mat @ x) % p, rhs)
    assert linalg.solve(mat, np.array([1, 0]), p) is None
    # matrix right-hand side
    B = np.array([[3, 1], [6, 2]], dtype=np.int64)
    X = linalg.solve(mat, B, p)
    assert np.array_equal((mat @ X) % p, B % p)


def test_solve_is_deterministic_echelon_choice():
    p = 5
    mat = np.array([[1, 1, 0]], dtype=np.int64)
    x = linalg.solve(mat, np.array([2]), p)
    # free coordinates stay zero
    assert np.array_equal(x, np.array([2, 0, 0]))


def test_span_incremental_matches_batch():
    rng = random.Random(303)
    p = 11
    for _ in range(30):
        n = rng.randrange(1, 8)
        vecs = random_matrix(rng, rng.randrange(1, 10), n, p)
        span = linalg.Span(p, n)
        for v in vecs:
            span.add(v)
        assert span.dim == linalg.rank(vecs, p)
        R = linalg.row_space(vecs, p)
        assert np.array_equal(span.basis_matrix(), R)
        for v in vecs:
            assert span.contains(v)


def test_span_reduce_residual_is_outside_span():
    p = 5
    span = linalg.Span(p, 3)
    span.add([1, 2, 0])
    v = np.array([2, 4, 1], dtype=np.int64)
    resid = span.reduce(v)
    assert np.array_equal(resid, np.array([0, 0, 1]))


def test_empty_shapes():
    p = 5
    assert linalg.rank(np.zeros((0, 4), dtype=np.int64), p) == 0
    assert linalg.kernel_basis(np.zeros((0, 3), dtype=np.int64), p).shape == (3, 3)
    assert linalg.kernel_basis(np.zeros((3, 0), dtype=np.int64), p).shape == (0, 0)


def test_inv_mod():
    for p in (2, 3, 32003):
        for x in range(1, min(p, 20)):
            assert (x * linalg.inv_mod(x, p)) % p == 1
    with pytest.raises(AssertionError):
        linalg.inv_mod(0, 5)
