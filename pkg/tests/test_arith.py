from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from acmcurve.arith import (
    DEFAULT_PRIME,
    FieldElement,
    FieldSampler,
    Matrix,
    PrimeField,
    default_field,
    ff_inv,
    is_prime,
    kernel_array,
    mat_kernel,
    mat_rank,
    mat_rref,
    rank_mod_p,
    row_space_basis,
)

P = DEFAULT_PRIME


def ref_rref(rows, p):
    """Plain Python Gauss-Jordan, used as an oracle."""
    a = [[x % p for x in r] for r in rows]
    piv, rank = [], 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        r = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if r is None:
            continue
        a[rank], a[r] = a[r], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        piv.append(c)
        rank += 1
    return a, piv


def random_matrix(rng, rows, cols, p, rank=None):
    if rank is None:
        return rng.integers(0, p, size=(rows, cols), dtype=np.int64)
    a = rng.integers(0, p, size=(rows, rank)).astype(object)
    b = rng.integers(0, p, size=(rank, cols)).astype(object)
    return np.array((a.dot(b)) % p, dtype=np.int64)


def test_inverse_examples():
    F = PrimeField(P)
    assert int(ff_inv(F(1))) == 1
    assert int(ff_inv(F(P - 1))) == P - 1
    assert int(ff_inv(F(2))) == 15996


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ff_inv(PrimeField(P)(0))


def test_values_are_reduced():
    F = PrimeField(7)
    assert F(-1).value == 6
    assert (F(3) - 5).value == 5
    with pytest.raises(ValueError):
        FieldElement(9, F)


def test_prime_checks():
    assert is_prime(31991) and is_prime(2**31 - 1)
    assert not is_prime(31993 * 3) and not is_prime(1)
    with pytest.raises(ValueError):
        PrimeField(31990)


def test_default_field_env(monkeypatch):
    assert default_field().p == P
    monkeypatch.setenv("ACMCURVE_PRIME", "101")
    assert default_field().p == 101


def test_field_axioms_10k_triples():
    rng = np.random.default_rng(0)
    a, b, c = (rng.integers(0, P, 10_000).tolist() for _ in range(3))
    F = PrimeField(P)
    for x, y, z in zip(a, b, c):
        X, Y, Z = F(x), F(y), F(z)
        assert (X + Y) + Z == X + (Y + Z)
        assert (X * Y) * Z == X * (Y * Z)
        assert X * (Y + Z) == X * Y + X * Z
        assert X + Y == Y + X and X * Y == Y * X
        assert X - X == F(0)
        if x:
            assert X * X.inverse() == F(1)
            assert (Y / X) * X == Y


@given(st.integers(1, P - 1), st.integers(0, 40))
def test_power_matches_builtin(a, n):
    assert int(PrimeField(P)(a) ** n) == pow(a, n, P)


def test_rref_examples():
    F = PrimeField(P)
    r, piv = mat_rref(Matrix.identity(3, F))
    assert r == Matrix.identity(3, F) and piv == [0, 1, 2]
    r, piv = mat_rref(Matrix.zeros(2, 4, F))
    assert r == Matrix.zeros(2, 4, F) and piv == []


def test_rank_examples():
    F = PrimeField(P)
    assert mat_rank(Matrix.identity(5, F)) == 5
    u, v = [1, 2, 3], [4, 5, 6, 7]
    outer = Matrix([[x * y for y in v] for x in u], F)
    assert mat_rank(outer) == 1


def test_kernel_examples():
    F = PrimeField(P)
    assert mat_kernel(Matrix.identity(3, F)) == []
    assert mat_kernel(Matrix.zeros(3, 3, F)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@pytest.mark.parametrize("p", [P, 7, 2**31 - 1])
def test_rref_matches_reference(p):
    rng = np.random.default_rng(p)
    for trial in range(20):
        rows, cols = rng.integers(1, 12, 2)
        rank = int(rng.integers(0, min(rows, cols) + 1))
        a = random_matrix(rng, rows, cols, p, rank)
        r, piv = mat_rref(Matrix(a.tolist(), PrimeField(p)))
        ref, rpiv = ref_rref(a.tolist(), p)
        assert piv == rpiv
        assert r.to_numpy().tolist() == ref
        assert rank_mod_p(a, p) == len(rpiv)


def test_lazy_reduction_large_prime():
    # p near 2^31 forces a full reduction pass at every pivot step
    p = 2**31 - 1
    rng = np.random.default_rng(5)
    a = random_matrix(rng, 40, 30, p)
    ref, piv = ref_rref(a.tolist(), p)
    assert row_space_basis(a, p).tolist() == ref[: len(piv)]
    assert rank_mod_p(a, p) == len(piv)


def test_rref_idempotent_and_canonical():
    rng = np.random.default_rng(1)
    F = PrimeField(P)
    for _ in range(30):
        rows, cols = rng.integers(1, 15, 2)
        a = random_matrix(rng, rows, cols, P, int(rng.integers(0, min(rows, cols) + 1)))
        r1, p1 = mat_rref(Matrix(a.tolist(), F))
        r2, p2 = mat_rref(r1)
        assert r1 == r2 and p1 == p2
        perm = rng.permutation(rows)
        r3, p3 = mat_rref(Matrix(a[perm].tolist(), F))
        assert r3 == r1 and p3 == p1
        # any invertible row operation gives the same RREF
        g = random_matrix(rng, rows, rows, P)
        if rank_mod_p(g, P) == rows:
            mixed = (Matrix(g.tolist(), F) @ Matrix(a.tolist(), F))
            assert mat_rref(mixed)[0] == r1


def test_rank_nullity_and_kernel_vectors():
    rng = np.random.default_rng(2)
    F = PrimeField(P)
    for _ in range(30):
        rows, cols = rng.integers(1, 14, 2)
        a = random_matrix(rng, rows, cols, P, int(rng.integers(0, min(rows, cols) + 1)))
        m = Matrix(a.tolist(), F)
        ker = mat_kernel(m)
        assert mat_rank(m) + len(ker) == cols
        for v in ker:
            assert all(x == 0 for x in (m @ Matrix([[x] for x in v], F)).entries)
        assert kernel_array(a, P).shape == (len(ker), cols)


def test_matrix_shape_checks():
    F = PrimeField(P)
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]], F)
    with pytest.raises(ValueError):
        Matrix.identity(2, F) @ Matrix.identity(3, F)


def test_sampler_is_deterministic_and_uniform_range():
    a = FieldSampler(42, P).elements(1000)
    b = FieldSampler(42, P).elements(1000)
    assert a == b
    assert all(0 <= x < P for x in a)
    assert FieldSampler(43, P).elements(10) != a[:10]
    c1, c2 = FieldSampler(42, P).child(0), FieldSampler(42, P).child(1)
    assert c1.elements(5) != c2.elements(5)
    assert FieldSampler(42, P).child(0).elements(5) == FieldSampler(42, P).child(0).elements(5)
    assert FieldSampler(7, P).nonzero() != 0
