import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from k2forge.exactlin import (
    GF,
    QQ,
    Echelon,
    KMatrix,
    field_from_spec,
    inverse,
    is_prime,
    kernel_basis,
    left_kernel_basis,
    rank,
    rref,
    solve,
)

small_ints = st.integers(min_value=-5, max_value=5)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_prime_field_arithmetic():
    F = GF(7)
    assert F.inv(3) == 5
    assert F(Fraction(1, 2)) == 4
    assert F(-1) == 6
    assert F.lift(6) == -1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_field_specs():
    assert field_from_spec("q") is QQ
    assert field_from_spec("gf:101") == GF(101)
    assert GF(32003) is GF(32003)
    with pytest.raises(ValueError):
        GF(12)
    assert is_prime(32003) and not is_prime(32001)


def test_rank_of_identity_and_zero():
    for F in (QQ, GF(5)):
        assert rank(KMatrix.identity(F, 4)) == 4
        assert rank(KMatrix.zero(F, 3, 2)) == 0


def test_rref_small_example():
    m = KMatrix.from_dense(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    r, pivots = rref(m)
    assert pivots == [0, 1]
    assert r.dense()[:2] == [[1, 0, 1], [0, 1, 1]]


def test_rank_depends_on_characteristic():
    m = KMatrix.from_dense(QQ, [[2, 1], [1, 3]])  # determinant 5
    assert rank(m) == 2
    assert rank(KMatrix.from_dense(GF(5), [[2, 1], [1, 3]])) == 1


@given(matrices())
def test_rank_matches_sympy_over_q(rows):
    assert rank(KMatrix.from_dense(QQ, rows)) == sympy.Matrix(rows).rank()


@given(matrices())
def test_kernel_vectors_are_annihilated(rows):
    for F in (QQ, GF(7)):
        m = KMatrix.from_dense(F, rows)
        ker = kernel_basis(m)
        assert len(ker) == m.ncols - rank(m)
        for v in ker:
            assert all(F.reduce(sum(F(a) * b for a, b in zip(row, v))) == 0 for row in m.dense())
        for v in left_kernel_basis(m):
            cols = list(zip(*m.dense()))
            assert all(F.reduce(sum(a * F(b) for a, b in zip(v, col))) == 0 for col in cols)


@given(matrices(4, 4), st.lists(small_ints, min_size=4, max_size=4))
def test_solve_round_trip(rows, coeffs):
    F = GF(11)
    m = KMatrix.from_dense(F, rows)
    x = [F(c) for c in coeffs[: m.ncols]]
    b = [F.reduce(sum(F(a) * xi for a, xi in zip(row, x))) for row in m.dense()]
    sol = solve(m, b)
    assert sol is not None
    assert [F.reduce(sum(F(a) * s for a, s in zip(row, sol))) for row in m.dense()] == b


def test_solve_inconsistent():
    m = KMatrix.from_dense(QQ, [[1, 1], [1, 1]])
    assert solve(m, [1, 2]) is None


def test_inverse():
    F = GF(13)
    rng = random.Random(3)
    while True:
        m = KMatrix.from_dense(F, [[rng.randrange(13) for _ in range(4)] for _ in range(4)])
        if rank(m) == 4:
            break
    assert inverse(m) @ m == KMatrix.identity(F, 4)
    with pytest.raises(ZeroDivisionError):
        inverse(KMatrix.from_dense(F, [[1, 2], [2, 4]]))


def test_sparse_and_dense_storage_agree():
    F = GF(101)
    rng = random.Random(0)
    dense = [[rng.randrange(101) if rng.random() < 0.05 else 0 for _ in range(40)] for _ in range(30)]
    m = KMatrix.from_dense(F, dense)
    assert m.dense() == dense
    assert rank(m) == rank(KMatrix.from_dense(F, [row[:] for row in dense]).transpose())


def test_echelon_tags_record_dependencies():
    F = QQ
    ech = Echelon(F)
    assert ech.add({0: 1, 1: 1}, {"a": 1})[0]
    assert ech.add({1: 1}, {"b": 1})[0]
    ok, residual, tag = ech.add({0: 2, 1: 3}, {"c": 1})
    assert not ok and not residual
    # c - 2a - b = 0
    assert tag == {"c": 1, "a": -2, "b": -1}
