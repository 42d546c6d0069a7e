import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from miniversal.errors import InconsistentSystem, SingularMatrix, UnsupportedMode
from miniversal.fields import ComplexField, LaurentField, PadicField
from miniversal.matrices import (
    Matrix,
    charpoly,
    commutator_operator,
    determinant,
    gauss_rank,
    invert,
    matrix_norm,
    solve_linear,
)

C = ComplexField()


def J2(field):
    return Matrix.from_rows(field, [[0, 1], [0, 0]])


def test_norm_examples():
    assert matrix_norm(Matrix.identity(C, 2)) == pytest.approx(math.sqrt(2))
    assert matrix_norm(J2(C)) == 1
    assert matrix_norm(Matrix.from_rows(C, [[3, 4], [0, 0]])) == 5


def test_norm_on_padic_uses_padic_absolute_value():
    K = PadicField(5)
    M = Matrix.from_rows(K, [[5, 1], [0, Fraction(1, 5)]])
    assert matrix_norm(M) == pytest.approx(math.sqrt(1 / 25 + 1 + 25))


def test_rank_examples(field):
    assert gauss_rank(Matrix.zeros(field, 3)) == 0
    assert gauss_rank(Matrix.identity(field, 4)) == 4
    assert gauss_rank(commutator_operator(J2(field))) == 2


def test_commutator_operator_columns_are_images_of_units(field):
    A = Matrix.from_rows(field, [[1, 2], [3, 4]])
    L = commutator_operator(A)
    for k in range(2):
        for l in range(2):
            E = Matrix.unit(field, 2, k, l)
            img = E @ A - A @ E
            col = Matrix.from_vec(field, L.data[:, k * 2 + l], 2, 2)
            assert (img - col).is_zero()


def test_solve_modes():
    M = Matrix.from_rows(C, [[1, 1]])
    b = np.array([2.0 + 0j])
    assert np.allclose(solve_linear(M, b, "min_norm"), [1, 1])
    assert np.allclose(solve_linear(M, b, "particular"), [2, 0])
    K = PadicField(3)
    Mk = Matrix.from_rows(K, [[1, 1]])
    x = solve_linear(Mk, np.array([K.embed(2)], dtype=object), "particular")
    assert x[0] == K.embed(2) and K.is_zero(x[1])
    with pytest.raises(UnsupportedMode):
        solve_linear(Mk, np.array([K.embed(2)], dtype=object), "min_norm")


def test_solve_identity_returns_rhs(field):
    b = np.array([field.embed(3), field.embed(-1), field.embed(Fraction(1, 2))], dtype=field.dtype)
    x = solve_linear(Matrix.identity(field, 3), b)
    assert all(field.is_zero(u - v) for u, v in zip(x, b))


def test_inconsistent_system(field):
    M = Matrix.from_rows(field, [[1, 1], [1, 1]])
    b = np.array([field.embed(1), field.embed(2)], dtype=field.dtype)
    with pytest.raises(InconsistentSystem):
        solve_linear(M, b)


def test_invert_examples():
    K = PadicField(2)
    M = Matrix.from_rows(K, [[2, 0], [0, 4]])
    Mi = invert(M)
    assert Mi.data[0, 0] == K.embed(Fraction(1, 2)) and Mi.data[1, 1] == K.embed(Fraction(1, 4))
    assert K.abs(determinant(Mi)) == 1 / K.abs(determinant(M))
    with pytest.raises(SingularMatrix):
        invert(Matrix.from_rows(C, [[1, 2], [2, 4]]))


def test_neumann_style_bound_on_inverse():
    rng = np.random.default_rng(7)
    n = 4
    G = rng.standard_normal((n, n))
    Cm = Matrix(G * (0.3 / np.linalg.norm(G)), C)
    I = Matrix.identity(C, n)
    inv = invert(I - Cm)
    assert matrix_norm(Cm) == pytest.approx(0.3)
    assert matrix_norm(inv) <= math.sqrt(n) / (1 - 0.3)


def test_charpoly_and_determinant(field):
    M = Matrix.from_rows(field, [[2, 1, 0], [0, 2, 0], [1, 0, 3]])
    cp = charpoly(M)
    expected = [1, -7, 16, -12]  # (x-2)^2 (x-3)
    assert all(field.is_zero(a - field.embed(b)) for a, b in zip(cp, expected))
    assert field.is_zero(determinant(M) - field.embed(12))


def test_prime_field_laurent_charpoly():
    K = LaurentField(5)
    M = Matrix.from_rows(K, [[0, 1], [3, 0]])
    cp = charpoly(M)
    assert cp[1] == K.zero() and cp[2] == K.embed(-3)


square_ints = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(square_ints, st.permutations(range(4)), st.permutations(range(4)))
def test_rank_permutation_invariant_exact(rows, prow, pcol):
    K = PadicField(3)
    n = len(rows)
    M = Matrix.from_rows(K, rows)
    pr = [i for i in prow if i < n]
    pc = [j for j in pcol if j < n]
    P = Matrix(M.data[np.ix_(pr, pc)], K)
    assert gauss_rank(P) == gauss_rank(M)


@given(square_ints)
def test_inverse_is_two_sided(rows):
    K = LaurentField()
    M = Matrix.from_rows(K, rows)
    if K.is_zero(determinant(M)):
        with pytest.raises(SingularMatrix):
            invert(M)
        return
    Mi = invert(M)
    I = Matrix.identity(K, len(rows))
    assert (M @ Mi - I).is_zero() and (Mi @ M - I).is_zero()


@given(st.integers(0, 2**32 - 1))
def test_similarity_expansion_identity(seed):
    # (I - X)^{-1} A (I - X) = A + (XA - AX) + X (I - X)^{-1} (XA - AX)
    rng = np.random.default_rng(seed)
    n = 3
    A = Matrix(rng.standard_normal((n, n)) + 0j, C)
    X = Matrix(rng.standard_normal((n, n)) * 0.05 + 0j, C)
    I = Matrix.identity(C, n)
    inv = invert(I - X)
    lhs = inv @ A @ (I - X)
    T = X @ A - A @ X
    rhs = A + T + X @ inv @ T
    assert matrix_norm(lhs - rhs) <= 1e-12 * (1 + matrix_norm(A))


@given(square_ints, square_ints)
def test_norm_submultiplicative(a, b):
    n = min(len(a), len(b))
    for K in (C, PadicField(2), LaurentField()):
        M = Matrix.from_rows(K, [r[:n] for r in a[:n]])
        N = Matrix.from_rows(K, [r[:n] for r in b[:n]])
        assert matrix_norm(M @ N) <= matrix_norm(M) * matrix_norm(N) * (1 + 1e-12)


def test_exact_norm_zero_iff_zero(exact_field):
    assert matrix_norm(Matrix.zeros(exact_field, 2)) == 0
    assert matrix_norm(Matrix.unit(exact_field, 2, 0, 1)) == 1
