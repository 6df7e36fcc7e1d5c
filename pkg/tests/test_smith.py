import random

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from oracles import int_det, int_matmul
from sdpquot.smith import invariant_factors, smith_normal_form


def _check(A):
    U, S, V = smith_normal_form(A)
    n, m = len(A), len(A[0])
    assert int_matmul(int_matmul(U, A), V) == S
    assert int_det(U) in (1, -1) and int_det(V) in (1, -1)
    diag = [S[i][i] for i in range(min(n, m))]
    assert all(S[i][j] == 0 for i in range(n) for j in range(m) if i != j)
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    return diag


def test_identity():
    I = [[1, 0], [0, 1]]
    assert smith_normal_form(I) == (I, I, I)


def test_two_by_two_example():
    diag = _check([[2, 4], [6, 8]])
    assert diag[1] % diag[0] == 0 and diag[0] * diag[1] == 8
    assert diag == [2, 4]


def test_zero_matrix():
    _, S, _ = smith_normal_form([[0, 0], [0, 0]])
    assert S == [[0, 0], [0, 0]]


def test_random_matrices_against_sympy():
    rng = random.Random(2024)
    for _ in range(200):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-20, 20) for _ in range(m)] for _ in range(n)]
        diag = _check(A)
        ref = sympy_snf(Matrix(A))
        ref_diag = [abs(int(ref[i, i])) for i in range(min(n, m))]
        assert diag == ref_diag
        assert invariant_factors(A) == [d for d in diag if d]
