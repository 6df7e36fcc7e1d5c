"""Smith normal form over the integers with unimodular transforms."""
from __future__ import annotations

from .errors import InputError


def _check_matrix(A):
    rows = [list(r) for r in A]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise InputError("ragged matrix")
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError(f"matrix entries must be integers, got {x!r}")
    return rows


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def smith_normal_form(A):
    """Return ``(U, S, V)`` with ``U @ A @ V == S``.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with nonnegative
    entries, each dividing the next.  Entries are Python ints, so intermediate
    growth never overflows.
    """
    S = _check_matrix(A)
    m = len(S)
    n = len(S[0]) if m else 0
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (S, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        for M in (S, U):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for M in (S, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        cands = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not cands:
            break
        _, i, j = min(cands)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
            rest = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
            rest += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
            if rest:
                # a remainder smaller than the pivot survived: make it the pivot
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return U, S, V


def invariant_factors(A):
    """Diagonal of the Smith form (length ``min(rows, cols)``)."""
    _, S, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]
