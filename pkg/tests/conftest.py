import pytest

from sdpquot.groups import (
    AutomorphismAction,
    Endomorphism,
    Free,
    FreeAbelian,
    MatrixEndomorphism,
    Semidirect,
)

CAT = [[2, 1], [1, 1]]
CAT_INV = [[1, -1], [-1, 2]]


def make_catmap():
    K, Q = FreeAbelian(2), FreeAbelian(1)
    A = MatrixEndomorphism(K, CAT)
    return Semidirect(K, Q, AutomorphismAction(((A, MatrixEndomorphism(K, CAT_INV)),)))


def nielsen_pair(F):
    """x -> xy, y -> y and its inverse x -> xY, y -> y."""
    return (
        Endomorphism(F, [F.parse("xy"), F.parse("y")]),
        Endomorphism(F, [F.parse("xY"), F.parse("y")]),
    )


def nielsen_battery(F):
    """Elementary Nielsen automorphisms of F_2 with their inverses."""
    p = F.parse
    return [
        (Endomorphism(F, [p("y"), p("x")]), Endomorphism(F, [p("y"), p("x")])),
        (Endomorphism(F, [p("X"), p("y")]), Endomorphism(F, [p("X"), p("y")])),
        (Endomorphism(F, [p("x"), p("Y")]), Endomorphism(F, [p("x"), p("Y")])),
        nielsen_pair(F),
        (Endomorphism(F, [p("yx"), p("y")]), Endomorphism(F, [p("Yx"), p("y")])),
        (Endomorphism(F, [p("x"), p("yx")]), Endomorphism(F, [p("x"), p("yX")])),
    ]


def make_free_nielsen():
    F = Free(2)
    return Semidirect(F, FreeAbelian(1), AutomorphismAction((nielsen_pair(F),)))


@pytest.fixture
def catmap():
    return make_catmap()


@pytest.fixture
def free_nielsen():
    return make_free_nielsen()
