import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbdet.errors import DegenerateColumn, Singular
from sbdet.fields import G, tower_make
from sbdet.matrices import (
    Mat3,
    clear_denominators,
    diag_conjugates,
    diag_power,
    entry_product,
    matrix_invert,
    sigma_columns,
)

T = tower_make(["u"], [("t", "u")])
small = st.integers(-5, 5)


@st.composite
def matrices(draw, tower=T):
    t = tower.gen("t")
    rows = [[draw(small) + draw(small) * t for _ in range(3)] for _ in range(3)]
    return Mat3(tower, rows)


invertible = matrices().filter(lambda A: not A.det().is_zero())
PROPS = settings(max_examples=40, deadline=None)


@PROPS
@given(matrices(), matrices())
def test_det_multiplicative(A, B):
    assert (A * B).det() == A.det() * B.det()


@PROPS
@given(invertible)
def test_inverse(A):
    inv, d = matrix_invert(A)
    assert d == A.det()
    assert A * inv == Mat3.identity(T)
    assert A.inverse() == inv


@PROPS
@given(matrices())
def test_adjugate(A):
    assert A * A.adjugate() == Mat3.scalar(T, A.det())


@PROPS
@given(matrices(), matrices())
def test_galois_respects_products(A, B):
    assert (A * B).galois(G) == A.galois(G) * B.galois(G)


def test_singular_carries_adjugate():
    A = Mat3(T, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    with pytest.raises(Singular) as exc:
        matrix_invert(A)
    assert exc.value.adjugate == A.adjugate()


def test_sigma_columns():
    A = Mat3(T, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    S = sigma_columns(A)
    assert S.column(0) == [A[1, 0] * A[2, 0], A[0, 0] * A[2, 0], A[0, 0] * A[1, 0]]
    with pytest.raises(DegenerateColumn):
        sigma_columns(Mat3.identity(T))


def test_diagonal_helpers():
    x = T.parse("1 + t")
    D = diag_power(T, x)
    assert D.diagonal() == [T.one(), x, x * x]
    assert diag_power(T, x, -1) * D == Mat3.identity(T)
    C = diag_conjugates(T, x, G)
    assert C.det() == x * x.galois(G) * x.galois(G * G)
    assert C.det().in_base()


def test_scalars_and_proportionality():
    A = Mat3(T, [[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    c = T.parse("u - t")
    assert A.scale(c).proportional_to(A) == c
    assert A.proportional_to(A.transpose()) is None
    assert Mat3.scalar(T, 3).is_scalar()
    assert entry_product(Mat3.identity(T)) == 0


def test_cycle_matrix_order_three():
    P = Mat3.cycle(T)
    assert P ** 3 == Mat3.identity(T)
    assert P != Mat3.identity(T)


def test_clear_denominators():
    A = Mat3(T, [[T.parse("1/u"), 2, 0], [0, T.parse("t/(2*u)"), 1], [1, 0, 1]])
    c, B = clear_denominators(A)
    assert B == A.scale(c)
    # polynomial entries: every denominator is a constant
    assert all(x.den.total_degree() == 0 for x in B.e)


def test_string_roundtrip():
    A = Mat3(T, [[1, T.parse("t^2"), 0], [T.parse("u/3"), 1, 1], [1, 0, T.parse("omega")]])
    assert Mat3.from_strings(T, A.to_strings()) == A
