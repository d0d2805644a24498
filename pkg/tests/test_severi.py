import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbdet.errors import NotMonomialForm, NotRepresentant, ScalarInput, XiIsCube, XiZero, ZeroVector
from sbdet.fields import G, tower_make
from sbdet.matrices import Mat3, diag_conjugates
from sbdet.severi import (
    S,
    S_OP,
    algebra_basis_rank,
    algebra_center,
    algebra_element,
    aut_from_vector,
    class_of,
    context_make,
    det_class,
    fixed_three_point,
    is_affine_representant,
    link_conjugate_diag,
    monomial_form,
    opposite,
    twist_power,
)

T = tower_make(["u", "v"], [("t", "u")])
CTX = context_make(T, "v")
vec = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).filter(any)
sides = st.sampled_from([S, S_OP])
PROPS = settings(max_examples=30, deadline=None)


def test_context():
    assert twist_power(CTX, S, 1) ** 3 == Mat3.scalar(T, T.var("v"))
    assert twist_power(CTX, S_OP, 1) ** 3 == Mat3.scalar(T, T.var("v").inverse())
    assert CTX.nontriviality == "certified-non-norm"
    with pytest.raises(XiZero):
        context_make(T, "0")
    with pytest.raises(XiIsCube):
        context_make(T, "8*v^3")
    assert opposite(S) == S_OP and opposite(S_OP) == S


@PROPS
@given(vec, sides)
def test_aut_from_vector_is_representant(v, side):
    try:
        A = aut_from_vector(CTX, *v, side=side)
    except Exception:
        return
    assert A.column(0) == [T.coerce(x) for x in v]
    assert is_affine_representant(CTX, A, side)
    assert A.det().in_base()


def test_zero_vector():
    with pytest.raises(ZeroVector):
        aut_from_vector(CTX, 0, 0, 0)


@PROPS
@given(vec, vec, sides)
def test_representants_form_a_group(v, w, side):
    try:
        A = aut_from_vector(CTX, *v, side=side)
        B = aut_from_vector(CTX, *w, side=side)
    except Exception:
        return
    assert is_affine_representant(CTX, A * B, side)
    assert is_affine_representant(CTX, A.inverse(), side)
    assert det_class(CTX, A * B, side).same_class(det_class(CTX, A, side) * det_class(CTX, B, side))


def test_det_class_sign_by_side():
    A = aut_from_vector(CTX, 1, 2, 3, side=S_OP)
    c = det_class(CTX, A, S_OP)
    assert c.rep == A.det().inverse().to_base()


def test_twisting_matrix_class_is_xi():
    Ag = CTX.A_g
    assert det_class(CTX, Ag, S).same_class(class_of(T.var("v")))
    assert not det_class(CTX, Ag, S).is_trivial()


def test_non_representant_is_refused():
    N = Mat3(T, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert not is_affine_representant(CTX, N, S)
    with pytest.raises(NotRepresentant):
        det_class(CTX, N, S)


def test_fixed_three_point_of_diagonal():
    D = diag_conjugates(T, T.parse("1 + t"), G)
    r = fixed_three_point(CTX, D)
    assert r.status == "points" and r.orbit_verified
    P = aut_from_vector(CTX, 1, 2, 3)
    r = fixed_three_point(CTX, P * D * P.inverse())
    assert r.status == "points"
    for k in range(3):
        p = P.column(k)
        assert any(all((q[i] * p[j] - q[j] * p[i]).is_zero() for i in range(3) for j in range(3)) for q in r.points)


def test_fixed_three_point_unresolved_and_scalar():
    r = fixed_three_point(CTX, aut_from_vector(CTX, 1, 2, 3))
    assert r.status == "unresolved" and r.reason
    with pytest.raises(ScalarInput):
        fixed_three_point(CTX, Mat3.scalar(T, 2))


def test_algebra_structure():
    assert algebra_basis_rank(CTX) == 9
    center = algebra_center(CTX)
    assert len(center) == 1
    assert not center[0][0].is_zero() and all(x.is_zero() for x in center[0][1:])


def test_algebra_elements_are_representants_and_invertible():
    rng = random.Random(1)
    for _ in range(20):
        c = [rng.randint(-3, 3) for _ in range(9)]
        if not any(c):
            continue
        M = algebra_element(CTX, c)
        assert is_affine_representant(CTX, M, S)
        assert not M.det().is_zero()


def test_link_conjugate_diag():
    rng = random.Random(2)
    for i in range(3):
        x = T.coerce(rng.choice([1, 2, -3])) * T.monomial(rng.randrange(3)) + T.var("u")
        A = diag_conjugates(T, x, G) * twist_power(CTX, S, i)
        D, j = monomial_form(CTX, A, S)
        assert j == i and D.is_diagonal()
        B = link_conjugate_diag(CTX, A)
        assert is_affine_representant(CTX, B, S_OP)
        assert det_class(CTX, B, S_OP).same_class(det_class(CTX, A, S))


def test_monomial_form_refuses_generic():
    with pytest.raises(NotMonomialForm):
        monomial_form(CTX, aut_from_vector(CTX, 1, 2, 3))


def test_two_layer_context():
    T2 = tower_make(["u", "w"], [("t", "u"), ("s", "w")])
    ctx = context_make(T2, "u*w^2")
    assert algebra_basis_rank(ctx) == 9
    A = aut_from_vector(ctx, 1, 2, 3)
    assert is_affine_representant(ctx, A, S)
    N = Mat3.diag(T2, T2.gen("s"), 1, 1)
    assert not is_affine_representant(ctx, N, S)
