from fractions import Fraction

import pytest

from artifact.weierstrass import (
    ReductionKind,
    SingularModelError,
    WeierstrassModel,
    conductor,
    conductor_exponent,
    minimal_model_at,
    naive_height,
    quadratic_twist,
    reduction_kind,
    tilde_invariants,
)

W = WeierstrassModel

E11 = W(0, -1, 1, -10, -20)
E37 = W(0, 0, 1, -1, 0)
E27 = W(0, 0, 1, 0, -7)
E121 = W(0, -1, 1, -7, 10)


def test_rejects_singular_model():
    with pytest.raises(SingularModelError):
        W(0, 0, 0, 0, 0)
    with pytest.raises(SingularModelError):
        W(0, 0, 0, -3, 2)  # y^2 = (x-1)^2 (x+2)


def test_invariants_11a1():
    assert E11.discriminant() == -(11 ** 5)
    assert E11.c4() == 496
    assert E11.j_invariant() == Fraction(-122023936, 161051)


def test_invariants_37a1():
    assert E37.discriminant() == 37
    assert E37.j_invariant() == Fraction(110592, 37)


def test_transform_roundtrip():
    m = E11.transform(1, 2, 3, 4)
    assert m.discriminant() == E11.discriminant()
    assert m.c4() == E11.c4()
    back = m.transform(1, -2, -3, 3 * 2 - 4)
    assert back.ainvs() == E11.ainvs()


def test_transform_scaling():
    m = W(0, 0, 0, -2 ** 4, 2 ** 6 * 3)  # u=2 blow-up of y^2 = x^3 - x + 3
    small = m.transform(2, 0, 0, 0)
    assert small.ainvs() == (0, 0, 0, -1, 3)
    assert m.discriminant() == 2 ** 12 * small.discriminant()


def test_reduction_kinds():
    assert reduction_kind(E11, 11) == ReductionKind.MULTIPLICATIVE
    assert reduction_kind(E11, 7) == ReductionKind.GOOD
    assert reduction_kind(E27, 3) == ReductionKind.ADDITIVE_POT_GOOD
    # y^2 = x^3 + 2x^2 + 2: additive at 2 with v(j) < 0
    m = W(0, 2, 0, 0, 2)
    assert reduction_kind(m, 2) in (
        ReductionKind.ADDITIVE_POT_GOOD, ReductionKind.ADDITIVE_POT_MULT)


def test_minimal_model_at_strips_u():
    blown = E37.transform(1, 0, 0, 0)
    big = W(*[a * 5 ** i for a, i in zip(blown.ainvs(), (1, 2, 3, 4, 6))])
    mm = minimal_model_at(big, 5)
    assert mm.discriminant() == E37.discriminant()


def test_minimalization_idempotent_fixtures():
    for m in (E11, E37, E27, E121):
        for ell in (2, 3, 5, 11):
            mm = minimal_model_at(m, ell)
            assert minimal_model_at(mm, ell).ainvs() == mm.ainvs()


def test_tilde_invariants_27a1():
    t = tilde_invariants(E27, 3)
    assert t.v_delta == 9
    assert t.delta_tilde == -1
    assert t.c6_tilde == 8


def test_quadratic_twist_discriminant():
    tw = quadratic_twist(E37, 5)
    assert tw.j_invariant() == E37.j_invariant()
    d = tw.discriminant() // E37.discriminant()
    # discriminant changes by d^6 up to a 12th power of the scaling
    assert d == 5 ** 6 * 2 ** 12


def test_naive_height():
    assert naive_height(W(1, 1, 1, -1, 1)) == 1.0
    assert naive_height(W(0, 0, 0, 0, 64)) == 2.0


# conductors: classic curves with well-known conductors, including wild
# ramification at 2 and 3.
CONDUCTORS = [
    ((0, -1, 1, -10, -20), 11),
    ((0, 0, 1, -1, 0), 37),
    ((0, 0, 1, 0, -7), 27),
    ((0, -1, 1, -7, 10), 121),
    ((1, 0, 1, 4, -6), 14),
    ((1, 1, 1, -10, -10), 15),
    ((1, -1, 1, -1, -14), 17),
    ((0, 1, 1, -9, -15), 19),
    ((0, 1, 0, 4, 4), 20),
    ((1, 0, 0, -4, -1), 21),
    ((0, -1, 0, -4, 4), 24),
    ((0, 0, 0, 0, 1), 36),
    ((0, 0, 0, 0, -1), 144),
    ((1, -1, 0, -2, -1), 49),
    ((0, 0, 0, -1, 0), 32),
    ((0, 0, 0, 4, 0), 32),
    ((0, 1, 0, -2, 0), 96),
    ((0, 0, 1, 0, 0), 27),
    ((0, 0, 0, 0, -432), 27),
    ((0, 0, 0, -2, 0), 256),
    ((0, 0, 0, 2, 0), 256),
    ((0, 0, 0, -4, 0), 64),
]


@pytest.mark.parametrize("ai,n", CONDUCTORS)
def test_conductor_fixtures(ai, n):
    assert conductor(W(*ai)) == n


def test_conductor_exponent_by_kind():
    assert conductor_exponent(E11, 7) == 0
    assert conductor_exponent(E11, 11) == 1
    assert conductor_exponent(E121, 11) == 2   # additive, ell >= 5
    assert conductor_exponent(E27, 3) == 3     # wild at 3
    assert conductor_exponent(W(0, 1, 0, -2, 0), 2) == 5  # wild at 2


def test_conductor_invariant_under_blowup():
    big = W(*[a * 2 ** i for a, i in zip(E37.ainvs(), (1, 2, 3, 4, 6))])
    assert conductor(big) == 37
