import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellassoc.freegroup import (
    EPS, PSI, PSI_INV, THETA, THETA_INV, FGEndo, FGWord, X, Y, antidiagonal_transpose,
    commutator, gl2z_matrix, gl2z_tilde_image, preserves_commutator_class, verify_presentation,
)

words = st.text(alphabet="XYxy", max_size=12).map(FGWord)
gl2z_words = st.lists(st.sampled_from(["Theta", "theta", "Psi", "psi", "eps"]), max_size=6)


def test_parse_and_print():
    w = FGWord.parse("X Y y x Y")
    assert str(w) == "Y" and len(w) == 1
    assert str(FGWord.parse("1")) == "1"
    with pytest.raises(ValueError):
        FGWord.parse("X Z")


def test_worked_products():
    pt = PSI * THETA
    assert (str(pt.x), str(pt.y)) == ("y", "Y X y y")
    tp = THETA * PSI
    assert (str(tp.x), str(tp.y)) == ("x y", "Y X y")


def test_inverses():
    one = FGEndo.identity()
    for a, b in ((PSI, PSI_INV), (THETA, THETA_INV)):
        assert (a * b).same_map(one) and (b * a).same_map(one)
    assert (EPS * EPS).same_map(one) and (EPS * EPS).lam == 1


def test_presentation():
    rep = verify_presentation()
    assert rep.passed
    assert len(rep.checks) == 8
    assert all(c.residual == 0 for c in rep.checks)


def test_theta_fourth_power_is_inner():
    c = commutator(X, Y)
    t4 = THETA ** 4
    assert t4.x == c.inverse() * X * c and t4.y == c.inverse() * Y * c


@given(words, words)
def test_word_group_laws(u, v):
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert u * u.inverse() == FGWord()
    assert (u * v).abelianization() == tuple(a + b for a, b in zip(u.abelianization(), v.abelianization()))


@given(words, words)
def test_conjugates_are_detected(u, g):
    assert (g * u * g.inverse()).is_conjugate(u)


@given(gl2z_words)
def test_abelianization_matches_matrix(word):
    endo = gl2z_tilde_image(word)
    assert endo.abelianization() == antidiagonal_transpose(gl2z_matrix(word))


@given(gl2z_words)
def test_commutator_class_preserved(word):
    endo = gl2z_tilde_image(word)
    assert preserves_commutator_class(endo)
    det = gl2z_matrix(word)
    assert endo.lam == det[0][0] * det[1][1] - det[0][1] * det[1][0]


@given(gl2z_words, gl2z_words, words)
def test_image_is_multiplicative(a, b, w):
    lhs = gl2z_tilde_image(a + b)
    rhs = gl2z_tilde_image(a) * gl2z_tilde_image(b)
    assert lhs.same_map(rhs)
    # op product: the map a*b applies a first
    assert lhs(w) == gl2z_tilde_image(b)(gl2z_tilde_image(a)(w))


def test_unknown_letter():
    with pytest.raises(ValueError):
        gl2z_tilde_image("Theta Phi")
