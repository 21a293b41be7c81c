from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from ellassoc.alphabet import Alphabet
from ellassoc.lie import LieSeries, bch, bch_many, substitute_lie
from ellassoc.lyndon import (expand, is_lyndon, lyndon_words, standard_factorization,
                             weighted_witt_dimension, witt_dimension)
from ellassoc.ncseries import NCSeries, free_lie, lie_exp
from ellassoc.scalars import QQ, mpq

AB = Alphabet.simple("AB")
ABC = Alphabet.simple("ABC")


def necklace_count(k, d):
    # independent route: Moebius inversion of k^d = sum_{e | d} e W(k, e)
    return sum(sympy.mobius(d // e) * k ** e for e in sympy.divisors(d)) // d


def test_witt_matches_lyndon_count():
    for k in (2, 3):
        for d in range(1, 9):
            assert len(list(w for w in lyndon_words(k, d) if len(w) == d)) == witt_dimension(k, d)
            assert witt_dimension(k, d) == necklace_count(k, d)


def test_weighted_witt_counts_graded_words():
    # letters of degree 1, 1, 2: dimensions of the free Lie algebra by total degree
    degs = (1, 1, 2)
    for d in range(1, 7):
        n = sum(1 for m in range(1, d + 1) for w in lyndon_words(3, m)
                if len(w) == m and sum(degs[i] for i in w) == d)
        assert weighted_witt_dimension(degs, d) == n


def test_standard_factorization():
    w = (0, 0, 1, 0, 1)
    u, v = standard_factorization(w)
    assert u + v == w
    assert is_lyndon(u) and is_lyndon(v) and u < v


def test_expand_bracket_ab():
    assert expand((0, 1)) == {(0, 1): 1, (1, 0): -1}


def rand_lie(draw, F, N):
    terms = {}
    for d in range(1, N + 1):
        for k in F.basis(d):
            c = draw(st.integers(-3, 3))
            if c:
                terms[k] = mpq(c)
    return LieSeries(F, terms, QQ, N)


@st.composite
def lie_elements(draw, n=3, N=4):
    F = free_lie(AB, N)
    return [rand_lie(draw, F, N) for _ in range(n)]


@given(lie_elements())
def test_jacobi_and_antisymmetry(xyz):
    x, y, z = xyz
    assert (x.bracket(y) + y.bracket(x)).is_zero()
    jac = x.bracket(y.bracket(z)) + y.bracket(z.bracket(x)) + z.bracket(x.bracket(y))
    assert jac.is_zero()


@given(lie_elements())
def test_bch_associative(xyz):
    x, y, z = xyz
    assert (bch(bch(x, y), z) - bch(x, bch(y, z))).is_zero()


@given(lie_elements(n=2))
def test_bch_agrees_with_series_product(xy):
    x, y = xy
    lhs = lie_exp(bch(x, y))
    rhs = lie_exp(x) * lie_exp(y)
    assert (lhs - rhs).is_zero()


def test_bch_low_degree_coefficients():
    F = free_lie(AB, 3)
    a, b = F.generators()
    z = bch(a, b)
    half = Fraction(1, 2)
    want = a + b + a.bracket(b).scale(mpq(half)) \
        + a.bracket(a.bracket(b)).scale(mpq(1, 12)) - b.bracket(a.bracket(b)).scale(mpq(1, 12))
    assert (z - want).is_zero()


def test_bch_inverse():
    F = free_lie(ABC, 4)
    a, b, c = F.generators()
    x = bch_many([a, b, c])
    assert bch(x, -x).is_zero()


def test_substitution_is_homomorphism():
    F = free_lie(AB, 5)
    a, b = F.generators()
    imgs = [a + b.bracket(a), b.scale(mpq(2))]
    s = a.bracket(b)
    lhs = substitute_lie(s.bracket(a), imgs)
    rhs = substitute_lie(s, imgs).bracket(substitute_lie(a, imgs))
    assert (lhs - rhs).is_zero()


def test_grouplike_exp_and_primitive_log():
    F = free_lie(AB, 5)
    a, b = F.generators()
    g = lie_exp(bch(a, a.bracket(b)))
    assert g.grouplike_residual() == 0
    nc = NCSeries.from_words(AB, {"": 1, "A": 1, "B": 1}, QQ, 3)
    assert nc.grouplike_residual() != 0
