from math import comb

from hypothesis import given
from hypothesis import strategies as st

from ellassoc.alphabet import Alphabet
from ellassoc.ncseries import NCSeries, shuffle
from ellassoc.scalars import QQ, mpq

AB = Alphabet.simple("AB")


@given(st.integers(0, 4), st.integers(0, 4))
def test_shuffle_has_binomial_many_terms(m, n):
    u, v = tuple([0] * m), tuple([1] * n)
    words = shuffle(u, v)
    assert sum(c for _, c in words) == comb(m + n, m)
    assert all(len(w) == m + n for w, _ in words)


@st.composite
def series(draw, N=4):
    terms = {(): mpq(draw(st.integers(1, 3)))}
    for w in [(0,), (1,), (0, 1), (1, 0), (0, 0, 1), (1, 1, 0, 0)]:
        c = draw(st.integers(-2, 2))
        if c:
            terms[w] = mpq(c)
    return NCSeries(AB, terms, QQ, N)


@given(series(), series())
def test_product_inverse(a, b):
    one = NCSeries.one(AB, QQ, 4)
    assert (a * a.inverse() - one).is_zero()
    assert ((a * b).inverse() - b.inverse() * a.inverse()).is_zero()


@given(series())
def test_exp_log_roundtrip(a):
    a = a.scale(1 / a.constant())  # constant term 1
    assert (a.log_assoc().exp() - a).is_zero()


def test_substitute_letters():
    s = NCSeries.from_words(AB, {"A B": 1, "B A": -1}, QQ, 4)
    img = [NCSeries.from_words(AB, {"A": 1, "A B": 1}, QQ, 4), NCSeries.letter(AB, "B", QQ, 4)]
    out = s.substitute(img)
    assert out.coefficient("A B") == 1 and out.coefficient("A B B") == 1
    assert out.coefficient("B A B") == -1
