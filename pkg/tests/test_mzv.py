import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellassoc import cache
from ellassoc.mzv import InadmissibleIndex, indices_of_weight, mzv, mzv_table



def z(*k, p=30):
    return mzv(k, p).value


def close(a, b, tol=mpmath.mpf("1e-28")):
    return abs(a - b) < tol


def test_single_zetas_match_mpmath():
    with mpmath.workdps(40):
        for k in range(2, 9):
            assert close(z(k), mpmath.zeta(k))


def test_euler_and_depth_two():
    with mpmath.workdps(40):
        assert close(z(1, 2), mpmath.zeta(3))
        assert close(z(2, 2), (mpmath.zeta(2) ** 2 - mpmath.zeta(4)) / 2)
        assert close(z(1, 1, 2), mpmath.zeta(4))
        assert close(z(1, 1, 1, 2), mpmath.zeta(5))


def test_error_bound_is_below_precision():
    v = mzv((1, 2, 3), 30)
    assert v.err < mpmath.mpf("1e-30")


@pytest.mark.parametrize("w,d", [(4, 2), (5, 2), (5, 3), (6, 3)])
def test_sum_theorem(w, d):
    total = sum(z(*k) for k in indices_of_weight(w) if len(k) == d)
    with mpmath.workdps(40):
        assert close(total, mpmath.zeta(w))


def test_inadmissible():
    with pytest.raises(InadmissibleIndex):
        mzv((2, 1))
    with pytest.raises(InadmissibleIndex):
        mzv(())


def test_indices_of_weight_count():
    # admissible compositions of w: 2^(w-2)
    for w in range(2, 9):
        assert len(indices_of_weight(w)) == 2 ** (w - 2)


@given(st.integers(2, 5), st.integers(2, 5))
def test_stuffle_depth_one(a, b):
    lhs = z(a) * z(b)
    rhs = z(a, b) + z(b, a) + z(a + b)
    assert close(lhs, rhs, mpmath.mpf("1e-27"))


@given(st.integers(2, 4), st.integers(2, 4))
def test_shuffle_depth_one(a, b):
    # zeta(a) zeta(b) = sum over shuffles of the integration words
    # = sum_{j} [C(j-1, a-1) + C(j-1, b-1)] zeta(a+b-j, j) (increasing convention)
    from math import comb

    rhs = sum((comb(j - 1, a - 1) + comb(j - 1, b - 1)) * z(a + b - j, j)
              for j in range(2, a + b))
    assert close(z(a) * z(b), rhs, mpmath.mpf("1e-26"))


def test_table_persists_and_reloads():
    t1 = mzv_table(5, 20)
    assert cache.load("mzv", "mzv-w5-p20.json") is not None
    t2 = mzv_table(5, 20)
    for k in t1.values:
        assert abs(t1[k] - t2[k]) < mpmath.mpf("1e-25")
    assert len(t1.of_weight(5)) == 8
