import pytest

from ellassoc.lie import LieSeries
from ellassoc.membership import check_membership, f2, solve_component, t12_free
from ellassoc.scalars import QQ, mpq
from ellassoc.special import delta, e_minus, e_plus


def gens(N):
    L = t12_free(N)
    return L, L.generator("x1", QQ, N), L.generator("y1", QQ, N)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_delta_in_rell(n):
    D = delta(n, 2, 2 * n + 3)
    rep = check_membership("rell_gr", (D.images[0], D.images[1]), M=2 * n + 3)
    assert rep.ok and rep.max_residual() == 0


def test_non_member_fails():
    L, x, y = gens(5)
    a = x.bracket(x.bracket(x.bracket(y)))
    rep = check_membership("rell_gr", (a, LieSeries.zero(L, QQ, 5)), M=5)
    assert not rep.ok
    assert rep.nonzero()


@pytest.mark.parametrize("a,b,c,d", [(1, 0, 0, 1), (2, 1, 1, 1), (0, -1, 1, 0), (1, 3, 0, 1)])
def test_linear_pairs_in_grt_ell_group(a, b, c, d):
    assert a * d - b * c == 1
    L, x, y = gens(4)
    up = x.scale(mpq(a)) + y.scale(mpq(b))
    um = x.scale(mpq(c)) + y.scale(mpq(d))
    zero = LieSeries.zero(f2(4), QQ, 4)
    rep = check_membership("grt_ell_group", (zero, up, um))
    assert rep.ok


def test_linear_pair_with_wrong_determinant_fails():
    L, x, y = gens(4)
    zero = LieSeries.zero(f2(4), QQ, 4)
    rep = check_membership("grt_ell_group", (zero, x.scale(mpq(2)), y))
    assert not rep.ok


def test_rell_dimensions():
    assert solve_component("rell_gr", 0).dimension == 3
    for d in (1, 3, 5):
        assert solve_component("rell_gr", d).dimension == 0


def test_grt1_dimensions():
    # grt_1 is zero below degree 3 and spanned by sigma_3 in degree 3
    assert [solve_component("grt1", d).dimension for d in (1, 2, 3, 4, 5)] == [0, 0, 1, 0, 1]
    (psi,) = solve_component("grt1", 3).basis[0]
    assert check_membership("grt1", psi).ok


def _span_dim(ders):
    from ellassoc.linalg import RREF

    e = RREF()
    return e.extend({(i, k): c for i, im in enumerate(D.images) for k, c in im.terms.items()}
                    for D in ders)


def test_b3_inside_rell():
    # degree 0: e_+, e_-, [e_+, e_-]; degree 4: the delta_2 string
    ep, em = e_plus(2, 3), e_minus(2, 3)
    assert _span_dim([ep, em, ep.bracket(em)]) <= solve_component("rell_gr", 0).dimension
    d2, em5 = delta(1, 2, 5), e_minus(2, 5)
    string = [d2, em5.bracket(d2), em5.bracket(em5.bracket(d2))]
    assert _span_dim(string) <= solve_component("rell_gr", 4).dimension == 3
