import pytest

from ellassoc.lie import LieSeries
from ellassoc.presentations import insertion, table
from ellassoc.special import (NotWellDefined, ad_t12, build_special_derivation, delta,
                              delta_quadratic_relations, e_minus, e_plus, ell_algebra,
                              ell_element, string_element)
from ellassoc.scalars import QQ


def test_delta0_is_ad_t12():
    d0, ad = delta(0, 2, 5), ad_t12(2, 5)
    for a, b in zip(d0.images, ad.images):
        assert (a - b).is_zero()


@pytest.mark.parametrize("m", [0, 1, 2])
def test_delta_kills_t12_in_t13(m):
    D, cert = build_special_derivation("delta", m, 3, 2 * m + 4)
    assert cert.ok
    t12 = ell_element(D.alg, "t12", QQ, D.N)
    assert D(t12).is_zero()


def test_e_pm_well_defined_on_t13():
    for kind in ("e_plus", "e_minus"):
        _, cert = build_special_derivation(kind, 0, 3, 5)
        assert cert.ok and cert.relations_checked > 0


def test_e_plus_kills_delta_and_string_is_finite():
    for l in (1, 2):
        N = 2 * l + 3
        d, ep, em = delta(l, 2, N), e_plus(2, N), e_minus(2, N)
        assert ep.bracket(d).is_zero()
        assert not string_element(d, 2 * l, em).is_zero()
        assert string_element(d, 2 * l + 1, em).is_zero()


def test_delta_commutes_with_insertion():
    # delta^(3) o (.)^{1,23} = (.)^{1,23} o delta^(2) on x_1 and y_1
    D2 = delta(1, 2, 5)
    D3, _ = build_special_derivation("delta", 1, 3, 5)
    T = table("t_ell", 3, 5)
    for i, sym in enumerate(("x1", "y1")):
        g = D2.alg.generator(sym, QQ, 5)
        lhs = D3(insertion(g, [{1}, {2, 3}], T))
        rhs = insertion(D2.images[i], [{1}, {2, 3}], T)
        assert (lhs - rhs).is_zero()


def test_unknown_kind():
    with pytest.raises(ValueError):
        build_special_derivation("nope")


def test_not_well_defined_is_a_value_type():
    assert issubclass(NotWellDefined, ArithmeticError)


@pytest.mark.parametrize("W,dim", [(6, 0), (8, 0), (10, 0), (12, 1), (16, 1)])
def test_quadratic_relations(W, dim):
    assert delta_quadratic_relations(W).dimension == dim


def test_weight12_proportionality_constant():
    q = delta_quadratic_relations(12)
    assert q.pairs == [(1, 4), (2, 3)]
    # frozen from exact row reduction: [delta_2, delta_8] = r [delta_4, delta_6]
    r = q.proportionality()
    assert r == FROZEN_RATIO
    lhs = delta(1, 2, 15).bracket(delta(4, 2, 15))
    rhs = delta(2, 2, 15).bracket(delta(3, 2, 15)).scale(QQ.coerce(FROZEN_RATIO))
    assert (lhs - rhs).is_zero()


FROZEN_RATIO = 3


def test_ell_algebra_free_for_n2():
    assert ell_algebra(2, 4).is_free()
    assert isinstance(ell_element(ell_algebra(2, 4), "t12"), LieSeries)
