import random

import mpmath
import pytest

from ellassoc.assoc import (
    AssociatorData, GRTEllElement, GRTElement, GTElement, NoSolution, NotGroupLike,
    b3_generators, check_associator, check_elliptic, check_lie_rell, gt_transfer,
    kz_twist_check, lift_grt, phi_kz, psi_involution, rational_associator,
    semigroup_mul, sigma_lift, solve_torsor, torsor_act,
)
from ellassoc.lie import LieSeries
from ellassoc.membership import F2_ALPHABET, check_membership, f2, solve_component
from ellassoc.mzv import indices_of_weight, mzv_table
from ellassoc.ncseries import NCSeries
from ellassoc.scalars import CC, QQ, mpq
from ellassoc.special import delta, e_plus


@pytest.fixture(scope="module")
def kz4():
    return phi_kz(4, 30)


@pytest.fixture(scope="module")
def rat4():
    return rational_associator(4)


def sigma3(N):
    (psi,) = solve_component("grt1", 3).basis[0]
    return LieSeries(f2(N), psi.terms, QQ, N)


def test_psi_on_short_words():
    assert psi_involution("").terms == {(): 1}
    assert psi_involution("A").is_zero()
    ab = psi_involution("AB")
    assert ab.terms == {(0, 1): 1, (1, 0): -1}


def test_kz_low_degree_coefficients(kz4):
    with mpmath.workdps(40):
        z2, z3 = mpmath.zeta(2), mpmath.zeta(3)
        assert abs(kz4.log.coefficient((0, 1)) + z2) < 1e-35
        assert abs(kz4.log.coefficient((0, 0, 1)) + z3) < 1e-35
        assert abs(kz4.log.coefficient((0, 1, 1)) - z3) < 1e-35


def test_kz_passes_all_relations(kz4):
    rep = check_associator(kz4)
    assert rep.passed, rep.table()
    assert set(rep.residuals()) == {"duality", "hexagon", "pentagon", "grouplike"}


def _literal_phi(N):
    """Phi with non-divided derivatives, the displayed word order and no sign."""
    ring = CC(40)
    tab = mzv_table(N, 30)
    terms = {(): ring.one}

    def d(ts, a):
        out = {}
        for w, c in ts.items():
            for i, x in enumerate(w):
                if x == a:
                    out[w[:i] + w[i + 1:]] = out.get(w[:i] + w[i + 1:], 0) + c
        return out

    for w in range(2, N + 1):
        for idx in indices_of_weight(w):
            word = []
            for k in idx:
                word += [0] * (k - 1) + [1]
            dB, l = {tuple(word): 1}, 0
            while dB:
                dAB, k = dB, 0
                while dAB:
                    for v, c in dAB.items():
                        key = (1,) * l + v + (0,) * k
                        terms[key] = terms.get(key, 0) + (-1) ** (k + l) * c * ring.coerce(tab[idx])
                    dAB, k = d(dAB, 0), k + 1
                dB, l = d(dB, 1), l + 1
    return NCSeries(F2_ALPHABET, terms, ring, N)


def test_literal_reading_is_not_grouplike():
    phi = _literal_phi(4)
    assert phi.grouplike_residual() > 1
    with pytest.raises(NotGroupLike):
        AssociatorData.from_series(CC(40).two_pi_i, phi)


def test_rational_associator_is_exact(rat4):
    assert rat4.log.coefficient((0, 1)) == mpq(1, 24)
    rep = check_associator(rat4)
    assert rep.passed and all(c.residual == 0 for c in rep.checks)
    with pytest.raises(ValueError):
        rational_associator(5)


def test_sigma_lift_exact_and_numeric(rat4, kz4):
    e = sigma_lift(rat4)
    rep = check_elliptic(e)
    assert rep.passed and all(c.residual == 0 for c in rep.checks)
    assert check_elliptic(sigma_lift(kz4)).passed


def test_sigma_abelianization_has_determinant_mu(rat4):
    (a, b), (c, d) = sigma_lift(rat4).abelianization()
    assert a * d - b * c == rat4.mu


def test_kz_twist():
    assert kz_twist_check(3, 30).passed


@pytest.mark.parametrize("N", [4, 6])
def test_b3_generators_satisfy_lie_rell(N):
    for up, um in b3_generators(N):
        rep = check_lie_rell(up, um)
        assert rep.passed and all(c.residual == 0 for c in rep.checks)


def test_lie_rell_rejects_nonmember():
    (_, up), _ = b3_generators(4)
    rep = check_lie_rell(up.like({}, 0), up.bracket(up.alg.generator("X", QQ, 4)))
    assert not rep.passed


def _random_grt_ell(rng, N):
    q, a, b = (mpq(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(3))
    D = e_plus(2, N).scale(a) + delta(1, 2, N).scale(b)
    up, um = D.exp()
    g = lift_grt(GRTElement(sigma3(N).scale(q)))
    return semigroup_mul("grt_ell", g, GRTEllElement(LieSeries.zero(f2(N), QQ, N), up, um)), D.alg


def test_random_grt_ell_elements_are_members():
    rng = random.Random(7)
    for _ in range(3):
        el, _ = _random_grt_ell(rng, 4)
        assert check_membership("grt_ell_group", (el.log_g, el.u_plus, el.u_minus)).ok


def test_torsor_round_trip(rat4):
    N = 4
    e = sigma_lift(rat4)
    rng = random.Random(11)
    for _ in range(4):
        el, L = _random_grt_ell(rng, N)
        moved = torsor_act("grt_ell_on_Ell", el, e)
        x1, y1 = L.generator("x1", QQ, N), L.generator("y1", QQ, N)
        base = torsor_act("grt_ell_on_Ell", GRTEllElement(el.log_g, x1, y1), e)
        up, um = solve_torsor(base, moved)
        assert (up - el.u_plus).is_zero() and (um - el.u_minus).is_zero()


def test_solve_torsor_rejects_different_associators(rat4):
    e = sigma_lift(rat4)
    e2 = torsor_act("scalar_c_sharp", mpq(2), e)
    with pytest.raises(NoSolution):
        solve_torsor(e, e2)


def test_grt_action_is_a_right_action(rat4):
    s = sigma3(4)
    g1 = GRTElement(s.scale(mpq(1, 3)), mpq(2))
    g2 = GRTElement(s.scale(mpq(-2)), mpq(1, 5))
    lhs = torsor_act("grt_on_M", semigroup_mul("grt", g1, g2), rat4)
    rhs = torsor_act("grt_on_M", g2, torsor_act("grt_on_M", g1, rat4))
    assert lhs.mu == rhs.mu and (lhs.log - rhs.log).is_zero()
    assert check_associator(rhs).passed


def test_grt_ell_semigroup_is_associative():
    rng = random.Random(3)
    a, b, c = (_random_grt_ell(rng, 4)[0] for _ in range(3))
    l = semigroup_mul("grt_ell", semigroup_mul("grt_ell", a, b), c)
    r = semigroup_mul("grt_ell", a, semigroup_mul("grt_ell", b, c))
    for s, t in ((l.log_g, r.log_g), (l.u_plus, r.u_plus), (l.u_minus, r.u_minus)):
        assert (s - t).is_zero()


def test_gt_transfer_moves_one_associator_to_another(rat4):
    other = torsor_act("grt_on_M", GRTElement(sigma3(4).scale(mpq(5)), mpq(3)), rat4)
    g = gt_transfer(rat4, other)
    assert isinstance(g, GTElement) and g.lam == 3
    moved = torsor_act("gt_on_M", g, rat4)
    assert (moved.log - other.log).is_zero()


def test_scalar_action_rescales_mu(rat4):
    e = torsor_act("scalar_c", mpq(-4), rat4)
    assert e.mu == -4
    assert e.log.coefficient((0, 1)) == mpq(16, 24)
    with pytest.raises(ZeroDivisionError):
        torsor_act("scalar_c", 0, rat4)


