import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ellassoc.mellin import (
    ALPHA, MellinValue, PoleError, ThetaSeries, a2l, assemble_series, check_sl2z_relations,
    check_theta_action, constant_form, eisenstein_q, iterated_integral, l_sharp, l_star,
    psi_rational, shuffle_check, sl2_irrep_matrix, theta_derivation, theta_relation,
)
from ellassoc.membership import t12_free
from ellassoc.scalars import rational_reconstruct
from ellassoc.special import ell_element

E4 = eisenstein_q(1, 60)
E6 = eisenstein_q(2, 60)


def two_pi_i():
    return 2j * mpmath.pi


def test_eisenstein_coefficients():
    assert E4.coeffs[:4] == (1, 240, 2160, 6720)
    assert E6.coeffs[:3] == (1, -504, -16632)
    assert E4.weight == 4 and E6.weight == 6


def test_constant_form():
    # int_{t0}^oo t^{s-1} dt continues to -t0^s / s
    v = iterated_integral("F", [constant_form()], [1], t0=1)
    assert abs(v.value + 1) < 1e-30
    v = iterated_integral("F", [constant_form()], [2], t0=mpmath.mpf(3))
    assert abs(v.value + mpmath.mpf(9) / 2) < 1e-28


def _e4(t):
    # direct q-series for t >= 1/2, modularity below
    if t < 0.5:
        return t ** -4 * _e4(1 / t)
    q = mpmath.exp(-2 * mpmath.pi * t)
    return 1 + sum(E4.coeffs[m] * q ** m for m in range(1, 40))


@pytest.mark.parametrize("s", [1, 3])
def test_f_matches_quadrature(s):
    with mpmath.workdps(25):
        t0 = mpmath.mpf("1.3")
        tail = mpmath.quad(lambda t: (_e4(t) - 1) * t ** (s - 1), [t0, 3, mpmath.inf])
        oracle = tail - t0 ** s / s
        v = iterated_integral("F", [E4], [s], t0="1.3", precision=25)
        assert abs(v.value - oracle) < 1e-18


@pytest.mark.parametrize("s", [1, 2, 3])
def test_g_matches_quadrature(s):
    # the t^-4 growth at 0 is integrated in closed form, the rest by quadrature
    with mpmath.workdps(25):
        t0 = mpmath.mpf("1.3")
        body = mpmath.quad(lambda t: (_e4(t) - t ** -4) * t ** (s - 1), [0, 0.5, 1, t0])
        oracle = body + t0 ** (s - 4) / (s - 4)
        v = iterated_integral("G", [E4], [s], t0="1.3", precision=25)
        assert abs(v.value - oracle) < 1e-15


def test_pole_windows():
    with pytest.raises(PoleError) as exc:
        iterated_integral("G", [E4], [4])
    assert exc.value.window == (1,) and exc.value.target == 4
    with pytest.raises(PoleError) as exc:
        l_star([E4, E6], [3, 7])
    assert exc.value.window == (1, 2)
    with pytest.raises(ValueError):
        iterated_integral("G", [constant_form()], [1])


def test_t0_independence():
    for forms, s in (([E4], [2]), ([E4, E6], [3, 5])):
        a = l_star(forms, s, t0="0.7")
        b = l_star(forms, s, t0="1.3")
        assert abs(a.value - b.value) < 1e-25


def test_functional_equation():
    assert abs(l_star([E4], [1]).value - l_star([E4], [3]).value) < 1e-25


def test_classical_factorization():
    # L*(s) = (2 pi)^-s Gamma(s) 240 zeta(s) zeta(s - 3)
    for s in (2, 3):
        with mpmath.workdps(40):
            oracle = 240 * (2 * mpmath.pi) ** -s * mpmath.gamma(s) * mpmath.zeta(s) * mpmath.zeta(s - 3)
            assert abs(l_star([E4], [s]).value - oracle) < 1e-25
    with mpmath.workdps(40):
        assert abs(l_star([E4], [2]).value + mpmath.mpf(5) / 6) < 1e-25


def test_l_sharp_identities():
    a = l_sharp([1], [0])
    b = l_sharp([1], [2])
    with mpmath.workdps(40):
        assert abs(a.value + 240 * mpmath.zeta(3)) < 1e-25
        assert abs(a.value + b.value) < 1e-25
        for P in (20, 30):
            v = l_sharp([1], [1], precision=P).value / (2j * mpmath.pi) ** 3
            assert rational_reconstruct(v.real, 1000) == Fraction(5, 6)
            assert abs(v.imag) < 10 ** -(P - 2)


def test_l_sharp_range():
    with pytest.raises(ValueError):
        l_sharp([1], [3])
    with pytest.raises(ValueError):
        l_sharp([0], [0])


def test_truncation_stability():
    a = l_sharp([1, 1], [0, 2], M=40)
    b = l_sharp([1, 1], [0, 2], M=60)
    assert abs(a.value - b.value) < a.err + b.err + 1e-28


def test_a2l_values_and_generating_function():
    assert a2l(3) == [Fraction(-1, 12), Fraction(1, 240), Fraction(-1, 6048), Fraction(1, 172800)]
    x = sympy.Symbol("x")
    ser = sympy.series((x / (2 * sympy.sinh(x / 2))) ** 2, x, 0, 14).removeO()
    for l, a in enumerate(a2l(5)):
        assert sympy.Rational(a.numerator, a.denominator) == ser.coeff(x, 2 * l + 2)


def test_shuffle():
    rep = shuffle_check()
    assert rep.passed, rep.table()
    assert len(rep.checks) == 6


def test_mellin_value_json_round_trip():
    v = l_star([E4], [2])
    w = MellinValue.from_json(v.to_json())
    assert abs(w.value - v.value) < 1e-30 and w.args == v.args


# irreducible representations


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_rho_is_a_homomorphism_rational(seed, l):
    rng = random.Random(seed)
    a, b, c = Fraction(rng.randint(1, 4)), Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-2, 2))
    g = ((a, b), (c, (1 + b * c) / a))
    h = ((Fraction(1), Fraction(rng.randint(-2, 2), 3)), (Fraction(0), Fraction(1)))
    gh = tuple(tuple(sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    lhs = sl2_irrep_matrix(gh, l)
    rhs = sl2_irrep_matrix(g, l) @ sl2_irrep_matrix(h, l)
    assert lhs.max_diff(rhs) == 0


def test_rho_is_a_homomorphism_complex():
    with mpmath.workdps(50):
        z = mpmath.mpc("0.3", "1.1")
        g = ((z, mpmath.mpf(1)), (mpmath.mpf(-1), mpmath.mpf(0)))
        h = ((mpmath.mpf(1), mpmath.mpc("0.5", "-0.2")), (mpmath.mpf(0), mpmath.mpf(1)))
        gh = tuple(tuple(sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)) for i in range(2))
        lhs = sl2_irrep_matrix(gh, 1, 30)
        rhs = sl2_irrep_matrix(g, 1, 30) @ sl2_irrep_matrix(h, 1, 30)
        assert lhs.max_diff(rhs) < 1e-25


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_minus_identity_acts_trivially(l):
    assert sl2_irrep_matrix(((-1, 0), (0, -1)), l).is_identity()


def test_diagonal_weights():
    a = Fraction(2)
    for l in (1, 2):
        m = sl2_irrep_matrix(((a, 0), (0, 1 / a)), l).matrix
        for j in range(2 * l + 1):
            assert m[j][j] == a ** (2 * j - 2 * l)


def test_alpha_has_order_four_on_even_strings():
    m = sl2_irrep_matrix(ALPHA, 1)
    assert (m @ m).is_identity()


# theta~ and psi~


def test_theta_low_coefficients():
    th = assemble_series("theta", 4)
    assert th.coefficient([]) == 1
    with mpmath.workdps(40):
        for k in range(3):
            expect = two_pi_i() * mpmath.mpf(1) / 240 * l_sharp([1], [k]).value
            assert abs(th.coefficient([(1, k)]) - expect) < 1e-25
    conj = assemble_series("theta", 4, conjugate=True)
    with mpmath.workdps(40):
        assert abs(conj.coefficient([(1, 0)]) - mpmath.conj(th.coefficient([(1, 0)]))) < 1e-30


def test_psi_weight_four_coefficient():
    ps = assemble_series("psi", 4)
    with mpmath.workdps(40):
        for k in range(3):
            expect = two_pi_i() ** 4 * mpmath.mpf(1) / 240 / (k + 1)
            assert abs(ps.coefficient([(1, k)]) - expect) < 1e-25


def test_psi_rational_is_grouplike():
    assert psi_rational(10).grouplike_residual() == 0


def test_theta_series_json():
    d = assemble_series("psi", 6).to_json()
    assert d["kind"] == "psi" and d["W"] == 6
    assert d["terms"][0]["word"] == []
    assert isinstance(ThetaSeries, type)


def test_sl2z_relations():
    rep = check_sl2z_relations(6, 30)
    assert rep.passed, rep.table()


def test_theta_action_conjugate_passes():
    rep = check_theta_action(4, 30)
    assert rep.passed, rep.table()
    assert rep.values["theta"] == "conjugate"


@pytest.mark.slow
def test_literal_theta_fails_at_degree_five():
    assert check_theta_action(5, 30, conjugate=True).passed
    rep = check_theta_action(5, 30, conjugate=False)
    assert not rep["theta_A"].passed
    assert rep["psi_A"].passed and rep["psi_B"].passed


def test_shuffle_with_weight_six_strings():
    pairs = [((1, k), (2, kk)) for k in (1, 3) for kk in (1, 3, 5)]
    rep = shuffle_check(pairs)
    assert rep.passed, rep.table()


@pytest.mark.parametrize("gen", ["x1", "y1"])
def test_theta_relation_matches_exponentiated_log(gen):
    N = 9
    D, _ = theta_derivation(N, 30, conjugate=False)
    alg = t12_free(N)
    img = D.exp_apply(ell_element(alg, gen, D.images[0].ring, N), bound=N)
    keys = [k for k in img.terms if len(k) == N][:3] + [(0,), (1,)]
    for key in keys:
        rel = theta_relation(gen, key, N)
        assert all(isinstance(r, Fraction) for r in rel.coefficients.values())
        assert abs(rel.value - img.terms.get(key, 0)) < 1e-30


def test_theta_relation_depth_one_coefficient():
    # x1 -> ... + a_2 (2 pi i) L#_1(1) [x,[x,[x,[x,y]]]] from the letter g1_0
    rel = theta_relation("x1", (0, 0, 0, 0, 1), 5)
    assert rel.coefficients == {((1, 0),): Fraction(1, 240)}
    with mpmath.workdps(40):
        expect = two_pi_i() * l_sharp([1], [0]).value / 240
        assert abs(rel.value - expect) < 1e-30
