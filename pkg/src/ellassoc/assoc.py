"""Associators, elliptic associators and the (semi)groups acting on them.

Every group element is stored through its logarithm, a Lie series, and
products are evaluated with BCH inside the relevant Lie algebra.  Alphabets:

* ``A, B``: f_2, the home of Phi and of GRT elements; A -> t_12, B -> t_23 in t_3.
* ``X, Y``: log-coordinates of the free group F_2 = <X, Y>, used for GT and
  GT_ell elements (the letter X stands for log X).
* ``x1, y1``: t_{1,2}, free on x_1 = x_1^+ and y_1 = x_1^-; the home of A_pm.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .alphabet import Alphabet
from .lie import LieSeries, ad_series, bch, bch_many, bernoulli_ad_coeffs, substitute_lie
from .membership import (F2_ALPHABET, Ad, ell_insert, f2, psi_genus0, psi_genus1, t12_free)
from .ncseries import NCSeries, free_lie, lie_exp
from .presentations import Insertion, table
from .report import Check, Report, check_from_series
from .scalars import CC, QQ, mpq

XY_ALPHABET = Alphabet.simple(("X", "Y"))


class NoSolution(ValueError):
    """The torsor equation has no solution (e.g. the genus-0 parts differ)."""


class NotGroupLike(ValueError):
    """A series that should be group-like is not, beyond tolerance."""


def fxy(N: int):
    """Free Lie algebra on X, Y (log-coordinates of F_2)."""
    return free_lie(XY_ALPHABET, N)


def _gens(alg, ring, N):
    return [LieSeries(alg, {(i,): ring.one}, ring, N) for i in range(len(alg.alphabet))]


def scale_letters(s: LieSeries, factors) -> LieSeries:
    """s(c_1 a_1, c_2 a_2, ...): coefficient of a key times prod c_i^(letter count)."""
    ring = s.ring
    fs = [ring.coerce(f) for f in factors]
    out = {}
    for k, c in s.terms.items():
        m = c
        for letter in k:
            m = m * fs[letter]
        if m != 0:
            out[k] = m
    err = s.err
    if not ring.exact and s.err:
        err = s.err * max(1, max(abs(f) for f in fs)) ** s.N
    return s.like(out, err)


def _ad_fn(kind, N, ring):
    return [ring.coerce(c) for c in bernoulli_ad_coeffs(N, kind)]


# ----------------------------------------------------------------------------
# psi and Phi_KZ
# ----------------------------------------------------------------------------


def _partial(terms: dict, letter: int) -> dict:
    """The derivation a_letter -> 1, other letters -> 0, on a word-keyed dict."""
    out: dict = {}
    for w, c in terms.items():
        for i, a in enumerate(w):
            if a == letter:
                ww = w[:i] + w[i + 1:]
                out[ww] = out.get(ww, 0) + c
    return {w: c for w, c in out.items() if c != 0}


def psi_involution(w, N: int | None = None, ring=QQ) -> NCSeries:
    """psi(w) = sum_{k,l} (-1)^(k+l) B^l (d_A^k/k!)(d_B^l/l!)(w) A^k on {A, B}.

    The divided powers make psi the shuffle regularization: without them the
    resulting Phi_KZ is not group-like.

    ``w`` is an NCSeries over A, B, or a word given as a string such as "AAB".
    """
    if isinstance(w, NCSeries):
        if w.alphabet != F2_ALPHABET:
            raise ValueError("psi is defined on series in A, B")
        s = w
    else:
        word = tuple(F2_ALPHABET.index(ch) for ch in str(w))
        N = len(word) if N is None else N
        s = NCSeries(F2_ALPHABET, {word: ring.one}, ring, N)
    A, B = 0, 1
    out: dict = {}
    dB = dict(s.terms)
    l = 0
    while dB:
        dAB = dB
        k = 0
        while dAB:
            sign = ring.coerce(mpq(-1 if (k + l) % 2 else 1, factorial(k) * factorial(l)))
            for v, c in dAB.items():
                ww = (B,) * l + v + (A,) * k
                out[ww] = out.get(ww, 0) + sign * c
            dAB = _partial(dAB, A)
            k += 1
        dB = _partial(dB, B)
        l += 1
    return s.like({w: c for w, c in out.items() if c != 0})


def _kz_word(index) -> tuple:
    """A^(k_m - 1) B ... A^(k_1 - 1) B for zeta(k_1, ..., k_m) in the increasing convention."""
    word = []
    for k in reversed(index):
        word += [0] * (k - 1) + [1]
    return tuple(word)


# ----------------------------------------------------------------------------
# data types
# ----------------------------------------------------------------------------


def _grouplike_tol(s):
    return 0 if s.ring.exact else max(1000 * s.err, 1000 * s.ring.eps())


@dataclass
class AssociatorData:
    """(mu, Phi) with Phi group-like in A, B; ``log`` is log Phi in f_2."""

    mu: object
    log: LieSeries

    @classmethod
    def from_series(cls, mu, phi: NCSeries, check: bool = True) -> "AssociatorData":
        if check:
            r = phi.grouplike_residual()
            if r > _grouplike_tol(phi):
                raise NotGroupLike(f"Phi is not group-like: residual {r}")
        return cls(mu, phi.log())

    @property
    def N(self) -> int:
        return self.log.N

    @property
    def ring(self):
        return self.log.ring

    @property
    def phi(self) -> NCSeries:
        return lie_exp(self.log)


@dataclass
class EllipticAssociatorData:
    """(mu, Phi, A_+, A_-); the A_pm are stored as logs in t_{1,2}."""

    mu: object
    log_phi: LieSeries
    log_plus: LieSeries
    log_minus: LieSeries

    @classmethod
    def from_series(cls, mu, phi: NCSeries, a_plus: NCSeries, a_minus: NCSeries,
                    check: bool = True) -> "EllipticAssociatorData":
        if check:
            for name, s in (("Phi", phi), ("A_+", a_plus), ("A_-", a_minus)):
                r = s.grouplike_residual()
                if r > _grouplike_tol(s):
                    raise NotGroupLike(f"{name} is not group-like: residual {r}")
        return cls(mu, phi.log(), a_plus.log(), a_minus.log())

    @property
    def N(self) -> int:
        return self.log_plus.N

    @property
    def ring(self):
        return self.log_plus.ring

    @property
    def associator(self) -> AssociatorData:
        return AssociatorData(self.mu, self.log_phi)

    @property
    def a_plus(self) -> NCSeries:
        return lie_exp(self.log_plus)

    @property
    def a_minus(self) -> NCSeries:
        return lie_exp(self.log_minus)

    def abelianization(self):
        """((u_+, v_+), (u_-, v_-)) with log A_pm = u x_1 + v y_1 modulo brackets."""
        rows = []
        for s in (self.log_plus, self.log_minus):
            rows.append((s.coefficient((0,)), s.coefficient((1,))))
        return tuple(rows)


@dataclass
class GTElement:
    """(lambda, f) with f = exp(log_f) in log-coordinates X, Y."""

    lam: object
    log_f: LieSeries


@dataclass
class GTEllElement:
    lam: object
    log_f: LieSeries
    log_g_plus: LieSeries
    log_g_minus: LieSeries


@dataclass
class GRTElement:
    """(c, g) in GRT = GRT_1 x| k^x, with g = exp(log_g) in f_2."""

    log_g: LieSeries
    c: object = 1


@dataclass
class GRTEllElement:
    log_g: LieSeries
    u_plus: LieSeries
    u_minus: LieSeries
    c: object = 1


# ----------------------------------------------------------------------------
# Phi_KZ
# ----------------------------------------------------------------------------


def phi_kz(N: int, precision: int = 30, table_=None) -> AssociatorData:
    """The KZ associator (mu = 2 pi i), truncated at degree N."""
    from .mzv import mzv_table

    ring = CC(precision + 10)
    tab = table_ or (mzv_table(max(N, 2), precision) if N >= 2 else None)
    terms: dict = {(): ring.one}
    err = ring.ctx.mpf(0)
    for w in range(2, N + 1):
        for idx in tab.of_weight(w):
            z = ring.coerce(tab[idx]) * (-1) ** len(idx)
            e = ring.ctx.mpf(tab.error(idx))
            ps = psi_involution("".join("AB"[a] for a in _kz_word(idx)), N, ring)
            for ww, c in ps.terms.items():
                terms[ww] = terms.get(ww, 0) + z * c
            err += e * ps.norm1()
    phi = NCSeries(F2_ALPHABET, {w: c for w, c in terms.items() if c != 0}, ring, N, err)
    return AssociatorData(ring.two_pi_i, phi.log())


def rational_associator(N: int = 4, precision: int = 30) -> AssociatorData:
    """An exact associator with mu = 1 to degree N <= 4.

    Rescales Phi_KZ by A, B -> A/(2 pi i), B/(2 pi i), drops the degree-3 part
    (the action of a GRT_1 element exp(c sigma_3), which changes nothing else
    below degree 5) and reads the remaining coefficients as rationals.
    """
    from .scalars import rational_reconstruct

    if N > 4:
        raise ValueError("the rational construction is valid only up to degree 4")
    kz = phi_kz(N, precision)
    ring = kz.ring
    s = scale_letters(kz.log, [1 / ring.two_pi_i] * 2)
    terms = {}
    for k, c in s.terms.items():
        if len(k) == 3:
            continue
        if abs(c.imag) > 1e-15:
            raise ArithmeticError("rescaled coefficient is not real")  # pragma: no cover
        q = rational_reconstruct(c.real, 10 ** 6)
        if q != 0:
            terms[k] = mpq(q.numerator, q.denominator)
    return AssociatorData(mpq(1), LieSeries(f2(N), terms, QQ, N))


# ----------------------------------------------------------------------------
# checks
# ----------------------------------------------------------------------------


def _t(alg, name, ring, N):
    return alg.element(name, ring, N)


def check_associator(assoc: AssociatorData, pentagon: bool = True) -> Report:
    """Duality, hexagon, pentagon and group-likeness residuals of (mu, Phi)."""
    N = max(assoc.N, 2)
    ring = assoc.ring
    log = assoc.log
    mu = ring.coerce(assoc.mu)
    rep = Report("associator")
    t3 = table("t", 3, N)

    def p3(tr):
        return psi_genus0(log, tr, t3, N)

    t12, t13, t23 = (_t(t3, s, ring, N) for s in ("t12", "t13", "t23"))
    half = mu * ring.coerce(mpq(1, 2))
    duality = bch(p3((3, 2, 1)), p3((1, 2, 3)))
    hexagon = bch_many([t23.scale(half), p3((1, 2, 3)), t12.scale(half), p3((3, 1, 2)),
                        t13.scale(half), p3((2, 3, 1)), (t12 + t13 + t23).scale(-half)])
    rep.add(check_from_series("duality", duality))
    rep.add(check_from_series("hexagon", hexagon))
    if pentagon:
        t4 = table("t", 4, N)

        def p4(tr):
            return psi_genus0(log, tr, t4, N)

        lhs = bch_many([p4((2, 3, 4)), p4((1, (2, 3), 4)), p4((1, 2, 3))])
        rhs = bch(p4((1, 2, (3, 4))), p4(((1, 2), 3, 4)))
        rep.add(check_from_series("pentagon", bch(lhs, -rhs)))
    phi = lie_exp(log)
    rep.add(Check("grouplike", phi.grouplike_residual(), phi.err, exact=ring.exact))
    return rep


def check_elliptic(e: EllipticAssociatorData) -> Report:
    """Cyclic and commutator axioms, group-likeness and the determinant condition."""
    N = e.N
    ring = e.ring
    mu = ring.coerce(e.mu)
    half = mu * ring.coerce(mpq(1, 2))
    T = table("t_ell", 3, N)
    rep = Report("elliptic")
    t12 = _t(T, "t12", ring, N)
    t13 = _t(T, "t13", ring, N)
    phi123 = psi_genus1(e.log_phi, (1, 2, 3), T, N)
    phi213 = psi_genus1(e.log_phi, (2, 1, 3), T, N)

    def perm(s, p):
        return Insertion(T, T, [{p[0]}, {p[1]}, {p[2]}], ring, N)(s)

    for sign, tag, logA in ((1, "plus", e.log_plus), (-1, "minus", e.log_minus)):
        alpha = bch_many([(t12 + t13).scale(sign * half),
                          ell_insert(logA, ({1}, {2, 3}), T, N), phi123])
        cyc = bch_many([perm(alpha, (3, 1, 2)), perm(alpha, (2, 3, 1)), alpha])
        rep.add(check_from_series(f"cyclic_{tag}", cyc))
    p = Ad(phi123, ell_insert(e.log_minus, ({1}, {2, 3}), T, N), inverse=True)
    # not a conjugation: e^{-mu t12/2} appears on both sides
    q = bch_many([t12.scale(-half), -phi213, -ell_insert(e.log_plus, ({2}, {1, 3}), T, N),
                  phi213, t12.scale(-half)])
    comm = bch_many([p, q, -p, -q])
    rep.add(check_from_series("commutator", bch(comm, t12.scale(-mu))))
    worst, bound = 0, 0
    for s in (e.log_phi, e.log_plus, e.log_minus):
        ex = lie_exp(s)
        r = ex.grouplike_residual()
        worst = r if r > worst else worst
        bound = bound + ex.err
    rep.add(Check("grouplike", worst, bound, exact=ring.exact))
    (up, vp), (um, vm) = e.abelianization()
    det = up * vm - vp * um
    rep.add(Check("det", abs(det - mu) if not ring.exact else det - mu,
                  e.log_plus.err + e.log_minus.err, exact=ring.exact))
    return rep


# ----------------------------------------------------------------------------
# the section M -> Ell
# ----------------------------------------------------------------------------


def _t12_elements(L, ring, N):
    from .special import ell_element

    x1 = ell_element(L, "x1", ring, N)
    y1 = ell_element(L, "y1", ring, N)
    t12 = ell_element(L, "t12", ring, N)
    return x1, y1, t12


def sigma_lift(assoc: AssociatorData) -> EllipticAssociatorData:
    """(mu, Phi) -> (mu, Phi, A_+, A_-) through the conjugated exponential formulas."""
    N = assoc.N
    ring = assoc.ring
    mu = ring.coerce(assoc.mu)
    L = t12_free(N)
    x1, y1, t12 = _t12_elements(L, ring, N)
    x2, y2 = -x1, -y1
    bern = _ad_fn("z/(e^z-1)", N, ring)
    a = ad_series(bern, x1, y2)
    b = ad_series(bern, x2, y1)
    log = assoc.log.truncated(N) if assoc.log.N > N else assoc.log
    phi_a = substitute_lie(log, [a, t12])
    phi_b = substitute_lie(log, [b, t12])  # t_21 = t_12
    log_plus = Ad(phi_a, a.scale(mu))
    log_minus = bch_many([t12.scale(mu * ring.coerce(mpq(1, 2))), phi_b, x1, -phi_a])
    return EllipticAssociatorData(assoc.mu, assoc.log, log_plus, log_minus)


# ----------------------------------------------------------------------------
# semigroup laws
# ----------------------------------------------------------------------------


def _gt_mul(a: GTElement, b: GTElement) -> GTElement:
    ring = a.log_f.ring
    N = a.log_f.N
    X, Y = _gens(fxy(N), ring, N)
    lam2 = ring.coerce(b.lam)
    f = bch(substitute_lie(a.log_f, [Ad(b.log_f, X.scale(lam2)), Y.scale(lam2)]), b.log_f)
    return GTElement(a.lam * b.lam, f)


def _grt_mul(a: GRTElement, b: GRTElement) -> GRTElement:
    ring = a.log_g.ring
    N = a.log_g.N
    A, B = _gens(f2(N), ring, N)
    c1 = ring.coerce(a.c)
    g2 = scale_letters(b.log_g, [1 / c1, 1 / c1]) if c1 != 1 else b.log_g
    g = bch(substitute_lie(a.log_g, [Ad(g2, A), B]), g2)
    return GRTElement(g, a.c * b.c)


def scalar_conj_u(c, up: LieSeries, um: LieSeries):
    """c . (u_+, u_-) = (u_+(x, y/c), c u_-(x, y/c))."""
    ring = up.ring
    c = ring.coerce(c)
    if c == 1:
        return up, um
    inv = 1 / c
    return scale_letters(up, [1, inv]), scale_letters(um, [1, inv]).scale(c)


def compose_u(u1, u2):
    """u1 o u2: (u1_+(u2_+, u2_-), u1_-(u2_+, u2_-))."""
    return (substitute_lie(u1[0], list(u2)), substitute_lie(u1[1], list(u2)))


def grt_lie_bracket(p1: LieSeries, p2: LieSeries) -> LieSeries:
    """<psi_1, psi_2> = [psi_1, psi_2] + D_psi2(psi_1) - D_psi1(psi_2), D_psi: A -> [psi, A], B -> 0."""
    from .derivation import Derivation

    F = p1.alg
    A, B = _gens(F, p1.ring, p1.N)
    zero = A.like({}, 0)
    D1 = Derivation(F, [p1.bracket(A), zero])
    D2 = Derivation(F, [p2.bracket(A), zero])
    return p1.bracket(p2) + D2(p1) - D1(p2)


def grt_ell_lie_bracket(a, b):
    """((psi, a_+, a_-), (psi', a'_+, a'_-)) -> (<psi, psi'>, D_a'(a) - D_a(a'))."""
    from .derivation import Derivation

    p1, ap1, am1 = a
    p2, ap2, am2 = b
    L = ap1.alg
    D1 = Derivation(L, [ap1, am1])
    D2 = Derivation(L, [ap2, am2])
    psi = grt_lie_bracket(p1, p2) if p1 is not None else None
    return (psi, D2(ap1) - D1(ap2), D2(am1) - D1(am2))


def semigroup_mul(side: str, a, b):
    """Product a * b in gt, gt_ell, grt, grt_ell, or the Lie bracket in grt_lie, grt_ell_lie."""
    if side == "gt":
        return _gt_mul(a, b)
    if side == "gt_ell":
        ab = _gt_mul(GTElement(a.lam, a.log_f), GTElement(b.lam, b.log_f))
        imgs = [b.log_g_plus, b.log_g_minus]
        return GTEllElement(ab.lam, ab.log_f, substitute_lie(a.log_g_plus, imgs),
                            substitute_lie(a.log_g_minus, imgs))
    if side == "grt":
        return _grt_mul(a, b)
    if side == "grt_ell":
        g = _grt_mul(GRTElement(a.log_g, a.c), GRTElement(b.log_g, b.c))
        u2 = scalar_conj_u(a.c, b.u_plus, b.u_minus)
        up, um = compose_u((a.u_plus, a.u_minus), u2)
        return GRTEllElement(g.log_g, up, um, g.c)
    if side == "grt_lie":
        return grt_lie_bracket(a, b)
    if side == "grt_ell_lie":
        return grt_ell_lie_bracket(a, b)
    raise ValueError(f"unknown side {side!r}")


# ----------------------------------------------------------------------------
# actions on associators
# ----------------------------------------------------------------------------


def _gt_on_log_phi(lam, log_f, mu, log_phi):
    ring = log_phi.ring
    N = log_phi.N
    A, B = _gens(log_phi.alg, ring, N)
    mu = ring.coerce(mu)
    imgs = [A.scale(mu), Ad(log_phi, B.scale(mu), inverse=True)]
    return bch(log_phi, substitute_lie(log_f, imgs))


def _grt_on_log_phi(log_g, log_phi):
    ring = log_phi.ring
    N = log_phi.N
    A, B = _gens(log_phi.alg, ring, N)
    return bch(substitute_lie(log_phi, [Ad(log_g, A), B]), log_g)


def _with_ring(s: LieSeries, ring) -> LieSeries:
    return s if s.ring == ring else s.with_ring(ring)


def torsor_act(side: str, g, point):
    """Left GT / GT_ell actions, right GRT / GRT_ell actions, and the scalar actions.

    sides: gt_on_M, gt_ell_on_Ell, grt_on_M, grt_ell_on_Ell, scalar_c, scalar_c_sharp.
    For the scalar sides ``g`` is the scalar c.
    """
    if side in ("gt_on_M", "gt_ell_on_Ell"):
        if g.lam == 0:
            raise ZeroDivisionError("lambda must be invertible for the group action")
        P = point.associator if side == "gt_ell_on_Ell" else point
        ring = P.ring
        log_f = _with_ring(g.log_f, ring)
        log_phi = _gt_on_log_phi(g.lam, log_f, P.mu, P.log)
        mu = ring.coerce(g.lam) * ring.coerce(P.mu) if not ring.exact else g.lam * P.mu
        if side == "gt_on_M":
            return AssociatorData(mu, log_phi)
        imgs = [point.log_plus, point.log_minus]
        return EllipticAssociatorData(mu, log_phi,
                                      substitute_lie(_with_ring(g.log_g_plus, ring), imgs),
                                      substitute_lie(_with_ring(g.log_g_minus, ring), imgs))
    if side in ("grt_on_M", "grt_ell_on_Ell"):
        if g.c == 0:
            raise ZeroDivisionError("c must be invertible for the group action")
        P = point.associator if side == "grt_ell_on_Ell" else point
        ring = P.ring
        log_phi = _grt_on_log_phi(_with_ring(g.log_g, ring), P.log)
        if side == "grt_on_M":
            out = AssociatorData(P.mu, log_phi)
            return torsor_act("scalar_c", g.c, out) if g.c != 1 else out
        u = [_with_ring(g.u_plus, ring), _with_ring(g.u_minus, ring)]
        out = EllipticAssociatorData(P.mu, log_phi, substitute_lie(point.log_plus, u),
                                     substitute_lie(point.log_minus, u))
        return torsor_act("scalar_c_sharp", g.c, out) if g.c != 1 else out
    if side == "scalar_c":
        c = point.ring.coerce(g)
        if c == 0:
            raise ZeroDivisionError("c must be invertible")
        return AssociatorData(c * point.ring.coerce(point.mu), scale_letters(point.log, [c, c]))
    if side == "scalar_c_sharp":
        ring = point.ring
        c = ring.coerce(g)
        if c == 0:
            raise ZeroDivisionError("c must be invertible")
        return EllipticAssociatorData(c * ring.coerce(point.mu), scale_letters(point.log_phi, [c, c]),
                                      scale_letters(point.log_plus, [1, c]),
                                      scale_letters(point.log_minus, [1, c]))
    raise ValueError(f"unknown side {side!r}")


# ----------------------------------------------------------------------------
# sections GT -> GT_ell, GRT -> GRT_ell
# ----------------------------------------------------------------------------


def _group_commutator(a, b):
    return bch_many([a, b, -a, -b])


def lift_gt(el: GTElement) -> GTEllElement:
    """g_+ = f(X,(Y,X)) X^lam f(X,(Y,X))^-1,
    g_- = (Y,X)^((lam-1)/2) f(Y X^-1 Y^-1, (Y,X)) Y f(X,(Y,X))^-1."""
    ring = el.log_f.ring
    N = el.log_f.N
    X, Y = _gens(fxy(N), ring, N)
    lam = ring.coerce(el.lam)
    c = _group_commutator(Y, X)
    F1 = substitute_lie(el.log_f, [X, c])
    F2 = substitute_lie(el.log_f, [Ad(Y, -X), c])
    gp = Ad(F1, X.scale(lam))
    gm = bch_many([c.scale((lam - 1) * ring.coerce(mpq(1, 2))), F2, Y, -F1])
    return GTEllElement(el.lam, el.log_f, gp, gm)


def _t0(x, y, N, ring):
    """t_0i = -(ad x_i / (e^{ad x_i} - 1))(y_i)."""
    return -ad_series(_ad_fn("z/(e^z-1)", N, ring), x, y)


def _genus1_02(L, ring, N):
    x1, y1, t12 = _t12_elements(L, ring, N)
    t01 = _t0(x1, y1, N, ring)
    t02 = _t0(-x1, -y1, N, ring)
    return x1, y1, t12, t01, t02


def lift_grt(el: GRTElement) -> GRTEllElement:
    """(c, g) -> (c, g, alpha_g(x_1), alpha_g(y_1)) with
    alpha_g(x_1) = log(g^{021} e^{x_1} (g^{012})^-1) and alpha_g(t_01) = Ad(g^{012})(t_01)."""
    ring = el.log_g.ring
    N = el.log_g.N
    L = t12_free(N)
    x1, y1, t12, t01, t02 = _genus1_02(L, ring, N)
    g012 = substitute_lie(el.log_g, [t01, t12])
    g021 = substitute_lie(el.log_g, [t02, t12])
    up = bch_many([g021, x1, -g012])
    at01 = Ad(g012, t01)
    um = -ad_series(_ad_fn("(e^z-1)/z", N, ring), up, at01)
    return GRTEllElement(el.log_g, up, um, el.c)


def lift_grt_lie(psi: LieSeries, N: int | None = None):
    """psi -> (psi, D_psi(x_1), D_psi(y_1)), the infinitesimal version of lift_grt.

    The images are returned in t_{1,2} truncated at N (default 2 deg psi + 1).
    """
    ring = psi.ring
    # a degree-d psi moves x_1 into t_{1,2}-degrees >= 2d + 1
    N = N or max(psi.N + 1, 2 * max((len(k) for k in psi.terms), default=0) + 1)
    L = t12_free(N)
    x1, y1, t12, t01, t02 = _genus1_02(L, ring, N)
    p = psi
    p012 = substitute_lie(p, [t01, t12])
    p021 = substitute_lie(p, [t02, t12])
    inner = Ad(x1, p021, inverse=True) - p012
    dx = ad_series(_ad_fn("z/(1-e^-z)", N, ring), x1, inner)
    dt = p012.bracket(t01)
    h = _ad_fn("(e^z-1)/z", N, ring)
    powers = [t01]
    for _ in range(N):
        powers.append(x1.bracket(powers[-1]))
    dy = x1.like({}, 0)
    # D((ad x)^k t) = sum_j (ad x)^j [Dx, (ad x)^(k-1-j) t] + (ad x)^k D t
    dpow = dt
    for k in range(0, N + 1):
        if k > 0:
            dpow = x1.bracket(dpow) + dx.bracket(powers[k - 1])
        if h[k] != 0 and not dpow.is_zero():
            dy = dy - dpow.scale(h[k])
    return (psi, dx, dy)


def lift_section(side: str, elem):
    if side == "gt_to_gtell":
        return lift_gt(elem)
    if side == "grt_to_grtell":
        return lift_grt(elem)
    if side == "grt_lie_to_grtell_lie":
        return lift_grt_lie(elem)
    raise ValueError(f"unknown side {side!r}")


# ----------------------------------------------------------------------------
# torsor transfer
# ----------------------------------------------------------------------------


def solve_torsor(e: EllipticAssociatorData, e2: EllipticAssociatorData):
    """(u_+, u_-) with e2 = e * (1, u_+, u_-), solved degree by degree.

    The degree-d parts of u enter log A_pm(u_+, u_-) at degree d only through the
    abelianization matrix of e, which is invertible when mu is.
    """
    ring = e.ring
    if e.N != e2.N:
        raise NoSolution("truncations differ")
    if ring.exact:
        same = e.mu == e2.mu and (e.log_phi - _with_ring(e2.log_phi, ring)).is_zero()
    else:
        diff = (e.log_phi - _with_ring(e2.log_phi, ring)).max_norm()
        same = abs(ring.coerce(e.mu) - ring.coerce(e2.mu)) <= 1000 * ring.eps() and \
            diff <= 1000 * (e.log_phi.err + e2.log_phi.err + ring.eps())
    if not same:
        raise NoSolution("the associator parts (mu, Phi) differ")
    (a, b), (c, d) = e.abelianization()
    det = a * d - b * c
    if det == 0:
        raise NoSolution("abelianization matrix is singular (mu = 0)")
    inv = ((d / det, -b / det), (-c / det, a / det))
    N = e.N
    L = e.log_plus.alg
    zero = LieSeries.zero(L, ring, N)
    up, um = zero, zero
    targets = (_with_ring(e2.log_plus, ring), _with_ring(e2.log_minus, ring))
    for deg in range(1, N + 1):
        cur = (substitute_lie(e.log_plus, [up, um]), substitute_lie(e.log_minus, [up, um]))
        r = [(t - s).degree_part(deg) for t, s in zip(targets, cur)]
        up = up + r[0].scale(inv[0][0]) + r[1].scale(inv[0][1])
        um = um + r[0].scale(inv[1][0]) + r[1].scale(inv[1][1])
    return up, um


def gt_transfer(P: AssociatorData, P2: AssociatorData) -> GTElement:
    """(lambda, f) with (lambda, f) * P = P2, solved degree by degree."""
    ring = P.ring
    mu = ring.coerce(P.mu)
    if mu == 0:
        raise NoSolution("mu must be invertible")
    lam = ring.coerce(P2.mu) / mu
    N = P.N
    target = bch(-P.log, _with_ring(P2.log, ring))
    A, B = _gens(P.log.alg, ring, N)
    imgs = [A.scale(mu), Ad(P.log, B.scale(mu), inverse=True)]
    F = fxy(N)
    f = LieSeries.zero(F, ring, N)
    for deg in range(1, N + 1):
        r = (target - substitute_lie(f, imgs)).degree_part(deg)
        # the degree-d part of f enters at degree d as f_d(mu A, mu B)
        f = f + LieSeries(F, r.terms, ring, N).scale(1 / mu ** deg)
    return GTElement(lam, f)


# ----------------------------------------------------------------------------
# the KZ pair and the P_{1,2}-level relations
# ----------------------------------------------------------------------------


def kz_pair(N: int = 4, precision: int = 30, assoc: AssociatorData | None = None):
    """(log A_KZ, log B_KZ) in t_{1,2}, with (x, y) = (x_2, y_2) and t = t_12."""
    P = assoc or phi_kz(N, precision)
    ring = P.ring
    L = t12_free(N)
    x1, y1, t = _t12_elements(L, ring, N)
    x, y = -x1, -y1
    tpi = ring.two_pi_i
    bern = _ad_fn("z/(e^z-1)", N, ring)
    a = ad_series(bern, x.scale(tpi), y)
    b = ad_series([-c for c in _ad_fn("z/(1-e^-z)", N, ring)], x.scale(tpi), y)
    phi_a = substitute_lie(P.log, [a, t.scale(-tpi)])
    phi_b = substitute_lie(P.log, [b, t.scale(-tpi)])
    log_A = Ad(phi_a, a.scale(tpi))
    log_B = bch_many([t.scale(-tpi * tpi / 2), phi_b, x.scale(tpi), -phi_a])
    return log_A, log_B


def kz_twist_check(N: int = 4, precision: int = 30) -> Report:
    """(A_KZ, B_KZ) against (-2 pi i)^xi (A_+, A_-) of sigma(2 pi i, Phi_KZ), xi: x -> x, y -> 0."""
    P = phi_kz(N, precision)
    log_A, log_B = kz_pair(N, precision, P)
    e = sigma_lift(P)
    c = -P.ring.two_pi_i
    rep = Report("kz-twist")
    rep.add(check_from_series("A_KZ", log_A - scale_letters(e.log_plus, [c, 1])))
    rep.add(check_from_series("B_KZ", log_B - scale_letters(e.log_minus, [c, 1])))
    for name, s in (("grouplike A_KZ", log_A), ("grouplike B_KZ", log_B)):
        ex = lie_exp(s)
        rep.add(Check(name, ex.grouplike_residual(), ex.err))
    return rep


def _tilde(alpha: LieSeries, eta_plus: LieSeries, eta_minus: LieSeries, sign: int) -> LieSeries:
    """alpha~(eta_+, eta_-) = ((e^{ad eta} - 1)/ad eta)(alpha(eta_+, eta_-)), eta = eta_sign."""
    N = eta_plus.N
    v = substitute_lie(alpha, [eta_plus, eta_minus])
    return ad_series(_ad_fn("(e^z-1)/z", N, alpha.ring), eta_plus if sign > 0 else eta_minus, v)


def check_lie_rell(alpha_plus: LieSeries, alpha_minus: LieSeries) -> Report:
    """The three relations in Lie P_{1,2} = Lie(xi_+, xi_-) with X_1^pm = e^{xi_pm},
    X_2^pm = (X_1^pm)^-1 and sigma_1^2 = (Y, X)."""
    N = alpha_plus.N
    ring = alpha_plus.ring
    xp, xm = _gens(alpha_plus.alg, ring, N)
    s2 = _group_commutator(xm, xp)  # log sigma_1^2
    x2p, x2m = -xp, -xm
    rep = Report("lie-rell")
    ap = _tilde(alpha_plus, xp, xm, 1)
    am = _tilde(alpha_minus, xp, xm, -1)
    r1 = ap + Ad(xp, _tilde(alpha_plus, bch(x2p, -s2), bch(s2, x2m), 1))
    r2 = am + Ad(xm, _tilde(alpha_minus, bch(-s2, x2p), bch(x2m, s2), -1))
    r3 = (Ad(_group_commutator(xm, xp), ap) - Ad(xm, ap)
          + Ad(bch_many([xm, xp, -xm]), am) - am)
    rep.add(check_from_series("relation_plus", r1))
    rep.add(check_from_series("relation_minus", r2))
    rep.add(check_from_series("relation_mixed", r3))
    return rep


def b3_generators(N: int, ring=QQ):
    """u_+ = (0, (ad xi_-/(1 - e^{-ad xi_-}))(xi_+)) and u_- = ((ad xi_+/(1 - e^{-ad xi_+}))(xi_-), 0)."""
    F = fxy(N)
    xp, xm = _gens(F, ring, N)
    zero = xp.like({}, 0)
    c = _ad_fn("z/(1-e^-z)", N, ring)
    return (zero, ad_series(c, xm, xp)), (ad_series(c, xp, xm), zero)
