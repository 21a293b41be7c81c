"""Iterated Mellin transforms of Eisenstein series and the series theta~, psi~.

Integrals run along the imaginary axis, f(it) = sum_m c_m e^{-2 pi m t}:

    F_{t0}^{f_1..f_n}(s) = int_{t0 <= t_1 <= ... <= t_n < oo} prod f_i(i t_i) t_i^{s_i - 1} dt_i

continued analytically from Re(s) << 0.  The integral is evaluated from the
top variable down: every partial integral is a finite sum of terms
t^p e^{-2 pi K t}, and

    int_t^oo u^p e^{-a u} du = e^{-a t} sum_{i <= p} p!/i! t^i / a^{p-i+1}    (a > 0)
    int_t^oo u^p du         = -t^{p+1} / (p+1)                           (continued)

G (the integral over 0 <= t_1 <= ... <= t_n <= t0) is never integrated near
0; modularity turns it into an F at 1/t0.  L* = sum_k G^{f_1..f_k} F^{f_k+1..f_n}
does not depend on t0.

The second half builds theta~ and psi~ in the free algebra on the string
letters g{l}_{k}, lets SL_2 act on the letters through its action on
Der(t_{1,2}), and checks the SL_2(Z) relations and the action on the KZ pair.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath
import sympy

from . import cache
from .alphabet import Alphabet
from .derivation import Derivation
from .lie import LieSeries, bch, substitute_lie
from .linalg import nullspace
from .lyndon import standard_factorization
from .membership import Ad, t12_free
from .ncseries import NCSeries
from .report import BOUND_FACTOR, Check, Report, check_from_series
from .scalars import CC, QQ, Ball
from .special import delta, e_minus, ell_element, string_element

log = logging.getLogger(__name__)

MELLIN_VERSION = 1
DEFAULT_M = 60
GUARD = 15


class PoleError(ValueError):
    """An argument tuple lies on a pole hyperplane of the iterated Mellin transform."""

    def __init__(self, window, target, message):
        super().__init__(message)
        self.window = window
        self.target = target


class MellinError(ArithmeticError):
    """Internal consistency check of a Mellin value failed."""


# ----------------------------------------------------------------------------
# q-expansions
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class QForm:
    """A function f(it) = sum_{m <= M} c_m e^{-2 pi m t} given by exact rational coefficients.

    ``weight`` is set for level-one modular forms (f(-1/tau) = tau^w f(tau));
    only those admit G.  ``tail_coeff(m)`` bounds |c_m| for m > M (None means
    the expansion is finite).
    """

    name: str
    coeffs: tuple
    weight: int | None = None
    tail_coeff: object = field(default=None, compare=False, repr=False)

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1

    @property
    def constant(self):
        return self.coeffs[0]

    def tail(self, ctx, t0, terms: int = 60):
        """Bound for sum_{m > M} |c_m| e^{-2 pi (m - M - 1) t0}."""
        if self.tail_coeff is None:
            return ctx.mpf(0)
        M = self.M
        q = ctx.exp(-2 * ctx.pi * t0)
        total = ctx.mpf(0)
        for j in range(terms):
            total += self.tail_coeff(M + 1 + j) * q ** j
        # remaining terms: the majorant grows polynomially, the ratio is at most 2q
        last = self.tail_coeff(M + 1 + terms) * q ** terms
        r = 2 * q
        return total + last / (1 - r) if r < 1 else ctx.inf


@dataclass(frozen=True)
class EisensteinForm(QForm):
    """E_{2l+2} normalized to 1 at i oo."""

    l: int = 1


def _bernoulli(n) -> Fraction:
    b = sympy.bernoulli(n)
    return Fraction(int(b.p), int(b.q))


def eisenstein_q(l: int, M: int = DEFAULT_M) -> EisensteinForm:
    """E_w, w = 2l+2: c(0) = 1, c(n) = -(2w/B_w) sigma_{w-1}(n) for 1 <= n <= M."""
    if l < 1 or M < 1:
        raise ValueError("need l >= 1 and M >= 1")
    w = 2 * l + 2
    k = -Fraction(2 * w) / _bernoulli(w)
    coeffs = (Fraction(1),) + tuple(k * int(sympy.divisor_sigma(n, w - 1)) for n in range(1, M + 1))
    zbound = float(mpmath.zeta(w - 1))
    kabs = abs(float(k))

    def tail_coeff(m):
        # sigma_{w-1}(m) <= zeta(w-1) m^{w-1}
        return kabs * zbound * m ** (w - 1)

    return EisensteinForm(f"E{w}", coeffs, w, tail_coeff, l)


def constant_form(value=1) -> QForm:
    """The constant function, not modular (no G)."""
    return QForm(f"const({value})", (Fraction(value),))


# ----------------------------------------------------------------------------
# values
# ----------------------------------------------------------------------------


@dataclass
class MellinValue:
    """A complex value with an absolute error bound and the inputs that produced it."""

    kind: str
    forms: tuple
    args: tuple
    value: object
    err: object
    t0: object
    M: int
    precision: int
    check: dict = field(default_factory=dict)

    @property
    def ball(self) -> Ball:
        return Ball(self.value, self.err)

    def to_json(self) -> dict:
        n = self.precision + 5
        return {
            "kind": self.kind,
            "forms": list(self.forms),
            "args": list(self.args),
            "t0": mpmath.nstr(self.t0, 20),
            "M": self.M,
            "precision": self.precision,
            "re": mpmath.nstr(mpmath.re(self.value), n, strip_zeros=False),
            "im": mpmath.nstr(mpmath.im(self.value), n, strip_zeros=False),
            "err": mpmath.nstr(self.err, 5),
            "check": {k: mpmath.nstr(v, 5) if not isinstance(v, str) else v
                      for k, v in self.check.items()},
        }

    @classmethod
    def from_json(cls, d: dict) -> "MellinValue":
        ctx = CC(d["precision"] + GUARD).ctx
        return cls(d["kind"], tuple(d["forms"]), tuple(d["args"]),
                   ctx.mpc(ctx.mpf(d["re"]), ctx.mpf(d["im"])), ctx.mpf(d["err"]),
                   ctx.mpf(d["t0"]), d["M"], d["precision"],
                   {k: (ctx.mpf(v) if k != "note" else v) for k, v in d.get("check", {}).items()})


# ----------------------------------------------------------------------------
# the F engine
# ----------------------------------------------------------------------------


def _integrate_up(ctx, H: dict, exponents: dict, s: int, fold) -> dict:
    """t -> int_t^oo f(u) u^{s-1} H(u) du for f = sum exponents[m] e^{-2 pi m u}.

    ``fold`` combines coefficients: plain addition for values, absolute values
    for majorants.
    """
    two_pi = 2 * ctx.pi
    prod: dict = {}
    for K, poly in H.items():
        for m, cm in exponents.items():
            acc = prod.get(K + m)
            if acc is None:
                acc = prod[K + m] = [ctx.zero] * (len(poly) + s - 1)
            elif len(acc) < len(poly) + s - 1:
                acc.extend([ctx.zero] * (len(poly) + s - 1 - len(acc)))
            for p, c in enumerate(poly):
                if c:
                    acc[p + s - 1] += fold(cm * c)
    out: dict = {}
    for K, poly in prod.items():
        if K == 0:
            new = [ctx.zero] * (len(poly) + 1)
            for p, c in enumerate(poly):
                new[p + 1] += fold(-c / (p + 1))
        else:
            a = two_pi * K
            inv = 1 / a
            new = [ctx.zero] * len(poly)
            for p, c in enumerate(poly):
                if not c:
                    continue
                # p!/i! / a^{p-i+1}, built from i = p downwards
                w = c * inv
                new[p] += fold(w)
                for i in range(p - 1, -1, -1):
                    w = w * (i + 1) * inv
                    new[i] += fold(w)
        out[K] = new
    return out


def _evaluate(ctx, H: dict, t, fold):
    two_pi = 2 * ctx.pi
    total = ctx.zero
    for K, poly in H.items():
        v = ctx.zero
        for c in reversed(poly):
            v = v * t + c
        total += fold(ctx.exp(-two_pi * K * t) * v)
    return total


def _exponents(ctx, form: QForm) -> dict:
    return {m: ctx.mpf(c.numerator) / c.denominator for m, c in enumerate(form.coeffs) if c}


def _check_positive(s):
    for i, si in enumerate(s):
        if int(si) != si or si < 1:
            raise ValueError(f"argument s_{i + 1} = {si}: only positive integers are supported")


def _f_raw(ctx, forms, s, t0):
    """(value, error bound) of F_{t0}^{forms}(s), s positive integers."""
    _check_positive(s)
    t0 = ctx.mpf(t0)
    exps = [_exponents(ctx, f) for f in forms]
    plain = lambda x: x  # noqa: E731
    absf = ctx.fabs
    H = {0: [ctx.one]}
    for ex, sj in zip(reversed(exps), reversed(s)):
        H = _integrate_up(ctx, H, ex, sj, plain)
    value = _evaluate(ctx, H, t0, plain)
    # majorant of the formal expression bounds the rounding error
    Hm = {0: [ctx.one]}
    for ex, sj in zip(reversed(exps), reversed(s)):
        Hm = _integrate_up(ctx, Hm, ex, sj, absf)
    size = _evaluate(ctx, Hm, t0, absf)
    err = size * ctx.mpf(10) ** (-(ctx.dps - 3)) * (1 + sum(s))
    # q-truncation: replace one form by its tail, the others by their majorants
    for i, f in enumerate(forms):
        tau = f.tail(ctx, t0)
        if not tau:
            continue
        Hm = {0: [ctx.one]}
        for j in range(len(forms) - 1, -1, -1):
            ex = {f.M + 1: tau} if j == i else exps[j]
            Hm = _integrate_up(ctx, Hm, ex, s[j], absf)
        err += _evaluate(ctx, Hm, t0, absf)
    return value, err


def _windows(n):
    for i in range(n):
        for j in range(i, n):
            yield i, j


def _pole_check(forms, s, kind):
    """Reject window sums s_i+..+s_j equal to 0 (F, L*) or to the weight sum (G, L*)."""
    for i, j in _windows(len(s)):
        tot = sum(s[i:j + 1])
        win = tuple(range(i + 1, j + 2))
        if tot == 0:
            raise PoleError(win, 0, f"pole: window {set(win)} has s-sum 0")
        if kind in ("G", "L*"):
            wsum = sum(f.weight for f in forms[i:j + 1])
            if tot == wsum:
                raise PoleError(win, wsum,
                                f"pole: window {set(win)} has s-sum equal to the weight {wsum}")


def _need_weights(forms):
    for f in forms:
        if f.weight is None:
            raise ValueError(f"{f.name} has no weight: G needs modular forms")


def _g_raw(ctx, forms, s, t0):
    """G_{t0}^{f_1..f_k}(s) = (-1)^{sum l + k} F_{1/t0}^{f_k..f_1}(w_k - s_k, ..., w_1 - s_1)."""
    _need_weights(forms)
    if not forms:
        return ctx.one, ctx.zero
    sign = (-1) ** sum(f.weight // 2 for f in forms)  # l + 1 = w / 2
    rev = list(reversed(forms))
    args = [f.weight - si for f, si in zip(rev, reversed(s))]
    v, e = _f_raw(ctx, rev, args, 1 / ctx.mpf(t0))
    return sign * v, e


def _ctx(precision):
    return CC(int(precision) + GUARD).ctx


def iterated_integral(kind: str, forms, s, t0=1, precision: int = 30) -> MellinValue:
    """F_{t0} or G_{t0} of the given forms at integer arguments (depth <= 3)."""
    forms, s = tuple(forms), tuple(int(x) for x in s)
    if len(forms) != len(s):
        raise ValueError("one argument per form")
    if len(forms) > 3:
        raise ValueError("depth at most 3 is supported")
    ctx = _ctx(precision)
    t0 = ctx.mpf(t0)
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    if kind == "F":
        _pole_check(forms, s, "F")
        v, e = _f_raw(ctx, forms, s, t0)
    elif kind == "G":
        _need_weights(forms)
        _pole_check(forms, s, "G")
        v, e = _g_raw(ctx, forms, s, t0)
    else:
        raise ValueError(f"kind must be F or G, not {kind!r}")
    M = min(f.M for f in forms) if forms else 0
    return MellinValue(kind, tuple(f.name for f in forms), s, ctx.mpc(v), e, t0, M, int(precision))


def _l_star_at(ctx, forms, s, t0):
    total = Ball(ctx.mpc(0), ctx.mpf(0))
    for k in range(len(forms) + 1):
        g = Ball(*_g_raw(ctx, forms[:k], s[:k], t0))
        f = Ball(*_f_raw(ctx, forms[k:], s[k:], t0)) if k < len(forms) else Ball(ctx.one, ctx.zero)
        total = total + g * f
    return total


def _store_name(forms, s, t0, M, precision) -> str:
    key = json.dumps([list(forms), list(s), str(t0), M, precision])
    return f"mellin-{hashlib.sha256(key.encode()).hexdigest()[:16]}.json"


def l_star(forms, s, precision: int = 30, t0=1, t0_check=None, persist: bool = False) -> MellinValue:
    """L*_{f_1..f_n}(s): the t0-independent sum of G.F products.

    The value is recomputed at a second base point (``t0_check``, default
    1.25 t0) and the two must agree within their combined error.
    """
    forms, s = tuple(forms), tuple(int(x) for x in s)
    if len(forms) != len(s):
        raise ValueError("one argument per form")
    _need_weights(forms)
    _pole_check(forms, s, "L*")
    M = min(f.M for f in forms)
    names = tuple(f.name for f in forms)
    name = _store_name(names, s, t0, M, precision)
    if persist:
        payload = cache.load("mellin", name, MELLIN_VERSION)
        if payload is not None:
            return MellinValue.from_json(payload)
    ctx = _ctx(precision)
    t0 = ctx.mpf(t0)
    t1 = ctx.mpf(t0_check) if t0_check is not None else t0 * ctx.mpf(5) / 4
    a = _l_star_at(ctx, forms, s, t0)
    b = _l_star_at(ctx, forms, s, t1)
    diff = ctx.fabs(a.value - b.value)
    if diff > 10 * (a.err + b.err) + ctx.mpf(10) ** (-(ctx.dps - GUARD + 5)):
        raise MellinError(f"L* of {names} at {s} depends on t0: |difference| = {ctx.nstr(diff, 5)}")
    out = MellinValue("L*", names, s, a.value, a.err, t0, M, int(precision),
                      {"t0_alt": t1, "t0_difference": diff})
    if persist:
        try:
            cache.store("mellin", name, out.to_json(), MELLIN_VERSION)
        except cache.CacheError as exc:
            log.warning("%s", exc)
    return out


# ----------------------------------------------------------------------------
# normalized values
# ----------------------------------------------------------------------------


def l_sharp(ls, ks, precision: int = 30, M: int = DEFAULT_M, persist: bool = False) -> MellinValue:
    """L#_{l}(k+1) = (2 pi i)^{2 sum l + n} i^{sum k + n} L*_{E_{2l_1+2},..}(k_1+1, ..)."""
    ls, ks = tuple(int(x) for x in ls), tuple(int(x) for x in ks)
    if len(ls) != len(ks) or not ls:
        raise ValueError("ls and ks must be non-empty and of equal length")
    for l, k in zip(ls, ks):
        if l < 1:
            raise ValueError(f"l = {l}: need l >= 1")
        if not 0 <= k <= 2 * l:
            raise ValueError(f"k = {k} out of range 0..{2 * l} for l = {l}")
    forms = [eisenstein_q(l, M) for l in ls]
    v = l_star(forms, [k + 1 for k in ks], precision, persist=persist)
    ctx = _ctx(precision)
    n = len(ls)
    factor = (2 * ctx.pi * ctx.j) ** (2 * sum(ls) + n) * ctx.j ** ((sum(ks) + n) % 4)
    return MellinValue("L#", tuple(f"l={l}" for l in ls), tuple(k + 1 for k in ks),
                       factor * v.value, ctx.fabs(factor) * v.err, v.t0, v.M, v.precision,
                       dict(v.check))


def a2l(L: int) -> list:
    """[a_0, a_2, ..., a_2L] with 1 + sum_l a_2l x^{2l+2} = (x / (e^{x/2} - e^{-x/2}))^2."""
    if L < 0:
        raise ValueError("L must be non-negative")
    n = L + 2  # coefficients of x^0, x^2, ..., x^{2L+2} in powers of y = x^2
    # sinh(x/2)/(x/2) = sum y^j / (4^j (2j+1)!)
    s = [Fraction(1, 4 ** j * factorial(2 * j + 1)) for j in range(n)]
    inv = [Fraction(0)] * n
    inv[0] = Fraction(1)
    for j in range(1, n):
        inv[j] = -sum(s[i] * inv[j - i] for i in range(1, j + 1))
    sq = [sum(inv[i] * inv[j - i] for i in range(j + 1)) for j in range(n)]
    return [sq[l + 1] for l in range(L + 1)]


# ----------------------------------------------------------------------------
# SL_2 on the strings w_k = (ad e_-)^k(delta_2l)/k!
# ----------------------------------------------------------------------------
#
# g = (a b; c d) acts on t_{1,2} by x -> d x + b y, y -> c x + a y.  This is
# the realization in which (0 1; 0 0) integrates e_- (x -> y) and (0 0; 1 0)
# integrates e_+ (y -> x); with it g -> rho(g) is a homomorphism.


class SpanNotClosed(ArithmeticError):
    """A conjugated string element left the span of its string."""


def sl2_automorphism(g) -> tuple:
    """Matrix (in the basis x, y; columns are images) of the t_{1,2} automorphism of g."""
    (a, b), (c, d) = g
    return ((d, c), (b, a))


def _linear_images(alg, mat, ring, N):
    """Images of x, y under the linear automorphism whose columns are ``mat``."""
    (a, b), (c, d) = mat
    x = LieSeries(alg, {(0,): ring.one}, ring, N)
    y = LieSeries(alg, {(1,): ring.one}, ring, N)
    return [x.scale(ring.coerce(a)) + y.scale(ring.coerce(c)),
            x.scale(ring.coerce(b)) + y.scale(ring.coerce(d))]


def _inverse2(mat):
    (a, b), (c, d) = mat
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def apply_sl2(s: LieSeries, g) -> LieSeries:
    """Image of a t_{1,2} element under the automorphism of g."""
    imgs = _linear_images(s.alg, sl2_automorphism(g), s.ring, s.N)
    return substitute_lie(s, imgs)


def _der_in_ring(D, ring):
    if D.ring == ring:
        return D
    return Derivation(D.alg, [im.with_ring(ring) for im in D.images], D.name)


def conjugate_derivation(D, g, ring):
    """phi_g D phi_g^{-1}."""
    Dr = _der_in_ring(D, ring)
    mat = sl2_automorphism(g)
    phi = _linear_images(D.alg, mat, ring, D.N)
    phinv = _linear_images(D.alg, _inverse2(mat), ring, D.N)
    return Derivation(D.alg, [substitute_lie(Dr(v), phi) for v in phinv])


_STRINGS: dict = {}


def string_derivations(l: int, N: int | None = None) -> list:
    """[w_0, ..., w_2l], exact derivations of t_{1,2} truncated at degree N (default 2l+3)."""
    N = 2 * l + 3 if N is None else int(N)
    if (l, N) not in _STRINGS:
        D = delta(l, 2, N)
        em = e_minus(2, N)
        _STRINGS[(l, N)] = [string_element(D, k, em) for k in range(2 * l + 1)]
    return _STRINGS[(l, N)]


def _der_vector(D) -> dict:
    return {(i, k): c for i, im in enumerate(D.images) for k, c in im.terms.items()}


@dataclass
class IrrepMatrix:
    """rho_2l(g) on the basis w_0..w_2l: rho(g) w_j = sum_i matrix[i][j] w_i."""

    l: int
    g: tuple | None
    matrix: list
    closure_residual: object = 0

    def __matmul__(self, other: "IrrepMatrix") -> "IrrepMatrix":
        n = len(self.matrix)
        m = [[sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
        return IrrepMatrix(self.l, None, m)

    def max_diff(self, other: "IrrepMatrix"):
        return max(abs(a - b) for ra, rb in zip(self.matrix, other.matrix) for a, b in zip(ra, rb))

    def is_identity(self, tol=0) -> bool:
        n = len(self.matrix)
        return all(abs(self.matrix[i][j] - (1 if i == j else 0)) <= tol
                   for i in range(n) for j in range(n))


def _is_rational(v) -> bool:
    return isinstance(v, (int, Fraction)) or type(v).__name__ == "mpq"


def sl2_irrep_matrix(g, l: int, precision: int = 30) -> IrrepMatrix:
    """Matrix of w -> phi_g w phi_g^{-1} on span(w_0..w_2l), computed in Der(t_{1,2}).

    Rational g is handled exactly, anything else in complex arithmetic.
    Raises :class:`SpanNotClosed` when a conjugate leaves the span.
    """
    g = tuple(tuple(row) for row in g)
    ws = string_derivations(l)
    n = len(ws)
    cols = [_der_vector(w) for w in ws]
    if all(_is_rational(v) for row in g for v in row):
        gq = tuple(tuple(QQ.coerce(v) for v in row) for row in g)
        if gq[0][0] * gq[1][1] - gq[0][1] * gq[1][0] != 1:
            raise ValueError("g must have determinant 1")
        mat = [[None] * n for _ in range(n)]
        for j, w in enumerate(ws):
            v = _der_vector(conjugate_derivation(w, gq, QQ))
            ker = nullspace(cols + [v], n + 1)
            if len(ker) != 1 or ker[0].get(n, 0) == 0:
                raise SpanNotClosed(f"conjugate of w_{j} (l={l}) is not in the string span")
            lead = ker[0][n]
            for i in range(n):
                mat[i][j] = Fraction(-ker[0].get(i, 0) / lead)
        return IrrepMatrix(l, g, mat, 0)
    ring = CC(precision + GUARD)
    ctx = ring.ctx
    gc = tuple(tuple(ring.coerce(v) for v in row) for row in g)
    if ctx.fabs(gc[0][0] * gc[1][1] - gc[0][1] * gc[1][0] - 1) > ctx.mpf(10) ** (-precision):
        raise ValueError("g must have determinant 1")
    keys = sorted({k for c in cols for k in c})
    A = ctx.matrix(len(keys), n)
    for j, c in enumerate(cols):
        for r, k in enumerate(keys):
            if k in c:
                A[r, j] = ring.coerce(c[k])
    AH = A.H
    normal = AH * A
    mat = [[None] * n for _ in range(n)]
    worst = ctx.zero
    for j, w in enumerate(ws):
        v = _der_vector(conjugate_derivation(w, gc, ring))
        b = ctx.matrix([v.get(k, 0) for k in keys])
        coef = ctx.lu_solve(normal, AH * b)
        resid = A * coef - b
        outside = [ctx.fabs(v[k]) for k in set(v) - set(keys)]
        worst = max([worst] + [ctx.fabs(resid[r]) for r in range(len(keys))] + outside)
        for i in range(n):
            mat[i][j] = coef[i]
    if worst > ctx.mpf(10) ** (-(precision - 5)):
        raise SpanNotClosed(f"conjugated string for l={l} leaves the span "
                            f"(residual {ctx.nstr(worst, 5)})")
    return IrrepMatrix(l, g, mat, worst)


# ----------------------------------------------------------------------------
# theta~ and psi~
# ----------------------------------------------------------------------------


def letter(l: int, k: int) -> str:
    return f"g{l}_{k}"


def parse_letter(sym: str) -> tuple:
    l, k = sym[1:].split("_")
    return int(l), int(k)


def theta_alphabet(W: int) -> Alphabet:
    """Letters g{l}_{k} (l >= 1, 0 <= k <= 2l) of degree 2l+2 <= W."""
    syms, degs = [], []
    for l in range(1, (W - 2) // 2 + 1):
        for k in range(2 * l + 1):
            syms.append(letter(l, k))
            degs.append(2 * l + 2)
    if not syms:
        raise ValueError("W must be at least 4")
    return Alphabet.weighted(syms, degs)


def _theta_words(W: int) -> list:
    """All words ((l_1, k_1), ...) of total degree <= W, empty word included."""
    out, frontier = [()], [()]
    while frontier:
        nxt = []
        for w in frontier:
            d = sum(2 * l + 2 for l, _ in w)
            for l in range(1, (W - d - 2) // 2 + 1):
                nxt.extend(w + ((l, k),) for k in range(2 * l + 1))
        out.extend(nxt)
        frontier = nxt
    return out


def psi_rational_coefficient(word) -> Fraction:
    """1/((k_1+1)(k_1+k_2+2)...) * prod a_2l_i: the psi~ coefficient without its (2 pi i) power."""
    a = a2l(max((l for l, _ in word), default=0))
    r, acc = Fraction(1), 0
    for l, k in word:
        acc += k + 1
        r *= a[l] / acc
    return r


@dataclass
class ThetaSeries:
    """theta~ or psi~ truncated at weight W, with a per-coefficient error bound."""

    kind: str
    W: int
    precision: int
    series: NCSeries
    errors: dict
    conjugate: bool = False

    @property
    def alphabet(self) -> Alphabet:
        return self.series.alphabet

    def coefficient(self, word):
        """Coefficient of a word given as [(l, k), ...]."""
        key = tuple(self.alphabet.index(letter(l, k)) for l, k in word)
        return self.series.terms.get(key, 0)

    def to_json(self) -> dict:
        ctx = self.series.ring.ctx
        n = self.precision + 5
        terms = []
        for w, c in sorted(self.series.terms.items()):
            terms.append({"word": [self.alphabet.symbols[i] for i in w],
                          "re": ctx.nstr(c.real, n, strip_zeros=False),
                          "im": ctx.nstr(c.imag, n, strip_zeros=False),
                          "err": ctx.nstr(self.errors.get(w, 0), 5)})
        return {"kind": self.kind, "W": self.W, "precision": self.precision,
                "conjugate": self.conjugate, "terms": terms}


def _l_sharp_job(args):
    ls, ks, precision, M = args
    v = l_sharp(ls, ks, precision, M)
    digits = precision + GUARD + 5
    return (ls, ks), (mpmath.nstr(mpmath.re(v.value), digits),
                      mpmath.nstr(mpmath.im(v.value), digits), mpmath.nstr(v.err, 5))


def l_sharp_values(words, precision: int = 30, M: int = DEFAULT_M, jobs: int = 1) -> dict:
    """{(ls, ks): Ball} for every distinct word, optionally on a process pool."""
    ring = CC(precision + GUARD)
    ctx = ring.ctx
    todo = sorted({(tuple(l for l, _ in w), tuple(k for _, k in w)) for w in words if w})
    args = [(ls, ks, precision, M) for ls, ks in todo]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_l_sharp_job, args))
        return {key: Ball(ctx.mpc(ctx.mpf(re), ctx.mpf(im)), ctx.mpf(e)) for key, (re, im, e) in raw}
    out = {}
    for ls, ks, _, _ in args:
        v = l_sharp(ls, ks, precision, M)
        out[(ls, ks)] = Ball(ring.coerce(v.value), v.err)
    return out


def assemble_series(kind: str, W_max: int, precision: int = 30, conjugate: bool = False,
                    M: int = DEFAULT_M, jobs: int = 1, tolerance=None) -> ThetaSeries:
    """theta~ or psi~ truncated at total weight W_max.

    theta~: word coefficient (2 pi i)^n L#_{l}(k+1) prod a_2l_i.
    psi~:   word coefficient (2 pi i)^{sum (2l_i+2)} prod a_2l_i / ((k_1+1)(k_1+k_2+2)...).
    ``conjugate`` returns the complex conjugate series (2 pi i -> -2 pi i, i -> -i).
    Raises :class:`MellinError` if a propagated error exceeds ``tolerance``.
    """
    if kind not in ("theta", "psi"):
        raise ValueError("kind must be 'theta' or 'psi'")
    ring = CC(precision + GUARD)
    ctx = ring.ctx
    alph = theta_alphabet(W_max)
    words = _theta_words(W_max)
    tpi = ring.two_pi_i
    a = a2l((W_max - 2) // 2)
    terms, errors = {}, {}
    values = l_sharp_values(words, precision, M, jobs) if kind == "theta" else {}
    for w in words:
        key = tuple(alph.index(letter(l, k)) for l, k in w)
        if not w:
            terms[key] = ring.one
            continue
        pa = Fraction(1)
        for l, _ in w:
            pa *= a[l]
        if kind == "theta":
            b = values[(tuple(l for l, _ in w), tuple(k for _, k in w))]
            factor = tpi ** len(w) * ring.coerce(pa)
            c, e = factor * b.value, ctx.fabs(factor) * b.err
        else:
            c = ring.coerce(psi_rational_coefficient(w)) * tpi ** sum(2 * l + 2 for l, _ in w)
            e = ctx.fabs(c) * ring.eps() * 10
        if conjugate:
            c = ctx.conj(c)
        terms[key] = c
        errors[key] = e
        if tolerance is not None and e > tolerance:
            raise MellinError(f"coefficient error {ctx.nstr(e, 3)} of {w} exceeds the tolerance")
    err = sum(errors.values(), ctx.zero)
    return ThetaSeries(kind, W_max, int(precision), NCSeries(alph, terms, ring, W_max, err),
                       errors, conjugate)


def psi_rational(W: int) -> NCSeries:
    """psi~ with every (2 pi i)^weight factor dropped: an exact series over QQ.

    Rescaling each letter by a power of its degree is a Hopf automorphism, so
    this series is group-like iff psi~ is.
    """
    alph = theta_alphabet(W)
    terms = {tuple(alph.index(letter(l, k)) for l, k in w): QQ.coerce(psi_rational_coefficient(w))
             for w in _theta_words(W)}
    return NCSeries(alph, terms, QQ, W)


def act_sl2(s: NCSeries, g, precision: int = 30) -> NCSeries:
    """Letterwise action of g: g{l}_{j} -> sum_i rho_2l(g)[i][j] g{l}_{i}."""
    alph = s.alphabet
    ring = s.ring
    mats = {}
    images = []
    for sym in alph.symbols:
        l, j = parse_letter(sym)
        if l not in mats:
            mats[l] = sl2_irrep_matrix(g, l, precision).matrix
        m = mats[l]
        images.append(NCSeries(alph, {(alph.index(letter(l, i)),): ring.coerce(m[i][j])
                                      for i in range(2 * l + 1) if m[i][j] != 0}, ring, s.N))
    return s.substitute(images)


def _unit_residual(s: NCSeries):
    worst = 0
    for w, c in s.terms.items():
        r = abs(c - 1) if not w else abs(c)
        worst = r if r > worst else worst
    if () not in s.terms:
        worst = max(worst, 1)
    return worst


ALPHA = ((0, -1), (1, 0))
BETA = ((1, -1), (1, 0))


def _matmul2(g, h):
    return tuple(tuple(sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def check_sl2z_relations(W_max: int = 8, precision: int = 30, jobs: int = 1,
                         tolerance=mpmath.mpf("1e-6")) -> Report:
    """Group-likeness of theta~ and psi~, theta~ alpha(theta~) = 1 and
    (theta~ psi~) beta(theta~ psi~) beta^2(theta~ psi~) = 1, truncated at weight W_max."""
    th = assemble_series("theta", W_max, precision, jobs=jobs)
    ps = assemble_series("psi", W_max, precision)
    T, P = th.series, ps.series
    rep = Report("sl2z")
    rep.add(Check("grouplike_theta", T.grouplike_residual(), T.err, tolerance))
    rep.add(Check("grouplike_psi_exact", psi_rational(W_max).grouplike_residual(), 0, exact=True))
    r_alpha = T * act_sl2(T, ALPHA, precision)
    rep.add(Check("theta_alpha", _unit_residual(r_alpha), r_alpha.err, tolerance))
    X = T * P
    r_beta = X * act_sl2(X, BETA, precision) * act_sl2(X, _matmul2(BETA, BETA), precision)
    rep.add(Check("theta_psi_beta", _unit_residual(r_beta), r_beta.err, tolerance))
    rep.values.update({"W_max": W_max, "precision": precision})
    return rep


# ----------------------------------------------------------------------------
# action on the KZ pair
# ----------------------------------------------------------------------------


def series_derivation(lie: LieSeries, N: int, ring) -> Derivation:
    """Image in Der(t_{1,2}) (degree <= N) of a Lie series in the letters g{l}_{k}."""
    alg = t12_free(N)
    zero_im = LieSeries.zero(alg, ring, N)
    zero = Derivation(alg, [zero_im, zero_im])
    memo: dict = {}

    def der(key):
        if key in memo:
            return memo[key]
        if len(key) == 1:
            l, k = parse_letter(lie.alg.alphabet.symbols[key[0]])
            if 2 * l + 3 > N:
                out = zero
            else:
                out = _der_in_ring(string_derivations(l, N)[k], ring)
        else:
            u, v = standard_factorization(key)
            out = der(u).bracket(der(v))
        memo[key] = out
        return out

    D = zero
    for key, c in lie.terms.items():
        if lie.alg.key_degree(key) + 1 > N:
            continue
        D = D + der(key).scale(ring.coerce(c))
    return D


def theta_derivation(N: int, precision: int = 30, conjugate: bool = True, kind: str = "theta"):
    """log of theta (or psi) as a derivation of t_{1,2} up to degree N, and the series used.

    Its coordinates are the rational combinations of (2 pi i)^n L# values that
    the action on the KZ pair ties to multiple zeta values.
    """
    W = max(4, N - 1 if (N - 1) % 2 == 0 else N - 2)
    ring = CC(precision + 10)
    ts = assemble_series(kind, W, precision, conjugate=conjugate and kind == "theta")
    lie = ts.series.log()
    return series_derivation(lie.with_ring(ring), N, ring), ts


def check_theta_action(N: int = 4, precision: int = 30, conjugate: bool = True,
                       tolerance=mpmath.mpf("1e-5")) -> Report:
    """e^{(2 pi i)^2 delta_0 / 4} alpha theta : (A, B) -> (A B A^-1, A^-1) and
    e^{-(2 pi i)^2 delta_0 / 12} psi T : (A, B) -> (A, B A) on the KZ pair, T = (1 1; 0 1).

    Operators compose right to left (theta, resp. T, acts first).  With
    ``conjugate`` the complex conjugate of theta~ is used (see the README for
    why); the literal theta~ agrees with it below degree 5.
    """
    from .assoc import kz_pair, phi_kz

    P = phi_kz(N, precision)
    ring = P.ring
    log_A, log_B = kz_pair(N, precision, P)
    d0 = _der_in_ring(delta(0, 2, N), ring)
    tpi2 = ring.two_pi_i ** 2
    rep = Report("theta-action")
    D_theta, th = theta_derivation(N, precision, conjugate)
    D_psi, _ = theta_derivation(N, precision, kind="psi")

    def theorem(s):
        s = D_theta.exp_apply(s, bound=N)
        s = apply_sl2(s, ALPHA)
        return d0.scale(tpi2 / 4).exp_apply(s, bound=N)

    def remark(s):
        s = apply_sl2(s, ((1, 1), (0, 1)))
        s = D_psi.exp_apply(s, bound=N)
        return d0.scale(-tpi2 / 12).exp_apply(s, bound=N)

    extra = th.series.err
    for name, r in (("theta_A", theorem(log_A) - Ad(log_A, log_B)),
                    ("theta_B", theorem(log_B) + log_A),
                    ("psi_A", remark(log_A) - log_A),
                    ("psi_B", remark(log_B) - bch(log_B, log_A))):
        rep.add(Check(name, r.max_norm(), r.err + extra, tolerance))
    t = ell_element(log_A.alg, "t12", ring, N)
    c = ring.coerce(mpmath.mpf(3) / 7)
    rep.add(check_from_series("delta0_fixes_t12", d0.scale(c).exp_apply(t, bound=N) - t, tolerance))
    rep.values.update({"N": N, "precision": precision,
                       "theta": "conjugate" if conjugate else "literal"})
    return rep


@dataclass
class ThetaRelation:
    """One coordinate of theta acting on t_{1,2}: value = sum_w r_w (2 pi i)^n L#_w.

    ``coefficients`` maps a word ((l_1, k_1), ...) to the rational r_w.  The
    value is only evaluated numerically; membership in the span of MZVs of the
    matching weight is not certified.
    """

    generator: str
    key: tuple
    coefficients: dict
    value: object
    err: object


def theta_relation(generator: str, key: tuple, N: int, precision: int = 30,
                   conjugate: bool = False) -> ThetaRelation:
    """Coefficient of the Lie basis element ``key`` in theta(generator), generator x1 or y1.

    A word g_1 ... g_n of theta~ acts as the composite D_1 o ... o D_n of its
    string derivations, so each coordinate is linear in the theta~ coefficients
    with exact rational weights.
    """
    if generator not in ("x1", "y1"):
        raise ValueError("generator must be x1 or y1")
    alg = t12_free(N)
    if alg.key_degree(key) > N:
        raise ValueError(f"key of degree {alg.key_degree(key)} exceeds N = {N}")
    start = ell_element(alg, generator, QQ, N)
    words = _theta_words(max(4, N - 1))
    a = a2l((N - 1) // 2)
    images: dict = {(): start}

    def image(w):
        if w not in images:
            l, k = w[0]
            images[w] = string_derivations(l, N)[k](image(w[1:]))
        return images[w]

    coeffs = {}
    for w in words:
        c = Fraction(image(w).coefficient(key))
        if c:
            for l, _ in w:
                c *= a[l]
            coeffs[w] = c
    ring = CC(precision + GUARD)
    ctx = ring.ctx
    values = l_sharp_values(list(coeffs), precision)
    values[((), ())] = Ball(ctx.mpc(1), ctx.mpf(0))
    total = Ball(ctx.mpc(0), ctx.mpf(0))
    tpi = -ring.two_pi_i if conjugate else ring.two_pi_i
    for w, r in coeffs.items():
        b = values[(tuple(l for l, _ in w), tuple(k for _, k in w))]
        if conjugate:
            b = Ball(ctx.conj(b.value), b.err)
        total = total + b * Ball(tpi ** len(w) * ring.coerce(r), ctx.zero)
    return ThetaRelation(generator, tuple(key), coeffs, total.value, total.err)


# ----------------------------------------------------------------------------
# shuffle identities among L# values
# ----------------------------------------------------------------------------


def shuffle_check(pairs=None, precision: int = 30) -> Report:
    """L#_l(k) L#_l'(k') = L#_{l,l'}(k,k') + L#_{l',l}(k',k) for depth-one pairs.

    ``pairs`` lists ((l, k), (l', k')) with arguments k in 1..2l+1; default: l = l' = 1.
    A pair passes when its residual is below 10x the summed error bounds.
    """
    if pairs is None:
        pairs = [((1, k), (1, kk)) for k in (1, 2, 3) for kk in (1, 2, 3) if k <= kk]
    rep = Report("shuffle")
    for (l1, k1), (l2, k2) in pairs:
        a = l_sharp([l1], [k1 - 1], precision).ball
        b = l_sharp([l2], [k2 - 1], precision).ball
        c = l_sharp([l1, l2], [k1 - 1, k2 - 1], precision).ball
        d = l_sharp([l2, l1], [k2 - 1, k1 - 1], precision).ball
        r = a * b - c - d
        rep.add(Check(f"L#_{l1}({k1}) L#_{l2}({k2})", abs(r.value), 10 * r.err / BOUND_FACTOR,
                      10 * r.err))
    return rep
