"""The derivations e_+, e_-, xi, delta_2m and ad(t) of t_{1,n}.

On generators (x_i = x_i^+, y_i = x_i^-):

* delta_2m : x_i -> (ad x_i)^(2m+2)(y_i),
  y_i -> 1/2 sum_{p+q=2m+1} [(-ad x_i)^p(y_i), (ad x_i)^q(y_i)]
* e_+ : y_i -> x_i, x_i -> 0;  e_- : x_i -> y_i, y_i -> 0
* xi : x_i -> x_i, y_i -> 0

Each construction comes with a certificate: the images of all defining
relations reduce to zero in the quotient table, and the formula evaluated at
the eliminated index n agrees with minus the sum of the other images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .derivation import Derivation, inner
from .lie import LieSeries
from .ncseries import free_lie
from .presentations import QuotientLieAlgebra, standard_presentation, table
from .scalars import QQ, Ring, mpq


class NotWellDefined(ArithmeticError):
    """A derivation formula does not preserve the defining relations."""


def ell_algebra(n: int, N: int):
    """t_{1,n} to degree N: the free Lie algebra on x1, y1 for n = 2, else a quotient table."""
    pres = standard_presentation("t_ell", n)
    if n == 2:
        return free_lie(pres.alphabet, N)
    return table("t_ell", n, N)


def ell_element(alg, symbol: str, ring: Ring = QQ, N: int | None = None) -> LieSeries:
    """Named element (x_i, y_i, t_ij) of t_{1,n} in the given algebra."""
    N = alg.N if N is None else N
    if isinstance(alg, QuotientLieAlgebra):
        return alg.element(symbol, ring, N)
    n = len(alg.alphabet) // 2 + 1
    base = standard_presentation("t_ell", n).named[symbol]
    return LieSeries(alg, {k: ring.coerce(c) for k, c in base.terms.items()}, ring, N)


def _ad_power(u: LieSeries, v: LieSeries, k: int) -> LieSeries:
    for _ in range(k):
        v = u.bracket(v)
    return v


def delta_images(alg, i_symbol_x: LieSeries, i_symbol_y: LieSeries, m: int):
    """(delta_2m(x), delta_2m(y)) for a pair (x, y) = (x_i, y_i)."""
    x, y = i_symbol_x, i_symbol_y
    dx = _ad_power(x, y, 2 * m + 2)
    powers = [y]
    for _ in range(2 * m + 1):
        powers.append(x.bracket(powers[-1]))
    dy = LieSeries.zero(alg, x.ring, x.N)
    for p in range(2 * m + 2):
        q = 2 * m + 1 - p
        if p > q:
            break  # the summand for (p, q) equals the one for (q, p)
        term = powers[p].bracket(powers[q])
        if p % 2:
            term = -term
        dy = dy + term
    # pairs (p, q) and (q, p) contribute equally, which absorbs the factor 1/2
    return dx, dy


@dataclass
class Certificate:
    """Outcome of the well-definedness check of a derivation on t_{1,n}."""

    relations_checked: int = 0
    relations_skipped: int = 0
    nonzero: list = field(default_factory=list)
    eliminated_ok: bool = True

    @property
    def ok(self) -> bool:
        return not self.nonzero and self.eliminated_ok


def _certify(alg, D: Derivation, formula_at_last) -> Certificate:
    cert = Certificate()
    if not isinstance(alg, QuotientLieAlgebra):
        return cert  # t_{1,2} is free
    pres = alg.presentation
    n = pres.n
    cover = alg.cover
    ring = D.ring
    lifted = Derivation(cover, [LieSeries(cover, im.terms, ring, D.N) for im in D.images])
    shift = D.degree() or 0
    for r in pres.relations:
        rd = max(len(k) for k in r.terms)
        if rd + shift > D.N:
            cert.relations_skipped += 1
            continue
        rr = LieSeries(cover, {k: ring.coerce(c) for k, c in r.terms.items()}, ring, D.N)
        img = alg.reduce(lifted(rr))
        cert.relations_checked += 1
        if not img.is_zero():
            cert.nonzero.append((repr(r), img))
    if formula_at_last is not None:
        for letter in ("x", "y"):
            total = LieSeries.zero(alg, ring, D.N)
            for i in range(1, n):
                total = total + D.image(f"{letter}{i}")
            if not (total + formula_at_last[letter]).is_zero():
                cert.eliminated_ok = False
    return cert


def build_special_derivation(kind: str, m: int = 0, n: int = 2, N: int | None = None,
                             ring: Ring = QQ, element: LieSeries | None = None,
                             check: bool = True) -> tuple[Derivation, Certificate]:
    """One of delta, e_plus, e_minus, xi, ad on t_{1,n}, with its certificate.

    ``N`` is the working degree (defaults to 2m+5 for delta, 6 otherwise).
    Raises :class:`NotWellDefined` if the certificate fails.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if m < 0:
        raise ValueError("m must be non-negative")
    if N is None:
        N = 2 * m + 5 if kind == "delta" else 6
    alg = ell_algebra(n, N)
    X = {i: ell_element(alg, f"x{i}", ring, N) for i in range(1, n + 1)}
    Y = {i: ell_element(alg, f"y{i}", ring, N) for i in range(1, n + 1)}
    zero = LieSeries.zero(alg, ring, N)
    images: dict = {}
    last = None
    if kind == "delta":
        for i in range(1, n):
            images[f"x{i}"], images[f"y{i}"] = delta_images(alg, X[i], Y[i], m)
        dx, dy = delta_images(alg, X[n], Y[n], m)
        last = {"x": dx, "y": dy}
        name = f"delta_{2 * m}"
    elif kind in ("e_plus", "e_minus", "xi"):
        for i in range(1, n):
            if kind == "e_plus":
                images[f"x{i}"], images[f"y{i}"] = zero, X[i]
            elif kind == "e_minus":
                images[f"x{i}"], images[f"y{i}"] = Y[i], zero
            else:
                images[f"x{i}"], images[f"y{i}"] = X[i], zero
        name = kind
    elif kind == "ad":
        if element is None:
            element = ell_element(alg, "t12", ring, N)
        D = inner(alg, element)
        D.name = "ad"
        cert = Certificate()
        return D, cert
    else:
        raise ValueError(f"unknown special derivation {kind!r}")
    D = Derivation(alg, images, name)
    cert = _certify(alg, D, last) if check else Certificate()
    if check and not cert.ok:
        raise NotWellDefined(f"{name} on t_1,{n} does not preserve the relations: {cert.nonzero[:1]}")
    return D, cert


def delta(m: int, n: int = 2, N: int | None = None, ring: Ring = QQ) -> Derivation:
    return build_special_derivation("delta", m, n, N, ring)[0]


def e_plus(n: int = 2, N: int = 6, ring: Ring = QQ) -> Derivation:
    return build_special_derivation("e_plus", 0, n, N, ring)[0]


def e_minus(n: int = 2, N: int = 6, ring: Ring = QQ) -> Derivation:
    return build_special_derivation("e_minus", 0, n, N, ring)[0]


def xi(n: int = 2, N: int = 6, ring: Ring = QQ) -> Derivation:
    return build_special_derivation("xi", 0, n, N, ring)[0]


def ad_t12(n: int = 2, N: int = 6, ring: Ring = QQ) -> Derivation:
    return build_special_derivation("ad", 0, n, N, ring)[0]


def string_element(D: Derivation, k: int, e_minus_der: Derivation) -> Derivation:
    """(ad e_-)^k(D)/k!  as a derivation."""
    out = D
    for j in range(1, k + 1):
        out = e_minus_der.bracket(out).scale(mpq(1, j))
    return out


@dataclass
class QuadraticRelations:
    """Linear relations among the brackets [delta_2a, delta_2b] of one weight."""

    weight: int
    pairs: list  # [(a, b), ...] meaning [delta_2a, delta_2b]
    relations: list  # each a dict pair-index -> rational coefficient

    @property
    def dimension(self) -> int:
        return len(self.relations)

    def proportionality(self):
        """For a single two-term relation c0 P0 + c1 P1 = 0, the ratio P0 / P1 = -c1 / c0."""
        if self.dimension != 1 or len(self.pairs) != 2:
            return None
        rel = self.relations[0]
        c0, c1 = rel.get(0, 0), rel.get(1, 0)
        if c0 == 0:
            return None
        return -c1 / c0


def delta_quadratic_relations(W: int) -> QuadraticRelations:
    """Relations among [delta_2a, delta_2b] with 1 <= a < b and (2a+1)+(2b+1) = W.

    delta_0 is excluded: it is the inner derivation ad t_12, and t_12 is killed by
    every delta_2m, so its brackets vanish identically.
    """
    from .linalg import nullspace

    if W % 2:
        raise ValueError("the weight must be even")
    s = (W - 2) // 2  # a + b
    pairs = [(a, s - a) for a in range(1, s) if a < s - a]
    if not pairs:
        return QuadraticRelations(W, [], [])
    N = W + 3  # degree of [delta_2a, delta_2b](x)
    ders = {m: delta(m, 2, N) for m in {p for ab in pairs for p in ab}}
    cols = []
    for a, b in pairs:
        D = ders[a].bracket(ders[b])
        vec = {}
        for i, im in enumerate(D.images):
            for k, c in im.terms.items():
                vec[(i, k)] = c
        cols.append(vec)
    return QuadraticRelations(W, pairs, nullspace(cols, len(pairs)))
