"""Truncated graded Lie algebras and their elements.

A :class:`GradedLieAlgebra` supplies a homogeneous basis per degree and the
bracket of two basis keys.  Keys are Lyndon words over the generator alphabet,
both for free Lie algebras and for the quotients built in
:mod:`ellassoc.presentations`, so series can be moved between a free cover and
its quotient without relabelling.

:class:`LieSeries` is an immutable sparse element truncated at a total degree
``N``.  Mixing series with different truncations raises ``TruncationMismatch``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, Sequence


from .alphabet import Alphabet
from .lyndon import (
    assoc_to_lyndon,
    expand,
    lie_bracket,
    lyndon_words,
    standard_factorization,
    tree_to_str,
    bracket_tree,
)
from .scalars import QQ, Ring, mpq


class TruncationMismatch(ValueError):
    """Raised when series with different truncation degrees are combined."""


class DegreeOverflow(ValueError):
    """Raised when a requested degree exceeds what a table or algebra supports."""


class GradedLieAlgebra:
    """Interface: basis keys graded by degree, with a bracket on keys."""

    alphabet: Alphabet
    N: int
    name: str = "lie"

    def basis(self, d: int) -> list:
        raise NotImplementedError

    def bracket_keys(self, u, v) -> tuple:
        raise NotImplementedError

    def is_free(self) -> bool:
        return False

    def key_degree(self, k) -> int:
        return self.alphabet.word_degree(k)

    def key_multidegree(self, k) -> tuple:
        return self.alphabet.word_multidegree(k)

    def key_str(self, k) -> str:
        return tree_to_str(bracket_tree(k), self.alphabet.symbols)

    def dimension(self, d: int) -> int:
        return len(self.basis(d))

    def bracket_bound(self):
        """Max l1 norm of the bracket of two basis keys whose degrees sum to at most N."""
        m = 1
        for da in range(1, self.N):
            for a in self.basis(da):
                for db in range(1, self.N + 1 - da):
                    for b in self.basis(db):
                        n = sum(abs(c) for _, c in self.bracket_keys(a, b))
                        m = n if n > m else m
        return m

    def generator(self, symbol: str, ring: Ring = QQ, N: int | None = None) -> "LieSeries":
        i = self.alphabet.index(symbol)
        return LieSeries(self, {(i,): ring.one}, ring, N)

    def generators(self, ring: Ring = QQ, N: int | None = None) -> list:
        return [self.generator(s, ring, N) for s in self.alphabet.symbols]


class FreeLieAlgebra(GradedLieAlgebra):
    """Free Lie algebra on an alphabet, Lyndon basis, up to degree N."""

    def __init__(self, alphabet: Alphabet, N: int, name: str | None = None):
        if N < 1:
            raise ValueError("max degree must be >= 1")
        self.alphabet = alphabet
        self.N = int(N)
        self.name = name or "free(" + ",".join(alphabet.symbols) + ")"
        self._basis: dict[int, list] | None = None

    def is_free(self) -> bool:
        return True

    def _build(self):
        by_deg: dict[int, list] = {d: [] for d in range(1, self.N + 1)}
        max_len = self.N // self.alphabet.min_degree
        for w in lyndon_words(len(self.alphabet), max_len):
            d = self.alphabet.word_degree(w)
            if d <= self.N:
                by_deg[d].append(w)
        self._basis = by_deg

    def basis(self, d: int) -> list:
        if d < 1:
            return []
        if d > self.N:
            raise DegreeOverflow(f"degree {d} exceeds algebra truncation {self.N}")
        if self._basis is None:
            self._build()
        return self._basis[d]

    def bracket_keys(self, u, v):
        if self.alphabet.word_degree(u) + self.alphabet.word_degree(v) > self.N:
            return ()
        return lie_bracket(u, v)

    def __eq__(self, other):
        return (isinstance(other, FreeLieAlgebra) and other.alphabet == self.alphabet
                and other.N == self.N)

    def __hash__(self):
        return hash((self.alphabet, self.N))

    def __repr__(self):
        return f"FreeLieAlgebra({list(self.alphabet.symbols)}, N={self.N})"


def _errs(err, N: int):
    """Per-degree error bounds as a tuple indexed by degree 0..N (None when exact).

    A scalar is read as a bound valid in every degree.
    """
    if err is None:
        return None
    if isinstance(err, tuple):
        if len(err) == N + 1:
            return err
        return (err + (0,) * (N + 1))[:N + 1]
    if err == 0:
        return None
    return (0,) + (err,) * N


def _add_errs(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return tuple(x + y for x, y in zip(a, b))


def _abs1(c):
    """Cheap upper bound for |c|."""
    try:
        return abs(c.real) + abs(c.imag)
    except AttributeError:
        return abs(c)


class LieSeries:
    """Sparse truncated element of a graded Lie algebra.

    In complex mode ``errs[d]`` bounds the l1 norm of the coefficient error in
    degree d; ``err`` is the largest of them, a bound on every coefficient.
    """

    __slots__ = ("alg", "ring", "N", "terms", "errs")

    def __init__(self, alg: GradedLieAlgebra, terms: Mapping, ring: Ring = QQ,
                 N: int | None = None, err=0):
        self.alg = alg
        self.ring = ring
        self.N = alg.N if N is None else int(N)
        if self.N > alg.N:
            raise DegreeOverflow(f"truncation {self.N} exceeds algebra degree {alg.N}")
        kd = alg.key_degree
        self.terms = {k: c for k, c in terms.items() if c != 0 and kd(k) <= self.N}
        self.errs = None if ring.exact else _errs(err, self.N)

    @property
    def err(self):
        return max(self.errs) if self.errs else 0

    @err.setter
    def err(self, value):
        self.errs = None if self.ring.exact else _errs(value, self.N)

    def degree_norms(self) -> list:
        """l1 norm of the coefficients in each degree 0..N."""
        out = [0] * (self.N + 1)
        kd = self.alg.key_degree
        for k, c in self.terms.items():
            out[kd(k)] += _abs1(c)
        return out

    # -- construction helpers ------------------------------------------------
    @classmethod
    def zero(cls, alg, ring=QQ, N=None):
        return cls(alg, {}, ring, N)

    def like(self, terms, err=None):
        s = LieSeries.__new__(LieSeries)
        s.alg, s.ring, s.N = self.alg, self.ring, self.N
        s.terms = terms
        s.errs = self.errs if err is None or self.ring.exact else _errs(err, self.N)
        return s

    def _check(self, other: "LieSeries"):
        if not isinstance(other, LieSeries):
            raise TypeError(f"expected LieSeries, got {type(other).__name__}")
        if other.alg is not self.alg and other.alg != self.alg:
            raise TypeError("series live in different Lie algebras")
        if other.N != self.N:
            raise TruncationMismatch(f"truncations differ: {self.N} vs {other.N}")
        if other.ring != self.ring:
            raise TypeError(f"coefficient rings differ: {self.ring} vs {other.ring}")

    # -- linear structure ----------------------------------------------------
    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        if self.ring.exact:
            return self.like(out, 0)
        errs = _add_errs(self.errs, other.errs)
        eps = self.ring.eps()
        n1, n2 = self.degree_norms(), other.degree_norms()
        rnd = tuple(eps * (a + b) for a, b in zip(n1, n2))
        return self.like(out, _add_errs(errs, rnd) or 0)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.like({k: -c for k, c in self.terms.items()})

    def scale(self, c) -> "LieSeries":
        if c == 0:
            return self.like({}, 0)
        out = {k: c * v for k, v in self.terms.items()}
        if self.ring.exact:
            return self.like(out, 0)
        a = _abs1(c)
        eps = self.ring.eps()
        errs = tuple(a * (e + eps * n) for e, n in
                     zip(self.errs or (0,) * (self.N + 1), self.degree_norms()))
        return self.like(out, errs)

    def __mul__(self, c):
        if isinstance(c, LieSeries):
            raise TypeError("use .bracket for Lie products")
        return self.scale(c)

    __rmul__ = __mul__

    # -- bracket ---------------------------------------------------------------
    def bracket(self, other: "LieSeries") -> "LieSeries":
        self._check(other)
        alg = self.alg
        N = self.N
        kd = alg.key_degree
        bk = alg.bracket_keys
        out: dict = {}
        # bucket by degree to skip pairs above the truncation
        b_items = sorted(other.terms.items(), key=lambda kc: kd(kc[0]))
        b_deg = [kd(k) for k, _ in b_items]
        for ka, ca in self.terms.items():
            da = kd(ka)
            limit = N - da
            for (kb, cb), db in zip(b_items, b_deg):
                if db > limit:
                    break
                prod = None
                for kw, s in bk(ka, kb):
                    if prod is None:
                        prod = ca * cb
                    v = out.get(kw, 0) + s * prod
                    out[kw] = v
        out = {k: c for k, c in out.items() if c != 0}
        if self.ring.exact:
            return self.like(out, 0)
        cm = alg_constant(alg)
        n1, n2 = self.degree_norms(), other.degree_norms()
        z = (0,) * (N + 1)
        e1, e2 = self.errs or z, other.errs or z
        eps = self.ring.eps()
        errs = [0] * (N + 1)
        for a in range(1, N):
            if not (n1[a] or e1[a]):
                continue
            for b in range(1, N + 1 - a):
                errs[a + b] += cm * (e1[a] * (n2[b] + e2[b]) + n1[a] * e2[b]
                                     + eps * n1[a] * n2[b])
        return self.like(out, tuple(errs))

    # -- inspection ------------------------------------------------------------
    def degree_part(self, d: int) -> "LieSeries":
        kd = self.alg.key_degree
        errs = None
        if self.errs is not None:
            errs = tuple(e if i == d else 0 for i, e in enumerate(self.errs))
        s = self.like({k: c for k, c in self.terms.items() if kd(k) == d})
        s.errs = errs
        return s

    def multidegree_part(self, md: tuple) -> "LieSeries":
        km = self.alg.key_multidegree
        return self.like({k: c for k, c in self.terms.items() if km(k) == tuple(md)})

    def degrees(self) -> list[int]:
        return sorted({self.alg.key_degree(k) for k in self.terms})

    def lowest_degree(self) -> int | None:
        ds = self.degrees()
        return ds[0] if ds else None

    def is_zero(self) -> bool:
        return not self.terms

    def max_norm(self):
        if not self.terms:
            return 0
        return max(self.ring.norm(c) for c in self.terms.values())

    def norm1(self):
        return sum((_abs1(c) for c in self.terms.values()), 0)

    def coefficient(self, key) -> object:
        return self.terms.get(tuple(key), 0)

    def truncated(self, M: int) -> "LieSeries":
        """Explicit truncation to a smaller degree."""
        if M > self.N:
            raise TruncationMismatch(f"cannot raise truncation {self.N} to {M}")
        kd = self.alg.key_degree
        s = self.like({k: c for k, c in self.terms.items() if kd(k) <= M})
        s.N = M
        s.errs = None if self.errs is None else self.errs[:M + 1]
        return s

    def with_ring(self, ring: Ring) -> "LieSeries":
        """Coefficients coerced into another ring (exact -> complex only)."""
        s = LieSeries(self.alg, {k: ring.coerce(c) for k, c in self.terms.items()}, ring, self.N)
        if not ring.exact:
            s.errs = self.errs if not self.ring.exact else _errs(ring.eps(), self.N)
        return s

    def __eq__(self, other):
        if not isinstance(other, LieSeries):
            return NotImplemented
        return (self.alg == other.alg and self.N == other.N and self.terms == other.terms)

    def __hash__(self):  # pragma: no cover - series are not used as keys
        return id(self)

    def __repr__(self):
        if not self.terms:
            return "0"
        kd = self.alg.key_degree
        parts = []
        for k in sorted(self.terms, key=lambda k: (kd(k), k)):
            parts.append(f"({self.terms[k]})*{self.alg.key_str(k)}")
        return " + ".join(parts)

    # -- free algebras only ------------------------------------------------------
    def to_assoc(self):
        """Image in the free associative algebra (free Lie algebras only)."""
        from .ncseries import NCSeries

        if not self.alg.is_free():
            raise TypeError("associative envelope is only available for free Lie algebras")
        out: dict = {}
        for k, c in self.terms.items():
            for w, m in expand(k).items():
                out[w] = out.get(w, 0) + m * c
        err = 0
        if self.errs:  # the expansion of a degree-d Lyndon element has l1 norm <= 2^(d-1)
            err = sum(e * 2 ** max(d - 1, 0) for d, e in enumerate(self.errs))
        return NCSeries(self.alg.alphabet, out, self.ring, self.N, err)


_ALG_CONST: dict = {}


def alg_constant(alg) -> int:
    """Bound on the l1 norm of a bracket of two basis keys (for error bounds)."""
    key = (type(alg).__name__, alg.alphabet, alg.N) if alg.is_free() else id(alg)
    c = _ALG_CONST.get(key)
    if c is None:
        c = alg.bracket_bound()
        _ALG_CONST[key] = c
    return c


# ----------------------------------------------------------------------------
# Homomorphisms out of free algebras and quotients keyed by Lyndon words
# ----------------------------------------------------------------------------


class LieHom:
    """Lie homomorphism determined by images of the letters of the source alphabet.

    Applies to any series whose keys are Lyndon words over that alphabet: the
    image of P_w is the bracket of the images of its standard factors.
    """

    def __init__(self, source_alphabet: Alphabet, images: Sequence["LieSeries"]):
        if len(images) != len(source_alphabet):
            raise ValueError("every generator needs an image")
        first = images[0]
        for im in images[1:]:
            first._check(im)
        self.source = source_alphabet
        self.images = list(images)
        self._memo: dict = {}

    def key_image(self, w) -> "LieSeries":
        m = self._memo.get(w)
        if m is not None:
            return m
        if len(w) == 1:
            m = self.images[w[0]]
        else:
            u, v = standard_factorization(w)
            a = self.key_image(u)
            if a.is_zero():
                m = a.like({}, 0)
            else:
                m = a.bracket(self.key_image(v))
        self._memo[w] = m
        return m

    def __call__(self, s: "LieSeries") -> "LieSeries":
        tgt = self.images[0]
        out: dict = {}
        for k, c in s.terms.items():
            if len(k) > tgt.N:  # every target letter has degree >= 1
                continue
            im = self.key_image(k)
            for kk, cc in im.terms.items():
                out[kk] = out.get(kk, 0) + c * cc
        out = {k: c for k, c in out.items() if c != 0}
        if tgt.ring.exact:
            return tgt.like(out, 0)
        return tgt.like(out, linear_map_errs(s, self.key_image, tgt.N, tgt.ring.eps()))


def linear_map_errs(s: LieSeries, key_image, N: int, eps) -> tuple:
    """Per-degree error bounds of sum_k c_k key_image(k).

    Exact-coefficient part: |c_k| times the image's own error and rounding.
    Input error: an error of l1 size e in degree d of s is carried by some basis
    key of degree d, so it contributes e times the largest image norm.
    """
    errs = [0] * (N + 1)
    for k, c in s.terms.items():
        im = key_image(k)
        a = _abs1(c)
        z = im.errs or (0,) * (im.N + 1)
        for D, (e, n) in enumerate(zip(z, im.degree_norms())):
            errs[D] += a * (e + eps * n)
    if s.errs:
        alg = s.alg
        for d, e in enumerate(s.errs):
            if not e or d == 0:
                continue
            worst = [0] * (N + 1)
            for k in alg.basis(d):
                for D, n in enumerate(key_image(k).degree_norms()):
                    worst[D] = n if n > worst[D] else worst[D]
            for D in range(N + 1):
                errs[D] += e * worst[D]
    return tuple(errs)


def substitute_lie(s: LieSeries, images: Mapping[str, LieSeries] | Sequence[LieSeries]) -> LieSeries:
    """Apply the homomorphism sending each source letter to the given image."""
    alph = s.alg.alphabet
    if isinstance(images, Mapping):
        missing = [x for x in alph.symbols if x not in images]
        if missing:
            raise KeyError(f"missing images for {missing}")
        images = [images[x] for x in alph.symbols]
    return LieHom(alph, images)(s)


# ----------------------------------------------------------------------------
# BCH
# ----------------------------------------------------------------------------

_AB = Alphabet.simple(("a", "b"))


@lru_cache(maxsize=None)
def bch_coefficients(N: int) -> tuple:
    """BCH series log(e^a e^b) in the Lyndon basis on {a, b}, exact, to degree N."""
    from .ncseries import NCSeries

    a = NCSeries.letter(_AB, "a", QQ, N)
    b = NCSeries.letter(_AB, "b", QQ, N)
    z = (a.exp() * b.exp()).log_assoc()
    coords = assoc_to_lyndon(z.terms)
    return tuple(sorted(coords.items(), key=lambda kc: (len(kc[0]), kc[0])))


def bch(x: LieSeries, y: LieSeries) -> LieSeries:
    """log(exp(x) exp(y)), evaluated by substituting into the BCH Lie series."""
    x._check(y)
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    hom = LieHom(_AB, [x, y])
    out: dict = {}
    errs = [0] * (x.N + 1)
    eps = None if x.ring.exact else x.ring.eps()
    for w, c in bch_coefficients(x.N):
        im = hom.key_image(w)
        for k, v in im.terms.items():
            out[k] = out.get(k, 0) + c * v
        if eps is not None:
            a = abs(c)
            for d, (e, n) in enumerate(zip(im.errs or errs, im.degree_norms())):
                errs[d] += a * (e + eps * n)
    return x.like({k: v for k, v in out.items() if v != 0}, tuple(errs))


def bch_many(items: Iterable[LieSeries]) -> LieSeries:
    """log of the ordered product of exponentials exp(z_1) exp(z_2) ... ."""
    items = list(items)
    if not items:
        raise ValueError("empty product")
    acc = items[0]
    for z in items[1:]:
        acc = bch(acc, z)
    return acc


# ----------------------------------------------------------------------------
# ad-power series
# ----------------------------------------------------------------------------


def ad_series(coeffs: Sequence, u: LieSeries, v: LieSeries) -> LieSeries:
    """sum_k coeffs[k] (ad u)^k (v), truncated at the common degree."""
    u._check(v)
    out = v.scale(coeffs[0]) if coeffs else v.like({}, 0)
    cur = v
    for k in range(1, len(coeffs)):
        cur = u.bracket(cur)
        if cur.is_zero():
            break
        if coeffs[k] != 0:
            out = out + cur.scale(coeffs[k])
    return out


def bernoulli_ad_coeffs(N: int, kind: str = "z/(e^z-1)") -> list:
    """Taylor coefficients of z/(e^z - 1) or related functions up to z^N (exact)."""
    from sympy import bernoulli, factorial

    out = []
    for k in range(N + 1):
        # sympy >= 1.12 uses B_1 = +1/2; z/(e^z-1) needs B_1 = -1/2
        bk = mpq(bernoulli(k).p, bernoulli(k).q)
        if k == 1:
            bk = mpq(-1, 2)
        c = bk / int(factorial(k))
        if kind == "z/(e^z-1)":
            out.append(c)
        elif kind == "z/(1-e^-z)":  # = z/(e^z-1) evaluated at -z
            out.append(c * (-1) ** k)
        elif kind == "(e^z-1)/z":
            out.append(mpq(1, int(factorial(k + 1))))
        else:
            raise ValueError(kind)
    return out
