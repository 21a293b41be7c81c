"""Truncated non-commutative power series over an :class:`Alphabet`."""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from .alphabet import Alphabet
from .lie import FreeLieAlgebra, LieSeries, TruncationMismatch, _abs1
from .lyndon import assoc_to_lyndon
from .scalars import QQ, Ring, mpq

EMPTY = ()


@lru_cache(maxsize=200_000)
def shuffle(u: tuple, v: tuple) -> tuple:
    """Shuffle product u ш v as ((word, multiplicity), ...)."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict = {}
    for w, m in shuffle(u[:-1], v):
        w2 = w + (u[-1],)
        out[w2] = out.get(w2, 0) + m
    for w, m in shuffle(u, v[:-1]):
        w2 = w + (v[-1],)
        out[w2] = out.get(w2, 0) + m
    return tuple(out.items())


class NCSeries:
    """Sparse map word -> coefficient, truncated at total degree N.

    The empty word carries the constant term.
    """

    __slots__ = ("alphabet", "ring", "N", "terms", "err")

    def __init__(self, alphabet: Alphabet, terms: Mapping, ring: Ring = QQ, N: int = 4, err=0):
        self.alphabet = alphabet
        self.ring = ring
        self.N = int(N)
        wd = alphabet.word_degree
        self.terms = {tuple(w): c for w, c in terms.items() if c != 0 and wd(w) <= self.N}
        self.err = err

    # -- constructors ------------------------------------------------------------
    @classmethod
    def one(cls, alphabet, ring=QQ, N=4):
        return cls(alphabet, {EMPTY: ring.one}, ring, N)

    @classmethod
    def zero(cls, alphabet, ring=QQ, N=4):
        return cls(alphabet, {}, ring, N)

    @classmethod
    def letter(cls, alphabet, symbol, ring=QQ, N=4, coef=1):
        return cls(alphabet, {(alphabet.index(symbol),): ring.coerce(coef)}, ring, N)

    @classmethod
    def from_words(cls, alphabet, mapping: Mapping[str, object], ring=QQ, N=4):
        """Build from {"A B": c, "": c0} style keys."""
        terms = {}
        for key, c in mapping.items():
            w = tuple(alphabet.index(s) for s in key.split()) if key.strip() else EMPTY
            terms[w] = ring.coerce(c)
        return cls(alphabet, terms, ring, N)

    def like(self, terms, err=None):
        s = NCSeries.__new__(NCSeries)
        s.alphabet, s.ring, s.N = self.alphabet, self.ring, self.N
        s.terms = terms
        s.err = self.err if err is None else err
        return s

    def _check(self, other):
        if not isinstance(other, NCSeries):
            raise TypeError(f"expected NCSeries, got {type(other).__name__}")
        if other.alphabet != self.alphabet:
            raise TypeError("series over different alphabets")
        if other.N != self.N:
            raise TruncationMismatch(f"truncations differ: {self.N} vs {other.N}")
        if other.ring != self.ring:
            raise TypeError(f"coefficient rings differ: {self.ring} vs {other.ring}")

    # -- arithmetic --------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, NCSeries):
            other = self.like({EMPTY: self.ring.coerce(other)}, 0)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        err = self.err + other.err
        if not self.ring.exact:
            err += self.ring.eps() * (self.norm1() + other.norm1())
        return self.like(out, err)

    __radd__ = __add__

    def __neg__(self):
        return self.like({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCSeries):
            other = self.like({EMPTY: self.ring.coerce(other)}, 0)
        return self + (-other)

    def scale(self, c):
        if c == 0:
            return self.like({}, 0)
        return self.like({w: c * v for w, v in self.terms.items()},
                         self.err * _abs1(c) if self.err else 0)

    def __mul__(self, other):
        if not isinstance(other, NCSeries):
            return self.scale(other)
        self._check(other)
        N = self.N
        wd = self.alphabet.word_degree
        b_items = sorted(((wd(w), w, c) for w, c in other.terms.items()), key=lambda t: t[0])
        out: dict = {}
        for wa, ca in self.terms.items():
            limit = N - wd(wa)
            for db, wb, cb in b_items:
                if db > limit:
                    break
                w = wa + wb
                out[w] = out.get(w, 0) + ca * cb
        out = {w: c for w, c in out.items() if c != 0}
        if self.ring.exact:
            return self.like(out, 0)
        n1, n2 = self.norm1(), other.norm1()
        err = (self.err * n2 + other.err * n1 + self.err * other.err
               + self.ring.eps() * n1 * n2)
        return self.like(out, err)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = NCSeries.one(self.alphabet, self.ring, self.N)
        for _ in range(k):
            out = out * self
        return out

    # -- inspection --------------------------------------------------------------
    def constant(self):
        return self.terms.get(EMPTY, 0)

    def coefficient(self, word) -> object:
        if isinstance(word, str):
            word = tuple(self.alphabet.index(s) for s in word.split())
        return self.terms.get(tuple(word), 0)

    def degree_part(self, d: int) -> "NCSeries":
        wd = self.alphabet.word_degree
        return self.like({w: c for w, c in self.terms.items() if wd(w) == d})

    def max_norm(self):
        if not self.terms:
            return 0
        return max(self.ring.norm(c) for c in self.terms.values())

    def norm1(self):
        return sum((_abs1(c) for c in self.terms.values()), 0)

    def is_zero(self):
        return not self.terms

    def truncated(self, M):
        if M > self.N:
            raise TruncationMismatch(f"cannot raise truncation {self.N} to {M}")
        s = NCSeries(self.alphabet, self.terms, self.ring, M, self.err)
        return s

    def with_ring(self, ring):
        return NCSeries(self.alphabet, {w: ring.coerce(c) for w, c in self.terms.items()},
                        ring, self.N, self.err)

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.N == other.N
                and self.terms == other.terms)

    def __hash__(self):  # pragma: no cover
        return id(self)

    def __repr__(self):
        if not self.terms:
            return "0"
        wd = self.alphabet.word_degree
        return " + ".join(f"({c})*{self.alphabet.word_str(w)}"
                          for w, c in sorted(self.terms.items(), key=lambda t: (wd(t[0]), t[0])))

    # -- exp / log / inverse -----------------------------------------------------
    def _nilpotent_steps(self):
        return self.N // self.alphabet.min_degree

    def exp(self) -> "NCSeries":
        """exp of a series with zero constant term."""
        if self.constant() != 0:
            raise ValueError("exp needs a series with zero constant term")
        out = NCSeries.one(self.alphabet, self.ring, self.N)
        term = out
        for k in range(1, self._nilpotent_steps() + 1):
            term = (term * self).scale(mpq(1, k))
            if term.is_zero():
                break
            out = out + term
        return out

    def log_assoc(self) -> "NCSeries":
        """log of a series with constant term 1, as an associative series."""
        c0 = self.constant()
        if c0 != 1 and not (not self.ring.exact and abs(c0 - 1) <= 10 * self.ring.eps()):
            raise ValueError("log needs a series with constant term 1")
        s = self - NCSeries.one(self.alphabet, self.ring, self.N)
        s = s.like({w: c for w, c in s.terms.items() if w != EMPTY})
        out = NCSeries.zero(self.alphabet, self.ring, self.N)
        power = NCSeries.one(self.alphabet, self.ring, self.N)
        for k in range(1, self._nilpotent_steps() + 1):
            power = power * s
            if power.is_zero():
                break
            out = out + power.scale(mpq((-1) ** (k + 1), k))
        return out

    def inverse(self) -> "NCSeries":
        c0 = self.constant()
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = 1 / c0
        s = self.scale(inv0) - NCSeries.one(self.alphabet, self.ring, self.N)
        out = NCSeries.one(self.alphabet, self.ring, self.N)
        power = out
        for k in range(1, self._nilpotent_steps() + 1):
            power = power * (-s)
            if power.is_zero():
                break
            out = out + power
        return out.scale(inv0)

    def log(self, free: FreeLieAlgebra | None = None, tol=None) -> LieSeries:
        """log of a group-like series, as a Lie series in the Lyndon basis."""
        z = self.log_assoc()
        return NCSeries.to_lie(z, free, tol)

    def to_lie(self, free: FreeLieAlgebra | None = None, tol=None) -> LieSeries:
        """Lyndon coordinates of a primitive series (error if not primitive)."""
        if free is None:
            free = free_lie(self.alphabet, self.N)
        if self.ring.exact:
            coords = assoc_to_lyndon(self.terms)
        else:
            t = tol if tol is not None else max(self.err * 1000, self.ring.eps() * 1000)
            coords = assoc_to_lyndon(self.terms, zero_test=lambda c: abs(c) <= t)
        return LieSeries(free, coords, self.ring, self.N, self.err)

    # -- substitution ------------------------------------------------------------
    def substitute(self, images: Mapping[str, "NCSeries"] | Sequence["NCSeries"]) -> "NCSeries":
        """Algebra homomorphism: letters replaced by the given series (over any alphabet)."""
        if isinstance(images, Mapping):
            missing = [x for x in self.alphabet.symbols if x not in images]
            if missing:
                raise KeyError(f"missing images for {missing}")
            images = [images[x] for x in self.alphabet.symbols]
        images = list(images)
        first = images[0]
        for im in images[1:]:
            first._check(im)
        one = NCSeries.one(first.alphabet, first.ring, first.N)
        memo = {EMPTY: one}

        def val(w):
            m = memo.get(w)
            if m is None:
                m = val(w[:-1]) * images[w[-1]]
                memo[w] = m
            return m

        out: dict = {}
        err = 0
        for w, c in sorted(self.terms.items(), key=lambda t: len(t[0])):
            v = val(w)
            for ww, cc in v.terms.items():
                out[ww] = out.get(ww, 0) + c * cc
            if not first.ring.exact:
                err += _abs1(c) * v.err
        return first.like({w: c for w, c in out.items() if c != 0}, err + self.err)

    # -- group-likeness ------------------------------------------------------------
    def grouplike_residual(self):
        """max |coef of u (x) v in Delta(S) - S (x) S| over the truncated tensor square."""
        if self.constant() == 0:
            raise ValueError("group-like series have constant term 1")
        words = all_words(self.alphabet, self.N)
        wd = self.alphabet.word_degree
        T = self.terms
        worst = 0
        # (1, v) and (u, 1) components reduce to S_v (1 - S_0), check them too
        c0 = self.constant()
        for w, c in T.items():
            if w:
                r = abs(c - c * c0)
                if r > worst:
                    worst = r
        if abs(c0 - c0 * c0) > worst:
            worst = abs(c0 - c0 * c0)
        for i, u in enumerate(words):
            du = wd(u)
            cu = T.get(u, 0)
            for v in words:
                if du + wd(v) > self.N:
                    continue
                lhs = 0
                for w, m in shuffle(u, v):
                    cw = T.get(w)
                    if cw is not None:
                        lhs += m * cw
                r = abs(lhs - cu * T.get(v, 0))
                if r > worst:
                    worst = r
        return worst


@lru_cache(maxsize=None)
def _all_words(alphabet: Alphabet, N: int) -> tuple:
    out = []
    frontier = [EMPTY]
    degs = alphabet.degrees
    while frontier:
        nxt = []
        for w in frontier:
            d = alphabet.word_degree(w)
            for i in range(len(alphabet)):
                if d + degs[i] <= N:
                    nxt.append(w + (i,))
        out.extend(nxt)
        frontier = nxt
    return tuple(out)


def all_words(alphabet: Alphabet, N: int) -> tuple:
    """All non-empty words of total degree <= N."""
    return _all_words(alphabet, N)


_FREE_CACHE: dict = {}


def free_lie(alphabet: Alphabet, N: int) -> FreeLieAlgebra:
    key = (alphabet, N)
    if key not in _FREE_CACHE:
        _FREE_CACHE[key] = FreeLieAlgebra(alphabet, N)
    return _FREE_CACHE[key]


def lie_exp(x: LieSeries) -> NCSeries:
    """exp of a free Lie series as a group-like associative series."""
    return x.to_assoc().exp()
