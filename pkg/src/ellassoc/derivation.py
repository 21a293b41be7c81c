"""Derivations of graded Lie algebras keyed by Lyndon words.

A derivation is fixed by the images of the generators.  On a basis key w with
standard factorization (u, v) the Leibniz rule gives
D(P_w) = [D(P_u), P_v] + [P_u, D(P_v)], memoized per key.  In a quotient the
factors P_u are first put in normal form, so the same code serves the free
algebras and the tables of :mod:`ellassoc.presentations`.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .lie import linear_map_errs, LieHom, LieSeries, TruncationMismatch
from .lyndon import standard_factorization
from .scalars import mpq


class NotNilpotent(ValueError):
    """exp of a derivation that neither raises degree nor is provably nilpotent."""


class Derivation:
    """Graded derivation given by generator images (all with one truncation)."""

    def __init__(self, alg, images: Sequence[LieSeries] | Mapping[str, LieSeries], name: str = "D"):
        alph = alg.alphabet
        if isinstance(images, Mapping):
            missing = [s for s in alph.symbols if s not in images]
            if missing:
                raise KeyError(f"missing images for {missing}")
            images = [images[s] for s in alph.symbols]
        images = list(images)
        if len(images) != len(alph):
            raise ValueError("one image per generator is required")
        for im in images[1:]:
            images[0]._check(im)
        if images[0].alg is not alg and images[0].alg != alg:
            raise TypeError("images must live in the derivation's algebra")
        self.alg = alg
        self.images = images
        self.name = name
        self.ring = images[0].ring
        self.N = images[0].N
        self._memo: dict = {}
        self._elem: dict = {}

    # -- structure -------------------------------------------------------------------
    def shift(self) -> tuple | None:
        """Common multidegree shift of the generator images, or None if inhomogeneous."""
        alph = self.alg.alphabet
        km = self.alg.key_multidegree
        shift = None
        for i, im in enumerate(self.images):
            base = alph.multidegrees[i]
            for k in im.terms:
                s = tuple(a - b for a, b in zip(km(k), base))
                if shift is None:
                    shift = s
                elif s != shift:
                    return None
        return shift if shift is not None else tuple(0 for _ in alph.multidegrees[0])

    def degree(self) -> int | None:
        s = self.shift()
        return None if s is None else sum(s)

    def image(self, symbol: str) -> LieSeries:
        return self.images[self.alg.alphabet.index(symbol)]

    # -- application -------------------------------------------------------------------
    def _element(self, w) -> LieSeries:
        e = self._elem.get(w)
        if e is None:
            terms = {w: self.ring.one}
            reduce_terms = getattr(self.alg, "reduce_terms", None)
            if reduce_terms is not None:
                terms = reduce_terms(terms)
            e = LieSeries(self.alg, terms, self.ring, self.N)
            self._elem[w] = e
        return e

    def key_image(self, w) -> LieSeries:
        m = self._memo.get(w)
        if m is None:
            if len(w) == 1:
                m = self.images[w[0]]
            else:
                u, v = standard_factorization(w)
                m = self.key_image(u).bracket(self._element(v)) + \
                    self._element(u).bracket(self.key_image(v))
            self._memo[w] = m
        return m

    def __call__(self, s: LieSeries) -> LieSeries:
        if s.N != self.N:
            raise TruncationMismatch(f"series truncation {s.N} differs from derivation {self.N}")
        out: dict = {}
        for k, c in s.terms.items():
            im = self.key_image(k)
            for kk, cc in im.terms.items():
                out[kk] = out.get(kk, 0) + c * cc
        zero = LieSeries.zero(self.alg, self.ring, self.N)
        out = {k: c for k, c in out.items() if c != 0}
        if self.ring.exact:
            return zero.like(out, 0)
        return zero.like(out, linear_map_errs(s, self.key_image, self.N, self.ring.eps()))

    apply = __call__

    # -- algebra of derivations -------------------------------------------------------------
    def _check(self, other: "Derivation"):
        if other.alg is not self.alg and other.alg != self.alg:
            raise TypeError("derivations of different algebras")
        if other.N != self.N:
            raise TruncationMismatch(f"truncations differ: {self.N} vs {other.N}")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        return Derivation(self.alg, [a + b for a, b in zip(self.images, other.images)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        return Derivation(self.alg, [a - b for a, b in zip(self.images, other.images)])

    def scale(self, c) -> "Derivation":
        return Derivation(self.alg, [im.scale(c) for im in self.images], self.name)

    def bracket(self, other: "Derivation") -> "Derivation":
        """Commutator [D1, D2] = D1 D2 - D2 D1."""
        self._check(other)
        imgs = [self(b) - other(a) for a, b in zip(self.images, other.images)]
        return Derivation(self.alg, imgs, f"[{self.name},{other.name}]")

    def is_zero(self) -> bool:
        return all(im.is_zero() for im in self.images)

    def max_norm(self):
        return max((im.max_norm() for im in self.images), default=0)

    # -- exponential -------------------------------------------------------------------------
    def _exp_steps(self, bound: int | None) -> int:
        if bound is not None:
            return int(bound)
        if self.is_zero():
            return 0
        shift = self.shift()
        if shift is None:
            raise NotNilpotent("inhomogeneous derivation needs an explicit nilpotency bound")
        d = sum(shift)
        if d > 0:
            return self.N // d + 1
        if d == 0 and any(shift):
            # moves multidegree along a line inside a bounded simplex
            return self.N + 1
        raise NotNilpotent("degree-0 derivation without a nilpotency bound")

    def exp_apply(self, s: LieSeries, bound: int | None = None) -> LieSeries:
        """exp(D)(s) = sum_k D^k(s)/k!."""
        steps = self._exp_steps(bound)
        if steps == 0:
            return s
        out = s
        term = s
        for k in range(1, steps + 1):
            term = self(term).scale(mpq(1, k))
            if term.is_zero():
                break
            out = out + term
        else:
            if bound is None and not term.is_zero():
                raise NotNilpotent("exponential series did not terminate")
        return out

    def exp(self, bound: int | None = None) -> list[LieSeries]:
        """Generator images of the automorphism exp(D), to the working degree."""
        gens = [self._element((i,)) for i in range(len(self.alg.alphabet))]
        return [self.exp_apply(g, bound) for g in gens]

    def exp_hom(self, bound: int | None = None) -> LieHom:
        return LieHom(self.alg.alphabet, self.exp(bound))

    def __repr__(self):
        syms = self.alg.alphabet.symbols
        return "Derivation(" + ", ".join(f"{s} -> {im!r}" for s, im in zip(syms, self.images)) + ")"


def inner(alg, element: LieSeries) -> Derivation:
    """ad(element) as a derivation."""
    gens = [LieSeries(alg, {(i,): element.ring.one}, element.ring, element.N)
            for i in range(len(alg.alphabet))]
    reduce_terms = getattr(alg, "reduce_terms", None)
    if reduce_terms is not None:
        gens = [g.like(reduce_terms(g.terms)) for g in gens]
    return Derivation(alg, [element.bracket(g) for g in gens], "ad")
