"""Finitely presented graded Lie algebras t_n and t_{1,n}, computed degree by degree.

The genus-zero algebra t_n has generators t_ij (i < j) and relations
[t_ij, t_ik + t_jk] = 0 and [t_ij, t_kl] = 0 for distinct indices.

The genus-one algebra t_{1,n} has generators x_i = x_i^+ and y_i = x_i^-,
with sum_i x_i = sum_i y_i = 0, [x_i, x_j] = [y_i, y_j] = 0,
[x_i, y_j] = [x_j, y_i] (=: t_ij) and [x_k, t_ij] = [y_k, t_ij] = 0 for
distinct i, j, k.  The sum relations are used to eliminate x_n and y_n, so the
free cover is generated by x_i, y_i for i < n.

A :class:`QuotientLieAlgebra` stores, per degree, the fully reduced echelon
basis of the relation ideal inside the free cover.  Quotient basis keys are
the Lyndon words that are not pivots.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .alphabet import Alphabet
from .lie import (
    DegreeOverflow,
    FreeLieAlgebra,
    GradedLieAlgebra,
    LieHom,
    LieSeries,
)
from .linalg import RREF
from .lyndon import lie_bracket
from .scalars import QQ, Ring, mpq

TABLE_VERSION = 1

DEFAULT_DEGREES = {("t", 3): 10, ("t_ell", 2): 14, ("t_ell", 3): 8, ("t", 4): 6}


def tname(i: int, j: int) -> str:
    i, j = min(i, j), max(i, j)
    return f"t{i}{j}" if max(i, j) < 10 else f"t{i}_{j}"


@dataclass
class GradedPresentation:
    """Free cover alphabet, homogeneous relations, and named elements of the cover."""

    kind: str
    n: int
    alphabet: Alphabet
    relations: list
    named: dict = field(default_factory=dict)  # symbol -> LieSeries in the free cover
    eliminated: dict = field(default_factory=dict)

    def cover(self, N: int) -> FreeLieAlgebra:
        return FreeLieAlgebra(self.alphabet, N, name=f"cover({self.kind},{self.n})")


def _free(alphabet, N):
    from .ncseries import free_lie

    return free_lie(alphabet, N)


def standard_presentation(kind: str, n: int) -> GradedPresentation:
    """The presentations of t_n (kind 't') and t_{1,n} (kind 't_ell')."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if kind == "t":
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        alph = Alphabet.simple(tname(i, j) for i, j in pairs)
        F = _free(alph, 2)
        g = {p: F.generator(tname(*p)) for p in pairs}

        def T(i, j):
            return g[(min(i, j), max(i, j))]

        rels = []
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            if i < j:
                rels.append(T(i, j).bracket(T(i, k) + T(j, k)))
        for (i, j), (k, l) in itertools.combinations(pairs, 2):
            if len({i, j, k, l}) == 4:
                rels.append(T(i, j).bracket(T(k, l)))
        named = {tname(i, j): T(i, j) for i, j in pairs}
        for i, j in pairs:
            named[f"t{j}{i}" if max(i, j) < 10 else f"t{j}_{i}"] = T(i, j)
        rels = _dedupe(rels)
        return GradedPresentation("t", n, alph, rels, named)

    if kind == "t_ell":
        syms = []
        mdeg = []
        for i in range(1, n):
            syms += [f"x{i}", f"y{i}"]
            mdeg += [(1, 0), (0, 1)]
        alph = Alphabet(tuple(syms), tuple(mdeg))
        F = _free(alph, 3)
        X = {i: F.generator(f"x{i}") for i in range(1, n)}
        Y = {i: F.generator(f"y{i}") for i in range(1, n)}
        zero = LieSeries.zero(F)
        X[n] = -sum((X[i] for i in range(1, n)), zero)
        Y[n] = -sum((Y[i] for i in range(1, n)), zero)

        def t(i, j):
            return X[i].bracket(Y[j])

        rels = []
        for i, j in itertools.combinations(range(1, n + 1), 2):
            rels.append(X[i].bracket(X[j]))
            rels.append(Y[i].bracket(Y[j]))
            rels.append(t(i, j) - t(j, i))
        for i, j in itertools.permutations(range(1, n + 1), 2):
            for k in range(1, n + 1):
                if k not in (i, j):
                    rels.append(X[k].bracket(t(i, j)))
                    rels.append(Y[k].bracket(t(i, j)))
        rels = _dedupe([r for r in rels if not r.is_zero()])
        named = {}
        for i in range(1, n + 1):
            named[f"x{i}"] = X[i]
            named[f"y{i}"] = Y[i]
        for i, j in itertools.permutations(range(1, n + 1), 2):
            named[f"t{i}{j}"] = t(i, j)
        elim = {f"x{n}": X[n], f"y{n}": Y[n]}
        return GradedPresentation("t_ell", n, alph, rels, named, elim)

    raise ValueError(f"unknown presentation kind {kind!r}")


def _dedupe(rels):
    seen = set()
    out = []
    for r in rels:
        key = tuple(sorted(r.terms.items()))
        neg = tuple(sorted((k, -c) for k, c in r.terms.items()))
        if r.is_zero() or key in seen or neg in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


class QuotientLieAlgebra(GradedLieAlgebra):
    """Nilpotent quotient of a presented algebra up to degree N (the QuotientBasisTable)."""

    def __init__(self, presentation: GradedPresentation, N: int, _blocks=None):
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        self.N = int(N)
        self.name = f"{presentation.kind}_{presentation.n}"
        self.cover = FreeLieAlgebra(self.alphabet, self.N, name=f"cover {self.name}")
        self._bracket_cache: dict = {}
        self._named_cache: dict = {}
        if _blocks is None:
            t0 = time.time()
            _blocks = self._compute()
            self.build_seconds = time.time() - t0
        self.blocks = _blocks  # degree -> {multidegree: RREF}
        self.nf: dict = {}
        self.pivots: set = set()
        for d, bl in self.blocks.items():
            for md, r in bl.items():
                self.nf.update(r.normal_form_map())
                self.pivots.update(r.rows)
        self._basis = {d: [w for w in self.cover.basis(d) if w not in self.pivots]
                       for d in range(1, self.N + 1)}

    # -- construction --------------------------------------------------------------
    def _compute(self):
        alph = self.alphabet
        blocks: dict = {}
        rel_by_deg: dict = {}
        for r in self.presentation.relations:
            for k, c in r.terms.items():
                d = alph.word_degree(k)
                rel_by_deg.setdefault(d, []).append((k, c, id(r)))
        # regroup relation components by (relation, degree)
        comps: dict = {}
        for d, items in rel_by_deg.items():
            for k, c, rid in items:
                comps.setdefault((d, rid), {})[k] = mpq(c)
        letters = [(i,) for i in range(len(alph))]
        for d in range(1, self.N + 1):
            bl: dict = {}

            def add(vec):
                by_md: dict = {}
                for k, c in vec.items():
                    by_md.setdefault(alph.word_multidegree(k), {})[k] = c
                for md, v in by_md.items():
                    bl.setdefault(md, RREF()).insert(v)

            for (dd, _), vec in comps.items():
                if dd == d:
                    add(vec)
            for g in letters:
                e = alph.word_degree(g)
                if d - e < 1:
                    continue
                for md, r in blocks.get(d - e, {}).items():
                    for row in r.rows.values():
                        out: dict = {}
                        for w, c in row.items():
                            for w2, s in lie_bracket(g, w):
                                out[w2] = out.get(w2, 0) + s * c
                        add({k: v for k, v in out.items() if v})
            blocks[d] = bl
        return blocks

    # -- GradedLieAlgebra interface ------------------------------------------------------
    def basis(self, d):
        if d < 1:
            return []
        if d > self.N:
            raise DegreeOverflow(f"degree {d} exceeds table degree {self.N}")
        return self._basis[d]

    def ideal_dimension(self, d):
        return sum(len(r) for r in self.blocks.get(d, {}).values())

    def cover_dimension(self, d):
        return len(self.cover.basis(d))

    def reduce_terms(self, terms) -> dict:
        out: dict = {}
        nf = self.nf
        for w, c in terms.items():
            e = nf.get(w)
            if e is None:
                out[w] = out.get(w, 0) + c
            else:
                for k, r in e.items():
                    out[k] = out.get(k, 0) + c * r
        return {k: c for k, c in out.items() if c != 0}

    def bracket_keys(self, u, v):
        key = (u, v)
        r = self._bracket_cache.get(key)
        if r is None:
            if self.alphabet.word_degree(u) + self.alphabet.word_degree(v) > self.N:
                r = ()
            else:
                r = tuple(self.reduce_terms(dict(lie_bracket(u, v))).items())
            self._bracket_cache[key] = r
        return r

    # -- user-facing helpers -------------------------------------------------------------
    def reduce(self, s: LieSeries) -> LieSeries:
        """Normal form of a free-cover series (or a series of this algebra)."""
        if s.alg.alphabet != self.alphabet:
            raise TypeError("series is not over this algebra's cover alphabet")
        if s.N > self.N:
            raise DegreeOverflow(f"series degree {s.N} exceeds table degree {self.N}")
        out = LieSeries(self, self.reduce_terms(s.terms), s.ring, s.N)
        out.err = s.err
        return out

    def element(self, symbol: str, ring: Ring = QQ, N: int | None = None) -> LieSeries:
        """Named element (generator, eliminated generator, or t_ij) in normal form."""
        N = self.N if N is None else N
        key = (symbol, ring, N)
        if key in self._named_cache:
            return self._named_cache[key]
        named = self.presentation.named
        if symbol not in named:
            raise KeyError(f"unknown element {symbol!r}")
        base = named[symbol]
        terms = {k: ring.coerce(c) for k, c in base.terms.items()}
        s = LieSeries(self, self.reduce_terms(terms), ring, N)
        self._named_cache[key] = s
        return s

    def generator(self, symbol, ring=QQ, N=None):
        return self.element(symbol, ring, N)

    def is_zero_mod(self, s: LieSeries) -> bool:
        return self.reduce(s).is_zero()

    def dims(self) -> list[int]:
        return [len(self._basis[d]) for d in range(1, self.N + 1)]

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"QuotientLieAlgebra({self.name}, N={self.N}, dims={self.dims()})"

    # -- serialization -------------------------------------------------------------------
    def to_json(self) -> dict:
        blocks = []
        for d, bl in self.blocks.items():
            for md, r in bl.items():
                trip = []
                for p, row in r.rows.items():
                    for k, c in row.items():
                        trip.append([list(p), list(k), f"{c.numerator}/{c.denominator}"])
                blocks.append({"degree": d, "multidegree": list(md), "rows": trip})
        return {
            "version": TABLE_VERSION,
            "kind": self.presentation.kind,
            "n": self.presentation.n,
            "N": self.N,
            "dims": self.dims(),
            "blocks": blocks,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuotientLieAlgebra":
        if data.get("version") != TABLE_VERSION:
            raise ValueError("stale table version")
        pres = standard_presentation(data["kind"], data["n"])
        blocks: dict = {}
        from fractions import Fraction

        for b in data["blocks"]:
            r = RREF()
            rows: dict = {}
            for p, k, c in b["rows"]:
                rows.setdefault(tuple(p), {})[tuple(k)] = mpq(Fraction(c))
            r.rows = rows
            for p, row in rows.items():
                for k in row:
                    r._col_rows[k].add(p)
            blocks.setdefault(b["degree"], {})[tuple(b["multidegree"])] = r
        for d in range(1, data["N"] + 1):
            blocks.setdefault(d, {})
        q = cls(pres, data["N"], _blocks=blocks)
        if q.dims() != data["dims"]:
            raise ValueError("table dimensions do not match stored values")
        return q


_TABLES: dict = {}


def nq_basis(presentation: GradedPresentation | tuple, N: int, use_cache: bool = True) -> QuotientLieAlgebra:
    """Quotient table to degree N; memoized in-process and optionally on disk."""
    if isinstance(presentation, tuple):
        presentation = standard_presentation(*presentation)
    key = (presentation.kind, presentation.n, N)
    if key in _TABLES:
        return _TABLES[key]
    # a loaded table of higher degree serves lower truncations as well
    for (k, n, M), tab in _TABLES.items():
        if (k, n) == key[:2] and M >= N:
            return tab
    q = None
    if use_cache:
        from . import cache

        q = cache.load_table(presentation.kind, presentation.n, N)
    if q is None:
        q = QuotientLieAlgebra(presentation, N)
        if use_cache:
            from . import cache

            cache.store_table(q)
    _TABLES[key] = q
    return q


def table(kind: str, n: int, N: int | None = None, use_cache: bool = True) -> QuotientLieAlgebra:
    """Shortcut: quotient table for t_n ('t') or t_{1,n} ('t_ell')."""
    if N is None:
        N = DEFAULT_DEGREES.get((kind, n), 6)
    return nq_basis(standard_presentation(kind, n), N, use_cache)


# ----------------------------------------------------------------------------
# insertion morphisms
# ----------------------------------------------------------------------------


def _check_spec(spec: Sequence[Iterable[int]], m: int, total: bool):
    sets = [frozenset(s) for s in spec]
    seen = set()
    for s in sets:
        if seen & s:
            raise ValueError(f"insertion sets overlap: {spec}")
        seen |= s
        if any(i < 1 or i > m for i in s):
            raise ValueError(f"insertion index out of range 1..{m}: {spec}")
    if total and seen != set(range(1, m + 1)):
        raise ValueError(f"insertion for t_ell must cover all indices 1..{m}: {spec}")
    return sets


class Insertion:
    """The morphism x -> x^{I_1,...,I_n} from a source algebra to a target algebra."""

    def __init__(self, source: GradedLieAlgebra, target: QuotientLieAlgebra,
                 spec: Sequence[Iterable[int]], ring: Ring = QQ, N: int | None = None):
        N = target.N if N is None else N
        self.spec = spec
        kind = target.presentation.kind
        m = target.presentation.n
        sets = _check_spec(spec, m, total=(kind == "t_ell"))
        zero = LieSeries.zero(target, ring, N)
        images = []
        for sym in source.alphabet.symbols:
            if kind == "t":
                i, j = _parse_t(sym)
                acc = zero
                for a in sets[i - 1]:
                    for b in sets[j - 1]:
                        acc = acc + target.element(tname(a, b), ring, N)
                images.append(acc)
            else:
                letter, i = sym[0], int(sym[1:])
                acc = zero
                for a in sets[i - 1]:
                    acc = acc + target.element(f"{letter}{a}", ring, N)
                images.append(acc)
        self.hom = LieHom(source.alphabet, images)

    def __call__(self, s: LieSeries) -> LieSeries:
        return self.hom(s)


def _parse_t(sym: str) -> tuple[int, int]:
    body = sym[1:]
    if "_" in body:
        a, b = body.split("_")
        return int(a), int(b)
    return int(body[0]), int(body[1])


def insertion(x: LieSeries, spec: Sequence[Iterable[int]], target: QuotientLieAlgebra) -> LieSeries:
    """x^{I_1,...,I_n} in the target algebra (x given in a t or t_ell algebra or its cover)."""
    return Insertion(x.alg, target, spec, x.ring, x.N)(x)


def braces(x: LieSeries, target: QuotientLieAlgebra) -> LieSeries:
    """The map {.}: t_n -> t_{1,n}, t_ij -> [x_i, y_j]."""
    images = []
    for sym in x.alg.alphabet.symbols:
        i, j = _parse_t(sym)
        images.append(target.element(f"t{i}{j}", x.ring, x.N))
    return LieHom(x.alg.alphabet, images)(x)
