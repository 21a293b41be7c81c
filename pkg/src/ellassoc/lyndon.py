"""Lyndon words, standard factorization and the Lyndon basis of a free Lie algebra.

Words are tuples of letter indices; the letter order is the integer order, so
tuple comparison is the lexicographic order used throughout (a proper prefix is
smaller).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

Word = tuple


def is_lyndon(w: Sequence[int]) -> bool:
    """A non-empty word strictly smaller than each of its proper rotations."""
    w = tuple(w)
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


def lyndon_words(k: int, n: int) -> Iterator[Word]:
    """Duval's algorithm: Lyndon words on letters ``0..k-1`` of length <= n, in lex order."""
    if k <= 0 or n <= 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as (u, v) with v its longest proper Lyndon suffix."""
    if len(w) < 2:
        raise ValueError("letters have no standard factorization")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} is not a Lyndon word")  # pragma: no cover


def witt_dimension(k: int, d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra on k letters."""
    return int(sum(mobius(d // e) * k**e for e in divisors(d))) // d


def weighted_witt_dimension(degrees: Sequence[int], d: int) -> int:
    """Dimension in weighted degree d of the free Lie algebra with letter degrees ``degrees``.

    Uses the necklace formula on the counts of words of each weight.
    """
    # prod_e (1 - t^e)^(-L_e) = 1/(1 - f(t)) with f = sum_g t^g.  Taking logs,
    # s_m := sum_{e | m} e L_e satisfies s_m = m f_m + sum_{j<m} f_j s_{m-j}.
    f = [0] * (d + 1)
    for g in degrees:
        if g <= d:
            f[g] += 1
    s = [0] * (d + 1)
    for m in range(1, d + 1):
        s[m] = m * f[m] + sum(f[j] * s[m - j] for j in range(1, m))
    lie = [0] * (d + 1)
    for m in range(1, d + 1):
        lie[m] = (s[m] - sum(e * lie[e] for e in divisors(m) if e < m)) // m
    return lie[d]


@lru_cache(maxsize=None)
def lie_bracket(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """[P_u, P_v] in the Lyndon basis, as ((word, integer coefficient), ...).

    Standard rewriting: for u < v the word uv is a basis element with standard
    factorization (u, v) iff u is a letter or the right factor of u is >= v.
    Otherwise Jacobi gives [[u1,u2],v] = [u1,[u2,v]] + [[u1,v],u2].
    """
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in lie_bracket(v, u))
    if len(u) == 1 or standard_factorization(u)[1] >= v:
        return ((u + v, 1),)
    u1, u2 = standard_factorization(u)
    out: dict[Word, int] = {}
    for w, c in lie_bracket(u2, v):
        for w2, c2 in lie_bracket(u1, w):
            out[w2] = out.get(w2, 0) + c * c2
    for w, c in lie_bracket(u1, v):
        for w2, c2 in lie_bracket(w, u2):
            out[w2] = out.get(w2, 0) + c * c2
    return tuple(sorted((w, c) for w, c in out.items() if c))


@lru_cache(maxsize=None)
def expand(w: Word) -> dict:
    """Associative expansion of the Lyndon bracket P_w (letters map to themselves)."""
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    eu, ev = expand(u), expand(v)
    out: dict[Word, int] = {}
    for a, ca in eu.items():
        for b, cb in ev.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
            out[b + a] = out.get(b + a, 0) - ca * cb
    return {k: c for k, c in out.items() if c}


def bracket_tree(w: Word):
    """Nested-tuple bracketing of a Lyndon word, letters as ints."""
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (bracket_tree(u), bracket_tree(v))


def tree_to_str(tree, symbols: Sequence[str]) -> str:
    if isinstance(tree, int):
        return symbols[tree]
    return f"[{tree_to_str(tree[0], symbols)},{tree_to_str(tree[1], symbols)}]"


def assoc_to_lyndon(poly: dict, zero_test=lambda c: c == 0) -> dict:
    """Coordinates of a Lie polynomial (given associatively) in the Lyndon basis.

    P_w equals w plus lexicographically larger words, so the smallest word of a
    Lie polynomial is Lyndon and carries its coefficient.  Raises ValueError if
    the input is not a Lie polynomial.
    """
    rest = {w: c for w, c in poly.items() if not zero_test(c)}
    out = {}
    by_len: dict[int, dict] = {}
    for w, c in rest.items():
        by_len.setdefault(len(w), {})[w] = c
    for n in sorted(by_len):
        part = by_len[n]
        if n == 0:
            raise ValueError("constant term in a Lie polynomial")
        while part:
            w = min(part)
            c = part.pop(w)
            if zero_test(c):
                continue
            if not is_lyndon(w):
                raise ValueError(f"not a Lie polynomial: leading word {w} is not Lyndon")
            out[w] = c
            for x, cx in expand(w).items():
                if x == w:
                    continue
                val = part.get(x, 0) - c * cx
                if zero_test(val):
                    part.pop(x, None)
                else:
                    part[x] = val
    return out
