"""Parsing of formal bracket expressions and canonical JSON for series.

Expressions use generator names, brackets ``[u,v]``, parentheses, ``+``/``-``
and rational or integer scalars written before a ``*``::

    normalize("[[a,b],a] - 1/2*[a,[a,b]]", alphabet, N=3)
"""

from __future__ import annotations

import re
from fractions import Fraction

from .alphabet import Alphabet
from .lie import DegreeOverflow, LieSeries
from .ncseries import NCSeries, free_lie
from .scalars import QQ, CC, mpq

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokens(text):
    out = []
    for num, name, sym in _TOKEN.findall(text):
        if num:
            out.append(("num", num))
        elif name:
            out.append(("name", name))
        elif sym.strip():
            out.append(("sym", sym))
    return out


class _Parser:
    def __init__(self, text, alg, ring, N):
        self.toks = _tokens(text)
        self.i = 0
        self.alg, self.ring, self.N = alg, ring, N

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError(f"unexpected token {tok[1]!r} at position {self.i}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() == ("sym", "-"):
            self.take()
            sign = -1
        acc = self.term().scale(sign)
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        if self.peek()[0] == "num":
            c = mpq(Fraction(self.take()[1]))
            self.take("sym", "*")
            return self.atom().scale(c)
        return self.atom()

    def atom(self):
        kind, val = self.peek()
        if kind == "name":
            self.take()
            return self.alg.generator(val, self.ring, self.N)
        if (kind, val) == ("sym", "["):
            self.take()
            u = self.expr()
            self.take("sym", ",")
            v = self.expr()
            self.take("sym", "]")
            return u.bracket(v)
        if (kind, val) == ("sym", "("):
            self.take()
            e = self.expr()
            self.take("sym", ")")
            return e
        raise ValueError(f"unexpected token {val!r}")


def normalize(text: str, alphabet: Alphabet, N: int, ring=QQ, alg=None) -> LieSeries:
    """Lyndon coordinates of a formal Lie expression, truncated at N.

    Raises DegreeOverflow if the result has nonzero terms above degree N.
    """
    names = [v for k, v in _tokens(text) if k == "name"]
    big = max(N, sum(alphabet.degrees[alphabet.index(x)] for x in names))
    work = alg if alg is not None and alg.N >= big else free_lie(alphabet, big)
    p = _Parser(text, work, ring, big)
    out = p.expr()
    if p.i != len(p.toks):
        raise ValueError(f"trailing input after position {p.i}")
    if any(alphabet.word_degree(k) > N for k in out.terms):
        raise DegreeOverflow(f"expression has nonzero terms above degree {N}")
    target = alg or free_lie(alphabet, N)
    res = LieSeries(target, out.terms, ring, N)
    res.err = out.err
    return res


# ----------------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------------


def _ring_json(ring):
    return "QQ" if ring.exact else {"prec": ring.dps}


def _ring_from(spec):
    return QQ if spec == "QQ" else CC(int(spec["prec"]))


def series_to_json(s) -> dict:
    """Canonical JSON: words as arrays of symbol names, rationals "p/q", complex {re,im,prec,err}."""
    if isinstance(s, LieSeries):
        alph = s.alg.alphabet
        kind = "lie"
        pres = getattr(s.alg, "presentation", None)
        algebra = {"kind": pres.kind, "n": pres.n} if pres is not None else "free"
    elif isinstance(s, NCSeries):
        alph = s.alphabet
        kind = "nc"
        algebra = "free"
    else:
        raise TypeError(f"cannot serialize {type(s).__name__}")
    ring = s.ring
    terms = []
    for w in sorted(s.terms, key=lambda w: (alph.word_degree(w), w)):
        c = s.terms[w]
        cj = ring.to_json(c) if ring.exact else ring.to_json(c, 0)
        terms.append([[alph.symbols[i] for i in w], cj])
    return {
        "type": kind,
        "algebra": algebra,
        "alphabet": list(alph.symbols),
        "multidegrees": [list(m) for m in alph.multidegrees],
        "N": s.N,
        "ring": _ring_json(ring),
        "err": None if ring.exact else ring.ctx.nstr(ring.ctx.mpf(s.err), 10),
        "terms": terms,
    }


def series_from_json(d: dict):
    alph = Alphabet(tuple(d["alphabet"]), tuple(tuple(m) for m in d["multidegrees"]))
    ring = _ring_from(d["ring"])
    terms = {}
    for word, c in d["terms"]:
        w = tuple(alph.index(x) for x in word)
        terms[w] = ring.from_json(c)
    err = 0 if ring.exact else ring.ctx.mpf(d["err"] or 0)
    if d["type"] == "nc":
        return NCSeries(alph, terms, ring, d["N"], err)
    if d["algebra"] == "free":
        alg = free_lie(alph, d["N"])
    else:
        from .presentations import table

        alg = table(d["algebra"]["kind"], d["algebra"]["n"], d["N"])
    s = LieSeries(alg, terms, ring, d["N"])
    s.err = err
    return s
