"""Multiple zeta values in the increasing-index convention.

    zeta(k_1, ..., k_m) = sum_{0 < n_1 < ... < n_m} 1 / (n_1^k_1 ... n_m^k_m),   k_m > 1.

The common decreasing convention writes the same number as zeta(k_m, ..., k_1).

Evaluation splits the iterated integral over [0, 1] at 1/2.  With
w_0 = dt/t and w_1 = dt/(1-t), a word e_1...e_w (e_1 nearest to 1) gives

    I(e; 1) = sum_i I(swap(reverse(e_1..e_i)); 1/2) * I(e_{i+1}..e_w; 1/2),

and every factor is a multiple polylogarithm at 1/2, a nested sum whose terms
decay like 2^-n.  The tail after M terms is bounded by a geometric series.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import mpmath

from . import cache

log = logging.getLogger(__name__)

MZV_VERSION = 1


class InadmissibleIndex(ValueError):
    """The last index k_m must exceed 1."""


def check_index(index) -> tuple:
    index = tuple(int(k) for k in index)
    if not index or any(k < 1 for k in index):
        raise InadmissibleIndex(f"bad index {index}")
    if index[-1] < 2:
        raise InadmissibleIndex(f"index {index} diverges: last entry must be > 1")
    return index


def weight(index) -> int:
    return sum(index)


def indices_of_weight(w: int) -> list[tuple]:
    """All admissible indices of weight w (compositions with last part >= 2)."""
    out = []
    for cuts in itertools.product((0, 1), repeat=w - 1):
        comp, run = [], 1
        for c in cuts:
            if c:
                comp.append(run)
                run = 1
            else:
                run += 1
        comp.append(run)
        if comp[-1] >= 2:
            out.append(tuple(comp))
    return sorted(out)


def _word_of(index_increasing) -> tuple:
    """Integration word (top letter first) of zeta in increasing convention."""
    word = []
    for k in reversed(index_increasing):  # decreasing-convention order
        word += [0] * (k - 1) + [1]
    return tuple(word)


def _depth_split(word) -> tuple:
    """Li exponents (s_1, ..., s_k) of a word ending in 1 (decreasing convention)."""
    s, run = [], 0
    for e in word:
        run += 1
        if e == 1:
            s.append(run)
            run = 0
    return tuple(s)


class _Engine:
    """Li_s(1/2) values with error bounds at a fixed working precision."""

    def __init__(self, dps: int):
        self.ctx = mpmath.MPContext()
        self.ctx.dps = dps + 10
        self.target = mpmath.mpf(10) ** (-(dps + 5))
        self._li: dict = {}

    def li_half(self, s: tuple):
        """(value, error bound) of sum_{n_1 > ... > n_k} 2^-n_1 / prod n_j^s_j."""
        if not s:
            return self.ctx.mpf(1), self.ctx.mpf(0)
        if s in self._li:
            return self._li[s]
        ctx = self.ctx
        k = len(s)
        # choose M so that the geometric tail bound is below the target
        M = 8
        while True:
            r = 0.5 * (1 + 1 / M) ** (k - 1)
            if r < 1:
                head = 2.0 ** (-(M + 1)) * (1 + mpmath.log(M + 1)) ** (k - 1)
                bound = head / (1 - r)
                if bound < self.target:
                    break
            M += 8
        # inner[j]: sum over n > n_j > ... > n_k of prod_{i >= j} 1/n_i^s_i
        inner = [ctx.mpf(0)] * k
        total = ctx.mpf(0)
        half = ctx.mpf(1) / 2
        p = ctx.mpf(1)
        for n in range(1, M + 1):
            p *= half
            nn = ctx.mpf(n)
            vals = [None] * k
            for j in range(k - 1, -1, -1):
                base = ctx.mpf(1) if j == k - 1 else inner[j + 1]
                vals[j] = base / nn ** s[j]
            total += p * vals[0]
            for j in range(k - 1, 0, -1):
                inner[j] += vals[j]
        err = ctx.mpf(bound) + ctx.mpf(10) ** (-(ctx.dps - 2)) * M
        self._li[s] = (total, err)
        return total, err

    def zeta(self, index):
        word = _word_of(index)
        ctx = self.ctx
        total = ctx.mpf(0)
        err = ctx.mpf(0)
        for i in range(len(word) + 1):
            head = tuple(1 - e for e in reversed(word[:i]))
            tail = word[i:]
            if head and head[-1] != 1 or tail and tail[-1] != 1:
                raise AssertionError("split produced a divergent factor")  # pragma: no cover
            a, ea = self.li_half(_depth_split(head))
            b, eb = self.li_half(_depth_split(tail))
            total += a * b
            err += abs(a) * eb + abs(b) * ea + ea * eb
        return total, err


_ENGINES: dict = {}


def _engine(dps):
    if dps not in _ENGINES:
        _ENGINES[dps] = _Engine(dps)
    return _ENGINES[dps]


@dataclass(frozen=True)
class MZVValue:
    index: tuple
    value: object  # mpf at the requested precision
    err: object
    precision: int


def mzv(index, precision: int = 30) -> MZVValue:
    """zeta(k_1, ..., k_m) in the increasing convention, with |error| <= 10^-precision."""
    index = check_index(index)
    eng = _engine(int(precision))
    v, e = eng.zeta(index)
    ctx = mpmath.MPContext()
    ctx.dps = int(precision) + 10
    return MZVValue(index, ctx.mpf(v), ctx.mpf(e), int(precision))


# ----------------------------------------------------------------------------
# tables
# ----------------------------------------------------------------------------


@dataclass
class MZVTable:
    max_weight: int
    precision: int
    values: dict = field(default_factory=dict)  # index -> (mpf, err)
    provenance: dict = field(default_factory=dict)

    def __getitem__(self, index):
        return self.values[tuple(index)][0]

    def error(self, index):
        return self.values[tuple(index)][1]

    def __contains__(self, index):
        return tuple(index) in self.values

    def of_weight(self, w):
        return sorted(k for k in self.values if sum(k) == w)

    def to_json(self) -> dict:
        ctx = mpmath.MPContext()
        ctx.dps = self.precision + 10
        vals = [[list(k), ctx.nstr(v, ctx.dps + 5, strip_zeros=False), ctx.nstr(e, 5)]
                for k, (v, e) in sorted(self.values.items())]
        return {"max_weight": self.max_weight, "precision": self.precision,
                "provenance": self.provenance, "values": vals}

    @classmethod
    def from_json(cls, d) -> "MZVTable":
        ctx = mpmath.MPContext()
        ctx.dps = d["precision"] + 10
        vals = {tuple(k): (ctx.mpf(v), ctx.mpf(e)) for k, v, e in d["values"]}
        return cls(d["max_weight"], d["precision"], vals, d.get("provenance", {}))


def _cache_name(W, P):
    return f"mzv-w{W}-p{P}.json"


def mzv_table(max_weight: int, precision: int = 30, persist: bool = True) -> MZVTable:
    """All admissible MZVs of weight <= max_weight; reloaded from the cache when possible."""
    if max_weight < 2:
        raise ValueError("max_weight must be at least 2")
    if persist:
        payload = cache.load("mzv", _cache_name(max_weight, precision), MZV_VERSION)
        if payload is not None:
            return MZVTable.from_json(payload)
    tab = MZVTable(max_weight, precision,
                   provenance={"method": "iterated integral split at 1/2",
                               "working_digits": precision + 10})
    for w in range(2, max_weight + 1):
        for idx in indices_of_weight(w):
            v = mzv(idx, precision)
            tab.values[idx] = (v.value, v.err)
    if persist:
        try:
            cache.store("mzv", _cache_name(max_weight, precision), tab.to_json(), MZV_VERSION)
        except cache.CacheError as exc:
            log.warning("%s", exc)
    return tab
