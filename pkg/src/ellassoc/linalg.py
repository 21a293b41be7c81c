"""Sparse exact row reduction.

Rows are dicts column -> mpq.  :class:`RREF` keeps a fully reduced echelon
basis whose pivot in each row is that row's largest column, so the reduced
basis of a subspace is unique and independent of insertion order.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

from .scalars import mpq


class RREF:
    def __init__(self):
        self.rows: dict = {}
        self._col_rows: defaultdict = defaultdict(set)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping) -> dict:
        """Remainder of v modulo the span (a vector with no pivot columns)."""
        out = {k: c for k, c in v.items() if c != 0}
        rows = self.rows
        for p in [k for k in out if k in rows]:
            c = out.get(p)
            if not c:
                continue
            for k, r in rows[p].items():
                val = out.get(k, 0) - c * r
                if val:
                    out[k] = val
                else:
                    out.pop(k, None)
        return out

    def insert(self, v: Mapping) -> bool:
        """Add v to the span; True if the rank grew."""
        v = self.reduce(v)
        if not v:
            return False
        p = max(v)
        inv = 1 / mpq(v[p])
        v = {k: c * inv for k, c in v.items()}
        for q in list(self._col_rows.get(p, ())):
            row = self.rows[q]
            c = row[p]
            for k, r in v.items():
                val = row.get(k, 0) - c * r
                if val:
                    if k not in row:
                        self._col_rows[k].add(q)
                    row[k] = val
                else:
                    row.pop(k, None)
                    self._col_rows[k].discard(q)
        self.rows[p] = v
        for k in v:
            self._col_rows[k].add(p)
        return True

    def extend(self, vs: Iterable[Mapping]) -> int:
        return sum(1 for v in vs if self.insert(v))

    def pivots(self) -> set:
        return set(self.rows)

    def normal_form_map(self) -> dict:
        """pivot -> expression of the pivot modulo the span in non-pivot columns."""
        return {p: {k: -c for k, c in row.items() if k != p} for p, row in self.rows.items()}


def nullspace(columns: list[Mapping], n_unknowns: int) -> list[dict]:
    """Exact kernel of the linear map  e_j -> columns[j]  (columns as sparse dicts).

    Returns a basis of {a : sum_j a_j columns[j] = 0} as dicts j -> mpq.
    """
    # augment each column by a tag coordinate (0, j); image coordinates (1, k)
    # rank above tags, so rows whose pivot is a tag have zero image part
    r = RREF()
    kernel = []
    rows: list[dict] = []
    for j in range(n_unknowns):
        img = {(1, k): mpq(c) for k, c in columns[j].items() if c != 0}
        img[(0, j)] = mpq(1)
        rows.append(img)
    for img in rows:
        r.insert(img)
    for p, row in r.rows.items():
        if p[0] == 0:  # pivot on a tag column: pure combination of tags
            kernel.append({k[1]: c for k, c in row.items()})
    return kernel
