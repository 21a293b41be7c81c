"""Exact membership tests for grt_1, grt_1^ell, r_ell^gr and GRT_1^ell.

Elements of f_2 = Lie(A, B) enter t_n through A -> t_12, B -> t_23 followed by
an insertion: psi^{I,J,K} = psi(t_{IJ}, t_{JK}) with t_{IJ} = sum t_ab over
a in I, b in J.  In t_{1,3} the same element is read through t_ij -> [x_i, y_j].
Elements of t_{1,2} = Lie(x1, y1) enter t_{1,3} through the total insertions
alpha^{i,jk}.

Each check returns a :class:`MembershipReport` holding every relation's
residual in quotient normal form; the element is a member iff all vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

from .alphabet import Alphabet
from .lie import DegreeOverflow, LieHom, LieSeries, ad_series, bch, bch_many
from .linalg import nullspace
from .ncseries import free_lie
from .presentations import Insertion, QuotientLieAlgebra, standard_presentation, table, tname
from .scalars import QQ, mpq

F2_ALPHABET = Alphabet.simple(("A", "B"))
T12_ALPHABET = standard_presentation("t_ell", 2).alphabet


def f2(N: int):
    """Free Lie algebra on A, B."""
    return free_lie(F2_ALPHABET, N)


def t12_free(N: int):
    """t_{1,2}: the free Lie algebra on x1, y1 with bidegrees (1,0), (0,1)."""
    return free_lie(T12_ALPHABET, N)


# ----------------------------------------------------------------------------
# reports
# ----------------------------------------------------------------------------


@dataclass
class MembershipReport:
    kind: str
    residuals: dict = field(default_factory=dict)  # relation name -> LieSeries

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    def norms(self) -> dict:
        return {k: r.max_norm() for k, r in self.residuals.items()}

    def max_residual(self):
        return max((r.max_norm() for r in self.residuals.values()), default=0)

    def nonzero(self) -> list:
        """(relation, degree, {key: coefficient}) for every nonzero homogeneous component."""
        out = []
        for name, r in self.residuals.items():
            for d in r.degrees():
                part = r.degree_part(d)
                out.append((name, d, {r.alg.key_str(k): c for k, c in part.terms.items()}))
        return out


# ----------------------------------------------------------------------------
# embeddings
# ----------------------------------------------------------------------------


def regrade(s: LieSeries, alg, M: int) -> LieSeries:
    """The same coordinates in another algebra with the same keys, truncated at M."""
    if s.terms and max(s.alg.key_degree(k) for k in s.terms) > M:
        raise DegreeOverflow(f"element has terms above degree {M}")
    out = LieSeries(alg, s.terms, s.ring, M)
    out.err = s.err
    return out


def genus0_images(target: QuotientLieAlgebra, triple: Sequence, ring=QQ, N=None):
    """Images of A, B under psi -> psi^{I,J,K} in t_n."""
    N = target.N if N is None else N
    sets = [frozenset([s]) if isinstance(s, int) else frozenset(s) for s in triple]
    zero = LieSeries.zero(target, ring, N)

    def tsum(I, J):
        acc = zero
        for a in I:
            for b in J:
                acc = acc + target.element(tname(a, b), ring, N)
        return acc

    return [tsum(sets[0], sets[1]), tsum(sets[1], sets[2])]


def psi_genus0(psi: LieSeries, triple: Sequence, target: QuotientLieAlgebra, N=None) -> LieSeries:
    """psi^{I,J,K} in t_n."""
    N = psi.N if N is None else N
    if psi.N > N:
        psi = psi.truncated(N)
    return LieHom(F2_ALPHABET, genus0_images(target, triple, psi.ring, N))(psi)


def psi_genus1(psi: LieSeries, triple: Sequence[int], target, N: int) -> LieSeries:
    """{psi^{i,j,k}} in t_{1,n}: A -> t_ij, B -> t_jk."""
    from .special import ell_element

    i, j, k = triple
    imgs = [ell_element(target, f"t{i}{j}", psi.ring, N), ell_element(target, f"t{j}{k}", psi.ring, N)]
    if psi.N > N:
        psi = psi.truncated(N)
    return LieHom(F2_ALPHABET, imgs)(psi)


def ell_insert(a: LieSeries, spec, target, N: int) -> LieSeries:
    """alpha^{I_1, I_2} in t_{1,n} for alpha in t_{1,2}."""
    if a.N > N:
        a = a.truncated(N)
    return Insertion(a.alg, target, spec, a.ring, N)(a)


def Ad(z: LieSeries, u: LieSeries, inverse: bool = False) -> LieSeries:
    """Ad(e^z)(u), or Ad(e^z)^{-1}(u)."""
    sign = -1 if inverse else 1
    coeffs = [mpq(sign ** k, factorial(k)) for k in range(u.N + 1)]
    if not u.ring.exact:
        coeffs = [u.ring.coerce(c) for c in coeffs]
    return ad_series(coeffs, z, u)


# ----------------------------------------------------------------------------
# the relation families
# ----------------------------------------------------------------------------


def grt1_relations(psi: LieSeries, t3=None, t4=None) -> dict:
    """Residuals of the four grt_1 conditions for psi in f_2."""
    N = psi.N
    M = N + 1  # the hexagon condition raises degree by one
    t3 = t3 or table("t", 3, M)
    t4 = t4 or table("t", 4, max(N, 2))
    ring = psi.ring

    def p3(tr):
        return psi_genus0(psi, tr, t3, M)

    def p4(tr):
        return psi_genus0(psi, tr, t4, N)

    t23 = t3.element("t23", ring, M)
    t13 = t3.element("t13", ring, M)
    res = {
        "antisymmetry": p3((1, 2, 3)) + p3((3, 2, 1)),
        "cyclic": p3((1, 2, 3)) + p3((2, 3, 1)) + p3((3, 1, 2)),
        "hexagon": t23.bracket(p3((1, 2, 3))) + t13.bracket(p3((2, 1, 3))),
        "pentagon": (p4((2, 3, 4)) - p4(((1, 2), 3, 4)) + p4((1, (2, 3), 4))
                     - p4((1, 2, (3, 4))) + p4((1, 2, 3))),
    }
    return res


def grt1_ell_relations(ap: LieSeries, am: LieSeries, psi: LieSeries | None = None,
                       M: int | None = None) -> dict:
    """Residuals of the grt_1^ell conditions for (psi, alpha_+, alpha_-); psi=None gives r_ell^gr."""
    from .special import ell_element

    deg = max([ap.alg.key_degree(k) for k in ap.terms] + [am.alg.key_degree(k) for k in am.terms] + [1])
    if psi is not None and psi.terms:
        deg = max(deg, 2 * max(psi.alg.key_degree(k) for k in psi.terms))
    M = M or deg + 1
    T = table("t_ell", 3, M)
    ring = ap.ring
    x = {(i, s): ell_element(T, f"{'x' if s > 0 else 'y'}{i}", ring, M)
         for i in (1, 2, 3) for s in (1, -1)}
    alpha = {1: ap, -1: am}

    def ins(s, spec):
        return ell_insert(alpha[s], spec, T, M)

    zero = LieSeries.zero(T, ring, M)
    p123 = psi_genus1(psi, (1, 2, 3), T, M) if psi is not None else zero
    p213 = psi_genus1(psi, (2, 1, 3), T, M) if psi is not None else zero
    res = {}
    for s, tag in ((1, "+"), (-1, "-")):
        a1 = ins(s, ({1}, {2, 3}))
        a2 = ins(s, ({2}, {3, 1}))
        a3 = ins(s, ({3}, {1, 2}))
        res[f"sum{tag}"] = a1 + a2 + a3 + x[(1, s)].bracket(p123) + x[(2, s)].bracket(p213)
        res[f"commute{tag}"] = (x[(1, s)].bracket(a3) + a1.bracket(x[(3, s)])
                                - x[(1, s)].bracket(x[(3, s)].bracket(p123)))
    res["mixed"] = (x[(1, 1)].bracket(ins(-1, ({2}, {1, 3})))
                    - x[(2, -1)].bracket(ins(1, ({1}, {2, 3})))
                    - x[(2, -1)].bracket(x[(1, 1)].bracket(p123)))
    return res


def grt_ell_group_relations(g_log: LieSeries, up: LieSeries, um: LieSeries,
                            include_genus0: bool = True) -> dict:
    """Residuals of the GRT_1^ell conditions for (g = exp(g_log), u_+, u_-), at truncation up.N."""
    from .special import ell_element

    N = up.N
    T = table("t_ell", 3, N)
    ring = up.ring
    g123 = psi_genus1(g_log, (1, 2, 3), T, N)
    g213 = psi_genus1(g_log, (2, 1, 3), T, N)
    res = {}
    for tag, u in (("+", up), ("-", um)):
        v1 = Ad(g123, ell_insert(u, ({1}, {2, 3}), T, N), inverse=True)
        v2 = Ad(g213, ell_insert(u, ({2}, {1, 3}), T, N), inverse=True)
        v3 = ell_insert(u, ({3}, {1, 2}), T, N)
        res[f"sum{tag}"] = v1 + v2 + v3
        res[f"commute{tag}"] = v1.bracket(v3)
    w1 = Ad(g123, ell_insert(up, ({1}, {2, 3}), T, N), inverse=True)
    w2 = Ad(g213, ell_insert(um, ({2}, {1, 3}), T, N), inverse=True)
    res["mixed"] = w1.bracket(w2) - ell_element(T, "t12", ring, N)
    if include_genus0:
        res.update({f"grt1:{k}": v for k, v in grt1_group_relations(g_log).items()})
    return res


def grt1_group_relations(g_log: LieSeries) -> dict:
    """Residuals of the GRT_1 conditions for g = exp(g_log) in exp(f_2)."""
    N = g_log.N
    t3 = table("t", 3, max(N, 2))
    t4 = table("t", 4, max(N, 2))
    ring = g_log.ring

    def g3(tr):
        return psi_genus0(g_log, tr, t3, N)

    def g4(tr):
        return psi_genus0(g_log, tr, t4, N)

    t12, t13, t23 = (t3.element(s, ring, N) for s in ("t12", "t13", "t23"))
    return {
        "duality": bch(g3((3, 2, 1)), g3((1, 2, 3))),
        "cyclic": bch_many([g3((3, 1, 2)), g3((2, 3, 1)), g3((1, 2, 3))]),
        "hexagon": (Ad(g3((1, 2, 3)), t23, inverse=True) + Ad(g3((2, 1, 3)), t13, inverse=True)
                    - t13 - t23),
        "pentagon": bch(bch_many([g4((2, 3, 4)), g4((1, (2, 3), 4)), g4((1, 2, 3))]),
                        -bch(g4((1, 2, (3, 4))), g4(((1, 2), 3, 4)))),
    }


def check_membership(kind: str, data, M: int | None = None) -> MembershipReport:
    """Evaluate the defining relations of rell_gr, grt1, grt1_ell or grt_ell_group.

    For the Lie kinds, M is the degree up to which relations are evaluated; pass
    the truncation of (alpha_+, alpha_-) when they are inhomogeneous series.
    """
    if kind == "rell_gr":
        ap, am = data
        return MembershipReport(kind, grt1_ell_relations(ap, am, None, M))
    if kind == "grt1":
        return MembershipReport(kind, grt1_relations(data))
    if kind == "grt1_ell":
        psi, ap, am = data
        return MembershipReport(kind, grt1_ell_relations(ap, am, psi, M))
    if kind == "grt_ell_group":
        g, up, um = data
        return MembershipReport(kind, grt_ell_group_relations(g, up, um))
    raise ValueError(f"unknown membership kind {kind!r}")


# ----------------------------------------------------------------------------
# homogeneous solution spaces
# ----------------------------------------------------------------------------


@dataclass
class SolutionSpace:
    kind: str
    degree: int
    basis: list  # list of solutions (tuples of LieSeries)

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _flatten(res: dict) -> dict:
    out = {}
    for name, r in res.items():
        for k, c in r.terms.items():
            out[(name, k)] = c
    return out


def solve_component(kind: str, degree: int) -> SolutionSpace:
    """Exact solution space of the homogeneous linear conditions in one degree.

    rell_gr: derivations (alpha_+, alpha_-) of degree d, i.e. alpha_pm in t_{1,2}[d+1],
    split by bidegree.  grt1: psi in f_2 of degree d.
    """
    d = int(degree)
    if kind == "rell_gr":
        M = d + 3
        L = t12_free(M)
        sols = []
        km = L.key_multidegree
        for a in range(-1, d + 2):
            b = d - a
            plus = [k for k in L.basis(d + 1) if km(k) == (a + 1, b)]
            minus = [k for k in L.basis(d + 1) if km(k) == (a, b + 1)]
            unknowns = [(1, k) for k in plus] + [(-1, k) for k in minus]
            if not unknowns:
                continue
            zero = LieSeries.zero(L, QQ, M)
            cols = []
            for s, k in unknowns:
                e = LieSeries(L, {k: mpq(1)}, QQ, M)
                ap, am = (e, zero) if s == 1 else (zero, e)
                cols.append(_flatten(grt1_ell_relations(ap, am, None, M=d + 2)))
            for vec in nullspace(cols, len(unknowns)):
                ap = {k: c for j, c in vec.items() for (s, k) in [unknowns[j]] if s == 1}
                am = {k: c for j, c in vec.items() for (s, k) in [unknowns[j]] if s == -1}
                sols.append((LieSeries(L, ap, QQ, M), LieSeries(L, am, QQ, M)))
        return SolutionSpace(kind, d, sols)
    if kind == "grt1":
        F = f2(max(d, 2))
        basis = F.basis(d)
        cols = []
        for k in basis:
            cols.append(_flatten(grt1_relations(LieSeries(F, {k: mpq(1)}, QQ, max(d, 2)))))
        sols = [(LieSeries(F, {basis[j]: c for j, c in vec.items()}, QQ, max(d, 2)),)
                for vec in nullspace(cols, len(basis))]
        return SolutionSpace(kind, d, sols)
    raise ValueError(f"no solver for {kind!r}")
