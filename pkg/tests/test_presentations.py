import random

import pytest

from ellassoc.lie import LieSeries
from ellassoc.lyndon import witt_dimension
from ellassoc.membership import t12_free
from ellassoc.presentations import (GradedPresentation, QuotientLieAlgebra, braces, insertion,
                                    nq_basis, standard_presentation, table)
from ellassoc.scalars import QQ, mpq


def test_t12_is_free():
    p = standard_presentation("t_ell", 2)
    assert p.relations == []
    assert p.alphabet.symbols == ("x1", "y1")
    q = nq_basis(p, 8)
    assert q.dims() == [witt_dimension(2, d) for d in range(1, 9)]


def test_t3_dims_match_central_decomposition():
    # t_3 = f_2 (+) k.(t12 + t13 + t23)
    assert table("t", 3, 5).dims() == [3, 1, 2, 3, 6]


def test_t4_dims_match_semidirect_decomposition():
    t3 = [witt_dimension(2, d) + (d == 1) for d in range(1, 6)]
    assert table("t", 4, 5).dims() == [witt_dimension(3, d) + t3[d - 1] for d in range(1, 6)]


def test_t_ell_3_presentation():
    p = standard_presentation("t_ell", 3)
    assert p.alphabet.symbols == ("x1", "y1", "x2", "y2")
    T = table("t_ell", 3, 4)
    x1, x2, y1, y2 = (T.element(s) for s in ("x1", "x2", "y1", "y2"))
    assert x1.bracket(x2).is_zero()
    assert (x1.bracket(y2) - x2.bracket(y1)).is_zero()
    assert (x1 + x2 + T.element("x3")).is_zero()


def test_rejects_small_n():
    with pytest.raises(ValueError):
        standard_presentation("t", 1)


def test_quotient_dimension_identity():
    T = table("t_ell", 3, 4)
    for d in range(1, 5):
        assert len(T.basis(d)) + T.ideal_dimension(d) == T.cover_dimension(d)


def test_every_relation_reduces_to_zero():
    T = table("t_ell", 3, 4)
    cover = T.cover
    for r in T.presentation.relations:
        rr = LieSeries(cover, r.terms, QQ, 4)
        assert T.reduce(rr).is_zero()


def test_dims_invariant_under_relation_order():
    p = standard_presentation("t", 4)
    rels = list(p.relations)
    random.Random(3).shuffle(rels)
    q = QuotientLieAlgebra(GradedPresentation(p.kind, p.n, p.alphabet, rels, p.named), 4)
    assert q.dims() == table("t", 4, 4).dims()[:4]


def test_insertion_examples():
    t2, t3 = table("t", 2, 3), table("t", 3, 3)
    out = insertion(t2.element("t12", QQ, 3), [{1}, {2, 3}], t3)
    assert (out - t3.element("t12", QQ, 3) - t3.element("t13", QQ, 3)).is_zero()
    T = table("t_ell", 3, 3)
    x = t12_free(3).generator("x1")
    assert (insertion(x, [{1, 2}, {3}], T) - T.element("x1", QQ, 3) - T.element("x2", QQ, 3)).is_zero()


def test_braces_functorial():
    # {x}^phi = {x^phi} for x = t12 and phi = (1, 23)
    t2, t3 = table("t", 2, 3), table("t", 3, 3)
    T2, T3 = table("t_ell", 2, 3), table("t_ell", 3, 3)
    t12 = t2.element("t12", QQ, 3)
    lhs = insertion(braces(t12, T2), [{1}, {2, 3}], T3)
    rhs = braces(insertion(t12, [{1}, {2, 3}], t3), T3)
    assert (lhs - rhs).is_zero()
    assert not lhs.is_zero()


def test_insertion_is_homomorphism_on_random_brackets():
    t3 = table("t", 3, 4)
    t4 = table("t", 4, 4)
    rng = random.Random(7)
    gens = [t3.element(s, QQ, 4) for s in ("t12", "t13", "t23")]
    for _ in range(5):
        a = sum((g.scale(mpq(rng.randint(-2, 2))) for g in gens), LieSeries.zero(t3, QQ, 4))
        b = sum((g.scale(mpq(rng.randint(-2, 2))) for g in gens), LieSeries.zero(t3, QQ, 4))
        spec = [{1}, {2, 3}, {4}]
        lhs = insertion(a.bracket(b), spec, t4)
        rhs = insertion(a, spec, t4).bracket(insertion(b, spec, t4))
        assert (lhs - rhs).is_zero()


def test_table_cache_roundtrip():
    q = QuotientLieAlgebra(standard_presentation("t", 3), 4)
    q2 = QuotientLieAlgebra.from_json(q.to_json())
    assert q2.dims() == q.dims()
