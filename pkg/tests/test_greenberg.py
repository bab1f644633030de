"""The Greenberg algebra, transform, and the jet comparison."""

import pytest

from arithjet.errors import NotCharP
from arithjet.greenberg import (ArtinPresentation, GreenbergContext,
                                comparison_report, drinfeld_u_tilde,
                                greenberg_transform, special_fiber)
from arithjet.multipoly import MultiPoly, jet_var
from arithjet.rings import EISEN, GAUSS, Z2, FiniteRing, QuotientRing
from arithjet.witt import WittRing, build_table

X = jet_var("x")

F2 = FiniteRing(2, [])
F4 = FiniteRing(2, [[1, 1, 1]])
F2EPS = FiniteRing(2, [[0, 0, 1]])


def test_context_restrictions():
    with pytest.raises(ValueError):
        GreenbergContext(EISEN, 1)  # residue field is not prime
    ctx = GreenbergContext(Z2, 2)
    assert ctx.e == 1 and ctx.E == [-2, 1]
    ctxg = GreenbergContext(GAUSS, 1)
    assert ctxg.e == 2 and ctxg.E == [2, -2, 1]


def test_unramified_sections_are_witt_vectors():
    # e = 1: R(B) = W_(m-1)(B) with pi acting as p
    ctx = GreenbergContext(Z2, 2)
    r = ctx.sections(F2)
    elems = list(r.elements())
    assert len(elems) == 4
    w = WittRing(build_table(Z2, 1), F2)
    for (x,) in elems:
        for (y,) in elems:
            assert r.add((x,), (y,)) == (x + y,)
            assert r.mul((x,), (y,)) == (x * y,)
    assert r.pi() == (w.from_int(2),)


def test_ramified_sections_of_f2():
    # R(F2) for (Z[i], 1+i, m=1) is O/pi^2 = Z[i]/2
    ctx = GreenbergContext(GAUSS, 1)
    r = ctx.sections(F2)
    elems = list(r.elements())
    assert len(elems) == 4
    quo = QuotientRing(GAUSS, 2)
    mp = r.structure_map()
    images = {q: mp(q) for q in quo.elements()}
    assert len(set(images.values())) == 4
    for a in quo.elements():
        for b in quo.elements():
            assert mp(quo.add(a, b)) == r.add(images[a], images[b])
            assert mp(quo.mul(a, b)) == r.mul(images[a], images[b])
    # pi is nonzero with pi^2 = 0 in R(F2)
    pi = r.pi()
    assert not r.is_zero(pi) and r.is_zero(r.mul(pi, pi))


def test_transform_of_free_algebra():
    ctx = GreenbergContext(Z2, 2)
    free = ArtinPresentation(ctx, [("x", 0)], [])
    gr = greenberg_transform(free)
    assert len(gr.generators) == 2  # m * e coordinates per generator
    assert gr.relations == []
    assert len(gr.points(F2)) == 4


def test_case_ii_is_identity():
    # m = 1, e = 1: R(B) = B, gr(A) = A mod p, the comparison is identity
    ctx = GreenbergContext(Z2, 1)
    x = MultiPoly.var(ctx.artin, X)
    pres = ArtinPresentation(ctx, [("x", 0)], [x ** 2])
    for b in (F2, F4, F2EPS):
        rep = comparison_report(pres, b)
        assert rep["pass"] and rep["bijective"], rep
        nilsq = len([c for c in b.elements()
                     if b.is_zero(b.mul(c, c))])
        assert rep["count_sections"] == nilsq


def test_case_i_counts():
    ctx = GreenbergContext(Z2, 2)
    x = MultiPoly.var(ctx.artin, X)
    pres = ArtinPresentation(ctx, [("x", 0)], [x ** 2])
    for b in (F2, F4, F2EPS):
        rep = comparison_report(pres, b)
        assert rep["pass"], rep
        assert rep["count_sections"] == rep["count_gr"] == rep["count_fiber"]


def test_ramified_comparison():
    ctx = GreenbergContext(GAUSS, 1)
    x = MultiPoly.var(ctx.artin, X)
    pres = ArtinPresentation(ctx, [("x", 0)], [x ** 2])
    for b in (F2, F4):
        rep = comparison_report(pres, b)
        assert rep["pass"] and rep["bijective"], rep
    rep = comparison_report(pres, F2EPS)
    assert rep["pass"] and not rep["bijective"]
    assert rep["witness"]["kind"] in ("collision", "missed_fiber_point",
                                      "image_outside_fiber")


def test_comparison_rejects_wrong_characteristic():
    ctx = GreenbergContext(Z2, 1)
    pres = ArtinPresentation(ctx, [("x", 0)], [])
    with pytest.raises(NotCharP):
        comparison_report(pres, FiniteRing(4, []))


def test_u_tilde_is_a_ring_map_on_fields():
    for ctx, b in ((GreenbergContext(Z2, 2), F2),
                   (GreenbergContext(GAUSS, 1), F4)):
        ut, t_ring = drinfeld_u_tilde(ctx, b)
        r = ctx.sections(b)
        elems = list(r.elements())
        images = [ut(x) for x in elems]
        assert len(set(images)) == len(elems)  # injective on perfect B
        for x, ux in zip(elems, images):
            for y, uy in zip(elems, images):
                assert ut(r.add(x, y)) == ux + uy
                assert ut(r.mul(x, y)) == ux * uy


def test_special_fiber_shape():
    ctx = GreenbergContext(GAUSS, 1)
    x = MultiPoly.var(ctx.artin, X)
    pres = ArtinPresentation(ctx, [("x", 0)], [x ** 2])
    jetp, fiber = special_fiber(pres)
    assert jetp.n == ctx.m * ctx.e - 1 == 1
    assert fiber.generators == [("x", 0, 0), ("x", 0, 1)]
