"""P polynomials, jet algebras, the adjunction, and localization."""

import pytest

from arithjet.jet import (AlgebraPresentation, adjunction_phi,
                          adjunction_phi_inv, adjunction_report,
                          alt_presentation, delta_iterates, enumerate_homs,
                          enumerate_witt_homs, exp_n, jet_algebra,
                          localization_check, localized, p_polynomials,
                          phi_map, r0_structure, reduce_mod_pi)
from arithjet.multipoly import MultiPoly, jet_var, phi_a, q_delta
from arithjet.prolong import ProlongationSequence
from arithjet.rings import EISEN, GAUSS, Z2, Z3, FiniteRing
from arithjet.witt import WittRing, build_table

X = jet_var("x")


def _t(ring, j):
    return MultiPoly.var(ring, ("T", 0, j))


def test_p_family_verifies():
    for tr, n in ((Z2, 3), (Z3, 2), (GAUSS, 2), (EISEN, 1)):
        fam = p_polynomials(tr, n, verify=True)
        assert fam.verify()


def test_p2_frozen():
    t, tp, tpp = (_t(Z2.ring, j) for j in range(3))
    assert p_polynomials(Z2, 2).p(2) == tpp + t ** 2 * tp + tp ** 2
    assert p_polynomials(Z2, 2).p(0) == t
    assert p_polynomials(Z2, 2).p(1) == tp
    # S_0 is the level-1 Witt sum defect in the T coordinates
    assert p_polynomials(Z2, 2).s(1) == t ** 2 * tp + tp ** 2


def test_exp_n():
    x = MultiPoly.var(Z2.ring, X)
    xp = MultiPoly.var(Z2.ring, jet_var("x", 0, 1))
    xpp = MultiPoly.var(Z2.ring, jet_var("x", 0, 2))
    assert exp_n(x, Z2, 1) == [x, xp]
    assert exp_n(x, Z2, 2) == [x, xp, xpp + x ** 2 * xp + xp ** 2]
    # ghost identity: w_i(exp(a)) = phi^i(a) symbolically
    a = x ** 2 + MultiPoly.from_int(Z2.ring, 3)
    comps = exp_n(a, Z2, 2)
    phi1 = phi_a(a, Z2)
    assert comps[0] == a
    assert comps[0] ** 2 + comps[1].scale(Z2.pi) == phi1
    assert comps[0] ** 4 + (comps[1] ** 2).scale(Z2.pi) + \
        comps[2].scale(Z2.ring.mul(Z2.pi, Z2.pi)) == phi_a(phi1, Z2)


def test_jet_of_free_and_quotient():
    x = MultiPoly.var(Z2.ring, X)
    free = AlgebraPresentation(Z2, [X], [], name="Z[x]")
    j2 = jet_algebra(free, 2)
    assert j2.generators == [("x", 0, 0), ("x", 0, 1), ("x", 0, 2)]
    assert j2.relations == []
    quot = AlgebraPresentation(Z2, [X], [x ** 2])
    j0 = jet_algebra(quot, 0)
    assert j0.generators == [("x", 0, 0)] and j0.relations == [x ** 2]
    j1 = jet_algebra(quot, 1)
    xp = MultiPoly.var(Z2.ring, jet_var("x", 0, 1))
    assert j1.relations == [x ** 2, (x ** 2 * xp + xp ** 2).scale((2,))]


def test_phi_map():
    x = MultiPoly.var(Z2.ring, X)
    xp = MultiPoly.var(Z2.ring, jet_var("x", 0, 1))
    assert phi_map(x, Z2) == x ** 2 + xp.scale(Z2.pi)
    a = x ** 2
    b = x + MultiPoly.from_int(Z2.ring, 1)
    assert phi_map(a * b, Z2) == phi_map(a, Z2) * phi_map(b, Z2)


def test_alt_presentation_round_trip():
    x = MultiPoly.var(Z2.ring, X)
    alg = AlgebraPresentation(Z2, [X], [x ** 2])
    for n in (1, 2):
        jetp = jet_algebra(alg, n)
        pres, to_alt, from_alt = alt_presentation(jetp)
        assert len(pres.generators) == n + 1
        # substituting one way then the other is the identity
        for v in pres.generators:
            expr = to_alt[v].substitute(from_alt)
            assert expr == MultiPoly.var(Z2.ring, v)
    # y' = P_1(x) = x', y'' = P_2(x) in the new coordinates
    assert to_alt[("P:x", 0, 1)] == MultiPoly.var(Z2.ring, jet_var("x", 0, 1))
    xp = MultiPoly.var(Z2.ring, jet_var("x", 0, 1))
    xpp = MultiPoly.var(Z2.ring, jet_var("x", 0, 2))
    assert to_alt[("P:x", 0, 2)] == xpp + x ** 2 * xp + xp ** 2


def test_adjunction_explicit_low_levels():
    f4 = FiniteRing(2, [[1, 1, 1]])
    alg = AlgebraPresentation(Z2, [X], [])
    # n = 0: W_0(B) = B and J_0A = A, the adjunction is the identity
    w0 = WittRing(build_table(Z2, 0), f4)
    jet0 = jet_algebra(alg, 0)
    for g in enumerate_witt_homs(alg, w0):
        h = adjunction_phi(jet0, g, f4)
        assert h.images[("x", 0, 0)] == g.images[("x", 0, 0)].comps[0]
    # n = 1: x -> (b0, b1) splits into x -> b0, x' -> b1
    w1 = WittRing(build_table(Z2, 1), f4)
    jet1 = jet_algebra(alg, 1)
    for g in enumerate_witt_homs(alg, w1):
        h = adjunction_phi(jet1, g, f4)
        b0, b1 = g.images[("x", 0, 0)].comps
        assert h.images[("x", 0, 0)] == b0
        assert h.images[("x", 0, 1)] == b1
        back = adjunction_phi_inv(jet1, h, w1)
        assert back.images == g.images
    # n = 2: the second jet solves w = [b0, b1, b2] triangularly,
    # x'' -> b2 - S_1(b0, b1) = b2 - b0^2 b1 - b1^2
    w2 = WittRing(build_table(Z2, 2), f4)
    jet2 = jet_algebra(alg, 2)
    for g in enumerate_witt_homs(alg, w2):
        h = adjunction_phi(jet2, g, f4)
        b0, b1, b2 = g.images[("x", 0, 0)].comps
        expect = f4.sub(b2, f4.add(f4.mul(f4.mul(b0, b0), b1),
                                   f4.mul(b1, b1)))
        assert h.images[("x", 0, 2)] == expect


def test_r0_structure_matches_ghost_inversion():
    seq = ProlongationSequence.constant(Z2, 2)
    f4 = FiniteRing(2, [[1, 1, 1]])
    w2 = WittRing(build_table(Z2, 2), f4)
    st = r0_structure(seq, w2)
    for k in range(-6, 7):
        assert st(Z2.ring.from_int(k)) == w2.from_int(k)


def test_reduce_mod_pi():
    x = MultiPoly.var(Z2.ring, X)
    alg = AlgebraPresentation(Z2, [X], [x ** 2])
    jetp = jet_algebra(alg, 1)
    f2 = FiniteRing(2, [])
    fiber = reduce_mod_pi(jetp, f2)
    # the order-1 relation has coefficient 2 and disappears mod pi
    assert len(fiber.relations) == 1
    assert fiber.relations[0].evaluate(
        {("x", 0, 0): f2.one(), ("x", 0, 1): f2.zero()}, f2) == f2.one()


def test_localization_trivial_s():
    alg = AlgebraPresentation(Z2, [X], [])
    one = MultiPoly.from_int(Z2.ring, 1)
    rep = localization_check(alg, one, 1, [FiniteRing(2, []),
                                           FiniteRing(4, [])])
    assert rep["pass"], rep
    for counts in rep["counts"].values():
        assert counts["jet_localized"] == counts["localized_jet"]


def test_localization_at_x_level_0():
    # J_0 localization: points with x invertible
    alg = AlgebraPresentation(Z2, [X], [])
    s = MultiPoly.var(Z2.ring, X)
    f2 = FiniteRing(2, [])
    rep = localization_check(alg, s, 0, [f2])
    assert rep["pass"], rep
    assert list(rep["counts"].values())[0]["jet_localized"] == 1
