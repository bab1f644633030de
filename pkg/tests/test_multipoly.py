"""Sparse polynomials, the phi/delta calculus, and hom enumeration."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithjet.errors import SizeCapExceeded
from arithjet.multipoly import (MultiPoly, c_pi_poly, enumerate_homs_raw,
                                jet_var, phi_a, q_delta)
from arithjet.rings import Z2, Z3, FiniteRing

X = jet_var("x")
XP = jet_var("x", 0, 1)
Y = jet_var("y")
RING = Z2.ring


def _poly(coeffs):
    """Dense univariate in x from an int list, constant first."""
    out = MultiPoly.zero(RING)
    for e, c in enumerate(coeffs):
        out = out + MultiPoly.var(RING, X, e).scale(RING.from_int(c)) \
            if e else out + MultiPoly.from_int(RING, c)
    return out


coeff_lists = st.lists(st.integers(-6, 6), min_size=1, max_size=5)


@settings(max_examples=150, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists)
def test_poly_ring_axioms(u, v, w):
    a, b, c = _poly(u), _poly(v), _poly(w)
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly.zero(RING)
    assert a * MultiPoly.from_int(RING, 1) == a


@settings(max_examples=100, deadline=None)
@given(coeff_lists, coeff_lists)
def test_phi_a_is_a_hom(u, v):
    a, b = _poly(u), _poly(v)
    assert phi_a(a * b, Z2) == phi_a(a, Z2) * phi_a(b, Z2)
    assert phi_a(a + b, Z2) == phi_a(a, Z2) + phi_a(b, Z2)


@settings(max_examples=100, deadline=None)
@given(coeff_lists)
def test_phi_delta_relation(u):
    # phi(f) = f^q + pi * delta(f)
    a = _poly(u)
    for tr in (Z2, Z3):
        assert phi_a(a, tr) == a ** tr.q + q_delta(a, tr).scale(tr.pi)


def test_q_delta_on_variables():
    x = MultiPoly.var(RING, X)
    assert q_delta(x, Z2) == MultiPoly.var(RING, XP)
    assert q_delta(MultiPoly.from_int(RING, 3), Z2) == MultiPoly.from_int(RING, -3)


def test_c_pi_values():
    x = MultiPoly.var(RING, X)
    y = MultiPoly.var(RING, Y)
    assert c_pi_poly(Z2, X, Y) == -(x * y)
    x3 = MultiPoly.var(Z3.ring, X)
    y3 = MultiPoly.var(Z3.ring, Y)
    assert c_pi_poly(Z3, X, Y) == -(x3 ** 2 * y3 + x3 * y3 ** 2)


def test_substitute_and_evaluate():
    x = MultiPoly.var(RING, X)
    p = x ** 2 + MultiPoly.from_int(RING, 1)
    q = p.substitute({X: x + 1})
    assert q == x ** 2 + x.scale(RING.from_int(2)) + MultiPoly.from_int(RING, 2)
    f4 = FiniteRing(2, [[1, 1, 1]])
    val = p.evaluate({X: f4.gen()}, f4, coeff_map=lambda c: f4.from_int(c[0]))
    assert val == f4.add(f4.mul(f4.gen(), f4.gen()), f4.one())


def test_json_round_trip_and_determinism():
    x = MultiPoly.var(RING, X)
    y = MultiPoly.var(RING, Y)
    p = x ** 3 * y - y.scale(RING.from_int(7)) + MultiPoly.from_int(RING, 2)
    obj = p.to_json_obj()
    assert MultiPoly.from_json_obj(obj, RING) == p
    assert obj == p.to_json_obj()
    import json
    assert json.dumps(obj, sort_keys=True) == json.dumps(p.to_json_obj(),
                                                         sort_keys=True)


def test_enumerate_homs_raw_counts():
    f4 = FiniteRing(2, [[1, 1, 1]])
    z4 = FiniteRing(4, [])
    x = MultiPoly.var(RING, X)
    om = lambda c: None  # closures below rebuild per target
    homs = enumerate_homs_raw([X], [x ** 2], f4,
                              lambda c: f4.from_int(c[0]))
    assert len(homs) == 1  # only x = 0 in a field
    homs = enumerate_homs_raw([X], [x ** 2], z4,
                              lambda c: z4.from_int(c[0]))
    assert len(homs) == 2  # x in {0, 2}
    y = MultiPoly.var(RING, Y)
    homs = enumerate_homs_raw([X, Y], [x * y], f4,
                              lambda c: f4.from_int(c[0]))
    assert len(homs) == 7  # x = 0 or y = 0
    with pytest.raises(SizeCapExceeded):
        enumerate_homs_raw([X, Y], [], f4, lambda c: f4.from_int(c[0]),
                           size_cap=15)


def test_enumeration_prunes_early():
    # a constant nonzero relation kills every assignment immediately
    f4 = FiniteRing(2, [[1, 1, 1]])
    one = MultiPoly.from_int(RING, 1)
    assert enumerate_homs_raw([X, Y], [one], f4,
                              lambda c: f4.from_int(c[0])) == []
