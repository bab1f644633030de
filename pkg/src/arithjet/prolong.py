"""Pi-derivations and prolongation sequences.

A prolongation is a ring map u: C -> D together with a set map
delta: C -> D obeying the twisted Leibniz rules

    delta(x + y) = delta(x) + delta(y) + C_pi(u(x), u(y))
    delta(x * y) = u(x)^q delta(y) + u(y)^q delta(x) + pi delta(x) delta(y)

so that phi(x) = u(x)^q + pi*delta(x) is a ring homomorphism lifting the
q-power Frobenius.  Here delta data is carried on generators (and on base
coefficients) only; values on arbitrary elements are recomputed through
the axioms, which keeps well-definedness on quotients checkable.
"""

from __future__ import annotations

import random

from .errors import IllDefined, MissingAssignment
from .multipoly import MultiPoly, c_pi_poly, eval_compiled
from .rings import QuotientRing, ring_pow

_CX = ("X", 0, 0)
_CY = ("Y", 0, 0)


class Prolongation:
    """Generator-level data for (u, delta): C -> D.

    gen_u / gen_delta map each generator variable to its image and its
    delta value in the target; coeff_u / coeff_delta do the same for base
    coefficients (defaulting to the structure map and the base derivation
    (c - c^q)/pi pushed through it).  relations are polynomials that
    vanish in C, kept so that well-definedness can be audited.
    """

    def __init__(self, triple, target, gen_u, gen_delta, relations=(),
                 o_map=None, coeff_u=None, coeff_delta=None):
        self.triple = triple
        self.target = target
        self.gen_u = dict(gen_u)
        self.gen_delta = dict(gen_delta)
        if set(self.gen_u) != set(self.gen_delta):
            raise ValueError("gen_u and gen_delta must cover the same generators")
        self.relations = tuple(relations)
        if o_map is None:
            if triple.d != 1:
                raise ValueError("o_map required when O != Z")
            o_map = lambda c: target.from_int(c[0])
        self.o_map = o_map
        self.coeff_u = coeff_u or o_map
        self.coeff_delta = coeff_delta or (lambda c: o_map(triple.delta_base(c)))
        self._pi = o_map(triple.pi)
        self._cpi = c_pi_poly(triple).compiled(o_map, target)

    def c_pi(self, a, b):
        return eval_compiled(self._cpi, {_CX: a, _CY: b}, self.target)

    def u(self, poly):
        return poly.evaluate(self.gen_u, self.target, self.coeff_u)

    def delta(self, poly):
        return extend_delta(self, poly)

    def phi(self, poly):
        b = self.target
        return b.add(ring_pow(b, self.u(poly), self.triple.q),
                     b.mul(self._pi, self.delta(poly)))

    def generators(self):
        return sorted(self.gen_u)

    def validate(self, samples=100, seed=0):
        """Raise IllDefined unless delta descends to the quotient by relations."""
        report = check_well_defined(self, samples=samples, seed=seed)
        if not report["pass"]:
            raise IllDefined(f"delta depends on representatives: {report['counterexample']}")
        return report


def _pair_mul(p, a, b):
    ring = p.target
    q = p.triple.q
    u = ring.mul(a[0], b[0])
    d = ring.add(ring.mul(ring_pow(ring, a[0], q), b[1]),
                 ring.mul(ring_pow(ring, b[0], q), a[1]))
    d = ring.add(d, ring.mul(p._pi, ring.mul(a[1], b[1])))
    return u, d


def _pair_add(p, a, b):
    ring = p.target
    u = ring.add(a[0], b[0])
    d = ring.add(ring.add(a[1], b[1]), p.c_pi(a[0], b[0]))
    return u, d


def extend_delta(p, poly):
    """delta of a polynomial in the generators, by structural recursion.

    Folds the product rule over the factors of each term and the sum rule
    over the terms, carrying (u-value, delta-value) pairs throughout.
    """
    ring = p.target
    acc = (ring.zero(), ring.zero())
    for mono, c in poly.sorted_terms():
        pair = (p.coeff_u(c), p.coeff_delta(c))
        for v, e in mono:
            if v not in p.gen_u:
                raise MissingAssignment(f"no prolongation data for {v}")
            g = (p.gen_u[v], p.gen_delta[v])
            for _ in range(e):
                pair = _pair_mul(p, pair, g)
        acc = _pair_add(p, acc, pair)
    return acc[1]


def _random_poly(rng, ring, gens, terms=3, max_exp=2):
    poly = MultiPoly.zero(ring)
    for _ in range(rng.randrange(1, terms + 1)):
        term = MultiPoly.from_int(ring, rng.randint(-2, 2))
        for _ in range(rng.randrange(0, 3)):
            term = term * MultiPoly.var(ring, rng.choice(gens), rng.randrange(1, max_exp + 1))
        poly = poly + term
    return poly


def check_well_defined(p, samples=100, seed=0):
    """Audit that (u, delta) kill the relation ideal.

    u must send every relation to zero and delta must too (which forces
    delta to vanish on the whole ideal); on top of that, sampled pairs of
    representatives of the same residue class are compared directly.
    """
    ring = p.target
    checked = 0
    for rel in p.relations:
        checked += 1
        if not ring.is_zero(p.u(rel)):
            return {"pass": False, "checked": checked,
                    "counterexample": {"relation": repr(rel), "u": repr(p.u(rel))}}
        if not ring.is_zero(p.delta(rel)):
            return {"pass": False, "checked": checked,
                    "counterexample": {"relation": repr(rel), "delta": repr(p.delta(rel))}}
    gens = p.generators()
    if p.relations and gens:
        rng = random.Random(seed)
        base = p.triple.ring
        for _ in range(samples):
            checked += 1
            rel = rng.choice(p.relations)
            t = _random_poly(rng, base, gens)
            a = _random_poly(rng, base, gens)
            b = a + t * rel
            if p.delta(a) != p.delta(b) or p.u(a) != p.u(b):
                return {"pass": False, "checked": checked,
                        "counterexample": {"a": repr(a), "b": repr(b)}}
    return {"pass": True, "checked": checked}


def _pairs(elements, budget, seed):
    n = len(elements)
    if n * n <= budget:
        for x in elements:
            for y in elements:
                yield x, y
    else:
        rng = random.Random(seed)
        for _ in range(budget):
            yield rng.choice(elements), rng.choice(elements)


def check_pi_derivation(source, target, u, delta, triple, elements=None,
                        o_map=None, budget=10000, seed=0):
    """Test the two derivation axioms for concrete maps u, delta.

    source/target are ring-protocol objects, u and delta callables on
    source elements.  All pairs are checked when they fit in the budget,
    otherwise a seeded random sample.  Returns a JSON-ready report
    {"pass", "checked", "counterexample"?}.
    """
    if elements is None:
        elements = list(source.elements())
    if o_map is None:
        if triple.d != 1:
            raise ValueError("o_map required when O != Z")
        o_map = lambda c: target.from_int(c[0])
    cpi = c_pi_poly(triple).compiled(o_map, target)
    pi = o_map(triple.pi)
    q = triple.q
    checked = 0
    for x, y in _pairs(list(elements), budget, seed):
        checked += 1
        ux, uy = u(x), u(y)
        dx, dy = delta(x), delta(y)
        lhs = delta(source.add(x, y))
        rhs = target.add(target.add(dx, dy),
                         eval_compiled(cpi, {_CX: ux, _CY: uy}, target))
        if lhs != rhs:
            return {"pass": False, "checked": checked,
                    "counterexample": {"law": "sum", "x": repr(x), "y": repr(y)}}
        lhs = delta(source.mul(x, y))
        rhs = target.add(target.mul(ring_pow(target, ux, q), dy),
                         target.mul(ring_pow(target, uy, q), dx))
        rhs = target.add(rhs, target.mul(pi, target.mul(dx, dy)))
        if lhs != rhs:
            return {"pass": False, "checked": checked,
                    "counterexample": {"law": "prod", "x": repr(x), "y": repr(y)}}
    return {"pass": True, "checked": checked}


def check_ring_map(source, target, u, elements=None, budget=10000, seed=0):
    """Additivity, multiplicativity, unit for a concrete map u."""
    if elements is None:
        elements = list(source.elements())
    checked = 0
    if u(source.one()) != target.one():
        return {"pass": False, "checked": 1, "counterexample": {"law": "one"}}
    for x, y in _pairs(list(elements), budget, seed):
        checked += 1
        if u(source.add(x, y)) != target.add(u(x), u(y)):
            return {"pass": False, "checked": checked,
                    "counterexample": {"law": "add", "x": repr(x), "y": repr(y)}}
        if u(source.mul(x, y)) != target.mul(u(x), u(y)):
            return {"pass": False, "checked": checked,
                    "counterexample": {"law": "mul", "x": repr(x), "y": repr(y)}}
    return {"pass": True, "checked": checked}


class ProlongationSequence:
    """A chain C_0 -> C_1 -> ... -> C_N of ring maps u_i with derivations
    delta_i: C_i -> C_(i+1) subject to u_(i+1) . delta_i = delta_(i+1) . u_i.

    rings are ring-protocol objects; u_maps[i] and deltas[i] are callables
    C_i -> C_(i+1); o_maps[i] embeds coefficients of O into C_i.
    """

    def __init__(self, triple, rings, u_maps, deltas, o_maps=None):
        if not (len(u_maps) == len(deltas) == len(rings) - 1):
            raise ValueError("need one (u, delta) per consecutive pair")
        self.triple = triple
        self.rings = list(rings)
        self.u_maps = list(u_maps)
        self.deltas = list(deltas)
        if o_maps is None:
            if triple.d != 1:
                raise ValueError("o_maps required when O != Z")
            o_maps = [
                (lambda r: (lambda c: r.from_int(c[0])))(r) for r in rings
            ]
        self.o_maps = list(o_maps)

    def __len__(self):
        return len(self.rings)

    @property
    def n(self):
        return len(self.rings) - 1

    def ring(self, i):
        return self.rings[i]

    def u(self, i, x):
        return self.u_maps[i](x)

    def delta(self, i, x):
        return self.deltas[i](x)

    def to_level(self, i, j, x):
        """Composite structure map C_i -> C_j (j >= i)."""
        for k in range(i, j):
            x = self.u_maps[k](x)
        return x

    @classmethod
    def constant(cls, triple, n):
        """The constant sequence O -> O -> ... with the base derivation."""
        ring = triple.ring
        ident = lambda x: x
        return cls(
            triple,
            [ring] * (n + 1),
            [ident] * n,
            [triple.delta_base] * n,
            o_maps=[ident] * (n + 1),
        )

    @classmethod
    def quotients(cls, triple, ks):
        """Sequence of O/pi^k quotients, e.g. ks=(None, 3, 2) for
        O -> O/pi^3 -> O/pi^2; None stands for O itself.  u is reduction
        and delta is induced by lifting; whether the induced delta is
        well-defined depends on how fast the exponents drop, so validity
        is re-checked by check_sequence rather than assumed.
        """
        rings = []
        o_maps = []
        for k in ks:
            if k is None:
                rings.append(triple.ring)
                o_maps.append(lambda x: x)
            else:
                qr = QuotientRing(triple, k)
                rings.append(qr)
                o_maps.append(qr.from_o)
        u_maps = []
        deltas = []
        for i in range(len(ks) - 1):
            nxt = rings[i + 1]
            lift = rings[i].lift if isinstance(rings[i], QuotientRing) else (lambda x: x)
            to_next = nxt.from_o if isinstance(nxt, QuotientRing) else (lambda x: x)
            u_maps.append(lambda x, lf=lift, tn=to_next: tn(lf(x)))
            deltas.append(lambda x, lf=lift, tn=to_next, tr=triple: tn(tr.delta_base(lf(x))))
        return cls(triple, rings, u_maps, deltas, o_maps=o_maps)


def check_sequence(seq, elements=None, budget=2000, seed=0):
    """Axioms for every step plus the compatibility u.delta = delta.u.

    elements: corpus in C_0 (default: small integers when available);
    corpora at higher levels are the pushforwards.  Returns a report dict.
    """
    if elements is None:
        r0 = seq.ring(0)
        if hasattr(r0, "elements"):
            try:
                elements = list(r0.elements())
            except TypeError:
                elements = None
        if elements is None:
            elements = [r0.from_int(k) for k in range(-4, 5)]
    corpora = [list(elements)]
    for i in range(seq.n):
        corpora.append([seq.u(i, x) for x in corpora[i]])
    checked = 0
    for i in range(seq.n):
        src, tgt = seq.ring(i), seq.ring(i + 1)
        rep = check_ring_map(src, tgt, lambda x: seq.u(i, x),
                             elements=corpora[i], budget=budget, seed=seed)
        if not rep["pass"]:
            rep["counterexample"]["level"] = i
            return {"pass": False, "checked": checked + rep["checked"],
                    "counterexample": rep["counterexample"]}
        checked += rep["checked"]
        rep = check_pi_derivation(src, tgt, lambda x: seq.u(i, x),
                                  lambda x: seq.delta(i, x), seq.triple,
                                  elements=corpora[i], o_map=seq.o_maps[i + 1],
                                  budget=budget, seed=seed)
        if not rep["pass"]:
            rep["counterexample"]["level"] = i
            return {"pass": False, "checked": checked + rep["checked"],
                    "counterexample": rep["counterexample"]}
        checked += rep["checked"]
    for i in range(seq.n - 1):
        for x in corpora[i]:
            checked += 1
            if seq.u(i + 1, seq.delta(i, x)) != seq.delta(i + 1, seq.u(i, x)):
                return {"pass": False, "checked": checked,
                        "counterexample": {"law": "compat", "level": i, "x": repr(x)}}
    return {"pass": True, "checked": checked}


def prolongation_to_w1(p, w1_ring=None):
    """The ring map a -> (u(a), delta(a)) into W_1 of the target.

    The level-1 sum and product polynomials are exactly the two twisted
    Leibniz rules, so this is a ring homomorphism whenever p is valid.
    """
    from .witt import WittRing, build_table

    if w1_ring is None:
        w1_ring = WittRing(build_table(p.triple, 1), p.target, p.o_map)

    def hom(poly):
        return w1_ring.vec((p.u(poly), p.delta(poly)))

    return hom


def prolongation_from_w1(triple, target, gen_images, relations=(), o_map=None,
                          coeff_u=None, coeff_delta=None):
    """Inverse construction: a generator assignment into W_1 of the target
    yields prolongation data by splitting components."""
    gen_u = {v: w.comps[0] for v, w in gen_images.items()}
    gen_delta = {v: w.comps[1] for v, w in gen_images.items()}
    return Prolongation(triple, target, gen_u, gen_delta, relations,
                        o_map=o_map, coeff_u=coeff_u, coeff_delta=coeff_delta)
