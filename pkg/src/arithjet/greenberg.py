"""Greenberg algebras, the Greenberg transform, and the comparison with
the special fiber of the jet algebra.

For the Artin quotient R = O/pi^(m e) with perfect prime residue field
k', the algebra of sections is R(B) = W_(m-1)(B)[pi]/(E) with W the
p-typical Witt vectors and E the monic integer Eisenstein polynomial of
pi; the Greenberg transform gr(A) of a presented R-algebra A is the
k'-algebra whose points over B are Hom_R(A, R(B)), carved out by
expanding the relations of A in Witt coordinates over a symbolic
coefficient ring.  The comparison map sends a section through the
Drinfeld map into ramified Witt vectors and then through the jet/Witt
adjunction, landing in the special fiber of the jet algebra of a lift.
"""

from __future__ import annotations

import itertools

from .errors import NotCharP, RelationViolation
from .jet import (AlgebraPresentation, adjunction_phi, default_o_map,
                  enumerate_homs, jet_algebra, reduce_mod_pi,
                  residue_coeff_map)
from .multipoly import MultiPoly, PolyRing, Hom, enumerate_homs_raw
from .rings import DEFAULT_SIZE_CAP, FiniteRing, QuotientRing, validate_triple
from .witt import DrinfeldMap, WittRing, build_table


def p_typical(p):
    return validate_triple([0, 1], [p], p, name=f"Z{p}")


class GreenbergContext:
    """Fixed data for R = O/pi^(m e): the ramified triple, the level m,
    the residue field k', and the integer Eisenstein polynomial E.

    Desk-scale restrictions: the residue field is prime (q = p) and pi
    is either p itself (e = 1, E = t - p) or the ring generator t with
    g Eisenstein (then E = g).
    """

    def __init__(self, triple, m):
        if triple.q != triple.p:
            raise ValueError("prime residue field required")
        self.triple = triple
        self.m = m
        self.e = triple.e
        self.p = triple.p
        self.kprime = FiniteRing(triple.p, [])
        if triple.d == 1:
            if triple.pi != (triple.p,):
                raise ValueError("unramified pi must be p itself")
            self.ptriple = triple
            self.E = [-triple.p, 1]
        else:
            gen = tuple(1 if i == 1 else 0 for i in range(triple.d))
            if triple.pi != gen:
                raise ValueError("ramified pi must be the ring generator")
            self.ptriple = p_typical(triple.p)
            g = list(triple.ring.g)
            if any(c % triple.p for c in g[:-1]) or g[0] % (triple.p ** 2) == 0:
                raise ValueError("defining polynomial is not Eisenstein")
            self.E = g
        self.artin = QuotientRing(triple, m * self.e)

    def sections(self, b_ring):
        return GreenbergRing(self, b_ring)


class GreenbergRing:
    """R(B) = W_(m-1)(B)[pi]/(E): free of rank e over the p-typical Witt
    vectors, elements stored as e-tuples of Witt vectors."""

    def __init__(self, ctx, b_ring):
        self.ctx = ctx
        self.b = b_ring
        self.w = WittRing(build_table(ctx.ptriple, ctx.m - 1), b_ring)
        self.e = ctx.e
        self._low = [self.w.from_int(c) for c in ctx.E[:-1]]

    def vec(self, ws):
        ws = tuple(ws)
        if len(ws) != self.e:
            raise ValueError("wrong number of pi-components")
        return ws

    def zero(self):
        return (self.w.zero(),) * self.e

    def one(self):
        return (self.w.one(),) + (self.w.zero(),) * (self.e - 1)

    def from_int(self, n):
        return (self.w.from_int(n),) + (self.w.zero(),) * (self.e - 1)

    def is_zero(self, x):
        return all(self.w.is_zero(c) for c in x)

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a for a in x)

    def _reduce(self, coeffs):
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, self.e - 1, -1):
            c = coeffs[k]
            coeffs[k] = self.w.zero()
            for i in range(self.e):
                coeffs[k - self.e + i] = coeffs[k - self.e + i] - self._low[i] * c
        return tuple(coeffs[: self.e])

    def mul(self, x, y):
        conv = [self.w.zero()] * (2 * self.e - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                conv[i + j] = conv[i + j] + a * b
        return self._reduce(conv)

    def pi(self):
        return self._reduce([self.w.zero(), self.w.one()])

    def structure_map(self):
        """R = O/pi^(m e) (canonical O-representatives) -> R(B)."""
        pi = self.pi()

        def mp(c):
            acc = self.zero()
            pw = self.one()
            for a in c:
                acc = self.add(acc, self.mul(self.from_int(a), pw))
                pw = self.mul(pw, pi)
            return acc

        return mp

    def elements(self):
        for ws in itertools.product(list(self.w.elements()), repeat=self.e):
            yield ws

    def __repr__(self):
        return f"R_{self.ctx.m}({self.b!r}; e={self.e})"


class ArtinPresentation:
    """A = R[generators]/(relations) with R = O/pi^(m e)."""

    def __init__(self, ctx, generators, relations, name=None):
        self.ctx = ctx
        self.R = ctx.artin
        self.generators = [(str(f), int(g), 0) for f, g in
                           ((v if isinstance(v, tuple) else (v, 0)) for v in generators)]
        self.relations = list(relations)
        self.name = name

    def points(self, b_ring, size_cap=DEFAULT_SIZE_CAP):
        """Hom_R(A, R(B)) by direct enumeration of section assignments."""
        sections = self.ctx.sections(b_ring)
        return enumerate_homs_raw(self.generators, self.relations, sections,
                                  sections.structure_map(), size_cap=size_cap,
                                  source=self)

    def lift(self):
        """The O-algebra with the same (lifted) relations plus pi^(m e)."""
        tr = self.ctx.triple
        rels = [rel.map_coeffs(lambda c: c, tr.ring) for rel in self.relations]
        rels.append(MultiPoly.const(tr.ring, tr.pi_pow(self.ctx.m * self.ctx.e)))
        return AlgebraPresentation(tr, [(f, g) for (f, g, _) in self.generators],
                                   rels, name=f"lift({self.name or 'A'})")

    def __repr__(self):
        return self.name or f"Artin({self.generators}, {self.relations})"


class GrPresentation:
    """gr(A): a k'-algebra presentation in Witt-coordinate variables."""

    def __init__(self, kprime, generators, relations):
        self.kprime = kprime
        self.generators = list(generators)
        self.relations = list(relations)

    def points(self, b_ring, size_cap=DEFAULT_SIZE_CAP):
        return enumerate_homs_raw(self.generators, self.relations, b_ring,
                                  lambda c: b_ring.from_int(c),
                                  size_cap=size_cap, source=self)


def gr_var(family, gamma, slot, coord):
    """Witt-coordinate variable of the slot-th pi-component."""
    return (f"{family}:{slot}", gamma, coord)


def greenberg_transform(pres):
    """gr(A) over k' via symbolic expansion of the relations of A.

    Each generator becomes an e x m block of coordinate variables; each
    relation of A, expanded in R(B) with B a polynomial ring over k',
    contributes one k'-relation per pi-slot and Witt coordinate.
    """
    ctx = pres.ctx
    kp = ctx.kprime
    sym = PolyRing(kp)
    sections = GreenbergRing(ctx, sym)
    assignment = {}
    gens = []
    for (f, g, _) in pres.generators:
        slots = []
        for i in range(ctx.e):
            comps = []
            for j in range(ctx.m):
                v = gr_var(f, g, i, j)
                gens.append(v)
                comps.append(MultiPoly.var(kp, v))
            slots.append(sections.w.vec(comps))
        assignment[(f, g, 0)] = sections.vec(slots)
    smap = sections.structure_map()
    rels = []
    for rel in pres.relations:
        val = rel.evaluate(assignment, sections, smap)
        for slot in val:
            for comp in slot.comps:
                if not comp.is_zero():
                    rels.append(comp)
    return GrPresentation(kp, gens, rels)


def drinfeld_u_tilde(ctx, b_ring):
    """The comparison R(B) -> W_(me-1) over the ramified triple,
    sum w_i pi^i -> sum u(w_i) pi^i with u the Drinfeld map."""
    tr = ctx.triple
    o_map = None if tr.d == 1 else residue_o_map(tr, b_ring)
    u = DrinfeldMap(ctx.ptriple, tr, b_ring, o_map)
    n = ctx.m * ctx.e - 1
    t_ring = u.t_ring(n)
    pi_w = t_ring.from_o(tr.pi)

    def ut(x):
        acc = t_ring.zero()
        pw = t_ring.one()
        for comp in x:
            acc = acc + u.apply(comp, n) * pw
            pw = pw * pi_w
        return acc

    return ut, t_ring


def residue_o_map(triple, b_ring):
    """O -> O/pi -> B for an O/pi-algebra B with prime residue field."""
    res = triple.residue_field()
    return lambda c: b_ring.from_int(res.reduce(c)[0])


def special_fiber(pres):
    """The jet algebra of a lift of A, reduced mod pi over k'."""
    ctx = pres.ctx
    lifted = pres.lift()
    jetp = jet_algebra(lifted, ctx.m * ctx.e - 1)
    return jetp, reduce_mod_pi(jetp, ctx.kprime)


def comparison_report(pres, b_ring, size_cap=DEFAULT_SIZE_CAP):
    """Point-level comparison of gr(A) with the jet special fiber over B.

    Sections A -> R(B) are pushed through the Drinfeld map and the
    adjunction to points of the special fiber; the report records both
    counts, whether the map is injective and surjective, and a witness
    for any discrepancy (expected only for non-perfect B).
    """
    ctx = pres.ctx
    char = b_ring.characteristic()
    if char != ctx.p:
        raise NotCharP(f"B has characteristic {char}, expected {ctx.p}")
    gr = greenberg_transform(pres)
    jetp, fiber = special_fiber(pres)
    sec_points = pres.points(b_ring, size_cap=size_cap)
    gr_points = gr.points(b_ring, size_cap=size_cap)
    fiber_points = enumerate_homs(fiber, b_ring,
                                  coeff_map=lambda c: b_ring.from_int(c),
                                  size_cap=size_cap)
    ut, t_ring = drinfeld_u_tilde(ctx, b_ring)
    o_map = default_o_map(ctx.triple, b_ring) if ctx.triple.d == 1 \
        else residue_o_map(ctx.triple, b_ring)
    images = []
    failed = None
    for pt in sec_points:
        witt_images = {g: ut(pt.images[g]) for g in pres.generators}
        try:
            h = adjunction_phi(jetp, witt_images, b_ring, o_map=o_map)
        except RelationViolation as exc:
            failed = {"kind": "not_a_fiber_point", "section": repr(pt.images),
                      "detail": str(exc)}
            break
        images.append(Hom(fiber, b_ring, h.images))
    if failed is not None:
        return {"count_sections": len(sec_points), "count_gr": len(gr_points),
                "count_fiber": len(fiber_points), "pass": False,
                "bijective": False, "injective": False, "surjective": False,
                "witness": failed}
    fiber_set = set(fiber_points)
    image_set = set(images)
    report = {
        "count_sections": len(sec_points),
        "count_gr": len(gr_points),
        "count_fiber": len(fiber_points),
        "injective": len(image_set) == len(images),
        "surjective": image_set == fiber_set,
    }
    report["bijective"] = report["injective"] and report["surjective"]
    report["pass"] = report["count_sections"] == report["count_gr"]
    if not report["injective"]:
        seen = {}
        for pt, im in zip(sec_points, images):
            if im in seen:
                report["witness"] = {"kind": "collision",
                                     "first": repr(seen[im].images),
                                     "second": repr(pt.images)}
                break
            seen[im] = pt
    elif not report["surjective"]:
        missing = sorted(fiber_set - image_set, key=lambda h: repr(h.images))
        if missing:
            report["witness"] = {"kind": "missed_fiber_point",
                                 "point": repr(missing[0].images)}
        else:
            extra = sorted(image_set - fiber_set, key=lambda h: repr(h.images))
            report["witness"] = {"kind": "image_outside_fiber",
                                 "point": repr(extra[0].images)}
    return report
