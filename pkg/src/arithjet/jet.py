"""Arithmetic jet algebras and the jet/Witt adjunction.

J_nA is presented by adding variables x', x'', ... for the delta-iterates
of each generator of A and dividing by the delta-iterates of the
relations.  The universal polynomials P_i expressing the Witt coordinates
of exp_delta in terms of delta-iterates give the unit of the adjunction;
the natural bijection Hom(A, W_n(B)) = Hom(J_nA, B) is realized by a
triangular change of variables in both directions.
"""

from __future__ import annotations

import math

from .errors import RelationViolation
from .multipoly import (Hom, MultiPoly, PolyRing, enumerate_homs_raw,
                        eval_compiled, phi_a, q_delta)
from .prolong import Prolongation, extend_delta
from .rings import DEFAULT_SIZE_CAP, BaseTriple
from .witt import witt_poly

_T = lambda j: ("T", 0, j)


# -- the P_n polynomial family ------------------------------------------------

class PFamily:
    """P_0..P_n in O[T, T', ...] with P_i = T^(i) + S_(i-1).

    The defining property is the ghost identity
    w_i(P_0, ..., P_i) = phi^i(T), so (P_0(a), ..., P_n(a)) is the Witt
    vector with ghost components (a, phi(a), ..., phi^n(a)).
    """

    def __init__(self, triple, ps):
        self.triple = triple
        self.ps = list(ps)

    @property
    def n(self):
        return len(self.ps) - 1

    def p(self, i):
        return self.ps[i]

    def s(self, i):
        """S_i = P_(i+1) - T^(i+1); S_(-1) = 0."""
        if i < 0:
            return MultiPoly.zero(self.triple.ring)
        return self.ps[i + 1] - MultiPoly.var(self.triple.ring, _T(i + 1))

    def verify(self):
        tr = self.triple
        t = MultiPoly.var(tr.ring, _T(0))
        goal = t
        for i in range(self.n + 1):
            assert witt_poly(tr, self.ps, i) == goal, f"P ghost identity fails at {i}"
            goal = phi_a(goal, tr)
        assert self.ps[0] == t, "P_0 != T"
        if self.n >= 1:
            assert self.ps[1] == MultiPoly.var(tr.ring, _T(1)), "P_1 != T'"
        for i in range(self.n):
            assert self.s(i).max_order() <= i, f"S_{i} uses orders above {i}"
        return True


def _c_coeff(triple, n, i, j):
    """c_(i,j) = pi^(i+j-n) * binom(q^(n-1-i), j), exact in O.

    Integrality comes from v_p(binom(p^m, j)) = m - v_p(j); a failed
    division here is a hard error, not a recoverable condition.
    """
    c = triple.ring.from_int(math.comb(triple.q ** (n - 1 - i), j))
    k = i + j - n
    if k >= 0:
        return triple.ring.mul(triple.pi_pow(k), c)
    return triple.exact_div_pi_k(c, -k)


_P_CACHE = {}


def p_polynomials(triple, n, verify=True):
    """Build P_0..P_n by the delta-recursion; every division is exact."""
    key = (triple.key(), n)
    hit = _P_CACHE.get(key)
    if hit is not None:
        return hit
    ring = triple.ring
    ps = [MultiPoly.var(ring, _T(0))]
    deltas = []
    if n >= 1:
        ps.append(MultiPoly.var(ring, _T(1)))
    for m in range(2, n + 1):
        while len(deltas) < m:
            deltas.append(q_delta(ps[len(deltas)], triple))
        acc = deltas[m - 1]
        for i in range(m - 1):
            qe = triple.q ** (m - 1 - i)
            for j in range(1, qe + 1):
                c = _c_coeff(triple, m, i, j)
                term = (ps[i] ** (triple.q * (qe - j))) * (deltas[i] ** j)
                acc = acc + term.scale(c)
        ps.append(acc)
    fam = PFamily(triple, ps)
    if verify:
        fam.verify()
    _P_CACHE[key] = fam
    return fam


def delta_iterates(poly, triple, n):
    """{T^(j) -> delta^j(poly)} substitution map for the constant base."""
    out = {}
    cur = poly
    for j in range(n + 1):
        out[_T(j)] = cur
        if j < n:
            cur = q_delta(cur, triple)
    return out


def exp_n(a, triple, n):
    """Witt coordinates (P_0(a), ..., P_n(a)) of a polynomial a over the
    constant base; ghost components are (a, phi(a), ..., phi^n(a))."""
    fam = p_polynomials(triple, n)
    subst = delta_iterates(a, triple, n)
    return [fam.p(i).substitute(subst) for i in range(n + 1)]


# -- presentations ------------------------------------------------------------

class AlgebraPresentation:
    """A = R_0[generators]/(relations) over a constant base O or over a
    prolongation sequence R_0 -> R_1 -> ...; relations use order-0
    variables only."""

    def __init__(self, base, generators, relations, name=None):
        self.base = base
        self.generators = [(str(f), int(g), 0) for f, g, *_ in
                           ((v if isinstance(v, tuple) else (v, 0)) for v in generators)]
        self.relations = list(relations)
        self.name = name
        for rel in self.relations:
            for v in rel.variables():
                if v[2] != 0 or v not in self.generators:
                    raise ValueError(f"relation uses non-generator variable {v}")

    @property
    def triple(self):
        return self.base if isinstance(self.base, BaseTriple) else self.base.triple

    def coeff_ring(self, level=0):
        if isinstance(self.base, BaseTriple):
            return self.base.ring
        return self.base.ring(level)

    def constant_base(self):
        return isinstance(self.base, BaseTriple)

    def __repr__(self):
        return self.name or f"Alg({self.generators}, {self.relations})"


class JetPresentation:
    """J_nA = R_n[x, ..., x^(n)]/(f, delta f, ..., delta^n f)."""

    def __init__(self, algebra, n, generators, relations):
        self.algebra = algebra
        self.n = n
        self.generators = list(generators)
        self.relations = list(relations)

    @property
    def triple(self):
        return self.algebra.triple

    def coeff_ring(self):
        return self.algebra.coeff_ring(self.n)

    def __repr__(self):
        return f"J_{self.n}({self.algebra!r})"


def _sequence_delta_step(seq, i, poly, gens):
    """Symbolic delta on R_i[jet vars] landing in R_(i+1)[jet vars]."""
    nxt = seq.ring(i + 1)
    target = PolyRing(nxt)
    const = lambda c: MultiPoly.const(nxt, c)
    prl = Prolongation(
        seq.triple, target,
        gen_u={v: MultiPoly.var(nxt, v) for v in gens},
        gen_delta={v: MultiPoly.var(nxt, (v[0], v[1], v[2] + 1)) for v in gens},
        o_map=lambda c: const(seq.o_maps[i + 1](c)),
        coeff_u=lambda c: const(seq.u(i, c)),
        coeff_delta=lambda c: const(seq.delta(i, c)),
    )
    return extend_delta(prl, poly)


def jet_algebra(algebra, n):
    """Generators x^(i) for 0 <= i <= n; relations delta^i(f)."""
    gens = [(f, g, i) for (f, g, _) in algebra.generators for i in range(n + 1)]
    if algebra.constant_base():
        tr = algebra.base
        rels = []
        for f in algebra.relations:
            cur = f
            for i in range(n + 1):
                rels.append(cur)
                if i < n:
                    cur = q_delta(cur, tr)
        return JetPresentation(algebra, n, gens, rels)
    seq = algebra.base
    if seq.n < n:
        raise ValueError(f"base sequence too short for level {n}")
    rels = []
    for f in algebra.relations:
        cur = f
        for i in range(n + 1):
            # push coefficients of the level-i relation up to R_n
            rels.append(cur.map_coeffs(lambda c: seq.to_level(i, n, c), seq.ring(n)))
            if i < n:
                order_gens = [(fam, g, j) for (fam, g, _) in algebra.generators
                              for j in range(i + 1)]
                cur = _sequence_delta_step(seq, i, cur, order_gens)
    return JetPresentation(algebra, n, gens, rels)


def phi_map(poly, triple):
    """The Frobenius lift J_nA -> J_(n+1)A, x^(i) -> (x^(i))^q + pi x^(i+1)."""
    return phi_a(poly, triple)


def alt_presentation(jetp):
    """The same jet algebra in the coordinates y^(i) = P_i(x).

    Returns (presentation, to_alt, from_alt): substitution dicts with
    to_alt expressing y-generators in x-coordinates and from_alt solved
    triangularly the other way.  Relations become P_i applied to f.
    Constant base only.
    """
    alg = jetp.algebra
    if not alg.constant_base():
        raise ValueError("alt presentation requires a constant base")
    tr = alg.base
    n = jetp.n
    fam = p_polynomials(tr, n)
    yv = lambda f, g, i: ("P:" + f, g, i)
    to_alt = {}
    from_alt = {}
    for (f, g, _) in alg.generators:
        subst = {_T(j): MultiPoly.var(tr.ring, (f, g, j)) for j in range(n + 1)}
        solved = {}
        for i in range(n + 1):
            to_alt[yv(f, g, i)] = fam.p(i).substitute(subst)
            s_val = fam.s(i - 1).substitute(
                {_T(j): solved[(f, g, j)] for j in range(i)})
            solved[(f, g, i)] = MultiPoly.var(tr.ring, yv(f, g, i)) - s_val
        from_alt.update(solved)
    gens = [yv(f, g, i) for (f, g, _) in alg.generators for i in range(n + 1)]
    rels = []
    for rel in alg.relations:
        for i in range(n + 1):
            lifted = fam.p(i).substitute(delta_iterates(rel, tr, n))
            rels.append(lifted.substitute(from_alt))
    pres = JetPresentation(alg, n, gens, rels)
    return pres, to_alt, from_alt


# -- hom enumeration ----------------------------------------------------------

def default_o_map(triple, target):
    if triple.d == 1:
        return lambda c: target.from_int(c[0])
    raise ValueError("explicit coefficient map required when O != Z")


def enumerate_homs(pres, target, coeff_map=None, size_cap=DEFAULT_SIZE_CAP):
    """All homomorphisms of a presentation into a finite ring.

    coeff_map sends the presentation's coefficient ring into the target;
    by default integers map via from_int.
    """
    if coeff_map is None:
        # quotient-ring coefficients are canonical O-representatives, so
        # the integer structure map covers both the constant and the
        # quotient-sequence bases when O = Z
        coeff_map = default_o_map(pres.triple, target)
    return enumerate_homs_raw(pres.generators, pres.relations, target,
                              coeff_map, size_cap=size_cap, source=pres)


def r0_structure(seq, w_ring, rn_to_b=None):
    """The R_0-algebra structure map R_0 -> W_n(B) of a base sequence.

    Component i is P_i evaluated at the delta-iterates of r pushed up the
    sequence and into B.  For the constant sequence this reproduces the
    ghost-inversion structure map, which cross-checks the P family.
    """
    n = w_ring.n
    fam = p_polynomials(seq.triple, n)
    if rn_to_b is None:
        rn_to_b = default_o_map(seq.triple, w_ring.b)
    compiled = [fam.p(i).compiled(w_ring.o_map, w_ring.b) for i in range(n + 1)]

    def struct(r):
        iters = [r]
        for j in range(n):
            iters.append(seq.delta(j, iters[j]))
        assignment = {_T(j): rn_to_b(seq.to_level(j, n, iters[j]))
                      for j in range(n + 1)}
        return w_ring.vec(tuple(eval_compiled(c, assignment, w_ring.b)
                                for c in compiled))

    return struct


def witt_coeff_map(algebra, w_ring, rn_to_b=None):
    """Coefficient map R_0 -> W_n(B) used when enumerating Hom(A, W_n(B))."""
    if algebra.constant_base():
        return lambda c: w_ring.from_o(c)
    return r0_structure(algebra.base, w_ring, rn_to_b=rn_to_b)


def enumerate_witt_homs(algebra, w_ring, rn_to_b=None, size_cap=DEFAULT_SIZE_CAP):
    return enumerate_homs_raw(algebra.generators, algebra.relations, w_ring,
                              witt_coeff_map(algebra, w_ring, rn_to_b),
                              size_cap=size_cap, source=algebra)


# -- the adjunction -----------------------------------------------------------

def _check_relations(relations, assignment, target, coeff_map):
    for rel in relations:
        val = rel.evaluate(assignment, target, coeff_map)
        if not target.is_zero(val):
            raise RelationViolation(f"relation {rel!r} maps to {val!r}")


def adjunction_phi(jetp, g, b_ring, o_map=None, rel_coeff_map=None):
    """Hom(A, W_n(B)) -> Hom(J_nA, B) by the triangular solve
    x^(i) -> b_i - S_(i-1)(already-assigned lower orders)."""
    alg = jetp.algebra
    tr = jetp.triple
    n = jetp.n
    fam = p_polynomials(tr, n)
    if o_map is None:
        o_map = default_o_map(tr, b_ring)
    if rel_coeff_map is None:
        rel_coeff_map = o_map
    images = g.images if isinstance(g, Hom) else dict(g)
    assignment = {}
    for (f, gam, _) in alg.generators:
        w = images[(f, gam, 0)]
        comps = w.comps if hasattr(w, "comps") else tuple(w)
        for i in range(n + 1):
            s_val = fam.s(i - 1).evaluate(
                {_T(j): assignment[(f, gam, j)] for j in range(i)}, b_ring, o_map)
            assignment[(f, gam, i)] = b_ring.sub(comps[i], s_val)
    _check_relations(jetp.relations, assignment, b_ring, rel_coeff_map)
    return Hom(jetp, b_ring, assignment)


def adjunction_phi_inv(jetp, h, w_ring, o_map=None, rn_to_b=None):
    """Hom(J_nA, B) -> Hom(A, W_n(B)): the generator x goes to the vector
    with components h(P_i(x)) = h(x^(i)) + S_(i-1)(h-values)."""
    alg = jetp.algebra
    tr = jetp.triple
    n = jetp.n
    fam = p_polynomials(tr, n)
    b_ring = w_ring.b
    if o_map is None:
        o_map = default_o_map(tr, b_ring)
    values = h.images if isinstance(h, Hom) else dict(h)
    images = {}
    for (f, gam, _) in alg.generators:
        comps = []
        for i in range(n + 1):
            s_val = fam.s(i - 1).evaluate(
                {_T(j): values[(f, gam, j)] for j in range(i)}, b_ring, o_map)
            comps.append(b_ring.add(values[(f, gam, i)], s_val))
        images[(f, gam, 0)] = w_ring.vec(comps)
    _check_relations(alg.relations, images, w_ring,
                     witt_coeff_map(alg, w_ring, rn_to_b))
    return Hom(alg, w_ring, images)


def adjunction_report(algebra, n, w_ring, o_map=None, rn_to_b=None,
                      size_cap=DEFAULT_SIZE_CAP):
    """Full enumeration of both Hom-sets with the round-trip checks.

    Returns {"pass", "count_witt", "count_jet", "n", ...}; the two counts
    agree and phi / phi-inverse compose to the identity elementwise.
    """
    jetp = jet_algebra(algebra, n)
    b_ring = w_ring.b
    homs_w = enumerate_witt_homs(algebra, w_ring, rn_to_b, size_cap)
    if o_map is None:
        o_map = default_o_map(algebra.triple, b_ring)
    homs_j = enumerate_homs(jetp, b_ring, coeff_map=o_map, size_cap=size_cap)
    report = {"n": n, "count_witt": len(homs_w), "count_jet": len(homs_j)}
    if len(homs_w) != len(homs_j):
        report["pass"] = False
        return report
    seen = set()
    for g in homs_w:
        h = adjunction_phi(jetp, g, b_ring, o_map=o_map)
        back = adjunction_phi_inv(jetp, h, w_ring, o_map=o_map, rn_to_b=rn_to_b)
        if back != Hom(algebra, w_ring, g.images):
            report["pass"] = False
            report["counterexample"] = repr(g)
            return report
        seen.add(h)
    jet_set = {Hom(jetp, b_ring, h.images) for h in homs_j}
    report["pass"] = seen == jet_set
    if not report["pass"]:
        report["counterexample"] = "phi image does not exhaust Hom(J_nA, B)"
    return report


# -- special fiber and localization -------------------------------------------

def residue_coeff_map(triple, target):
    """O -> O/pi -> target, valid when the residue field is prime."""
    if triple.q != triple.p:
        raise ValueError("explicit coefficient map required for q != p")
    res = triple.residue_field()
    return lambda c: target.from_int(res.reduce(c)[0])


def reduce_mod_pi(jetp, ktilde, coeff_map=None):
    """Coefficient reduction of a jet presentation to an O/pi-algebra."""
    if coeff_map is None:
        coeff_map = residue_coeff_map(jetp.triple, ktilde)
    rels = []
    for rel in jetp.relations:
        red = rel.map_coeffs(coeff_map, ktilde)
        if not red.is_zero():
            rels.append(red)
    return JetPresentation(jetp.algebra, jetp.n, list(jetp.generators), rels)


def localized(algebra, s, var=("loc", 0)):
    """A_s modelled as A[y]/(y*s - 1)."""
    tr = algebra.base
    y = (var[0], var[1], 0)
    rel = MultiPoly.var(tr.ring, y) * s - MultiPoly.from_int(tr.ring, 1)
    return AlgebraPresentation(tr, algebra.generators + [y],
                               algebra.relations + [rel],
                               name=f"({algebra!r})_s")


def localization_check(algebra, s, n, test_rings, size_cap=DEFAULT_SIZE_CAP):
    """Point counts of J_n(A_s) versus (J_nA)_t with t = s phi(s)...phi^n(s).

    The restriction map from points of J_n(A_s) to points of (J_nA)_t
    (forget the jets of 1/s, invert the value of t) is checked to be
    injective; equal counts then give the bijection.
    """
    if not algebra.constant_base():
        raise ValueError("localization check requires a constant base")
    tr = algebra.base
    side1 = jet_algebra(localized(algebra, s), n)
    jetp = jet_algebra(algebra, n)
    t = s
    fs = s
    for _ in range(n):
        fs = phi_a(fs, tr)
        t = t * fs
    z = ("inv", 0, 0)
    side2 = JetPresentation(
        algebra, n, jetp.generators + [z],
        jetp.relations + [MultiPoly.var(tr.ring, z) * t - 1])
    report = {"pass": True, "counts": {}}
    for b_ring in test_rings:
        o_map = default_o_map(tr, b_ring)
        pts1 = enumerate_homs(side1, b_ring, coeff_map=o_map, size_cap=size_cap)
        pts2 = enumerate_homs(side2, b_ring, coeff_map=o_map, size_cap=size_cap)
        key = repr(b_ring)
        report["counts"][key] = {"jet_localized": len(pts1),
                                 "localized_jet": len(pts2)}
        if len(pts1) != len(pts2):
            report["pass"] = False
            continue
        t_c = t.compiled(o_map, b_ring)
        elems = list(b_ring.elements())
        images = set()
        for pt in pts1:
            restricted = {v: pt.images[v] for v in jetp.generators}
            tv = eval_compiled(t_c, restricted, b_ring)
            inv = [b for b in elems if b_ring.mul(tv, b) == b_ring.one()]
            if len(inv) != 1:
                report["pass"] = False
                report["counterexample"] = {"ring": key, "t_value": repr(tv)}
                break
            restricted[z] = inv[0]
            images.add(Hom(side2, b_ring, restricted))
        else:
            if len(images) != len(pts1):
                report["pass"] = False
                report["counterexample"] = {"ring": key,
                                            "reason": "restriction not injective"}
    return report
