"""Sparse multivariate polynomials with jet-indexed variables.

Variables are tuples (family, gamma, order); the total variable order is
lexicographic on that tuple and term order is graded-lex, so serialized
output is bit-stable.  Coefficients live in any ring object implementing
the protocol of :mod:`arithjet.rings` (zero/one/add/mul/neg/from_int).
"""

from __future__ import annotations

import itertools
import json

from .errors import MissingAssignment, SizeCapExceeded
from .rings import DEFAULT_SIZE_CAP, ring_pow


def jet_var(family, gamma=0, order=0):
    return (str(family), int(gamma), int(order))


def _merge_mono(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(mono):
    return (sum(e for _, e in mono), mono)


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None, _normalized=False):
        self.ring = ring
        if terms is None:
            self.terms = {}
        elif _normalized:
            self.terms = terms
        else:
            clean = {}
            for mono, c in terms.items():
                if not ring.is_zero(c):
                    mono = tuple(sorted((v, e) for v, e in mono if e))
                    if mono in clean:
                        c2 = ring.add(clean[mono], c)
                        if ring.is_zero(c2):
                            del clean[mono]
                        else:
                            clean[mono] = c2
                    else:
                        clean[mono] = c
            self.terms = clean

    # -- constructors

    @classmethod
    def zero(cls, ring):
        return cls(ring, {}, _normalized=True)

    @classmethod
    def const(cls, ring, c):
        if ring.is_zero(c):
            return cls.zero(ring)
        return cls(ring, {(): c}, _normalized=True)

    @classmethod
    def from_int(cls, ring, n):
        return cls.const(ring, ring.from_int(n))

    @classmethod
    def var(cls, ring, v, exp=1):
        return cls(ring, {((v, exp),): ring.one()}, _normalized=True)

    # -- queries

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(m == () for m in self.terms)

    def constant_term(self):
        return self.terms.get((), self.ring.zero())

    def variables(self):
        vs = set()
        for mono in self.terms:
            vs.update(v for v, _ in mono)
        return sorted(vs)

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e for _, e in m) for m in self.terms)

    def max_order(self):
        orders = [v[2] for m in self.terms for v, _ in m]
        return max(orders) if orders else -1

    # -- arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        r = self.ring
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            if mono in terms:
                s = r.add(terms[mono], c)
                if r.is_zero(s):
                    del terms[mono]
                else:
                    terms[mono] = s
            else:
                terms[mono] = c
        return MultiPoly(r, terms, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        r = self.ring
        return MultiPoly(r, {m: r.neg(c) for m, c in self.terms.items()}, _normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        r = self.ring
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = r.mul(c1, c2)
                if r.is_zero(c):
                    continue
                mono = _merge_mono(m1, m2)
                if mono in terms:
                    s = r.add(terms[mono], c)
                    if r.is_zero(s):
                        del terms[mono]
                    else:
                        terms[mono] = s
                else:
                    terms[mono] = c
        return MultiPoly(r, terms, _normalized=True)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.from_int(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        r = self.ring
        if r.is_zero(c):
            return MultiPoly.zero(r)
        return MultiPoly(r, {m: r.mul(c, x) for m, x in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.from_int(self.ring, other)
        return MultiPoly.const(self.ring, other)

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.from_int(self.ring, other)
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- substitution / evaluation

    def substitute(self, mapping):
        """Simultaneous substitution var -> MultiPoly (identity if absent)."""
        result = MultiPoly.zero(self.ring)
        cache = {}
        for mono, c in self.terms.items():
            term = MultiPoly.const(self.ring, c)
            for v, e in mono:
                key = (v, e)
                if key not in cache:
                    img = mapping.get(v)
                    if img is None:
                        img = MultiPoly.var(self.ring, v)
                    cache[key] = img ** e
                term = term * cache[key]
            result = result + term
        return result

    def map_coeffs(self, f, target_ring):
        terms = {}
        for mono, c in self.terms.items():
            terms[mono] = f(c)
        return MultiPoly(target_ring, terms)

    def compiled(self, coeff_map, target_ring):
        """Pre-map coefficients for repeated evaluation in target_ring."""
        return [(coeff_map(c), mono) for mono, c in sorted(self.terms.items(), key=lambda t: _mono_key(t[0]))]

    def evaluate(self, assignment, target_ring, coeff_map=None):
        """Evaluate with a total assignment var -> target element."""
        terms = self.compiled(coeff_map or (lambda c: c), target_ring)
        return eval_compiled(terms, assignment, target_ring)

    # -- serialization (canonical, bit-stable)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]))

    def to_json_obj(self):
        vs = self.variables()
        terms = []
        for mono, c in self.sorted_terms():
            exps = [0] * len(vs)
            for v, e in mono:
                exps[vs.index(v)] = e
            coeff = list(c) if isinstance(c, tuple) else [c]
            terms.append([exps, coeff])
        return {"vars": [list(v) for v in vs], "terms": terms}

    @classmethod
    def from_json_obj(cls, obj, ring):
        vs = [jet_var(*v) for v in obj["vars"]]
        terms = {}
        for exps, coeff in obj["terms"]:
            mono = tuple((vs[i], e) for i, e in enumerate(exps) if e)
            c = tuple(coeff)
            if hasattr(ring, "coerce"):
                c = ring.coerce(c)
            elif len(coeff) == 1 and not hasattr(ring, "d"):
                c = ring.from_int(coeff[0])
            terms[mono] = c
        return cls(ring, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono, c in self.sorted_terms():
            mono_s = "*".join(
                f"{v[0]}{v[1] if v[1] else ''}^({v[2]})" + (f"**{e}" if e > 1 else "")
                for v, e in mono
            )
            bits.append(f"{c}" + (f"*{mono_s}" if mono_s else ""))
        return " + ".join(bits)


def eval_compiled(terms, assignment, target_ring):
    acc = target_ring.zero()
    pcache = {}
    for c, mono in terms:
        val = c
        for v, e in mono:
            key = (v, e)
            pw = pcache.get(key)
            if pw is None:
                if v not in assignment:
                    raise MissingAssignment(f"no value assigned to {v}")
                pw = ring_pow(target_ring, assignment[v], e)
                pcache[key] = pw
            val = target_ring.mul(val, pw)
        acc = target_ring.add(acc, val)
    return acc


# -- the phi_A / Q^delta calculus on O[T, T', ...] ---------------------------

def phi_a(poly, triple):
    """The Frobenius-lift endomorphism: T_(i) -> T_(i)^q + pi*T_(i+1).

    Coefficients are fixed (the lift is the identity on O).
    """
    ring = triple.ring
    mapping = {}
    for v in poly.variables():
        fam, gamma, order = v
        succ = MultiPoly.var(ring, (fam, gamma, order + 1)).scale(triple.pi)
        mapping[v] = MultiPoly.var(ring, v) ** triple.q + succ
    return poly.substitute(mapping)


def q_delta(poly, triple):
    """Q^delta = (phi_A(Q) - Q^q)/pi, exact; raises jet order by at most 1."""
    num = phi_a(poly, triple) - poly ** triple.q
    return num.map_coeffs(triple.exact_div_pi, triple.ring)


def iterate_q_delta(poly, triple, k):
    for _ in range(k):
        poly = q_delta(poly, triple)
    return poly


def c_pi_poly(triple, xvar=("X", 0, 0), yvar=("Y", 0, 0)):
    """C_pi(X, Y) = (X^q + Y^q - (X+Y)^q)/pi as a polynomial over O."""
    ring = triple.ring
    x = MultiPoly.var(ring, xvar)
    y = MultiPoly.var(ring, yvar)
    num = x ** triple.q + y ** triple.q - (x + y) ** triple.q
    return num.map_coeffs(triple.exact_div_pi, ring)


class PolyRing:
    """MultiPoly-over-k as a coefficient-ring protocol object.

    Lets symbolic polynomial rings stand in wherever a test ring B is
    expected (e.g. Witt vectors with polynomial entries).
    """

    def __init__(self, coeff_ring):
        self.coeff_ring = coeff_ring

    def zero(self):
        return MultiPoly.zero(self.coeff_ring)

    def one(self):
        return MultiPoly.from_int(self.coeff_ring, 1)

    def from_int(self, n):
        return MultiPoly.from_int(self.coeff_ring, n)

    def is_zero(self, x):
        return x.is_zero()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.coeff_ring == other.coeff_ring

    def __hash__(self):
        return hash(("PolyRing", self.coeff_ring))


# -- homomorphism enumeration ------------------------------------------------

class Hom:
    """A generator assignment source -> target with all relations checked."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.images = dict(images)

    def __call__(self, gen):
        return self.images[gen]

    def __eq__(self, other):
        return isinstance(other, Hom) and self.images == other.images

    def __hash__(self):
        return hash(tuple(sorted(self.images.items())))

    def __repr__(self):
        return f"Hom({self.images})"


def enumerate_homs_raw(generators, relations, target, coeff_map,
                       size_cap=DEFAULT_SIZE_CAP, source=None):
    """All maps {generator -> target element} killing every relation.

    generators: list of variables (family, gamma, order) appearing in the
    relations; relations: MultiPoly list; coeff_map sends relation
    coefficients into the target ring.  Deterministic order.
    """
    elems = list(target.elements())
    total = len(elems) ** len(generators)
    if total > size_cap:
        raise SizeCapExceeded(f"{total} candidate assignments exceed cap {size_cap}")
    gens = list(generators)
    pos = {v: i for i, v in enumerate(gens)}
    # check each relation as soon as its last variable is assigned
    staged = [[] for _ in range(len(gens) + 1)]
    for rel in relations:
        depth = max((pos[v] + 1 for v in rel.variables() if v in pos), default=0)
        staged[depth].append(rel.compiled(coeff_map, target))
    out = []
    zero = target.zero()

    def extend(assignment, depth):
        for c in staged[depth]:
            if eval_compiled(c, assignment, target) != zero:
                return
        if depth == len(gens):
            out.append(Hom(source, target, dict(assignment)))
            return
        v = gens[depth]
        for val in elems:
            assignment[v] = val
            extend(assignment, depth + 1)
        del assignment[v]

    extend({}, 0)
    return out
