"""Truncated pi-typical Witt vectors.

Universal sum/product/negation/Frobenius/Delta polynomials are produced
once per (O, pi, q, n) by triangular inversion of the ghost map over the
torsion-free cover O[X, Y], verified symbolically, then evaluated in any
coefficient algebra B.  Levels use Borger indexing: level n vectors have
n+1 components.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os

from .errors import FeasibilityCap, NotCharP
from .multipoly import MultiPoly, jet_var
from .rings import ring_pow

DEFAULT_TABLE_CAP = 64

_X = lambda i: ("X", 0, i)
_Y = lambda i: ("Y", 0, i)


class _QPowers:
    """Incremental q-power tower: pw(x, k) = x^(q^k), each power computed once."""

    def __init__(self, q):
        self.q = q
        self.cache = {}

    def get(self, idx, poly, k):
        chain = self.cache.setdefault(idx, [poly])
        while len(chain) <= k:
            chain.append(chain[-1] ** self.q)
        return chain[k]


def witt_poly(triple, comps, i, powers=None, key=""):
    """w_i of a list of polynomial components: sum pi^j * comp_j^(q^(i-j))."""
    acc = MultiPoly.zero(triple.ring)
    powers = powers or _QPowers(triple.q)
    for j in range(i + 1):
        acc = acc + powers.get((key, j), comps[j], i - j).scale(triple.pi_pow(j))
    return acc


def ghost_invert(triple, targets):
    """Solve w_i(Z) = targets[i] triangularly over O[..]; exact throughout."""
    comps = []
    powers = _QPowers(triple.q)
    for i, goal in enumerate(targets):
        rhs = goal
        for j in range(i):
            rhs = rhs - powers.get(j, comps[j], i - j).scale(triple.pi_pow(j))
        for _ in range(i):
            rhs = rhs.map_coeffs(triple.exact_div_pi, triple.ring)
        comps.append(rhs)
    return comps


def unit_embedding(triple, n, c):
    """Components of exp_delta(c) for c in O: ghost vector (c, c, ..., c).

    This is the O-algebra structure map of W_n; component i equals the
    universal polynomial P_i evaluated at the delta-iterates of c.
    """
    comps = []
    for i in range(n + 1):
        rhs = c
        for j in range(i):
            rhs = triple.ring.sub(
                rhs,
                triple.ring.mul(triple.pi_pow(j), triple.ring.pow(comps[j], triple.q ** (i - j))),
            )
        comps.append(triple.exact_div_pi_k(rhs, i))
    return tuple(comps)


class WittTable:
    """Universal polynomials for W_n over a fixed triple."""

    def __init__(self, triple, n, s, m, neg, f, d):
        self.triple = triple
        self.n = n
        self.s = s
        self.m = m
        self.neg = neg
        self.f = f
        self.d = d

    def verify(self):
        """Re-derive every ghost identity symbolically; exact equality."""
        tr = self.triple
        n = self.n
        pw = _QPowers(tr.q)
        xs = [MultiPoly.var(tr.ring, _X(i)) for i in range(n + 1)]
        ys = [MultiPoly.var(tr.ring, _Y(i)) for i in range(n + 1)]
        for i in range(n + 1):
            wx = witt_poly(tr, xs, i, pw, "x")
            wy = witt_poly(tr, ys, i, pw, "y")
            assert witt_poly(tr, self.s, i, pw, "s") == wx + wy, \
                f"S ghost identity fails at {i}"
            assert witt_poly(tr, self.m, i, pw, "m") == wx * wy, \
                f"M ghost identity fails at {i}"
            assert witt_poly(tr, self.neg, i, pw, "n") == -wx, \
                f"N ghost identity fails at {i}"
        for i in range(n):
            assert witt_poly(tr, self.f, i, pw, "f") == witt_poly(tr, xs, i + 1, pw, "x"), \
                f"F ghost identity fails at {i}"
            # F_i = X_i^q mod pi (the congruence behind the Delta derivation)
            (self.f[i] - xs[i] ** tr.q).map_coeffs(tr.exact_div_pi, tr.ring)
            # pi * w_i(D) = w_(i+1)(X) - w_i(X)^q
            lhs = witt_poly(tr, self.d, i, pw, "d").scale(tr.pi)
            assert lhs == witt_poly(tr, xs, i + 1, pw, "x") - witt_poly(tr, xs, i, pw, "x") ** tr.q, \
                f"D ghost identity fails at {i}"
        return True

    # -- canonical serialization

    def header(self):
        return {
            "g": list(self.triple.ring.g),
            "pi": list(self.triple.pi),
            "q": self.triple.q,
            "n": self.n,
        }

    def to_json_obj(self):
        def fam(polys):
            return [p.to_json_obj() for p in polys]

        return {
            "header": self.header(),
            "S": fam(self.s),
            "M": fam(self.m),
            "N": fam(self.neg),
            "F": fam(self.f),
            "D": fam(self.d),
        }

    @classmethod
    def from_json_obj(cls, obj, triple):
        ring = triple.ring

        def fam(key):
            return [MultiPoly.from_json_obj(o, ring) for o in obj[key]]

        return cls(triple, obj["header"]["n"], fam("S"), fam("M"), fam("N"),
                   fam("F"), fam("D"))


_TABLE_CACHE = {}


def build_table(triple, n, cap=DEFAULT_TABLE_CAP, verify=True):
    """Ghost-invert the universal sum/product/negation/F/Delta polynomials.

    Results are cached per (g, pi, q, n).  cap=None disables the q^n
    feasibility bound (internal callers that know what they are doing).
    """
    key = (triple.key(), n)
    hit = _TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    if cap is not None and triple.q ** n > cap:
        raise FeasibilityCap(f"q^n = {triple.q ** n} exceeds cap {cap}")
    tr = triple
    xs = [MultiPoly.var(tr.ring, _X(i)) for i in range(n + 1)]
    ys = [MultiPoly.var(tr.ring, _Y(i)) for i in range(n + 1)]
    wx = [witt_poly(tr, xs, i) for i in range(n + 1)]
    wy = [witt_poly(tr, ys, i) for i in range(n + 1)]
    s = ghost_invert(tr, [a + b for a, b in zip(wx, wy)])
    m = ghost_invert(tr, [a * b for a, b in zip(wx, wy)])
    neg = ghost_invert(tr, [-a for a in wx])
    f = ghost_invert(tr, [wx[i + 1] for i in range(n)])
    d = ghost_invert(
        tr,
        [
            (wx[i + 1] - wx[i] ** tr.q).map_coeffs(tr.exact_div_pi, tr.ring)
            for i in range(n)
        ],
    )
    table = WittTable(tr, n, s, m, neg, f, d)
    if verify:
        table.verify()
    _TABLE_CACHE[key] = table
    return table


def table_cache_path(cache_dir, triple, n):
    header = json.dumps(
        {"g": list(triple.ring.g), "pi": list(triple.pi), "q": triple.q, "n": n},
        sort_keys=True,
    )
    digest = hashlib.sha256(header.encode()).hexdigest()[:24]
    return os.path.join(cache_dir, "witt", f"{digest}.json")


def save_table(table, cache_dir):
    path = table_cache_path(cache_dir, table.triple, table.n)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(table.to_json_obj(), fh, sort_keys=True, separators=(",", ":"))
    return path


def load_table(triple, n, cache_dir, trust_cache=False):
    path = table_cache_path(cache_dir, triple, n)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        obj = json.load(fh)
    table = WittTable.from_json_obj(obj, triple)
    if not trust_cache:
        table.verify()
    return table


class WittRing:
    """W_n(B) for a concrete coefficient algebra B.

    o_map sends O power-basis tuples into B; for O = Z the default sends
    (c,) to B.from_int(c).
    """

    def __init__(self, table, b_ring, o_map=None):
        self.table = table
        self.triple = table.triple
        self.n = table.n
        self.b = b_ring
        if o_map is None:
            if self.triple.d != 1:
                raise ValueError("o_map required when O != Z")
            o_map = lambda c: b_ring.from_int(c[0])
        self.o_map = o_map
        self._compiled = {}

    @property
    def size(self):
        return getattr(self.b, "size", None) and self.b.size ** (self.n + 1)

    def _ev(self, which, idx, assignment):
        key = (which, idx)
        c = self._compiled.get(key)
        if c is None:
            poly = getattr(self.table, which)[idx]
            c = poly.compiled(self.o_map, self.b)
            self._compiled[key] = c
        from .multipoly import eval_compiled
        return eval_compiled(c, assignment, self.b)

    def _xy(self, x, y):
        a = {_X(i): x[i] for i in range(self.n + 1)}
        a.update({_Y(i): y[i] for i in range(self.n + 1)})
        return a

    def vec(self, comps):
        comps = tuple(comps)
        if len(comps) != self.n + 1:
            raise ValueError("wrong number of components")
        return WittVector(self, comps)

    def zero(self):
        return self.vec((self.b.zero(),) * (self.n + 1))

    def one(self):
        return self.teichmuller(self.b.one())

    def from_o(self, c):
        return self.vec(tuple(self.o_map(z) for z in unit_embedding(self.triple, self.n, c)))

    def from_int(self, k):
        return self.from_o(self.triple.ring.from_int(k))

    def is_zero(self, x):
        return all(self.b.is_zero(c) for c in x.comps)

    def add(self, x, y):
        a = self._xy(x.comps, y.comps)
        return self.vec(tuple(self._ev("s", i, a) for i in range(self.n + 1)))

    def mul(self, x, y):
        a = self._xy(x.comps, y.comps)
        return self.vec(tuple(self._ev("m", i, a) for i in range(self.n + 1)))

    def neg(self, x):
        a = {_X(i): x.comps[i] for i in range(self.n + 1)}
        return self.vec(tuple(self._ev("neg", i, a) for i in range(self.n + 1)))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def teichmuller(self, b):
        return self.vec((b,) + (self.b.zero(),) * self.n)

    def ghost(self, x):
        out = []
        for i in range(self.n + 1):
            acc = self.b.zero()
            for j in range(i + 1):
                term = self.b.mul(
                    self.o_map(self.triple.pi_pow(j)),
                    ring_pow(self.b, x.comps[j], self.triple.q ** (i - j)),
                )
                acc = self.b.add(acc, term)
            out.append(acc)
        return tuple(out)

    def scalar(self, lam, x):
        """Action of lam in O via the structure map (ghost = lam * ghost(x))."""
        return self.mul(self.from_o(lam), x)

    def elements(self):
        for comps in itertools.product(list(self.b.elements()), repeat=self.n + 1):
            yield self.vec(comps)

    def at_level(self, n, cap=None):
        table = build_table(self.triple, n, cap=cap)
        return WittRing(table, self.b, self.o_map)

    def __eq__(self, other):
        return (
            isinstance(other, WittRing)
            and self.triple == other.triple
            and self.n == other.n
            and self.b == other.b
        )

    def __hash__(self):
        return hash(("WittRing", self.triple.key(), self.n, self.b))

    def __repr__(self):
        return f"W_{self.n}({self.b!r}; {self.triple!r})"


class WittVector:
    __slots__ = ("ring", "comps")

    def __init__(self, ring, comps):
        self.ring = ring
        self.comps = tuple(comps)

    def __add__(self, other):
        return self.ring.add(self, other)

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __sub__(self, other):
        return self.ring.sub(self, other)

    def __neg__(self):
        return self.ring.neg(self)

    def __pow__(self, k):
        return ring_pow(self.ring, self, k)

    def ghost(self):
        return self.ring.ghost(self)

    def __eq__(self, other):
        return isinstance(other, WittVector) and self.comps == other.comps and self.ring == other.ring

    def __hash__(self):
        return hash((self.ring.n, self.comps))

    def __repr__(self):
        return f"W{self.comps}"


def frobenius(x):
    """W_n(B) -> W_(n-1)(B); ghost-side left shift."""
    ring = x.ring
    if ring.n < 1:
        raise ValueError("frobenius needs level >= 1")
    a = {_X(i): x.comps[i] for i in range(ring.n + 1)}
    lower = ring.at_level(ring.n - 1)
    return lower.vec(tuple(ring._ev("f", i, a) for i in range(ring.n)))


def verschiebung(x, cap=None):
    """W_(n-1)(B) -> W_n(B); literal right shift, O-linear."""
    ring = x.ring
    higher = ring.at_level(ring.n + 1, cap=cap)
    return higher.vec((ring.b.zero(),) + x.comps)


def truncate(x):
    ring = x.ring
    if ring.n < 1:
        raise ValueError("truncate needs level >= 1")
    return ring.at_level(ring.n - 1).vec(x.comps[:-1])


def teichmuller(ring, b):
    return ring.teichmuller(b)


def delta_w(x):
    """The pi-derivation Delta: W_n(B) -> W_(n-1)(B), F = (.)^q + pi*Delta."""
    ring = x.ring
    if ring.n < 1:
        raise ValueError("delta_w needs level >= 1")
    a = {_X(i): x.comps[i] for i in range(ring.n + 1)}
    lower = ring.at_level(ring.n - 1)
    return lower.vec(tuple(ring._ev("d", i, a) for i in range(ring.n)))


class DrinfeldMap:
    """The comparison map u: W_(p,p)(B) -> W_(pi',q')(B) for an F_q'-algebra B.

    Determined by u([b]) = [b], u(F^r x) = F(u x) and
    u(V x) = (p/pi') V(u(F^(r-1) x)); computed by structural recursion on
    the V-adic decomposition.  Truncated levels are handled by padding the
    inner vectors with zeros, which is valid because u commutes with
    truncation (and is re-verified by the brute-force condition checks).
    """

    def __init__(self, source_triple, target_triple, b_ring, target_o_map):
        if source_triple.d != 1 or source_triple.q != source_triple.p:
            raise ValueError("source must be the p-typical triple (Z, p, p)")
        p = source_triple.p
        if target_triple.p != p:
            raise NotCharP("triples have different residue characteristics")
        char = b_ring.characteristic() if hasattr(b_ring, "characteristic") else None
        if char is not None and char != p:
            raise NotCharP(f"B has characteristic {char}, expected {p}")
        self.source = source_triple
        self.target = target_triple
        self.b = b_ring
        self.o_map = target_o_map
        # q' = p^r
        self.r = target_triple.h
        self.ratio = target_triple.exact_div_pi(target_triple.ring.from_int(p))
        self._s_rings = {}
        self._t_rings = {}

    def s_ring(self, n):
        if n not in self._s_rings:
            self._s_rings[n] = WittRing(build_table(self.source, n, cap=None), self.b)
        return self._s_rings[n]

    def t_ring(self, n):
        if n not in self._t_rings:
            self._t_rings[n] = WittRing(build_table(self.target, n, cap=None), self.b, self.o_map)
        return self._t_rings[n]

    def target_level(self, n):
        return (n + 1) * self.target.e - 1

    def apply(self, x, target_level=None):
        """u of a source WittVector (or component tuple), truncated."""
        comps = x.comps if isinstance(x, WittVector) else tuple(x)
        tl = self.target_level(len(comps) - 1) if target_level is None else target_level
        return self._u(comps, tl)

    def _u(self, comps, tl):
        t_ring = self.t_ring(tl)
        x0 = comps[0]
        head = t_ring.teichmuller(x0)
        if tl == 0 or len(comps) == 1:
            return head
        level = len(comps) - 1
        s_ring = self.s_ring(level)
        rem = s_ring.vec(comps) - s_ring.teichmuller(x0)
        y = list(rem.comps[1:])  # V(y) = x - [x0]
        need = (tl - 1) + (self.r - 1)
        y = (y + [self.b.zero()] * (need + 1))[: need + 1]
        z = self.s_ring(need).vec(y)
        for _ in range(self.r - 1):
            z = frobenius(z)
        w = self._u(z.comps, tl - 1)
        tail = self.t_ring(tl).scalar(self.ratio, verschiebung(w, cap=None))
        return head + tail
