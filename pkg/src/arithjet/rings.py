"""Exact base arithmetic.

Monogenic number rings O = Z[t]/(g) with exact division by a chosen
uniformizer pi, finite quotients O/pi^k, and enumerable finite test rings
built as towers of monic extensions over Z/m.  Everything is integer-exact;
elements are plain tuples/ints so they hash and compare structurally.
"""

from __future__ import annotations

import itertools
import json

from .errors import (
    NotDivisible,
    NotPrimePower,
    PiNotDividingP,
    QuotientNotField,
    SizeCapExceeded,
    WrongResidueSize,
)

DEFAULT_SIZE_CAP = 10**6


def _prime_power(q):
    """Return (p, h) with q = p**h, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if p * p > q:
            return (q, 1)
        if q % p == 0:
            h = 0
            while q % p == 0:
                q //= p
                h += 1
            return (p, h) if q == 1 else None
    return None


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total += term if j % 2 == 0 else -term
    return total


def _adjugate(m):
    n = len(m)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1:] for k, row in enumerate(m) if k != j]
            cof = _det(minor)
            adj[i][j] = cof if (i + j) % 2 == 0 else -cof
    return adj


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _hnf_columns(m):
    """Column-style Hermite normal form, lower triangular, positive diagonal.

    Input columns generate a full-rank lattice in Z^d; returns the HNF basis
    as a matrix (rows x cols).  d is tiny here, so plain column reduction.
    """
    d = len(m)
    cols = [[m[i][j] for i in range(d)] for j in range(d)]
    for i in range(d):
        # clear row i across columns > i by gcd steps
        for j in range(i + 1, d):
            while cols[j][i] != 0:
                if cols[i][i] == 0:
                    cols[i], cols[j] = cols[j], cols[i]
                    continue
                k = cols[j][i] // cols[i][i]
                cols[j] = [a - k * b for a, b in zip(cols[j], cols[i])]
                if cols[j][i] != 0:
                    cols[i], cols[j] = cols[j], cols[i]
        if cols[i][i] < 0:
            cols[i] = [-a for a in cols[i]]
        # reduce earlier columns' row-i entries into [0, diag)
        for j in range(i):
            k = cols[j][i] // cols[i][i]
            cols[j] = [a - k * b for a, b in zip(cols[j], cols[i])]
    return [[cols[j][i] for j in range(d)] for i in range(d)]


class NumberRing:
    """Z[t]/(g) for monic integer g; elements are length-d coefficient tuples."""

    def __init__(self, g):
        g = tuple(int(c) for c in g)
        if len(g) < 2 or g[-1] != 1:
            raise ValueError("g must be monic of degree >= 1")
        self.g = g
        self.d = len(g) - 1

    def zero(self):
        return (0,) * self.d

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        return (int(n),) + (0,) * (self.d - 1)

    def coerce(self, x):
        if isinstance(x, int):
            return self.from_int(x)
        x = tuple(int(c) for c in x)
        if len(x) > self.d:
            raise ValueError("coefficient vector too long")
        return x + (0,) * (self.d - len(x))

    def is_zero(self, x):
        return all(c == 0 for c in x)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        d = self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(d):
                    prod[i - d + j] -= c * self.g[j]
        return tuple(prod[:d])

    def pow(self, a, n):
        r = self.one()
        b = a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def __eq__(self, other):
        return isinstance(other, NumberRing) and self.g == other.g

    def __hash__(self):
        return hash(("NumberRing", self.g))

    def __repr__(self):
        return f"NumberRing(g={list(self.g)})"


class BaseTriple:
    """Validated data (O, pi, q); see validate_triple."""

    def __init__(self, ring, pi, q, p, h, e, mat, det, adj, name=None):
        self.ring = ring
        self.pi = pi
        self.q = q
        self.p = p
        self.h = h
        self.e = e
        self.mat = mat
        self.det = det
        self.adj = adj
        self.name = name

    @property
    def d(self):
        return self.ring.d

    def key(self):
        return (self.ring.g, self.pi, self.q)

    def exact_div_pi(self, x):
        """y with pi*y = x, via the adjugate of the mult-by-pi matrix."""
        d = self.d
        num = [sum(self.adj[i][j] * x[j] for j in range(d)) for i in range(d)]
        if any(v % self.det for v in num):
            raise NotDivisible(f"{x} is not divisible by pi")
        return tuple(v // self.det for v in num)

    def exact_div_pi_k(self, x, k):
        for _ in range(k):
            x = self.exact_div_pi(x)
        return x

    def delta_base(self, x):
        """delta(x) = (x - x^q)/pi, the unique pi-derivation on O."""
        return self.exact_div_pi(self.ring.sub(x, self.ring.pow(x, self.q)))

    def pi_pow(self, k):
        return self.ring.pow(self.pi, k)

    def residue_field(self):
        return QuotientRing(self, 1)

    def __eq__(self, other):
        return isinstance(other, BaseTriple) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.name:
            return f"BaseTriple<{self.name}>"
        return f"BaseTriple(g={list(self.ring.g)}, pi={list(self.pi)}, q={self.q})"


def validate_triple(g, pi_coeffs, q, name=None):
    """Check all invariants of (O, pi, q) and return the BaseTriple.

    Raises NotPrimePower / WrongResidueSize / QuotientNotField /
    PiNotDividingP on the respective failures.
    """
    ring = NumberRing(g)
    pi = ring.coerce(pi_coeffs)
    if ring.is_zero(pi):
        raise ValueError("pi must be nonzero")
    pp = _prime_power(int(q))
    if pp is None:
        raise NotPrimePower(f"q={q} is not a prime power")
    p, h = pp
    d = ring.d
    basis = [ring.from_int(1)]
    t = tuple([0, 1] + [0] * (d - 2)) if d > 1 else ring.from_int(0)
    for _ in range(d - 1):
        basis.append(ring.mul(basis[-1], t))
    cols = [ring.mul(pi, b) for b in basis]
    mat = [[cols[j][i] for j in range(d)] for i in range(d)]
    det = _det(mat)
    if abs(det) != q:
        raise WrongResidueSize(f"|O/piO| = {abs(det)} != q = {q}")
    adj = _adjugate(mat)
    triple = BaseTriple(ring, pi, int(q), p, h, 0, mat, det, adj, name=name)
    # residue quotient must have no zero divisors (full enumeration, q elements)
    kq = QuotientRing(triple, 1)
    nonzero = [x for x in kq.elements() if x != kq.zero()]
    for a in nonzero:
        for b in nonzero:
            if kq.mul(a, b) == kq.zero():
                raise QuotientNotField(f"zero divisors {a} * {b} = 0 in O/piO")
    # ramification: maximal e with pi^e | p
    x = ring.from_int(p)
    e = 0
    try:
        while True:
            x = triple.exact_div_pi(x)
            e += 1
    except NotDivisible:
        pass
    if e == 0:
        raise PiNotDividingP("p is not in piO")
    triple.e = e
    return triple


def triple_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    return validate_triple(obj["g"], obj["pi"], obj["q"])


class QuotientRing:
    """O/pi^k O, elements canonical residue tuples w.r.t. an HNF basis."""

    def __init__(self, triple, k):
        self.triple = triple
        self.k = k
        ring = triple.ring
        m = [[1 if i == j else 0 for j in range(ring.d)] for i in range(ring.d)]
        for _ in range(k):
            m = _mat_mul(triple.mat, m)
        self.h = _hnf_columns(m)
        self.size = 1
        for i in range(ring.d):
            self.size *= self.h[i][i]

    def reduce(self, v):
        v = list(v)
        d = len(v)
        for i in range(d):
            s = v[i] // self.h[i][i]
            if s:
                for r in range(i, d):
                    v[r] -= s * self.h[r][i]
        return tuple(v)

    def lift(self, x):
        """Canonical representatives are already elements of O."""
        return x

    def zero(self):
        return (0,) * self.triple.d

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        return self.reduce(self.triple.ring.from_int(n))

    def from_o(self, x):
        return self.reduce(x)

    def is_zero(self, x):
        return x == self.zero()

    def add(self, a, b):
        return self.reduce(self.triple.ring.add(a, b))

    def sub(self, a, b):
        return self.reduce(self.triple.ring.sub(a, b))

    def neg(self, a):
        return self.reduce(self.triple.ring.neg(a))

    def mul(self, a, b):
        return self.reduce(self.triple.ring.mul(a, b))

    def elements(self):
        ranges = [range(self.h[i][i]) for i in range(self.triple.d)]
        for v in itertools.product(*ranges):
            yield self.reduce(v)

    def induced_delta(self, x):
        """delta on O/pi^k landing in O/pi^(k-1) (lift, delta, reduce)."""
        return QuotientRing(self.triple, self.k - 1).from_o(self.triple.delta_base(x))

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and self.triple == other.triple
            and self.k == other.k
        )

    def __hash__(self):
        return hash(("QuotientRing", self.triple.key(), self.k))

    def __repr__(self):
        return f"QuotientRing({self.triple!r}, k={self.k})"


class FiniteRing:
    """Tower of monic univariate extensions over Z/m.

    tower[i] is the monic polynomial (coefficient list, constant first)
    adjoining the (i+1)-th generator; its coefficients are elements of the
    ring built so far.  Elements are nested tuples with int leaves in [0,m).
    """

    def __init__(self, m, tower=(), char=None):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.m = int(m)
        self.tower = ()
        self.degrees = ()
        for lvl, p in enumerate(tower):
            # integer coefficients are accepted at any level and coerced
            coerced = tuple(self._scalar(lvl, c) if isinstance(c, int) else c
                            for c in p)
            self.tower += (coerced,)
            self.degrees += (len(coerced) - 1,)
        if any(d < 1 for d in self.degrees):
            raise ValueError("tower polynomials must have degree >= 1")
        self.size = self.m
        for d in self.degrees:
            self.size **= d
        self._char = char
        self._mulcache = {}
        for lvl, poly in enumerate(self.tower):
            lead = poly[-1]
            if lead != self._one(lvl):
                raise ValueError("tower polynomials must be monic")

    # -- level helpers: level 0 is Z/m, level len(tower) is the full ring

    def _zero(self, lvl):
        if lvl == 0:
            return 0
        return (self._zero(lvl - 1),) * self.degrees[lvl - 1]

    def _one(self, lvl):
        if lvl == 0:
            return 1 % self.m
        low = self.degrees[lvl - 1]
        return (self._one(lvl - 1),) + (self._zero(lvl - 1),) * (low - 1)

    def _add(self, lvl, a, b):
        if lvl == 0:
            return (a + b) % self.m
        return tuple(self._add(lvl - 1, x, y) for x, y in zip(a, b))

    def _neg(self, lvl, a):
        if lvl == 0:
            return (-a) % self.m
        return tuple(self._neg(lvl - 1, x) for x in a)

    def _mul(self, lvl, a, b):
        if lvl == 0:
            return (a * b) % self.m
        d = self.degrees[lvl - 1]
        poly = self.tower[lvl - 1]
        prod = [self._zero(lvl - 1)] * (2 * d - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = self._add(lvl - 1, prod[i + j], self._mul(lvl - 1, x, y))
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            prod[i] = self._zero(lvl - 1)
            for j in range(d):
                prod[i - d + j] = self._add(
                    lvl - 1,
                    prod[i - d + j],
                    self._neg(lvl - 1, self._mul(lvl - 1, c, poly[j])),
                )
        return tuple(prod[:d])

    def _scalar(self, lvl, n):
        if lvl == 0:
            return n % self.m
        low = self.degrees[lvl - 1]
        return (self._scalar(lvl - 1, n),) + (self._zero(lvl - 1),) * (low - 1)

    def _elements(self, lvl):
        if lvl == 0:
            return list(range(self.m))
        lower = self._elements(lvl - 1)
        return [tuple(v) for v in itertools.product(lower, repeat=self.degrees[lvl - 1])]

    # -- public ring protocol

    @property
    def top(self):
        return len(self.tower)

    def zero(self):
        return self._zero(self.top)

    def one(self):
        return self._one(self.top)

    def from_int(self, n):
        return self._scalar(self.top, int(n))

    def is_zero(self, x):
        return x == self.zero()

    def add(self, a, b):
        return self._add(self.top, a, b)

    def neg(self, a):
        return self._neg(self.top, a)

    def sub(self, a, b):
        return self._add(self.top, a, self._neg(self.top, b))

    def mul(self, a, b):
        if self.size <= 256:
            key = (a, b) if a <= b else (b, a)
            hit = self._mulcache.get(key)
            if hit is None:
                hit = self._mul(self.top, a, b)
                self._mulcache[key] = hit
            return hit
        return self._mul(self.top, a, b)

    def elements(self):
        return self._elements(self.top)

    def gen(self, level=None):
        """The generator adjoined at the given tower level (default: top)."""
        if not self.tower:
            raise ValueError("base ring Z/m has no tower generator")
        level = self.top if level is None else level
        x = self._zero(level)
        x = (self._zero(level - 1), self._one(level - 1)) + x[2:]
        for lvl in range(level + 1, self.top + 1):
            low = self.degrees[lvl - 1]
            x = (x,) + (self._zero(lvl - 1),) * (low - 1)
        return x

    def characteristic(self):
        if self._char is None:
            one = self.one()
            x = one
            n = 1
            while not self.is_zero(x):
                x = self.add(x, one)
                n += 1
            self._char = n
        return self._char

    def __eq__(self, other):
        return (
            isinstance(other, FiniteRing)
            and self.m == other.m
            and self.tower == other.tower
        )

    def __hash__(self):
        return hash(("FiniteRing", self.m, self.tower))

    def __repr__(self):
        if not self.tower:
            return f"FiniteRing(Z/{self.m})"
        return f"FiniteRing(Z/{self.m}, tower degrees {list(self.degrees)})"


def finite_ring_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)

    def parse_coeff(c):
        return tuple(parse_coeff(x) for x in c) if isinstance(c, list) else int(c)

    tower = [[parse_coeff(c) for c in poly] for poly in obj.get("tower", [])]
    return FiniteRing(obj["m"], tower)


def ring_pow(ring, x, n):
    r = ring.one()
    b = x
    while n:
        if n & 1:
            r = ring.mul(r, b)
        b = ring.mul(b, b)
        n >>= 1
    return r


def enumerate_elements(ring, size_cap=DEFAULT_SIZE_CAP):
    """All elements of a finite ring, deterministic order, cap-checked."""
    size = getattr(ring, "size", None)
    if size is not None and size > size_cap:
        raise SizeCapExceeded(f"{size} elements exceeds cap {size_cap}")
    return list(ring.elements())


# -- built-in named triples ------------------------------------------------

def _named(name, g, pi, q):
    return validate_triple(g, pi, q, name=name)


Z2 = _named("Z2", [0, 1], [2], 2)
Z3 = _named("Z3", [0, 1], [3], 3)
GAUSS = _named("GAUSS", [2, -2, 1], [0, 1], 2)
EISEN = _named("EISEN", [1, 1, 1], [2], 4)

NAMED_TRIPLES = {"Z2": Z2, "Z3": Z3, "GAUSS": GAUSS, "EISEN": EISEN}
