"""Exact arithmetic: rationals, univariate polynomials, real root isolation.

Rationals are :class:`fractions.Fraction`.  Polynomials are immutable
coefficient tuples (ascending degree).  Real roots are isolated with Sturm
sequences and represented as :class:`AlgebraicNumber` values that compare
exactly against each other and against rationals.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

DEFAULT_DEGREE_CAP = 8


class Order(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"``, ``"int"`` or an ``int``.  Floats are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        s = text.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"decimal literals are not exact rationals: {text!r}")
        return Fraction(s)
    raise ValueError(f"not a rational: {text!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _sign(v) -> int:
    return (v > 0) - (v < 0)


class Poly:
    """Univariate polynomial with rational coefficients, ascending order."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    rem[k + j] -= c * oc
        return Poly(quot), Poly(rem[:dq])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(parse_rational(c) for c in data)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = c * prod(f_i ** i)`` with each ``f_i`` square-free.

    Returns ``[(f_i, i), ...]`` for the non-constant factors.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no square-free decomposition")
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, i))
        b = b // f
        c = d // f
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


@lru_cache(maxsize=4096)
def sturm_sequence(p: Poly) -> tuple[Poly, ...]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return tuple(seq)


def _variations(signs: Iterable[int]) -> int:
    count, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def _variations_at(seq: Sequence[Poly], x) -> int:
    if x == "-inf":
        return _variations(_sign(q.lead) * (-1 if q.degree % 2 else 1) for q in seq)
    if x == "+inf":
        return _variations(_sign(q.lead) for q in seq)
    return _variations(_sign(q(x)) for q in seq)


def count_roots(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``.

    ``lo``/``hi`` may be Fractions or the strings ``"-inf"``/``"+inf"``.
    """
    seq = sturm_sequence(p)
    return _variations_at(seq, lo) - _variations_at(seq, hi)


def _open_count(p: Poly, lo: Fraction, hi: Fraction) -> int:
    return count_roots(p, lo, hi) - (1 if p(hi) == 0 else 0)


def cauchy_bound(p: Poly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


class AlgebraicNumber:
    """A real algebraic number, or one of the two infinities.

    Irrational values carry a square-free defining polynomial and an open
    isolating interval ``(lo, hi)`` with rational endpoints, on which the
    polynomial has exactly one root and opposite signs at the endpoints.
    Refinement narrows the interval in place; the represented value never
    changes.
    """

    __slots__ = ("kind", "value", "poly", "lo", "hi")

    NEG_INF = -1
    RATIONAL = 0
    POS_INF = 1
    ALGEBRAIC = 2

    def __init__(self, kind, value=None, poly=None, lo=None, hi=None):
        self.kind = kind
        self.value = value
        self.poly = poly
        self.lo = lo
        self.hi = hi

    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        return cls(cls.RATIONAL, value=Fraction(q))

    @classmethod
    def neg_inf(cls) -> "AlgebraicNumber":
        return cls(cls.NEG_INF)

    @classmethod
    def pos_inf(cls) -> "AlgebraicNumber":
        return cls(cls.POS_INF)

    @classmethod
    def root(cls, poly: Poly, lo, hi) -> "AlgebraicNumber":
        """Root of square-free ``poly`` isolated in the open interval ``(lo, hi)``."""
        lo, hi = Fraction(lo), Fraction(hi)
        if poly.degree == 1:
            return cls.rational(-poly.coeffs[0] / poly.coeffs[1])
        if _open_count(poly, lo, hi) != 1:
            raise ValueError("interval does not isolate exactly one root")
        while poly(lo) == 0 or poly(hi) == 0:
            mid = (lo + hi) / 2
            if poly(mid) == 0:
                return cls.rational(mid)
            if _open_count(poly, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return cls(cls.ALGEBRAIC, poly=poly, lo=lo, hi=hi)

    @property
    def is_finite(self) -> bool:
        return self.kind in (self.RATIONAL, self.ALGEBRAIC)

    @property
    def is_rational(self) -> bool:
        return self.kind == self.RATIONAL

    def refine(self):
        """Halve the isolating interval (no-op for rationals/infinities)."""
        if self.kind != self.ALGEBRAIC:
            return
        p = self.poly
        mid = (self.lo + self.hi) / 2
        fm = p(mid)
        if fm == 0:
            self.kind, self.value = self.RATIONAL, mid
            self.poly = self.lo = self.hi = None
        elif _sign(fm) == _sign(p(self.lo)):
            self.lo = mid
        else:
            self.hi = mid

    def width(self) -> Fraction:
        if self.kind == self.ALGEBRAIC:
            return self.hi - self.lo
        return Fraction(0)

    def enclosure(self) -> tuple[Fraction, Fraction]:
        if self.kind == self.RATIONAL:
            return self.value, self.value
        if self.kind == self.ALGEBRAIC:
            return self.lo, self.hi
        raise ValueError("infinite value has no enclosure")

    def __float__(self):
        if self.kind == self.NEG_INF:
            return float("-inf")
        if self.kind == self.POS_INF:
            return float("inf")
        if self.kind == self.RATIONAL:
            return float(self.value)
        while self.hi - self.lo > Fraction(1, 2**60) * max(1, abs(self.lo)):
            self.refine()
            if self.kind == self.RATIONAL:
                return float(self.value)
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        if self.kind == self.NEG_INF:
            return "-inf"
        if self.kind == self.POS_INF:
            return "+inf"
        if self.kind == self.RATIONAL:
            return str(self.value)
        return f"root({self.poly!r} in ({self.lo}, {self.hi}))"

    def to_json(self):
        if self.kind == self.NEG_INF:
            return "-inf"
        if self.kind == self.POS_INF:
            return "+inf"
        if self.kind == self.RATIONAL:
            return format_rational(self.value)
        return {"poly": self.poly.to_json(), "interval": [format_rational(self.lo), format_rational(self.hi)]}

    @classmethod
    def from_json(cls, data) -> "AlgebraicNumber":
        if data == "-inf":
            return cls.neg_inf()
        if data == "+inf":
            return cls.pos_inf()
        if isinstance(data, dict):
            lo, hi = (parse_rational(v) for v in data["interval"])
            return cls.root(Poly.from_json(data["poly"]), lo, hi)
        return cls.rational(parse_rational(data))

    # ordering -----------------------------------------------------------
    def _cmp(self, other) -> int:
        if not isinstance(other, AlgebraicNumber):
            other = AlgebraicNumber.rational(other)
        return int(compare(self, other))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None


def _cmp_rational_root(q: Fraction, a: AlgebraicNumber) -> int:
    """Compare rational ``q`` with irrational-or-unknown root ``a``."""
    if q <= a.lo:
        return -1
    if q >= a.hi:
        return 1
    fq = a.poly(q)
    if fq == 0:
        return 0
    # the single sign change of poly on (lo, hi) is at a
    return -1 if _sign(fq) == _sign(a.poly(a.lo)) else 1


def _is_root_of(g: Poly, a: AlgebraicNumber) -> bool:
    """Whether algebraic ``a`` is a root of ``g``, where ``g`` divides ``a.poly``."""
    if g.degree < 1:
        return False
    return _sign(g(a.lo)) != _sign(g(a.hi))


def compare(a: AlgebraicNumber, b: AlgebraicNumber) -> Order:
    """Exact comparison of two extended real algebraic numbers."""
    ka, kb = a.kind, b.kind
    if ka == AlgebraicNumber.NEG_INF or kb == AlgebraicNumber.POS_INF:
        return Order.EQ if ka == kb else Order.LT
    if ka == AlgebraicNumber.POS_INF or kb == AlgebraicNumber.NEG_INF:
        return Order.EQ if ka == kb else Order.GT
    if ka == AlgebraicNumber.RATIONAL and kb == AlgebraicNumber.RATIONAL:
        return Order(_sign(a.value - b.value))
    if ka == AlgebraicNumber.RATIONAL:
        return Order(_cmp_rational_root(a.value, b))
    if kb == AlgebraicNumber.RATIONAL:
        return Order(-_cmp_rational_root(b.value, a))
    # both carry isolating intervals
    if a.hi <= b.lo:
        return Order.LT
    if b.hi <= a.lo:
        return Order.GT
    g = poly_gcd(a.poly, b.poly)
    if g.degree >= 1 and _is_root_of(g, a) and _is_root_of(g, b):
        # both are roots of g; g has at most one root inside b's interval
        lo, hi = b.lo, b.hi
        if _cmp_rational_root(lo, a) < 0 and _cmp_rational_root(hi, a) > 0:
            return Order.EQ
    while True:
        a.refine()
        b.refine()
        if a.kind == AlgebraicNumber.RATIONAL or b.kind == AlgebraicNumber.RATIONAL:
            return compare(a, b)
        if a.hi <= b.lo:
            return Order.LT
        if b.hi <= a.lo:
            return Order.GT


def sign_at(p: Poly, a: AlgebraicNumber) -> int:
    """Exact sign of ``p`` at the finite algebraic number ``a``."""
    if not a.is_finite:
        raise ValueError("sign_at requires a finite algebraic number")
    if p.is_zero():
        return 0
    if a.kind == AlgebraicNumber.RATIONAL:
        return _sign(p(a.value))
    g = poly_gcd(p, a.poly)
    if _is_root_of(g, a):
        return 0
    sf = squarefree_part(p)
    while True:
        if a.kind == AlgebraicNumber.RATIONAL:
            return _sign(p(a.value))
        flo, fhi = sf(a.lo), sf(a.hi)
        if flo != 0 and fhi != 0 and count_roots(sf, a.lo, a.hi) == 0:
            return _sign(p(a.lo))
        a.refine()


def _isolate_squarefree(f: Poly, lo: Fraction, hi: Fraction, out: list):
    """Append isolated roots of square-free ``f`` in open ``(lo, hi)``.

    Requires ``f(lo) != 0`` and ``f(hi) != 0``.
    """
    n = count_roots(f, lo, hi)
    if n == 0:
        return
    if n == 1:
        out.append(AlgebraicNumber.root(f, lo, hi))
        return
    mid = (lo + hi) / 2
    if f(mid) == 0:
        eps = (hi - lo) / 4
        while True:
            a, b = mid - eps, mid + eps
            if f(a) != 0 and f(b) != 0 and count_roots(f, a, b) == 1:
                break
            eps /= 2
        _isolate_squarefree(f, lo, a, out)
        out.append(AlgebraicNumber.rational(mid))
        _isolate_squarefree(f, b, hi, out)
        return
    _isolate_squarefree(f, lo, mid, out)
    _isolate_squarefree(f, mid, hi, out)


def _quadratic_roots(f: Poly) -> list:
    """Roots of a square-free quadratic from the discriminant, isolated without Sturm."""
    c, b, a = f.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    # sqrt(disc) = sqrt(m) / den with m an integer
    den = disc.denominator
    m = disc.numerator * den
    r = math.isqrt(m)
    if r * r == m:
        s = Fraction(r, den)
        return [AlgebraicNumber.rational(x) for x in sorted({(-b - s) / (2 * a), (-b + s) / (2 * a)})]
    out = []
    for sign in (-1, 1):
        ends = sorted(((-b + sign * Fraction(r, den)) / (2 * a),
                       (-b + sign * Fraction(r + 1, den)) / (2 * a)))
        out.append(AlgebraicNumber(AlgebraicNumber.ALGEBRAIC, poly=f, lo=ends[0], hi=ends[1]))
    return sort_algebraic(out)


def _integer_lead(f: Poly) -> int:
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return abs(ints[-1] // g)


def _snap_rational(a: AlgebraicNumber) -> AlgebraicNumber:
    """Detect a rational root: its denominator divides the integer leading coefficient."""
    if a.kind != AlgebraicNumber.ALGEBRAIC:
        return a
    lead = _integer_lead(a.poly)
    while a.kind == AlgebraicNumber.ALGEBRAIC and a.width() * lead >= 1:
        a.refine()
    if a.kind == AlgebraicNumber.ALGEBRAIC:
        k = math.ceil(a.lo * lead)
        cand = Fraction(k, lead)
        if a.lo < cand < a.hi and a.poly(cand) == 0:
            return AlgebraicNumber.rational(cand)
    return a


def isolate_roots(p: Poly, window=None, degree_cap: int = DEFAULT_DEGREE_CAP):
    """All distinct real roots of ``p`` (optionally in the closed ``window``).

    Returns a list of ``(AlgebraicNumber, multiplicity)`` in increasing order.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree > degree_cap:
        raise ValueError(f"degree {p.degree} exceeds the configured cap {degree_cap}")
    if p.degree == 0:
        return []
    found: list[tuple[AlgebraicNumber, int]] = []
    for f, mult in squarefree_decomposition(p):
        roots: list[AlgebraicNumber] = []
        if f.degree == 1:
            roots = [AlgebraicNumber.rational(-f.coeffs[0] / f.coeffs[1])]
        else:
            quad = _quadratic_roots(f) if f.degree == 2 else None
            if quad is not None:
                roots = quad
            else:
                bound = cauchy_bound(f)
                _isolate_squarefree(f, -bound, bound, roots)
                roots = [_snap_rational(r) for r in roots]
        found.extend((r, mult) for r in roots)
    if window is not None:
        lo, hi = (Fraction(w) for w in window)
        found = [(r, m) for r, m in found if compare(r, AlgebraicNumber.rational(lo)) >= 0
                 and compare(r, AlgebraicNumber.rational(hi)) <= 0]
    return sort_algebraic(found, key=lambda rm: rm[0])


def sort_algebraic(items, key=lambda x: x):
    from functools import cmp_to_key

    return sorted(items, key=cmp_to_key(lambda u, v: int(compare(key(u), key(v)))))


def rational_between(a: AlgebraicNumber, b: AlgebraicNumber) -> Fraction:
    """A rational strictly between ``a < b`` (either may be infinite)."""
    if compare(a, b) >= 0:
        raise ValueError("rational_between requires a < b")
    if a.kind == AlgebraicNumber.NEG_INF and b.kind == AlgebraicNumber.POS_INF:
        return Fraction(0)
    if a.kind == AlgebraicNumber.NEG_INF:
        return (b.value if b.is_rational else b.lo) - 1
    if b.kind == AlgebraicNumber.POS_INF:
        return (a.value if a.is_rational else a.hi) + 1
    while True:
        ahi = a.value if a.is_rational else a.hi
        blo = b.value if b.is_rational else b.lo
        if ahi < blo:
            return (ahi + blo) / 2
        if ahi == blo and not (a.is_rational and b.is_rational):
            # the shared endpoint lies strictly between the two values
            if compare(a, AlgebraicNumber.rational(ahi)) < 0 and compare(AlgebraicNumber.rational(ahi), b) < 0:
                return ahi
        a.refine()
        b.refine()
