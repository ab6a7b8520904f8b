"""Certified real-root isolation over the rationals.

Roots are counted with Sturm sequences built from primitive integer
pseudo-remainders (signs preserved), so no floating point enters.  Each
isolated root keeps its polynomial and a rational interval containing exactly
that root; :meth:`IsolatedRoot.refine` shrinks it by interval Newton steps when
the derivative is bounded away from zero and by bisection otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from ..exact.poly import Poly, qnorm


def _int_primitive(p: Poly) -> list[int]:
    """Integer coefficients of a positive multiple of p with content 1."""
    if p.is_zero():
        return []
    den = 1
    for c in p.coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    cs = [int(c * den) for c in p.coeffs]
    g = 0
    for c in cs:
        g = gcd(g, c)
    return [c // g for c in cs]


def _prem_neg(a: list[int], b: list[int]) -> list[int]:
    """-(positive multiple of) the remainder of a by b, content removed."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    scale = abs(lb)
    sgn = 1 if lb > 0 else -1
    while len(a) - 1 >= db and any(a):
        la = a[-1]
        shift = len(a) - 1 - db
        # a <- |lb| a - sgn*la x^shift b, a positive multiple of (a - (la/lb) x^shift b)
        a = [scale * c for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= sgn * la * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    if not a:
        return []
    g = 0
    for c in a:
        g = gcd(g, c)
    return [-(c // g) for c in a]


def sturm_sequence(p: Poly) -> list[list[int]]:
    seq = [_int_primitive(p)]
    d = _int_primitive(p.derivative())
    if not d:
        return seq
    seq.append(d)
    while True:
        r = _prem_neg(seq[-2], seq[-1])
        if not r:
            return seq
        seq.append(r)


def _sign_at(cs: list[int], x) -> int:
    # sign of the homogenised value sum c_i num^i den^(k-i) = den^k p(x)
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    k = len(cs) - 1
    acc = sum(c * num**i * den ** (k - i) for i, c in enumerate(cs))
    return (acc > 0) - (acc < 0)


def sign_changes(seq, x) -> int:
    signs = [s for s in (_sign_at(cs, x) for cs in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, lo, hi, seq=None) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return sign_changes(seq, lo) - sign_changes(seq, hi)


def evaluate_interval(p: Poly, lo, hi):
    """Rational enclosure of p over [lo, hi] by interval Horner."""
    lo, hi = Fraction(lo), Fraction(hi)
    a = b = Fraction(0)
    for c in reversed(p.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


@dataclass
class IsolatedRoot:
    """The unique real root of ``poly`` in the closed interval [lo, hi]."""

    poly: Poly
    lo: Fraction
    hi: Fraction
    _seq: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.lo, self.hi = Fraction(self.lo), Fraction(self.hi)

    @cached_property
    def squarefree(self) -> Poly:
        return self.poly.squarefree()

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def exact_value(self):
        return qnorm(self.lo) if self.is_exact() else None

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.midpoint())

    def refine(self, width) -> "IsolatedRoot":
        """Shrink the interval to at most ``width`` (in place; returns self)."""
        width = Fraction(width)
        p = self.squarefree
        dp = p.derivative()
        while self.hi - self.lo > width:
            if p(self.lo) == 0:
                self.hi = self.lo
                break
            if p(self.hi) == 0:
                self.lo = self.hi
                break
            if not self._newton_step(p, dp):
                self._bisect(p)
        return self

    def _bisect(self, p):
        m = _dyadic_round(self.midpoint(), (self.hi - self.lo) / 64, 0)
        if not self.lo < m < self.hi:
            m = self.midpoint()
        vm = p(m)
        if vm == 0:
            self.lo = self.hi = m
        elif (vm > 0) == (p(self.lo) > 0):
            self.lo = m
        else:
            self.hi = m

    def _newton_step(self, p, dp) -> bool:
        d_lo, d_hi = evaluate_interval(dp, self.lo, self.hi)
        if d_lo <= 0 <= d_hi:
            return False
        w = self.hi - self.lo
        m = _dyadic_round(self.midpoint(), w / 64, 0)
        fm = p(m)
        cands = (m - fm / d_lo, m - fm / d_hi)
        new_lo = max(self.lo, min(cands))
        new_hi = min(self.hi, max(cands))
        if new_lo > new_hi:
            return False
        # round outward to short dyadics so the enclosure stays valid and small
        grain = max((new_hi - new_lo) / 16, w * w / 2**20, Fraction(1, 2**4000))
        new_lo = max(self.lo, _dyadic_round(new_lo, grain, -1))
        new_hi = min(self.hi, _dyadic_round(new_hi, grain, 1))
        if (new_hi - new_lo) * 2 > w:
            return False
        self.lo, self.hi = new_lo, new_hi
        return True

    def rational_value(self):
        """The root as an exact rational if it is one, else None.

        A rational root a/b of a primitive integer polynomial has b dividing
        the leading coefficient L, and such roots are 1/L^2 apart, so after
        refining below that spacing at most one candidate needs checking.
        """
        if self.is_exact():
            return qnorm(self.lo)
        p = self.squarefree
        L = abs(_int_primitive(p)[-1])
        self.refine(Fraction(1, 4 * L * L))
        if self.is_exact():
            return qnorm(self.lo)
        cand = Fraction(round(self.midpoint() * L), L)
        if self.lo <= cand <= self.hi and p(cand) == 0:
            self.lo = self.hi = cand
            return qnorm(cand)
        return None

    def certify_sign_change(self) -> bool:
        """True when p changes sign strictly across [lo, hi] (or hits zero exactly)."""
        p = self.squarefree
        if self.is_exact():
            return p(self.lo) == 0
        a, b = p(self.lo), p(self.hi)
        return a * b < 0

    def as_dict(self, digits: int = 20) -> dict:
        from ..exact.poly import format_rational

        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "approx": f"{float(self.midpoint()):.{min(digits, 17)}g}",
        }


def _dyadic_round(x: Fraction, grain: Fraction, direction: int) -> Fraction:
    """Round x to a multiple of 2^-k <= grain: down (-1), up (+1) or nearest (0)."""
    k = max(0, (grain.denominator // max(grain.numerator, 1)).bit_length())
    scaled = x * 2**k
    if direction < 0:
        q = scaled.numerator // scaled.denominator
    elif direction > 0:
        q = -((-scaled.numerator) // scaled.denominator)
    else:
        q = round(scaled)
    return Fraction(q, 2**k)


def _split_point(p: Poly, a: Fraction, b: Fraction) -> Fraction:
    """A point strictly inside (a, b) that is not a root of p."""
    k = 2
    while True:
        for m in (a + (b - a) / 2, a + (b - a) * (k - 1) / (2 * k), a + (b - a) * (k + 1) / (2 * k)):
            if p(m) != 0:
                return m
        k += 1


def isolate_real_roots(poly: Poly, lo=0, hi=1) -> list[IsolatedRoot]:
    """All real roots in the closed interval [lo, hi], each certified unique in
    its rational isolating interval, in increasing order.  Exact rational roots
    met at interval endpoints are returned as degenerate intervals."""
    lo, hi = Fraction(lo), Fraction(hi)
    if poly.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    p = poly.squarefree()
    if p.degree <= 0:
        return []
    seq = sturm_sequence(p)
    out = []
    if p(lo) == 0:
        out.append(IsolatedRoot(poly, lo, lo))
    # invariant: p(a) != 0 for every pushed (a, b] except possibly a == lo,
    # whose root was recorded above and is excluded by the half-open count
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(p, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            if p(b) == 0:
                out.append(IsolatedRoot(poly, b, b))
            elif p(a) == 0:
                # a == lo is itself a root; shrink away from it
                m = _split_point(p, a, b)
                stack.append((a, m))
                stack.append((m, b))
                continue
            else:
                out.append(IsolatedRoot(poly, a, b))
            continue
        m = _split_point(p, a, b)
        stack.append((a, m))
        stack.append((m, b))
    out.sort(key=lambda r: (r.lo, r.hi))
    for r in out:
        r._seq = seq
    return out
