"""Truncated power series in z over a pluggable exact coefficient ring.

A :class:`TruncSeries` of order N stores the coefficients of z^0 .. z^(N-1) and
stands for that polynomial plus an unknown O(z^N) tail.  Results of arithmetic
carry exactly the precision the operands justify: a product is known to order
``min(a.order + val(b), b.order + val(a))``; nothing is ever silently padded.

Three rings are provided: :data:`QQ` (ints and Fractions), :data:`NU`
(:class:`~mapcount.exact.poly.Poly` in ν) and :data:`CAT`
(:class:`~mapcount.exact.catalytic.CatalyticPoly`).  Products over QQ and NU go
through Kronecker substitution after clearing denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

import numpy as np

from ..errors import (
    BadValuation,
    DivisibilityError,
    NonUnitConstantTerm,
    NonzeroConstantTerm,
    NotTriangular,
)
from . import kronecker
from .catalytic import CatalyticPoly
from .poly import Poly, qdiv, qnorm


@dataclass(frozen=True)
class Ring:
    name: str
    zero: object
    one: object

    def coerce(self, c):
        if self.name == "QQ":
            return qnorm(c)
        if self.name == "NU":
            return c if isinstance(c, Poly) else Poly((c,))
        if isinstance(c, CatalyticPoly):
            return c
        if isinstance(c, Poly):
            return CatalyticPoly.from_poly_nu(c)
        return CatalyticPoly.monomial(c=c)

    def is_zero(self, c) -> bool:
        if self.name == "QQ":
            return c == 0
        return c.is_zero()

    def inverse(self, c):
        """Inverse of a unit; raises :class:`NonUnitConstantTerm` otherwise."""
        if self.name == "QQ":
            if c == 0:
                raise NonUnitConstantTerm("constant term is zero")
            return qdiv(1, c)
        if self.name == "NU":
            if c.degree != 0:
                raise NonUnitConstantTerm(f"constant term {c} is not a unit of Q[nu]")
            return Poly((qdiv(1, c.coeffs[0]),))
        keys = list(c.terms)
        if keys != [(0, 0, 0)]:
            raise NonUnitConstantTerm(f"constant term {c} is not a unit")
        return CatalyticPoly.monomial(c=qdiv(1, c.terms[(0, 0, 0)]))


QQ = Ring("QQ", 0, 1)
NU = Ring("NU", Poly(()), Poly((1,)))
CAT = Ring("CAT", CatalyticPoly(), CatalyticPoly.monomial())


def ring_of(c) -> Ring:
    if isinstance(c, Poly):
        return NU
    if isinstance(c, CatalyticPoly):
        return CAT
    return QQ


class TruncSeries:
    """Immutable truncated power series ``sum coeffs[i] z^i + O(z^order)``."""

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Sequence, ring: Ring | None = None, order: int | None = None):
        coeffs = list(coeffs)
        if ring is None:
            ring = ring_of(coeffs[0]) if coeffs else QQ
        if order is not None:
            coeffs = coeffs[:order] + [ring.zero] * (order - len(coeffs))
        self.coeffs = tuple(ring.coerce(c) for c in coeffs)
        self.ring = ring

    @classmethod
    def _raw(cls, coeffs, ring):
        s = object.__new__(cls)
        s.coeffs = tuple(coeffs)
        s.ring = ring
        return s

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, order: int, ring: Ring = QQ):
        return cls._raw([ring.zero] * order, ring)

    @classmethod
    def one(cls, order: int, ring: Ring = QQ):
        return cls.monomial(0, order, ring)

    @classmethod
    def z(cls, order: int, ring: Ring = QQ):
        return cls.monomial(1, order, ring)

    @classmethod
    def monomial(cls, k: int, order: int, ring: Ring = QQ, c=None):
        cs = [ring.zero] * order
        if k < order:
            cs[k] = ring.one if c is None else ring.coerce(c)
        return cls._raw(cs, ring)

    # -- queries -------------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def valuation(self) -> int:
        """Index of the first nonzero coefficient (``order`` if all are zero)."""
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                return i
        return self.order

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncSeries({self.ring.name}, order={self.order}, {list(self.coeffs)!r})"

    # -- structural ------------------------------------------------------------
    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncSeries._raw(self.coeffs[:order], self.ring)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by z^k (k >= 0); the order grows by k."""
        return TruncSeries._raw((self.ring.zero,) * k + self.coeffs, self.ring)

    def div_z(self, k: int = 1) -> "TruncSeries":
        """Exact division by z^k; errors if a low coefficient is nonzero."""
        for c in self.coeffs[:k]:
            if not self.ring.is_zero(c):
                raise DivisibilityError(f"series not divisible by z^{k}")
        return TruncSeries._raw(self.coeffs[k:], self.ring)

    def map(self, f: Callable, ring: Ring | None = None) -> "TruncSeries":
        ring = ring or self.ring
        return TruncSeries._raw([ring.coerce(f(c)) for c in self.coeffs], ring)

    def eval_nu(self, value) -> "TruncSeries":
        """Specialise ν to a rational value (NU series -> QQ series)."""
        if self.ring is NU:
            return TruncSeries._raw([c(value) for c in self.coeffs], QQ)
        if self.ring is CAT:
            return self.map(lambda c: c.eval_nu(value))
        return self

    def div_nu(self) -> "TruncSeries":
        """Exact division of every coefficient by ν (checked)."""
        if self.ring is not NU:
            raise TypeError("div_nu needs a series over Q[nu]")
        return TruncSeries._raw([c.div_by_var(1) for c in self.coeffs], NU)

    def to_ring(self, ring: Ring) -> "TruncSeries":
        return TruncSeries._raw([ring.coerce(c) for c in self.coeffs], ring)

    # -- arithmetic -------------------------------------------------------------
    def _other(self, other):
        if isinstance(other, TruncSeries):
            if other.ring is not self.ring:
                if self.ring is QQ:
                    return other, self.to_ring(other.ring)
                return self, other.to_ring(self.ring)
            return self, other
        return None

    def __add__(self, other):
        pair = self._other(other)
        if pair is None:
            c = self.ring.coerce(other)
            if not self.coeffs:
                return self
            c0 = self.coeffs[0] + c
            if self.ring is QQ:
                c0 = qnorm(c0)
            return TruncSeries._raw((c0,) + self.coeffs[1:], self.ring)
        a, b = pair
        n = min(a.order, b.order)
        out = [x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])]
        if a.ring is QQ:
            out = [qnorm(c) for c in out]
        return TruncSeries._raw(out, a.ring)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw([-c for c in self.coeffs], self.ring)

    def __sub__(self, other):
        if isinstance(other, TruncSeries):
            return self + (-other)
        return self + (-self.ring.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._other(other)
        if pair is None:
            return self.scale(other)
        a, b = pair
        va, vb = a.valuation(), b.valuation()
        n = min(a.order + vb, b.order + va)
        return TruncSeries._raw(_mul_coeffs(a.coeffs, b.coeffs, n, a.ring), a.ring)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncSeries":
        if self.ring is QQ:
            c = qnorm(c)
            return TruncSeries._raw([qnorm(x * c) for x in self.coeffs], QQ)
        if not isinstance(c, (int, Fraction)):
            c = self.ring.coerce(c)
        return TruncSeries._raw([x * c for x in self.coeffs], self.ring)

    def __pow__(self, k: int):
        if k < 0:
            return series_inverse(self) ** (-k)
        result = TruncSeries.one(self.order, self.ring)
        base = self
        while True:
            if k & 1:
                result = result * base
            k >>= 1
            if not k:
                return result
            base = base * base

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * series_inverse(other)
        if self.ring is QQ:
            return self.scale(qdiv(1, other))
        return self.scale(Fraction(1) / other)

    # -- polynomial-in-ν helpers ------------------------------------------------------
    def nu_degree(self) -> int:
        if self.ring is not NU:
            raise TypeError("nu_degree needs a series over Q[nu]")
        return max((c.degree for c in self.coeffs if not c.is_zero()), default=-1)


# ---------------------------------------------------------------------------
# multiplication kernels
# ---------------------------------------------------------------------------

def _clear_denominators(values) -> tuple[list[int], int]:
    den = 1
    for v in values:
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    if den == 1:
        return [int(v) for v in values], 1
    return [int(v * den) for v in values], den


def _mul_coeffs(a, b, n, ring):
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    if ring is QQ:
        ai, da = _clear_denominators(a)
        bi, db = _clear_denominators(b)
        prod = kronecker.mul_1d(ai, bi, n)
        den = da * db
        if den == 1:
            return prod
        return [qnorm(Fraction(c, den)) for c in prod]
    if ring is NU:
        return _mul_nu(a, b, n)
    out = [ring.zero] * n
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _nu_matrix(cs):
    width = max((len(c.coeffs) for c in cs), default=0)
    flat = []
    for c in cs:
        flat.extend(c.coeffs)
    ints, den = _clear_denominators(flat)
    arr = np.zeros((len(cs), max(width, 1)), dtype=object)
    pos = 0
    for i, c in enumerate(cs):
        L = len(c.coeffs)
        arr[i, :L] = ints[pos : pos + L]
        pos += L
    return arr, den


def _mul_nu(a, b, n):
    small = sum(1 for c in a if not c.is_zero()) * sum(1 for c in b if not c.is_zero())
    if small <= 16:
        out = [NU.zero] * n
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j in range(min(len(b), n - i)):
                if not b[j].is_zero():
                    out[i + j] = out[i + j] + x * b[j]
        return out
    A, da = _nu_matrix(a)
    B, db = _nu_matrix(b)
    width = A.shape[1] + B.shape[1] - 1
    C = kronecker.mul_nd(A, B, (n, width))
    den = da * db
    out = []
    for row in C:
        if den == 1:
            out.append(Poly._raw([int(v) for v in row]))
        else:
            out.append(Poly([Fraction(int(v), den) for v in row]))
    return out


# ---------------------------------------------------------------------------
# series operations
# ---------------------------------------------------------------------------

def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a + b


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_scale(a: TruncSeries, c) -> TruncSeries:
    return a.scale(c)


def series_inverse(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse; the constant term must be a unit of the ring."""
    if a.order == 0:
        return a
    ring = a.ring
    inv0 = ring.inverse(a.coeffs[0])
    n = a.order
    if ring in (QQ, NU) and n > 8:
        # Newton iteration b <- b (2 - a b), doubling the precision each step
        b = TruncSeries._raw([inv0], ring)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            bt = _pad(b, prec)
            e = (a.truncate(prec) * bt).truncate(prec)
            b = (bt * ((-e) + 2)).truncate(prec)
        return b
    out = [inv0]
    for k in range(1, n):
        acc = ring.zero
        for j in range(1, k + 1):
            if not ring.is_zero(a.coeffs[j]):
                acc = acc + a.coeffs[j] * out[k - j]
        out.append(-(acc * inv0))
    return TruncSeries._raw(out, ring)


def _pad(s: TruncSeries, order: int) -> TruncSeries:
    """Pad with zeros: only for series known to be exact polynomials of lower order."""
    return TruncSeries._raw(s.coeffs + (s.ring.zero,) * (order - s.order), s.ring)


def series_compose(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """f(g(z)); g must have zero constant term."""
    ring = f.ring if f.ring is not QQ else g.ring
    if g.order and not g.ring.is_zero(g.coeffs[0]):
        raise NonzeroConstantTerm("inner series has a nonzero constant term")
    v = g.valuation()
    if f.order == 0:
        return TruncSeries._raw([], ring)
    vf = f.valuation()
    n = min(v * f.order, g.order + v * max(vf - 1, 0)) if v < g.order else v * f.order
    if v >= g.order:
        # g is O(z^order): only the constant term of f survives
        n = g.order
    gp = _pad(g.truncate(min(g.order, n)), n) if g.order < n else g.truncate(n)
    if f.ring is not ring:
        f = f.to_ring(ring)
    if gp.ring is not ring:
        gp = gp.to_ring(ring)
    # Horner: f0 + g (f1 + g (f2 + ...)); terms f_k with v*k >= n vanish
    kmax = min(f.order - 1, (n - 1) // max(v, 1))
    acc = TruncSeries.monomial(0, n, ring, f.coeffs[kmax])
    for k in range(kmax - 1, -1, -1):
        acc = (acc * gp).truncate(n) if acc.order >= n else _pad(acc * gp, n).truncate(n)
        acc = acc + f.coeffs[k]
    return acc.truncate(n) if acc.order > n else acc


def series_reversion(f: TruncSeries) -> TruncSeries:
    """Compositional inverse g with f(g(z)) = z.

    Coefficients are found by Lagrange inversion: with P = z / f(z),
    [z^n] g = [z^(n-1)] P^n / n.  This needs one series inverse and n-1
    products, each of which runs through the Kronecker kernel.
    """
    ring = f.ring
    n = f.order
    if n < 2 or not ring.is_zero(f.coeffs[0]):
        raise BadValuation("reversion needs f(0) = 0")
    try:
        ring.inverse(f.coeffs[1])
    except NonUnitConstantTerm as exc:
        raise BadValuation("linear coefficient is not a unit") from exc
    P = series_inverse(f.div_z(1))  # order n-1
    out = [ring.zero, ring.coerce(ring.inverse(f.coeffs[1]))]
    power = P
    for k in range(2, n):
        power = (power * P).truncate(n - 1)
        c = power.coeffs[k - 1]
        out.append(_div_scalar(c, k, ring))
    return TruncSeries._raw(out, ring)


def _div_scalar(c, k, ring):
    if ring is QQ:
        return qdiv(c, k)
    if ring is NU:
        return Poly._raw([qdiv(x, k) for x in c.coeffs])
    return c * Fraction(1, k)


def reversion_undetermined(f: TruncSeries) -> TruncSeries:
    """Reference reversion solving f(g) = z one coefficient at a time.

    Keeps [z^m] g^k for all k; coefficient n of g enters f(g) only through
    f_1 g_n, everything else is already known.  Cubic cost; used as a check.
    """
    ring = f.ring
    n = f.order
    if n < 2 or not ring.is_zero(f.coeffs[0]):
        raise BadValuation("reversion needs f(0) = 0")
    try:
        inv1 = ring.inverse(f.coeffs[1])
    except NonUnitConstantTerm as exc:
        raise BadValuation("linear coefficient is not a unit") from exc
    g = [ring.zero] * n
    # pw[k][m] = [z^m] g^k
    pw = [[ring.zero] * n for _ in range(n)]
    pw[0][0] = ring.one
    for m in range(1, n):
        # powers k >= 2 at index m only use g_1 .. g_{m-1}
        for k in range(2, m + 1):
            acc = ring.zero
            for j in range(1, m - k + 2):
                if not ring.is_zero(g[j]):
                    acc = acc + g[j] * pw[k - 1][m - j]
            pw[k][m] = acc
        rhs = ring.one if m == 1 else ring.zero
        for k in range(2, min(m, f.order - 1) + 1):
            rhs = rhs - f.coeffs[k] * pw[k][m]
        g[m] = rhs * inv1
        pw[1][m] = g[m]
    return TruncSeries._raw(g, ring)


def divided_difference(f: TruncSeries, var: str = "y", point=1) -> TruncSeries:
    """Apply (f(var) - f(point)) / (var - point) to every coefficient."""
    if f.ring is CAT:
        return f.map(lambda c: c.divided_difference(var, point))
    if f.ring is NU and var == "nu":
        def dd(p):
            acc, out = 0, [0] * max(len(p.coeffs) - 1, 0)
            for e in range(len(p.coeffs) - 1, 0, -1):
                acc = acc * point + p.coeffs[e]
                out[e - 1] = acc
            return Poly(out)
        return f.map(dd)
    raise TypeError(f"divided difference in {var!r} is undefined over {f.ring.name}")


def solve_linear_series_system(A, b, order: int | None = None) -> list[TruncSeries]:
    """Solve X = A X + b order by order.

    ``A`` is a k-by-k matrix (nested lists) of series, each with zero constant
    term, ``b`` a list of k series.  Coefficient n of X then depends only on
    coefficients < n, so the system is triangular in z.  Entries may be None
    for zero.
    """
    k = len(b)
    ring = next((s.ring for s in b if s is not None), QQ)
    for row in A:
        for s in row:
            if s is not None and s.ring is not QQ:
                ring = s.ring
    if order is None:
        order = min(
            [s.order for s in b if s is not None]
            + [s.order for row in A for s in row if s is not None]
        )
    for row in A:
        for s in row:
            if s is not None and s.order and not s.ring.is_zero(s.coeffs[0]):
                raise NotTriangular("a coefficient series has a nonzero constant term")
    X = [[ring.zero] * order for _ in range(k)]
    bb = [None if s is None else s.to_ring(ring) for s in b]
    AA = [[None if s is None else s.to_ring(ring) for s in row] for row in A]
    for n in range(order):
        for i in range(k):
            acc = bb[i].coeffs[n] if bb[i] is not None else ring.zero
            for j in range(k):
                s = AA[i][j]
                if s is None:
                    continue
                for m in range(1, min(n, s.order - 1) + 1):
                    c = s.coeffs[m]
                    if not ring.is_zero(c):
                        xv = X[j][n - m]
                        if not ring.is_zero(xv):
                            acc = acc + c * xv
            X[i][n] = acc
    return [TruncSeries._raw(x, ring) for x in X]


def solve_fixed_point(F: Callable, k: int, order: int, ring: Ring = QQ) -> list[TruncSeries]:
    """Solve X = F(X) for k series when coefficient n of F(X) only depends on
    coefficients < n of X.  Each pass fixes one more coefficient; passes run at
    increasing truncation order so early passes are cheap."""
    X = [TruncSeries.zero(1, ring) for _ in range(k)]
    for n in range(1, order + 1):
        Xn = [_pad(x, n) for x in X]
        Y = F(Xn)
        if len(Y) != k:
            raise ValueError("fixed-point map returned the wrong number of series")
        for y in Y:
            if y.order < n:
                raise NotTriangular("fixed-point map lost precision")
        X = [y.to_ring(ring).truncate(n) for y in Y]
    return X


def check_contractive(F: Callable, X: list[TruncSeries]) -> bool:
    Y = F(X)
    return all(a.truncate(min(a.order, b.order)) == b.truncate(min(a.order, b.order)) for a, b in zip(X, Y))
