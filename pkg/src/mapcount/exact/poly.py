"""Dense univariate polynomials with exact rational coefficients.

:class:`Poly` is the ring of polynomials in ν that carries the colouring
weights, and doubles as Q[z] for the algebraic-curve code.  Coefficients are
Python ``int`` where possible and :class:`fractions.Fraction` otherwise; the two
mix freely and every Fraction with denominator 1 is stored as an int, so equal
polynomials always have equal coefficient tuples.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational

from ..errors import DivisibilityError
from . import kronecker


def qnorm(c):
    """Canonical form of a rational scalar: int when integral, else Fraction."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return qnorm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def qdiv(a, b):
    if b == 0:
        raise ZeroDivisionError("division by zero")
    return qnorm(Fraction(a) / b)


def parse_rational(s: str):
    return qnorm(Fraction(s))


def format_rational(c) -> str:
    c = qnorm(c)
    if isinstance(c, int):
        return f"{c}/1"
    return f"{c.numerator}/{c.denominator}"


class Poly:
    """Immutable dense polynomial, ``coeffs[i]`` is the coefficient of var^i."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        cs = [qnorm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, cs):
        # caller guarantees canonical coefficients; only strips zeros
        cs = list(cs)
        while cs and cs[-1] == 0:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        p._hash = None
        return p

    @classmethod
    def var(cls):
        return cls._raw((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    # -- basic queries -----------------------------------------------------
    @property
    def degree(self):
        """Degree; the zero polynomial has degree ``-inf``."""
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_integral(self):
        return all(isinstance(c, int) for c in self.coeffs)

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = qnorm(out[i] + c)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly._raw(())
            return Poly._raw(qnorm(c * other) for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        if len(a) == 1:
            return other * a[0]
        if len(b) == 1:
            return self * b[0]
        return Poly._raw(_poly_mul(a, b))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly._raw((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __call__(self, x):
        """Horner evaluation at any value supporting + and *."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return qnorm(acc) if isinstance(acc, (int, Fraction)) else acc

    # -- division-type operations ------------------------------------------
    def div_by_var(self, k: int = 1) -> "Poly":
        """Exact division by var^k; raises if the low coefficients are nonzero."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise DivisibilityError(f"polynomial not divisible by var^{k}: {self}")
        return Poly._raw(self.coeffs[k:])

    def shift(self, k: int) -> "Poly":
        if not self.coeffs:
            return self
        return Poly._raw((0,) * k + self.coeffs)

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return Poly._raw(()), self
        q = [0] * (dq + 1)
        lc = other.coeffs[-1]
        for i in range(dq, -1, -1):
            c = r[i + len(other.coeffs) - 1]
            if c != 0:
                c = qdiv(c, lc)
                q[i] = c
                for j, oc in enumerate(other.coeffs):
                    r[i + j] = qnorm(r[i + j] - c * oc)
        return Poly._raw(q), Poly._raw(r[: len(other.coeffs) - 1])

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise DivisibilityError("inexact polynomial division")
        return q

    def derivative(self) -> "Poly":
        return Poly._raw(qnorm(i * c) for i, c in enumerate(self.coeffs) if i)

    def content(self):
        """Positive rational c with self/c primitive over Z (0 for the zero poly)."""
        if not self.coeffs:
            return 0
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        g = 0
        for c in self.coeffs:
            g = gcd(g, int(c * den))
        return qnorm(Fraction(g, den))

    def primitive(self) -> "Poly":
        """Primitive integer polynomial with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lc() < 0:
            c = -c
        return Poly._raw(qnorm(x / Fraction(c)) for x in self.coeffs)

    def monic(self) -> "Poly":
        lc = self.lc()
        return Poly._raw(qdiv(c, lc) for c in self.coeffs)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def squarefree(self) -> "Poly":
        g = self.gcd(self.derivative())
        if g.degree <= 0:
            return self
        return self.exact_div(g)

    def compose_linear(self, a, b) -> "Poly":
        """Return p(a + b*var) for scalars a, b."""
        out = Poly._raw(())
        lin = Poly((a, b))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    # -- display -------------------------------------------------------------
    def to_str(self, var: str = "ν") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if i == 0:
                body = str(a)
            else:
                mon = var if i == 1 else f"{var}^{i}"
                body = mon if a == 1 else f"{a}*{mon}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Poly({self.to_str()})"

    __str__ = to_str


PolyNu = Poly


def _poly_mul(a, b):
    if len(a) * len(b) > 256 and all(isinstance(c, int) for c in a) and all(
        isinstance(c, int) for c in b
    ):
        return kronecker.mul_1d(list(a), list(b))
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [qnorm(c) for c in out]


class RationalFunctionNu:
    """Quotient of two :class:`Poly`, reduced by their gcd and normalised so the
    denominator is primitive with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = Poly._coerce(num)
        den = Poly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den) if not num.is_zero() else den
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        if num.is_zero():
            den = Poly((1,))
        c = den.content()
        if den.lc() < 0:
            c = -c
        self.num = num * qnorm(1 / Fraction(c))
        self.den = den * qnorm(1 / Fraction(c))

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunctionNu(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionNu(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunctionNu(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunctionNu(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rf(other) / self

    def __eq__(self, other):
        try:
            other = _as_rf(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_polynomial(self):
        return self.den.degree == 0

    def to_poly(self) -> Poly:
        if not self.is_polynomial():
            raise DivisibilityError("rational function is not a polynomial")
        return self.num * qnorm(1 / Fraction(self.den.coeffs[0]))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"({self.num.to_str()})/({self.den.to_str()})"


def _as_rf(x):
    if isinstance(x, RationalFunctionNu):
        return x
    if isinstance(x, (Poly, int, Fraction)):
        return RationalFunctionNu(x, 1)
    raise TypeError(f"cannot convert {x!r} to a rational function")
