"""Sparse polynomials in the catalytic variables x, y and the weight ν."""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, qnorm

_AXES = {"x": 0, "y": 1, "nu": 2}


class CatalyticPoly:
    """Immutable sparse polynomial; keys are exponent triples ``(i, j, k)``
    for x^i y^j ν^k.  Zero coefficients are never stored."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                c = qnorm(c)
                if c:
                    key = tuple(key)
                    d[key] = qnorm(d.get(key, 0) + c)
                    if not d[key]:
                        del d[key]
        self.terms = d
        self._hash = None

    @classmethod
    def _raw(cls, d):
        p = object.__new__(cls)
        p.terms = d
        p._hash = None
        return p

    @classmethod
    def monomial(cls, i=0, j=0, k=0, c=1):
        return cls({(i, j, k): c})

    @classmethod
    def from_poly_nu(cls, p: Poly):
        return cls._raw({(0, 0, k): c for k, c in enumerate(p.coeffs) if c})

    X = None  # set below
    Y = None
    NU = None

    def is_zero(self):
        return not self.terms

    def degree(self, var: str) -> int:
        ax = _AXES[var]
        return max((key[ax] for key in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, CatalyticPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == CatalyticPoly.monomial(c=other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    @staticmethod
    def _coerce(other):
        if isinstance(other, CatalyticPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return CatalyticPoly.monomial(c=other)
        if isinstance(other, Poly):
            return CatalyticPoly.from_poly_nu(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self.terms)
        for key, c in other.terms.items():
            v = qnorm(d.get(key, 0) + c)
            if v:
                d[key] = v
            else:
                d.pop(key, None)
        return CatalyticPoly._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return CatalyticPoly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CatalyticPoly._raw({})
            return CatalyticPoly._raw({k: qnorm(c * other) for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = {}
        for (a1, b1, c1), u in self.terms.items():
            for (a2, b2, c2), v in other.terms.items():
                key = (a1 + a2, b1 + b2, c1 + c2)
                d[key] = d.get(key, 0) + u * v
        return CatalyticPoly._raw({k: qnorm(c) for k, c in d.items() if c})

    __rmul__ = __mul__

    def substitute_one(self, var: str) -> "CatalyticPoly":
        """Set ``var`` (``'x'`` or ``'y'``) to 1."""
        ax = _AXES[var]
        d = {}
        for key, c in self.terms.items():
            k2 = list(key)
            k2[ax] = 0
            k2 = tuple(k2)
            d[k2] = d.get(k2, 0) + c
        return CatalyticPoly._raw({k: qnorm(c) for k, c in d.items() if c})

    def derivative_at_one(self, var: str) -> "CatalyticPoly":
        """d/dvar, then var = 1."""
        ax = _AXES[var]
        d = {}
        for key, c in self.terms.items():
            e = key[ax]
            if e:
                k2 = list(key)
                k2[ax] = 0
                k2 = tuple(k2)
                d[k2] = d.get(k2, 0) + e * c
        return CatalyticPoly._raw({k: qnorm(c) for k, c in d.items() if c})

    def divided_difference(self, var: str, point=1) -> "CatalyticPoly":
        """Exact quotient (f(var) - f(point)) / (var - point) by synthetic division."""
        ax = _AXES[var]
        groups: dict = {}
        for key, c in self.terms.items():
            rest = key[:ax] + key[ax + 1 :]
            groups.setdefault(rest, {})[key[ax]] = c
        d = {}
        for rest, col in groups.items():
            deg = max(col)
            # Horner-style synthetic division: q_{e-1} = a_e + point * q_e
            acc = 0
            for e in range(deg, 0, -1):
                acc = acc * point + col.get(e, 0)
                if acc:
                    key = list(rest)
                    key.insert(ax, e - 1)
                    d[tuple(key)] = qnorm(acc)
        return CatalyticPoly._raw(d)

    def to_poly_nu(self) -> Poly:
        """Project to Q[ν]; all x and y exponents must be zero."""
        cs = {}
        for (i, j, k), c in self.terms.items():
            if i or j:
                raise ValueError("polynomial still depends on x or y")
            cs[k] = c
        if not cs:
            return Poly(())
        return Poly([cs.get(k, 0) for k in range(max(cs) + 1)])

    def eval_nu(self, value) -> "CatalyticPoly":
        d = {}
        for (i, j, k), c in self.terms.items():
            key = (i, j, 0)
            d[key] = d.get(key, 0) + c * value**k
        return CatalyticPoly._raw({k: qnorm(c) for k, c in d.items() if c})

    def __repr__(self):
        if not self.terms:
            return "CatalyticPoly(0)"
        parts = []
        for (i, j, k), c in sorted(self.terms.items()):
            mon = "*".join(
                s for s in (
                    f"x^{i}" if i else "",
                    f"y^{j}" if j else "",
                    f"nu^{k}" if k else "",
                ) if s
            )
            parts.append(f"{c}*{mon}" if mon else str(c))
        return "CatalyticPoly(" + " + ".join(parts) + ")"


CatalyticPoly.X = CatalyticPoly.monomial(1, 0, 0)
CatalyticPoly.Y = CatalyticPoly.monomial(0, 1, 0)
CatalyticPoly.NU = CatalyticPoly.monomial(0, 0, 1)
