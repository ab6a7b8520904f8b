"""Potts partition functions by deletion-contraction, with a brute-force check."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from ..exact.poly import Poly, qnorm
from .maps import Multigraph


@dataclass(frozen=True)
class PottsValue:
    """Polynomial in (q, ν) stored as ``{(q power, ν power): coefficient}``."""

    terms: tuple  # sorted ((qpow, nupow), coeff) pairs

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    def as_dict(self):
        return dict(self.terms)

    def at_q(self, q) -> Poly:
        cs: dict = {}
        for (a, b), c in self.terms:
            cs[b] = cs.get(b, 0) + c * q**a
        if not cs:
            return Poly(())
        return Poly([qnorm(cs.get(k, 0)) for k in range(max(cs) + 1)])

    def __call__(self, q, nu):
        return sum(c * q**a * nu**b for (a, b), c in self.terms)


def _canon(nv, edges):
    return nv, tuple(sorted((min(u, v), max(u, v)) for u, v in edges))


def _add(a, b, scale=1, nu_shift=0, nu_scale_minus_one=False):
    out = dict(a)
    for (qa, na), c in b.items():
        if nu_scale_minus_one:
            # multiply by (ν - 1)
            for dn, s in ((1, 1), (0, -1)):
                key = (qa, na + dn)
                out[key] = out.get(key, 0) + s * c
        else:
            key = (qa, na + nu_shift)
            out[key] = out.get(key, 0) + scale * c
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=200_000)
def _potts(nv: int, edges: tuple) -> tuple:
    if not edges:
        return (((nv, 0), 1),)
    (u, v), rest = edges[0], edges[1:]
    if u == v:
        sub = dict(_potts(nv, rest))
        return tuple(sorted(_add({}, sub, nu_shift=1).items()))
    deleted = dict(_potts(*_canon(nv, rest)))
    # contract v into u, renumbering the vertices above v
    def ren(w):
        w = u if w == v else w
        return w - 1 if w > v else w

    contracted = dict(_potts(*_canon(nv - 1, [(ren(a), ren(b)) for a, b in rest])))
    return tuple(sorted(_add(deleted, contracted, nu_scale_minus_one=True).items()))


def potts_polynomial(g: Multigraph, q="q"):
    """Potts partition function sum over q-colourings of ν^(#monochromatic edges).

    Deletion-contraction: P_G = P_{G-e} + (ν-1) P_{G/e} for a non-loop e, and
    P_G = ν P_{G-e} for a loop; an edgeless graph gives q^|V|.  With integer
    ``q`` the result is a :class:`Poly` in ν, otherwise a :class:`PottsValue`.
    """
    val = PottsValue(_potts(*_canon(g.n_vertices, g.edges)))
    if isinstance(q, int):
        return val.at_q(q)
    return val


def potts_bruteforce(g: Multigraph, q: int) -> Poly:
    counts = [0] * (g.n_edges + 1)
    for col in product(range(q), repeat=g.n_vertices):
        m = sum(1 for a, b in g.edges if col[a] == col[b])
        counts[m] += 1
    return Poly(counts)
