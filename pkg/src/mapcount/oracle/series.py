"""Ising-weighted generating series summed over enumerated maps.

Each map contributes the sum, over its 2-colourings with a black root vertex,
of ν^(number of monochromatic edges); this is half the q=2 Potts value.  A
weighting picks which colourings (and which edge weights) count:

``all``          every colouring
``mono_root``    colourings with a monochromatic root edge
``bi_root``      colourings with a bichromatic root edge
``del``          every colouring, root edge not weighted (the map with its root edge deleted)
``con``          monochromatic-root colourings, root edge not weighted (root edge contracted)

and may be combined with filters ``bipartite``, ``two_conn`` and ``three_conn``
joined by ``+``, for example ``three_conn+mono_root``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..exact.poly import Poly
from ..exact.series import NU, TruncSeries
from .classify import is_bipartite, is_three_connected, is_two_connected
from .maps import MAX_EDGES, enumerate_rooted_maps
from ..errors import CapExceeded

WEIGHTS = ("all", "mono_root", "bi_root", "del", "con")
FILTERS = {
    "bipartite": is_bipartite,
    "bipartite_only": is_bipartite,
    "two_conn": is_two_connected,
    "two_connected": is_two_connected,
    "three_conn": is_three_connected,
    "three_connected": is_three_connected,
}


def parse_weighting(weighting: str):
    weight = "all"
    filters = []
    for tok in weighting.split("+"):
        tok = tok.strip()
        if tok in WEIGHTS:
            weight = tok
        elif tok in FILTERS:
            filters.append(FILTERS[tok])
        else:
            raise ValueError(f"unknown weighting component {tok!r}")
    return weight, tuple(filters)


@lru_cache(maxsize=None)
def _colourings(nv: int) -> np.ndarray:
    """All 0/1 colourings of ``nv`` vertices with vertex 0 coloured 0."""
    k = np.arange(2 ** (nv - 1))
    cols = [np.zeros_like(k)] + [(k >> (i - 1)) & 1 for i in range(1, nv)]
    return np.stack(cols, axis=1)


def colouring_weight(g, weight: str) -> Poly:
    """Half the q=2 Potts value under ``weight`` (see module docstring)."""
    if g.n_edges == 0:
        return Poly((1,)) if weight == "all" else Poly(())
    C = _colourings(g.n_vertices)
    # relabel so the root vertex is vertex 0
    perm = list(range(g.n_vertices))
    r = g.root_vertex
    perm[0], perm[r] = r, 0
    C = C[:, perm]
    mono = np.stack([C[:, u] == C[:, v] for u, v in g.edges], axis=1)
    root_mono = mono[:, 0]
    if weight == "all":
        counts, keep = mono.sum(axis=1), slice(None)
    elif weight == "mono_root":
        counts, keep = mono.sum(axis=1), root_mono
    elif weight == "bi_root":
        counts, keep = mono.sum(axis=1), ~root_mono
    elif weight == "del":
        counts, keep = mono[:, 1:].sum(axis=1), slice(None)
    elif weight == "con":
        counts, keep = mono[:, 1:].sum(axis=1), root_mono
    else:
        raise ValueError(weight)
    hist = np.bincount(counts[keep], minlength=g.n_edges + 1)
    return Poly([int(c) for c in hist])


@lru_cache(maxsize=None)
def _coefficient(n: int, weighting: str) -> Poly:
    weight, filters = parse_weighting(weighting)
    total = Poly(())
    acc = {}
    for m in enumerate_rooted_maps(n):
        g = m.multigraph()
        if all(f(g) for f in filters):
            for k, c in enumerate(colouring_weight(g, weight).coeffs):
                acc[k] = acc.get(k, 0) + c
    if acc:
        total = Poly([acc.get(k, 0) for k in range(max(acc) + 1)])
    return total


def oracle_series(n_max: int, weighting: str = "all") -> TruncSeries:
    """Series over Q[ν] to order ``n_max + 1`` summed over all maps with at most
    ``n_max`` edges."""
    if n_max > MAX_EDGES:
        raise CapExceeded(f"oracle is capped at {MAX_EDGES} edges")
    parse_weighting(weighting)
    return TruncSeries([_coefficient(n, weighting) for n in range(n_max + 1)], NU)


def oracle_dump(n: int) -> str:
    """One line per map: rotation in cycle notation and classification flags."""
    from .classify import classify

    lines = []
    for m in enumerate_rooted_maps(n):
        f = classify(m)
        flags = " ".join(k for k, v in f.as_dict().items() if v)
        lines.append(f"{m.cycle_notation()}\t{flags}".rstrip())
    return "\n".join(lines) + "\n"
