"""Exhaustive generation of rooted planar maps as rotation systems.

Darts are ``0 .. 2n-1``; the edge involution pairs ``d`` with ``d ^ 1`` and the
root is dart 0.  Rotations are built in canonical order: darts are visited in
label order, and the successor of a dart around its vertex is either a dart
already labelled but not yet used as a successor, or the next fresh edge,
whose two darts receive the next two labels.  Every rooted map has exactly one
such labelling, so no isomorphism test is needed.  Planarity is read off the
Euler relation V + F = E + 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from ..errors import CapExceeded

MAX_EDGES = 7


def cycles(perm) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if not seen[s]:
            cyc = []
            d = s
            while not seen[d]:
                seen[d] = True
                cyc.append(d)
                d = perm[d]
            out.append(cyc)
    return out


def count_cycles(perm) -> int:
    seen = [False] * len(perm)
    c = 0
    for s in range(len(perm)):
        if not seen[s]:
            c += 1
            d = s
            while not seen[d]:
                seen[d] = True
                d = perm[d]
    return c


@dataclass(frozen=True)
class Multigraph:
    """Underlying multigraph of a map; ``edges[0]`` is the root edge, directed
    from ``edges[0][0]`` (the root vertex).  Loops and parallel edges allowed."""

    n_vertices: int
    edges: tuple
    root_vertex: int = 0

    @property
    def n_edges(self):
        return len(self.edges)

    def adjacency(self):
        adj = [set() for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_loop(self):
        return any(u == v for u, v in self.edges)

    def is_simple(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def connected_without(self, removed=()) -> bool:
        removed = set(removed)
        keep = [v for v in range(self.n_vertices) if v not in removed]
        if not keep:
            return True
        adj = self.adjacency()
        stack = [keep[0]]
        seen = {keep[0]}
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen and w not in removed:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(keep)


@dataclass(frozen=True)
class CombMap:
    """Rooted map given by its rotation ``sigma`` (counterclockwise successor of
    each dart around its vertex).  The vertex map has no darts."""

    sigma: tuple

    @property
    def n_edges(self) -> int:
        return len(self.sigma) // 2

    @staticmethod
    def alpha(d: int) -> int:
        return d ^ 1

    def faces_perm(self):
        return tuple(self.sigma[d ^ 1] for d in range(len(self.sigma)))

    @cached_property
    def vertex_of(self) -> tuple:
        lab = [0] * len(self.sigma)
        for i, cyc in enumerate(cycles(self.sigma)):
            for d in cyc:
                lab[d] = i
        return tuple(lab)

    @property
    def n_vertices(self) -> int:
        return count_cycles(self.sigma) if self.sigma else 1

    @property
    def n_faces(self) -> int:
        return count_cycles(self.faces_perm()) if self.sigma else 1

    def genus(self) -> int:
        return (2 - self.n_vertices + self.n_edges - self.n_faces) // 2

    def is_connected(self) -> bool:
        n = len(self.sigma)
        if n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for e in (self.sigma[d], d ^ 1):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        return len(seen) == n

    def multigraph(self) -> Multigraph:
        if not self.sigma:
            return Multigraph(1, ())
        vo = self.vertex_of
        edges = tuple((vo[2 * i], vo[2 * i + 1]) for i in range(self.n_edges))
        return Multigraph(max(vo) + 1, edges, vo[0])

    def canonical_labelling(self) -> tuple:
        """Relabel darts breadth-first from the root (rotation, then edge
        involution) and return the relabelled rotation."""
        if not self.sigma:
            return ()
        lab = {0: 0, 1: 1}
        order = [0, 1]
        i = 0
        while i < len(order):
            d = order[i]
            s = self.sigma[d]
            if s not in lab:
                lab[s] = len(order)
                lab[s ^ 1] = len(order) + 1
                order += [s, s ^ 1]
            i += 1
        new = [0] * len(self.sigma)
        for d in range(len(self.sigma)):
            new[lab[d]] = lab[self.sigma[d]]
        return tuple(new)

    def is_canonical(self) -> bool:
        return self.canonical_labelling() == self.sigma

    def cycle_notation(self) -> str:
        """Rotation in cycle notation with darts numbered from 1."""
        if not self.sigma:
            return "()"
        return "".join("(" + " ".join(str(d + 1) for d in c) + ")" for c in cycles(self.sigma))


def _rotations(n: int):
    """All canonically labelled rotations on 2n darts (any genus)."""
    size = 2 * n
    sigma = [-1] * size
    used = [False] * size  # already someone's successor

    def rec(i, count):
        if i == count:
            if count == size:
                yield tuple(sigma)
            return
        for j in range(count):
            if not used[j]:
                used[j] = True
                sigma[i] = j
                yield from rec(i + 1, count)
                used[j] = False
        if count < size:
            used[count] = True
            sigma[i] = count
            yield from rec(i + 1, count + 2)
            used[count] = False
        sigma[i] = -1

    yield from rec(0, 2)


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple:
    if n == 0:
        return (CombMap(()),)
    out = []
    for sig in _rotations(n):
        faces = count_cycles([sig[d ^ 1] for d in range(2 * n)])
        if count_cycles(sig) + faces == n + 2:
            out.append(CombMap(sig))
    return tuple(out)


def enumerate_rooted_maps(n: int) -> list[CombMap]:
    """One representative per rooted planar map with ``n`` edges."""
    if n < 0:
        raise ValueError("edge count must be non-negative")
    if n > MAX_EDGES:
        raise CapExceeded(f"enumeration is capped at {MAX_EDGES} edges, got {n}")
    return list(_enumerate(n))


def map_count_formula(n: int) -> int:
    """2 * 3^n * (2n)! / (n! (n+2)!)."""
    from math import factorial

    return 2 * 3**n * factorial(2 * n) // (factorial(n) * factorial(n + 2))
