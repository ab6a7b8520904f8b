"""Connectivity and bipartiteness flags of a map's underlying multigraph."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .maps import CombMap, Multigraph


@dataclass(frozen=True)
class Flags:
    bipartite: bool
    two_connected: bool
    three_connected: bool
    root_edge_is_loop: bool

    def as_dict(self):
        return {
            "bipartite": self.bipartite,
            "two_connected": self.two_connected,
            "three_connected": self.three_connected,
            "root_edge_is_loop": self.root_edge_is_loop,
        }


def is_bipartite(g: Multigraph) -> bool:
    colour = [-1] * g.n_vertices
    adj = g.adjacency()
    if g.has_loop():
        return False
    for s in range(g.n_vertices):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return False
    return True


def is_two_connected(g: Multigraph) -> bool:
    if g.n_edges < 2 or g.has_loop():
        return False
    if not g.connected_without():
        return False
    return all(g.connected_without((v,)) for v in range(g.n_vertices))


def is_three_connected(g: Multigraph) -> bool:
    if g.n_edges < 6 or g.n_vertices < 4 or not g.is_simple():
        return False
    if not is_two_connected(g):
        return False
    return all(g.connected_without(pair) for pair in combinations(range(g.n_vertices), 2))


def classify(m: CombMap) -> Flags:
    g = m.multigraph()
    loop = bool(g.edges) and g.edges[0][0] == g.edges[0][1]
    return Flags(is_bipartite(g), is_two_connected(g), is_three_connected(g), loop)
