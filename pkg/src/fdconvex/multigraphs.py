"""Loopless multigraphs without isolated vertices, up to isomorphism.

Canonical labeling works per connected component: colour refinement on
edge multiplicities, then individualization over the first non-singleton
cell, keeping the lexicographically least relabeled edge list.  Branches on
twin vertices (same neighbourhood apart from each other) are skipped, since
the transposition of twins is an automorphism that fixes everything already
individualized.  Components are laid out one after another, larger first.

Enumeration builds connected classes edge by edge (every connected
multigraph arises from a smaller connected one by adding one edge, possibly
to a fresh vertex) and then takes multisets of connected classes, which needs
no isomorphism test at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Iterable, Sequence

from .combinatorics import Edge, ExponentVector, Permutation, apply_perm


@dataclass(frozen=True)
class Multigraph:
    """A multiset of edges.  ``vertices`` defaults to the covered vertices."""

    edges: tuple[Edge, ...]
    vertices: frozenset[int]

    def __init__(self, edges: Iterable[Edge], vertices: Iterable[int] | None = None):
        es = tuple(sorted(Edge.of(*e) for e in edges))
        covered = frozenset(v for e in es for v in e)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "vertices", covered if vertices is None else frozenset(vertices) | covered)

    @classmethod
    def parse(cls, text: str) -> Multigraph:
        """Parse ``"1-2,1-3"`` (repeats allowed) or ``"1-2:2"`` style input."""
        return cls(ExponentVector.parse(text).edges())

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def isolated_vertices(self) -> set[int]:
        covered = {v for e in self.edges for v in e}
        return set(self.vertices) - covered

    def exponent(self) -> ExponentVector:
        return ExponentVector.from_edges(self.edges)

    def relabel(self, sigma: Permutation) -> Multigraph:
        return Multigraph(apply_perm(sigma, e) for e in self.edges)

    def is_matching(self) -> bool:
        return self.k == 2 * self.num_edges

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.edges)


def _components(edges: Sequence[Edge]) -> list[list[Edge]]:
    parent: dict[int, int] = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[Edge]] = {}
    for e in edges:
        groups.setdefault(find(e.a), []).append(e)
    return list(groups.values())


def _refine(adj: dict[int, dict[int, int]], colors: dict[int, int]) -> dict[int, int]:
    ncolors = len(set(colors.values()))
    while True:
        sig = {
            v: (colors[v], tuple(sorted((colors[w], m) for w, m in nbrs.items())))
            for v, nbrs in adj.items()
        }
        # keep the old cell order; within a cell, richer neighbourhoods first
        uniq = sorted(set(sig.values()), key=lambda s: s[1], reverse=True)
        uniq.sort(key=lambda s: s[0])
        rank = {s: i for i, s in enumerate(uniq)}
        colors = {v: rank[s] for v, s in sig.items()}
        if len(rank) == ncolors:
            return colors
        ncolors = len(rank)


def _twins(adj: dict[int, dict[int, int]], u: int, v: int) -> bool:
    nu = {w: m for w, m in adj[u].items() if w != v}
    nv = {w: m for w, m in adj[v].items() if w != u}
    return nu == nv


@lru_cache(maxsize=None)
def _canonical_component(edges: tuple[Edge, ...]) -> tuple[tuple[int, int], ...]:
    """Least relabeled edge list of a connected multigraph, vertices -> 1..c."""
    adj: dict[int, dict[int, int]] = {}
    for a, b in edges:
        adj.setdefault(a, {})
        adj.setdefault(b, {})
        adj[a][b] = adj[a].get(b, 0) + 1
        adj[b][a] = adj[b].get(a, 0) + 1
    best: list = [None]

    def search(colors):
        colors = _refine(adj, colors)
        cells: dict[int, list[int]] = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        if len(cells) == len(colors):
            cert = tuple(sorted(
                (min(colors[a], colors[b]) + 1, max(colors[a], colors[b]) + 1) for a, b in edges
            ))
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        kept: list[int] = []
        for v in sorted(cells[target]):
            if any(_twins(adj, u, v) for u in kept):
                continue
            kept.append(v)
            search({w: 2 * c + (c == target and w != v) for w, c in colors.items()})

    search({v: 0 for v in adj})
    return best[0]


def _assemble(component_certs: Iterable[tuple[tuple[int, int], ...]]) -> Multigraph:
    ordered = sorted(component_certs, key=lambda cert: (-len(cert), cert))
    out: list[Edge] = []
    offset = 0
    for cert in ordered:
        out.extend(Edge(a + offset, b + offset) for a, b in cert)
        offset += max(b for _, b in cert)
    return Multigraph(out)


def canonical_form(g: Multigraph) -> Multigraph:
    """Distinguished representative of the isomorphism class, relabeled onto ``[k]``."""
    if g.isolated_vertices():
        raise ValueError(f"multigraph has isolated vertices {sorted(g.isolated_vertices())}")
    if not g.edges:
        return Multigraph(())
    return _assemble(_canonical_component(tuple(sorted(c))) for c in _components(g.edges))


def is_isomorphic(g: Multigraph, h: Multigraph) -> bool:
    return canonical_form(g) == canonical_form(h)


@lru_cache(maxsize=None)
def connected_classes(m_edges: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Canonical certificates of all connected multigraphs with ``m_edges`` edges."""
    if m_edges < 1:
        raise ValueError("m_edges must be positive")
    if m_edges == 1:
        return (((1, 2),),)
    found: set[tuple[tuple[int, int], ...]] = set()
    for cert in connected_classes(m_edges - 1):
        c = max(b for _, b in cert)
        base = [Edge(a, b) for a, b in cert]
        for a in range(1, c + 1):
            for b in range(a + 1, c + 2):
                found.add(_canonical_component(tuple(sorted(base + [Edge(a, b)]))))
    return tuple(sorted(found))


def _partitions(m: int, largest: int | None = None) -> Iterable[tuple[int, ...]]:
    largest = m if largest is None else largest
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in _partitions(m - first, first):
            yield (first,) + rest


def enumerate_multigraphs(m_edges: int) -> list[Multigraph]:
    """One canonical representative per isomorphism class, sorted by ``(k, edges)``."""
    if m_edges < 1:
        raise ValueError("m_edges must be positive")
    out: list[Multigraph] = []
    for parts in _partitions(m_edges):
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        choices = [
            list(combinations_with_replacement(connected_classes(size), cnt))
            for size, cnt in counts.items()
        ]
        for pick in product(*choices):
            out.append(_assemble(cert for group in pick for cert in group))
    out.sort(key=lambda g: (g.k, g.edges))
    return out
