"""Edges of K_n, exponent vectors over edges, and vertex permutations.

Vertex labels are 1-based. Edges are ordered lexicographically on the
sorted endpoint pair, which fixes the row/column layout of every matrix
indexed by ``E = binom([n], 2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, NamedTuple


class Edge(NamedTuple):
    """A 2-subset ``{a, b}`` of ``[n]`` stored as the sorted pair ``a < b``."""

    a: int
    b: int

    @classmethod
    def of(cls, u: int, v: int) -> Edge:
        if u == v:
            raise ValueError(f"loop {{{u},{v}}} is not an edge")
        if min(u, v) < 1:
            raise ValueError(f"vertex labels are 1-based, got {{{u},{v}}}")
        return cls(u, v) if u < v else cls(v, u)

    @classmethod
    def parse(cls, text: str) -> Edge:
        u, v = text.strip().split("-")
        return cls.of(int(u), int(v))

    def __str__(self) -> str:
        return f"{self.a}-{self.b}"


def all_edges(n: int) -> list[Edge]:
    """All edges of K_n in lexicographic order."""
    return [Edge(a, b) for a, b in combinations(range(1, n + 1), 2)]


def lex_index(e: Edge, n: int) -> int:
    """0-based position of ``e`` among the lexicographically ordered edges of K_n."""
    a, b = e
    if b > n:
        raise ValueError(f"edge {e} has an endpoint exceeding n={n}")
    # edges starting with 1..a-1 come first
    before = comb(n, 2) - comb(n - a + 1, 2)
    return before + (b - a - 1)


def union_size(edges: Iterable[Edge]) -> int:
    vertices: set[int] = set()
    for e in edges:
        vertices.update(e)
    if not vertices:
        raise ValueError("union_size of an empty edge list")
    return len(vertices)


class ExponentVector(Mapping[Edge, int]):
    """Finitely supported map ``Edge -> positive multiplicity``.

    Stored as a sorted tuple of ``(edge, multiplicity)`` pairs, so the value
    does not depend on any ambient vertex count and hashes cheaply.
    """

    __slots__ = ("_items", "_degree")

    def __init__(self, entries: Mapping[Edge, int] | Iterable[tuple[Edge, int]] = ()):
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[Edge, int] = {}
        for e, m in pairs:
            if m < 0:
                raise ValueError(f"negative multiplicity {m} for edge {e}")
            if m:
                e = Edge.of(*e)
                acc[e] = acc.get(e, 0) + m
        self._items = tuple(sorted(acc.items()))
        self._degree = sum(acc.values())

    @classmethod
    def from_edges(cls, edges: Iterable[Edge]) -> ExponentVector:
        return cls((Edge.of(*e), 1) for e in edges)

    @classmethod
    def unit(cls, e: Edge) -> ExponentVector:
        return cls([(e, 1)])

    @classmethod
    def parse(cls, text: str) -> ExponentVector:
        text = text.strip()
        if not text:
            return cls()
        pairs = []
        for term in text.split(","):
            edge_text, _, mult = term.partition(":")
            pairs.append((Edge.parse(edge_text), int(mult) if mult else 1))
        return cls(pairs)

    @property
    def items_tuple(self) -> tuple[tuple[Edge, int], ...]:
        return self._items

    @property
    def degree(self) -> int:
        return self._degree

    def __getitem__(self, e: Edge) -> int:
        for f, m in self._items:
            if f == e:
                return m
        raise KeyError(e)

    def get(self, e, default=0):
        try:
            return self[e]
        except KeyError:
            return default

    def __iter__(self) -> Iterator[Edge]:
        return (e for e, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExponentVector):
            return self._items == other._items
        return NotImplemented

    def __add__(self, other: ExponentVector) -> ExponentVector:
        return ExponentVector(list(self._items) + list(other._items))

    def plus(self, *edges: Edge) -> ExponentVector:
        return ExponentVector(list(self._items) + [(e, 1) for e in edges])

    def minus(self, e: Edge) -> ExponentVector:
        m = self.get(e)
        if m == 0:
            raise ValueError(f"cannot remove {e}: not in support")
        return ExponentVector([(f, k - (f == e)) for f, k in self._items])

    def edges(self) -> list[Edge]:
        """The underlying multiset as a sorted list with repetitions."""
        return [e for e, m in self._items for _ in range(m)]

    def vertices(self) -> set[int]:
        return {v for e, _ in self._items for v in e}

    def __str__(self) -> str:
        return ",".join(str(e) if m == 1 else f"{e}:{m}" for e, m in self._items)

    def __repr__(self) -> str:
        return f"ExponentVector({str(self)!r})"


def exponent_factorial(alpha: ExponentVector) -> int:
    out = 1
    for _, m in alpha.items_tuple:
        out *= factorial(m)
    return out


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``[n]``; ``images[i-1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of [{len(self.images)}]: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycle(cls, n: int, *cycle: int) -> Permutation:
        images = list(range(1, n + 1))
        for src, dst in zip(cycle, cycle[1:] + cycle[:1]):
            images[src - 1] = dst
        return cls(tuple(images))

    @classmethod
    def fixing_prefix(cls, k: int, tail: Iterable[int]) -> Permutation:
        """Element of S_{n-k}: identity on ``[k]``, ``tail`` gives images of k+1..n."""
        tail = tuple(tail)
        perm = cls(tuple(range(1, k + 1)) + tail)
        return perm

    def fixes_prefix(self, k: int) -> bool:
        return all(self.images[i] == i + 1 for i in range(k))

    def __call__(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} outside the domain [{self.n}]")
        return self.images[v - 1]

    def compose(self, other: Permutation) -> Permutation:
        """``self ∘ other``: apply ``other`` first."""
        if other.n != self.n:
            raise ValueError("permutations act on different vertex sets")
        return Permutation(tuple(self.images[other.images[i] - 1] for i in range(self.n)))


def apply_perm(sigma: Permutation, e: Edge) -> Edge:
    return Edge.of(sigma(e.a), sigma(e.b))


def permute_exponent(sigma: Permutation, alpha: ExponentVector) -> ExponentVector:
    return ExponentVector((apply_perm(sigma, e), m) for e, m in alpha.items_tuple)
