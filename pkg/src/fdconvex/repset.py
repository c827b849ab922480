"""Representative set for S_{n-k} acting on R^E, E = binom([n], 2), and the
compressions ``U_i^T A U_i`` of an S_{n-k}-invariant matrix A.

For ``n >= k + 4`` the isotypic multiplicities are
``(m1, m2, m3) = (C(k,2) + k + 1, k + 1, 1)``.  The closed forms in
``block_formulas`` express each compressed block through entries of
``A^(k+4)`` and n alone; the tests compare them with explicit compression.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, isqrt
from typing import Callable

from .combinatorics import Edge, Permutation, apply_perm, lex_index
from .matrices import RationalSymMatrix

EntryOracle = Callable[[Edge, Edge], Fraction]

ORBIT_BRUTEFORCE_LIMIT = 10**6


class SparseVector(dict):
    """Map ``Edge -> coefficient`` with zero coefficients dropped."""

    def __init__(self, terms=()):
        super().__init__()
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            self.add(e, c)

    def add(self, e: Edge, c) -> None:
        v = self.get(e, 0) + c
        if v:
            self[e] = v
        else:
            self.pop(e, None)

    def dot(self, other: SparseVector) -> Fraction:
        return sum((c * other.get(e, 0) for e, c in self.items()), Fraction(0))


@dataclass(frozen=True)
class RepresentativeSet:
    k: int
    n: int
    U1: tuple[SparseVector, ...]
    U2: tuple[SparseVector, ...]
    U3: tuple[SparseVector, ...]

    @property
    def blocks(self) -> tuple[tuple[SparseVector, ...], ...]:
        return (self.U1, self.U2, self.U3)

    @property
    def multiplicities(self) -> tuple[int, int, int]:
        return (len(self.U1), len(self.U2), len(self.U3))


def multiplicities(k: int) -> tuple[int, int, int]:
    return (comb(k, 2) + k + 1, k + 1, 1)


def representative_vectors(k: int, n: int) -> RepresentativeSet:
    if k < 0 or n < k + 4:
        raise ValueError(f"need k >= 0 and n >= k + 4, got k={k}, n={n}")
    E = Edge.of
    tail = range(k + 1, n + 1)
    U1 = [SparseVector({Edge(a, b): 1}) for a, b in combinations(range(1, k + 1), 2)]
    U1 += [SparseVector((E(j, i), 1) for i in tail) for j in range(1, k + 1)]
    U1.append(SparseVector((Edge(i, j), 1) for i, j in combinations(tail, 2)))

    U2 = [SparseVector([(E(j, k + 1), 1), (E(j, k + 2), -1)]) for j in range(1, k + 1)]
    last = SparseVector()
    for i in range(k + 3, n + 1):
        last.add(E(k + 1, i), 1)
        last.add(E(k + 2, i), -1)
    U2.append(last)

    U3 = [SparseVector([(E(k + 1, k + 2), 1), (E(k + 1, k + 3), -1),
                        (E(k + 2, k + 4), -1), (E(k + 3, k + 4), 1)])]
    return RepresentativeSet(k, n, tuple(U1), tuple(U2), tuple(U3))


def compress(A: RationalSymMatrix, U) -> RationalSymMatrix:
    """``(u_p^T A u_q)_{p,q}`` for the vectors ``U`` (A indexed by lex edges of K_n)."""
    n = (1 + isqrt(1 + 8 * A.order)) // 2
    if comb(n, 2) != A.order:
        raise ValueError(f"order {A.order} is not C(n,2) for any n")
    sparse = []
    for u in U:
        for e in u:
            if e.b > n:
                raise ValueError(f"vector support {e} outside the index set of K_{n}")
        sparse.append([(lex_index(e, n), Fraction(c)) for e, c in u.items()])
    # A u_q, stored sparsely over its support
    Au = []
    for vec in sparse:
        Au.append([sum((c * A.rows[r][i] for i, c in vec), Fraction(0)) for r in range(A.order)])
    return RationalSymMatrix.from_function(
        len(U), lambda p, q: sum((c * Au[q][i] for i, c in sparse[p]), Fraction(0))
    )


def block_formulas(a: EntryOracle, k: int, n: int) -> tuple[RationalSymMatrix, RationalSymMatrix, RationalSymMatrix]:
    """The three compressed blocks written through orbit values and n."""
    if n < k + 4:
        raise ValueError(f"need n >= k + 4, got k={k}, n={n}")
    E = Edge.of
    t = n - k
    t2 = comb(t, 2)
    pairs = [Edge(p, q) for p, q in combinations(range(1, k + 1), 2)]
    p1, p2 = E(k + 1, k + 2), E(k + 1, k + 3)
    x, y, z = a(p1, p1), a(p1, p2), a(p1, E(k + 3, k + 4))

    def C22(i, j):
        return a(E(i, k + 1), E(j, k + 1)) + (t - 1) * a(E(i, k + 1), E(j, k + 2))

    def C23(j):
        return 2 * a(E(j, k + 1), p1) + (t - 2) * a(E(j, k + 1), E(k + 2, k + 3))

    C33 = x + 2 * (t - 2) * y + comb(t - 2, 2) * z

    labels = [("e", e) for e in pairs] + [("j", j) for j in range(1, k + 1)] + [("t", None)]
    rank = {"e": 0, "j": 1, "t": 2}

    def b1(p, q):
        (kp, vp), (kq, vq) = sorted((labels[p], labels[q]), key=lambda lab: rank[lab[0]])
        if kp == "e" and kq == "e":
            return a(vp, vq)
        if kp == "e" and kq == "j":
            return t * a(vp, E(vq, k + 1))
        if kp == "e":
            return t2 * a(vp, p1)
        if kq == "j":
            return t * C22(vp, vq)
        if kp == "j":
            return t2 * C23(vp)
        return t2 * C33

    B1 = RationalSymMatrix.from_function(len(labels), b1)

    def D11(i, j):
        return a(E(i, k + 1), E(j, k + 1)) - a(E(i, k + 1), E(j, k + 2))

    def D12(j):
        return a(E(j, k + 1), p1) - a(E(j, k + 1), E(k + 2, k + 3))

    D22 = x + (t - 4) * y - (t - 3) * z

    def b2(p, q):
        if q < k:
            return 2 * D11(p + 1, q + 1)
        if p < k:
            return 2 * (t - 2) * D12(p + 1)
        return 2 * (t - 2) * D22

    B2 = RationalSymMatrix.from_function(k + 1, b2)
    B3 = RationalSymMatrix([[4 * (x - 2 * y + z)]])
    return B1, B2, B3


def orbit_count_formula(k: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    ck = comb(k, 2)
    return 3 + 4 * k + 2 * k * k + ck * (ck + 2 * k + 2)


def tail_generators(k: int, n: int) -> list[Permutation]:
    """Transposition (k+1 k+2) and cycle (k+1 ... n); they generate S_{n-k}."""
    if n - k < 2:
        return []
    gens = [Permutation.from_cycle(n, k + 1, k + 2)]
    if n - k > 2:
        gens.append(Permutation.from_cycle(n, *range(k + 1, n + 1)))
    return gens


def orbit_count_bruteforce(k: int, n: int) -> int:
    """Number of orbits of S_{n-k} on E x E, via union-find over generator moves."""
    if n < k + 4:
        raise ValueError(f"need n >= k + 4, got k={k}, n={n}")
    m = comb(n, 2)
    if m * m > ORBIT_BRUTEFORCE_LIMIT:
        raise ValueError(f"C({n},2)^2 exceeds the brute-force limit")
    edges = [Edge(a, b) for a, b in combinations(range(1, n + 1), 2)]
    index = {e: i for i, e in enumerate(edges)}
    parent = list(range(m * m))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for g in tail_generators(k, n):
        img = [index[apply_perm(g, e)] for e in edges]
        for i in range(m):
            for j in range(m):
                ra, rb = find(i * m + j), find(img[i] * m + img[j])
                if ra != rb:
                    parent[ra] = rb
    return sum(1 for v in range(m * m) if find(v) == v)
