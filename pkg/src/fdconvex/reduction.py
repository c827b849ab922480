"""The three n-independent objects certifying ``A^(n) >= 0`` for every n >= k.

For a sequence of matrices satisfying the restriction and S_{n-k}-invariance
conditions, everything is read off ``A^(k+4)`` at fixed representative index
pairs.  With x, y, z the values at ({k+1,k+2}, {k+1,k+2}), ({k+1,k+2}, {k+1,k+3})
and ({k+1,k+2}, {k+3,k+4}):

* scalar ``x - 2y + z``
* ``B1`` of order C(k,2) + k + 1 (rows: pairs in [k], then j in [k], then tail)
* ``B2`` of order k + 1 (rows: j in [k], then tail)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .coefficients import CoeffCache
from .combinatorics import Edge, exponent_factorial
from .hessian import qgamma_entry
from .matrices import RationalSymMatrix
from .multigraphs import Multigraph

EntryOracle = Callable[[Edge, Edge], Fraction]


@dataclass(frozen=True)
class ClassValues:
    x: Fraction
    y: Fraction
    z: Fraction


@dataclass(frozen=True)
class ReductionBlocks:
    k: int
    B1: RationalSymMatrix
    B2: RationalSymMatrix
    scalar: Fraction
    classes: ClassValues


def entry_oracle(g: Multigraph, scaled: bool = True, cache: CoeffCache | None = None) -> EntryOracle:
    """``(e, f) -> a_(e,f)``, the entries of ``A^(k+4)`` for the multigraph ``g``."""
    if g.vertices != frozenset(range(1, g.k + 1)):
        raise ValueError(f"multigraph {g} is not labeled on [{g.k}]")
    n = g.k + 4
    gamma = g.exponent()

    def a(e: Edge, f: Edge) -> Fraction:
        if e.b > n or f.b > n:
            raise ValueError(f"edge pair ({e}, {f}) outside [{n}]")
        return qgamma_entry(gamma, n, e, f, scaled=scaled, cache=cache)

    return a


def blocks_from_oracle(a: EntryOracle, k: int) -> ReductionBlocks:
    E = Edge.of
    t1, t2, t3, t4 = k + 1, k + 2, k + 3, k + 4
    tail = E(t1, t2)
    x, y, z = a(tail, tail), a(tail, E(t1, t3)), a(tail, E(t3, t4))

    pairs = [Edge(p, q) for p, q in combinations(range(1, k + 1), 2)]
    cross = {}
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            v = a(E(i, t1), E(j, t2))
            if i != j and v != a(E(j, t1), E(i, t2)):
                raise ValueError(f"entry oracle is not invariant under ({t1} {t2}) at i={i}, j={j}")
            cross[i, j] = cross[j, i] = v

    labels = [("e", e) for e in pairs] + [("j", j) for j in range(1, k + 1)] + [("t", None)]
    rank = {"e": 0, "j": 1, "t": 2}

    def b1(p, q):
        (kp, vp), (kq, vq) = sorted((labels[p], labels[q]), key=lambda lab: rank[lab[0]])
        if kp == "e":
            if kq == "e":
                return a(vp, vq)
            if kq == "j":
                return a(vp, E(vq, t1))
            return a(vp, tail)
        if kp == "j":
            if kq == "j":
                return cross[vp, vq]
            return a(E(vp, t1), E(t2, t3))
        return z

    B1 = RationalSymMatrix.from_function(len(labels), b1)

    def b2(p, q):
        if q < k:
            i, j = p + 1, q + 1
            return a(E(i, t1), E(j, t1)) - cross[i, j]
        if p < k:
            i = p + 1
            return a(E(i, t1), tail) - a(E(i, t1), E(t2, t3))
        return y - z

    B2 = RationalSymMatrix.from_function(k + 1, b2)
    return ReductionBlocks(k, B1, B2, x - 2 * y + z, ClassValues(x, y, z))


def reduced_blocks(g: Multigraph, scaled: bool = True, cache: CoeffCache | None = None) -> ReductionBlocks:
    return blocks_from_oracle(entry_oracle(g, scaled, cache), g.k)


def blockvalue(g: Multigraph, scaled: bool = True, cache: CoeffCache | None = None) -> Fraction:
    a = entry_oracle(g, scaled, cache)
    k = g.k
    tail = Edge(k + 1, k + 2)
    return a(tail, tail) - 2 * a(tail, Edge(k + 1, k + 3)) + a(tail, Edge(k + 3, k + 4))


def scaling_factor(g: Multigraph) -> int:
    """``gamma!``: the factor between scaled and unscaled blocks."""
    return exponent_factorial(g.exponent())


def k0_pattern_matrix(x, y, z) -> RationalSymMatrix:
    """The 6x6 matrix A^(4) of an S_4-invariant sequence: x / y / z by |e ∩ f| = 2 / 1 / 0."""
    edges = [Edge(a, b) for a, b in combinations(range(1, 5), 2)]
    val = {2: x, 1: y, 0: z}
    return RationalSymMatrix.from_function(6, lambda i, j: val[len(set(edges[i]) & set(edges[j]))])


def k0_oracle(x, y, z) -> EntryOracle:
    val = {2: Fraction(x), 1: Fraction(y), 0: Fraction(z)}
    return lambda e, f: val[len(set(e) & set(f))]


def k0_pattern_eigen(x, y, z) -> list[tuple[Fraction, int]]:
    """Eigenvalues of the k=0 pattern matrix with multiplicities."""
    x, y, z = Fraction(x), Fraction(y), Fraction(z)
    return [(x - z, 3), (x + 4 * y + z, 1), (x - 2 * y + z, 2)]
