import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fdconvex.coefficients import CoeffCache
from fdconvex.combinatorics import Edge, all_edges
from fdconvex.hessian import qgamma_matrix
from fdconvex.matrices import RationalSymMatrix
from fdconvex.multigraphs import enumerate_multigraphs
from fdconvex.psdcert import ldlt_pivoted
from fdconvex.reduction import entry_oracle, k0_oracle
from fdconvex.repset import (
    SparseVector, block_formulas, compress, multiplicities, orbit_count_bruteforce,
    orbit_count_formula, representative_vectors,
)

E = Edge.of
CACHE = CoeffCache()
SMALL_GRAPHS = [g for m in (1, 2) for g in enumerate_multigraphs(m)]
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def matrix_from_oracle(a, n):
    edges = all_edges(n)
    return RationalSymMatrix.from_function(len(edges), lambda i, j: a(edges[i], edges[j]))


def test_sparse_vector_drops_zeros():
    v = SparseVector([(E(1, 2), 1), (E(1, 2), -1), (E(1, 3), 2)])
    assert v == {E(1, 3): 2}
    assert v.dot(SparseVector({E(1, 3): 3})) == 6


def test_representative_vectors_k0():
    rs = representative_vectors(0, 4)
    assert rs.U3 == (SparseVector({E(1, 2): 1, E(1, 3): -1, E(2, 4): -1, E(3, 4): 1}),)
    assert rs.U1 == (SparseVector((e, 1) for e in all_edges(4)),)


def test_representative_vectors_k2():
    rs = representative_vectors(2, 6)
    assert rs.multiplicities == (4, 3, 1) == multiplicities(2)
    tail_sum = rs.U1[3]
    assert len(tail_sum) == comb(4, 2)
    assert set(tail_sum) == {Edge(i, j) for i in range(3, 7) for j in range(i + 1, 7)}
    with pytest.raises(ValueError):
        representative_vectors(2, 5)


def test_representative_vectors_are_orthogonal_across_blocks():
    rs = representative_vectors(3, 8)
    for p, Up in enumerate(rs.blocks):
        for q, Uq in enumerate(rs.blocks):
            if p != q:
                assert all(u.dot(v) == 0 for u in Up for v in Uq)


@pytest.mark.parametrize("k", range(0, 7))
def test_direct_sum_dimension(k):
    m1, m2, m3 = multiplicities(k)
    for n in range(k + 4, 13):
        t = n - k
        assert m1 * 1 + m2 * (t - 1) + m3 * (comb(t, 2) - t) == comb(n, 2)


def test_compress_examples():
    rs = representative_vectors(0, 4)
    assert compress(RationalSymMatrix.identity(6), rs.U3) == RationalSymMatrix([[4]])
    ones = RationalSymMatrix([[1] * 15 for _ in range(15)])
    rs = representative_vectors(1, 6)
    assert compress(ones, rs.U2) == RationalSymMatrix.zeros(2)
    with pytest.raises(ValueError):
        compress(RationalSymMatrix.identity(6), representative_vectors(1, 5).U1)
    with pytest.raises(ValueError):
        compress(RationalSymMatrix.identity(5), rs.U1)


def test_block_formula_examples():
    _, _, B3 = block_formulas(k0_oracle(2, 2, 2), 0, 4)
    assert B3 == RationalSymMatrix([[0]])
    g = enumerate_multigraphs(1)[0]
    _, _, B3 = block_formulas(entry_oracle(g, cache=CACHE), 2, 6)
    assert B3 == RationalSymMatrix([[Fraction(1, 6)]])
    with pytest.raises(ValueError):
        block_formulas(k0_oracle(1, 1, 1), 2, 5)


@given(rationals, rationals, rationals)
def test_block_formulas_match_compression_k0(x, y, z):
    a = k0_oracle(x, y, z)
    for n in (4, 5, 6):
        A = matrix_from_oracle(a, n)
        rs = representative_vectors(0, n)
        assert [compress(A, U) for U in rs.blocks] == list(block_formulas(a, 0, n))


@pytest.mark.parametrize("g", SMALL_GRAPHS, ids=str)
def test_block_formulas_match_compression(g):
    a = entry_oracle(g, cache=CACHE)
    for n in (g.k + 4, g.k + 5):
        A = qgamma_matrix(g, n, cache=CACHE)
        rs = representative_vectors(g.k, n)
        assert [compress(A, U) for U in rs.blocks] == list(block_formulas(a, g.k, n))


@pytest.mark.parametrize("g", SMALL_GRAPHS, ids=str)
def test_psd_equivalence_at_fixed_n(g):
    n = g.k + 4
    A = qgamma_matrix(g, n, cache=CACHE)
    rs = representative_vectors(g.k, n)
    blocks_psd = all(ldlt_pivoted(compress(A, U)).is_psd for U in rs.blocks)
    full_min = np.linalg.eigvalsh(A.to_numpy()).min()
    assert (full_min >= -1e-10) == blocks_psd


def test_psd_equivalence_detects_indefinite_pattern():
    rng = random.Random(11)
    outcomes = set()
    for _ in range(40):
        x, y, z = (Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3))
        A = matrix_from_oracle(k0_oracle(x, y, z), 5)
        blocks_psd = all(ldlt_pivoted(B).is_psd for B in block_formulas(k0_oracle(x, y, z), 0, 5))
        full_min = np.linalg.eigvalsh(A.to_numpy()).min()
        if abs(full_min) > 1e-10:
            assert (full_min > 0) == blocks_psd
            outcomes.add(blocks_psd)
    assert outcomes == {True, False}


@pytest.mark.parametrize("k,value", [(0, 3), (1, 9), (2, 26), (3, 66)])
def test_orbit_count_formula(k, value):
    assert orbit_count_formula(k) == value


@pytest.mark.parametrize("k", range(0, 4))
def test_orbit_count_bruteforce(k):
    for n in (k + 4, k + 5):
        assert orbit_count_bruteforce(k, n) == orbit_count_formula(k)


@pytest.mark.parametrize("k", range(0, 7))
def test_orbit_count_is_sum_of_squared_multiplicities(k):
    assert orbit_count_formula(k) == sum(m * m for m in multiplicities(k))


def test_orbit_count_limits():
    with pytest.raises(ValueError):
        orbit_count_bruteforce(2, 5)
    with pytest.raises(ValueError):
        orbit_count_bruteforce(10, 50)
    with pytest.raises(ValueError):
        orbit_count_formula(-1)
