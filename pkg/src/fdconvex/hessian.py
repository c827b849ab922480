"""f_d itself and the coefficient matrices of its Hessian, for explicit small n.

The Hessian is ``H(f_d)(x) = sum_gamma x^gamma Q_gamma`` over exponent vectors
``gamma`` of degree d-2, with ``Q_gamma[i, j] = b_hat(gamma + v_i + v_j) / gamma!``.
The verification pipeline works with ``gamma! * Q_gamma`` ("scaled"), which
only multiplies each sequence by a positive constant.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence, Union

from .coefficients import CoeffCache, b_hat, c_hat
from .combinatorics import Edge, ExponentVector, all_edges, exponent_factorial
from .matrices import RationalSymMatrix
from .multigraphs import Multigraph

FD_EVAL_LIMIT = 10**7
DENSE_LIMIT_N = 12

GammaLike = Union[Multigraph, ExponentVector]


def as_exponent(gamma: GammaLike) -> ExponentVector:
    return gamma.exponent() if isinstance(gamma, Multigraph) else gamma


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the standard simplex over the edges of K_n, in lex edge order."""

    n: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != comb(self.n, 2):
            raise ValueError(f"expected {comb(self.n, 2)} coordinates, got {len(self.coords)}")
        if any(c < 0 for c in self.coords):
            raise ValueError("simplex coordinates must be nonnegative")
        if sum(self.coords) != 1:
            raise ValueError(f"simplex coordinates sum to {sum(self.coords)}, not 1")

    @classmethod
    def uniform(cls, n: int) -> SimplexPoint:
        m = comb(n, 2)
        return cls(n, tuple(Fraction(1, m) for _ in range(m)))

    @classmethod
    def vertex(cls, n: int, e: Edge) -> SimplexPoint:
        return cls(n, tuple(Fraction(int(f == e)) for f in all_edges(n)))

    @classmethod
    def random(cls, n: int, rng: random.Random, resolution: int = 1000) -> SimplexPoint:
        """Strictly positive rational point with small denominators."""
        w = [rng.randint(1, resolution) for _ in range(comb(n, 2))]
        s = sum(w)
        return cls(n, tuple(Fraction(v, s) for v in w))


def _coords(n: int, x) -> Sequence:
    coords = x.coords if isinstance(x, SimplexPoint) else tuple(x)
    if len(coords) != comb(n, 2):
        raise ValueError(f"expected {comb(n, 2)} coordinates, got {len(coords)}")
    return coords


def fd_eval(n: int, d: int, x) -> Fraction | float:
    """Value of f_d at ``x`` (a SimplexPoint or any coordinate vector).

    The sum over all of ``E^d`` is grouped by the set of vertices covered so
    far, so only the union sizes along each prefix matter.  Arithmetic follows
    the coordinates: Fractions stay exact, floats stay floats.
    """
    m = comb(n, 2)
    if m**d > FD_EVAL_LIMIT:
        raise ValueError(f"instance too large: C({n},2)^{d} > {FD_EVAL_LIMIT}")
    coords = _coords(n, x)
    masks = [(1 << (e.a - 1)) | (1 << (e.b - 1)) for e in all_edges(n)]
    memo: dict[tuple[int, int], object] = {}

    def tail(covered: int, remaining: int):
        if remaining == 0:
            return 1
        key = (covered, remaining)
        if key in memo:
            return memo[key]
        total = 0
        for xe, em in zip(coords, masks):
            if xe:
                nxt = covered | em
                total += xe / bin(nxt).count("1") * tail(nxt, remaining - 1)
        memo[key] = total
        return total

    return tail(0, d)


def _check_edges(n: int, *edges: Edge) -> None:
    for e in edges:
        if e.b > n:
            raise ValueError(f"edge {e} has an endpoint exceeding n={n}")


def qgamma_entry(gamma: GammaLike, n: int, ei: Edge, ej: Edge, scaled: bool = True,
                 cache: CoeffCache | None = None) -> Fraction:
    """Entry ``(ei, ej)`` of ``gamma! Q_gamma`` (scaled) or ``Q_gamma``."""
    gamma = as_exponent(gamma)
    _check_edges(n, ei, ej)
    if any(v > n for v in gamma.vertices()):
        raise ValueError(f"gamma is not supported on [{n}]")
    val = b_hat(gamma.plus(ei, ej), cache)
    return val if scaled else val / exponent_factorial(gamma)


def qgamma_matrix(gamma: GammaLike, n: int, scaled: bool = True,
                  cache: CoeffCache | None = None) -> RationalSymMatrix:
    if n > DENSE_LIMIT_N:
        raise ValueError(f"dense assembly limited to n <= {DENSE_LIMIT_N}")
    edges = all_edges(n)
    return RationalSymMatrix.from_function(
        len(edges), lambda i, j: qgamma_entry(gamma, n, edges[i], edges[j], scaled, cache)
    )


def mgamma_rgamma(gamma: GammaLike, n: int, cache: CoeffCache | None = None
                  ) -> tuple[RationalSymMatrix, RationalSymMatrix]:
    """``M_gamma = (c_hat(gamma+v_i+v_j))`` and ``R_gamma = (b_hat(gamma+v_i) + b_hat(gamma+v_j)) / gamma!``."""
    if n > DENSE_LIMIT_N:
        raise ValueError(f"dense assembly limited to n <= {DENSE_LIMIT_N}")
    gamma = as_exponent(gamma)
    edges = all_edges(n)
    fact = exponent_factorial(gamma)
    single = [b_hat(gamma.plus(e), cache) for e in edges]
    M = RationalSymMatrix.from_function(len(edges), lambda i, j: c_hat(gamma.plus(edges[i], edges[j])))
    R = RationalSymMatrix.from_function(len(edges), lambda i, j: (single[i] + single[j]) / fact)
    return M, R


def exponent_vectors(n: int, degree: int) -> list[ExponentVector]:
    """All exponent vectors of the given degree over the edges of K_n."""
    return [ExponentVector.from_edges(c) for c in combinations_with_replacement(all_edges(n), degree)]


def hessian_analytic(n: int, d: int, x, cache: CoeffCache | None = None) -> list[list]:
    """``sum_gamma x^gamma Q_gamma`` with unscaled Q_gamma."""
    coords = _coords(n, x)
    edges = all_edges(n)
    pos = {e: i for i, e in enumerate(edges)}
    m = len(edges)
    H = [[0] * m for _ in range(m)]
    for gamma in exponent_vectors(n, d - 2):
        weight = 1
        for e, mult in gamma.items_tuple:
            weight *= coords[pos[e]] ** mult
        if not weight:
            continue
        Q = qgamma_matrix(gamma, n, scaled=False, cache=cache)
        for i in range(m):
            for j in range(m):
                H[i][j] += weight * Q[i, j]
    return H


def hessian_finite_difference(n: int, d: int, x, h) -> list[list]:
    """Central second differences of ``fd_eval``; exact if ``x`` and ``h`` are Fractions."""
    coords = list(_coords(n, x))
    m = len(coords)

    def f_at(shifts: dict[int, object]):
        pt = list(coords)
        for i, s in shifts.items():
            pt[i] = pt[i] + s
        return fd_eval(n, d, pt)

    f0 = f_at({})
    H = [[0] * m for _ in range(m)]
    for i in range(m):
        H[i][i] = (f_at({i: h}) - 2 * f0 + f_at({i: -h})) / (h * h)
        for j in range(i + 1, m):
            val = (f_at({i: h, j: h}) - f_at({i: h, j: -h}) - f_at({i: -h, j: h})
                   + f_at({i: -h, j: -h})) / (4 * h * h)
            H[i][j] = H[j][i] = val
    return H


def hessian_fd_check(n: int, d: int, x: SimplexPoint, h=1e-4, exact: bool = False,
                     cache: CoeffCache | None = None):
    """Max entrywise gap between the finite-difference and analytic Hessians.

    Floating point by default; with ``exact=True`` the difference quotients are
    taken in rationals (``h`` converted to a Fraction), which is exact for d=2.
    """
    if any(c <= 0 for c in x.coords):
        raise ValueError("finite-difference check needs a strictly positive point")
    if exact:
        fd = hessian_finite_difference(n, d, x.coords, Fraction(h))
        an = hessian_analytic(n, d, x.coords, cache)
        return max(abs(a - b) for ra, rb in zip(fd, an) for a, b in zip(ra, rb))
    fd = hessian_finite_difference(n, d, [float(c) for c in x.coords], float(h))
    an = hessian_analytic(n, d, x.coords, cache)
    return max(abs(a - float(b)) for ra, rb in zip(fd, an) for a, b in zip(ra, rb))
