"""Exact monomial coefficients of f_d.

``b_alpha`` is the coefficient of ``x^alpha`` in f_d and ``b_hat = alpha! * b_alpha``.
Splitting off the last edge of each ordered tuple gives the recurrence

    b_hat(alpha) = c_hat(alpha) * sum_{e in supp alpha} alpha_e * b_hat(alpha - v_e),

with ``c_hat(alpha) = 1 / |union of supp alpha|`` and ``b_hat(v_e) = 1/2``.
Everything here is exact ``Fraction`` arithmetic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .combinatorics import Edge, ExponentVector

Key = tuple[tuple[tuple[int, int], int], ...]

MAX_BRUTEFORCE_DEGREE = 8
_HALF = Fraction(1, 2)


def _union(key: Key) -> int:
    vs = set()
    for (a, b), _ in key:
        vs.add(a)
        vs.add(b)
    return len(vs)


def normalize_key(key: Key) -> Key:
    """Rename vertices 1, 2, ... by first occurrence along the sorted edge list.

    Isomorphic exponent vectors often (not always) collide, which is all the
    cache needs: values only depend on union sizes, so any relabeling is safe.
    """
    label: dict[int, int] = {}
    out = []
    for (a, b), m in key:
        x = label.get(a)
        if x is None:
            x = label[a] = len(label) + 1
        y = label.get(b)
        if y is None:
            y = label[b] = len(label) + 1
        out.append(((x, y) if x < y else (y, x), m))
    out.sort()
    return tuple(out)


class CoeffCache:
    """Memo of ``b_hat`` keyed by relabel-normalized exponent vectors.

    Inserts are idempotent (a key always maps to the same value), so sharing
    one instance between threads can at worst repeat work.
    """

    def __init__(self):
        self.memo: dict[Key, Fraction] = {}
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self.memo)

    def clear(self) -> None:
        self.memo.clear()

    def b_hat_key(self, key: Key) -> Fraction:
        key = normalize_key(key)
        memo = self.memo
        val = memo.get(key)
        if val is not None:
            self.hits += 1
            return val
        self.misses += 1
        if len(key) == 1 and key[0][1] == 1:
            val = _HALF
        else:
            total = Fraction(0)
            for t, (e, m) in enumerate(key):
                if m > 1:
                    sub = key[:t] + ((e, m - 1),) + key[t + 1:]
                else:
                    sub = key[:t] + key[t + 1:]
                total += m * self.b_hat_key(sub)
            val = total / _union(key)
        memo[key] = val
        return val


_default_cache = CoeffCache()


def default_cache() -> CoeffCache:
    return _default_cache


def _key(alpha: ExponentVector) -> Key:
    if alpha.degree == 0:
        raise ValueError("zero exponent vector")
    return alpha.items_tuple


def c_hat(alpha: ExponentVector) -> Fraction:
    return Fraction(1, _union(_key(alpha)))


def b_hat(alpha: ExponentVector, cache: CoeffCache | None = None) -> Fraction:
    """``alpha! * b_alpha`` via the memoized recurrence."""
    cache = _default_cache if cache is None else cache
    return cache.b_hat_key(_key(alpha))


def _multiset_orderings(counts: dict[Edge, int], length: int) -> Iterator[list[Edge]]:
    if length == 0:
        yield []
        return
    for e in sorted(counts):
        if counts[e]:
            counts[e] -= 1
            for rest in _multiset_orderings(counts, length - 1):
                yield [e] + rest
            counts[e] += 1


def b_alpha_bruteforce(alpha: ExponentVector) -> Fraction:
    """``b_alpha`` straight from its definition: sum over distinct orderings of
    the edge multiset of the product of reciprocal prefix-union sizes."""
    if alpha.degree == 0:
        raise ValueError("zero exponent vector")
    if alpha.degree > MAX_BRUTEFORCE_DEGREE:
        raise ValueError(f"degree {alpha.degree} too large for brute force")
    total = Fraction(0)
    for seq in _multiset_orderings(dict(alpha.items_tuple), alpha.degree):
        seen: set[int] = set()
        denom = 1
        for e in seq:
            seen.update(e)
            denom *= len(seen)
        total += Fraction(1, denom)
    return total
