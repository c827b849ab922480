"""Dense symmetric matrices with exact rational entries."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np


def frac_str(x: Fraction) -> str:
    """Serialize as ``"p/q"`` (always with a denominator, e.g. ``"3/1"``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


class RationalSymMatrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Sequence], check: bool = True):
        self.rows = [[Fraction(v) for v in row] for row in rows]
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix is not square")
        if check:
            for i in range(n):
                for j in range(i + 1, n):
                    if self.rows[i][j] != self.rows[j][i]:
                        raise ValueError(f"matrix not symmetric at ({i},{j})")

    @classmethod
    def from_function(cls, order: int, entry: Callable[[int, int], Fraction]) -> RationalSymMatrix:
        """Build from ``entry(i, j)``, evaluating only ``i <= j``."""
        rows = [[Fraction(0)] * order for _ in range(order)]
        for i in range(order):
            for j in range(i, order):
                rows[i][j] = rows[j][i] = Fraction(entry(i, j))
        return cls(rows, check=False)

    @classmethod
    def zeros(cls, order: int) -> RationalSymMatrix:
        return cls([[0] * order for _ in range(order)], check=False)

    @classmethod
    def identity(cls, order: int) -> RationalSymMatrix:
        return cls([[int(i == j) for j in range(order)] for i in range(order)], check=False)

    @property
    def order(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalSymMatrix):
            return self.rows == other.rows
        return NotImplemented

    def __add__(self, other: RationalSymMatrix) -> RationalSymMatrix:
        return RationalSymMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], check=False
        )

    def __sub__(self, other: RationalSymMatrix) -> RationalSymMatrix:
        return RationalSymMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], check=False
        )

    def scale(self, c) -> RationalSymMatrix:
        c = Fraction(c)
        return RationalSymMatrix([[c * a for a in r] for r in self.rows], check=False)

    def hadamard(self, other: RationalSymMatrix) -> RationalSymMatrix:
        return RationalSymMatrix(
            [[a * b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], check=False
        )

    def congruence(self, d: Sequence) -> RationalSymMatrix:
        """``diag(d) M diag(d)``."""
        d = [Fraction(x) for x in d]
        return RationalSymMatrix(
            [[d[i] * a * d[j] for j, a in enumerate(r)] for i, r in enumerate(self.rows)], check=False
        )

    def principal(self, idx: Sequence[int]) -> RationalSymMatrix:
        return RationalSymMatrix([[self.rows[i][j] for j in idx] for i in idx], check=False)

    def quadratic_form(self, v: Sequence) -> Fraction:
        total = Fraction(0)
        for i, row in enumerate(self.rows):
            if v[i]:
                total += v[i] * sum((a * vj for a, vj in zip(row, v) if vj), Fraction(0))
        return total

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(a) for a in r] for r in self.rows], dtype=float)

    def to_strings(self) -> list[list[str]]:
        return [[frac_str(a) for a in r] for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"RationalSymMatrix([{body}])"
