"""Exact PSD certificates (rational LDL^T) and Jacobi eigenvalues."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .matrices import RationalSymMatrix

JACOBI_MAX_ORDER = 500
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-13


class Verdict(str, enum.Enum):
    PSD = "PSD"
    NOT_PSD = "NOT_PSD"


@dataclass
class PsdCertificate:
    """Outcome of an exact LDL^T run.

    ``permutation[t]`` is the row of M used as the t-th pivot; ``L`` is unit
    lower triangular in that order, so ``M[perm][:, perm] == L diag(pivots) L^T``
    whenever the factorization completed.  On NOT_PSD, ``witness`` is a rational
    vector with ``witness^T M witness == witness_value < 0``.
    """

    verdict: Verdict
    pivots: list[Fraction]
    permutation: list[int]
    method: str
    L: list[list[Fraction]] = field(default_factory=list, repr=False)
    witness: Optional[list[Fraction]] = None
    witness_value: Optional[Fraction] = None

    @property
    def is_psd(self) -> bool:
        return self.verdict is Verdict.PSD

    @property
    def min_pivot(self) -> Optional[Fraction]:
        return min(self.pivots) if self.pivots else None


class JacobiConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenReport:
    eigenvalues: tuple[float, ...]
    offdiag_residual: float
    sweeps: int

    @property
    def min_eigenvalue(self) -> float:
        return self.eigenvalues[0]


class _Elimination:
    """Symmetric Gaussian elimination on a working copy, one pivot at a time."""

    def __init__(self, M: RationalSymMatrix):
        self.M = M
        self.S = [row[:] for row in M.rows]
        self.remaining = list(range(M.order))
        self.order: list[int] = []
        self.pivots: list[Fraction] = []
        self.mult: dict[int, dict[int, Fraction]] = {}

    def eliminate(self, p: int) -> None:
        S = self.S
        d = S[p][p]
        self.remaining.remove(p)
        col = {}
        if d != 0:
            row_p = S[p]
            for r in self.remaining:
                if row_p[r]:
                    col[r] = row_p[r] / d
            for r, lr in col.items():
                Sr = S[r]
                for c in self.remaining:
                    if row_p[c]:
                        Sr[c] -= lr * row_p[c]
        self.mult[p] = col
        self.order.append(p)
        self.pivots.append(d)

    def lift(self, u: dict[int, Fraction]) -> list[Fraction]:
        """Extend ``u`` (on remaining indices) so that v^T M v = u^T S u."""
        v = [Fraction(0)] * self.M.order
        for r, c in u.items():
            v[r] = Fraction(c)
        for p in reversed(self.order):
            v[p] = -sum((lr * v[r] for r, lr in self.mult[p].items()), Fraction(0))
        return v

    def factor_rows(self) -> list[list[Fraction]]:
        n = len(self.order)
        pos = {p: t for t, p in enumerate(self.order)}
        L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for p, col in self.mult.items():
            for r, lr in col.items():
                L[pos[r]][pos[p]] = lr
        return L

    def certificate(self, method: str) -> PsdCertificate:
        return PsdCertificate(Verdict.PSD, self.pivots, self.order, method, L=self.factor_rows())

    def refute(self, u: dict[int, Fraction], method: str) -> PsdCertificate:
        v = self.lift(u)
        value = self.M.quadratic_form(v)
        if value >= 0:
            raise AssertionError("witness failed exact re-evaluation")
        return PsdCertificate(Verdict.NOT_PSD, self.pivots, self.order, method, witness=v, witness_value=value)


def ldlt_natural(M: RationalSymMatrix) -> PsdCertificate:
    """LDL^T in the given row order, no pivoting.

    A negative pivot refutes PSD directly.  A zero pivot with a zero residual
    row is recorded and skipped; with a nonzero residual row the natural order
    breaks down and the pivoted routine takes over.
    """
    el = _Elimination(M)
    for p in range(M.order):
        d = el.S[p][p]
        if d < 0:
            return el.refute({p: Fraction(1)}, "natural")
        if d == 0 and any(el.S[p][r] for r in el.remaining if r != p):
            return ldlt_pivoted(M)
        el.eliminate(p)
    return el.certificate("natural")


def ldlt_pivoted(M: RationalSymMatrix) -> PsdCertificate:
    """LDL^T pivoting on the largest remaining diagonal entry (exact PSD decision)."""
    el = _Elimination(M)
    S = el.S
    while el.remaining:
        p = max(el.remaining, key=lambda r: (S[r][r], -r))
        d = S[p][p]
        if d > 0:
            el.eliminate(p)
            continue
        if d < 0:
            return el.refute({p: Fraction(1)}, "pivoted")
        # every remaining diagonal entry is <= 0 and the largest is 0
        for r in el.remaining:
            if S[r][r] < 0:
                return el.refute({r: Fraction(1)}, "pivoted")
        for r in el.remaining:
            for s in el.remaining:
                if r != s and S[r][s]:
                    sign = 1 if S[r][s] > 0 else -1
                    return el.refute({r: Fraction(1), s: Fraction(-sign)}, "pivoted")
        for r in list(el.remaining):
            el.eliminate(r)
    return el.certificate("pivoted")


def jacobi_eigen(M: RationalSymMatrix | np.ndarray) -> EigenReport:
    """Cyclic Jacobi rotations on the double-precision image of M."""
    A = np.array(M.to_numpy() if isinstance(M, RationalSymMatrix) else M, dtype=float)
    n = A.shape[0]
    if n > JACOBI_MAX_ORDER:
        raise ValueError(f"order {n} exceeds {JACOBI_MAX_ORDER}")
    if not np.allclose(A, A.T, rtol=0, atol=0):
        raise ValueError("matrix is not symmetric")
    scale = float(np.max(np.abs(A))) if n else 0.0

    upper = np.triu_indices(n, 1)

    def off_norm():
        return math.sqrt(2.0) * float(np.linalg.norm(A[upper]))

    sweeps = 0
    off = off_norm()
    while off > JACOBI_TOL * scale:
        if sweeps == JACOBI_MAX_SWEEPS:
            raise JacobiConvergenceError(f"no convergence after {sweeps} sweeps (off={off:g})")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
        off = off_norm()
    return EigenReport(tuple(sorted(float(v) for v in np.diag(A))), off, sweeps)
