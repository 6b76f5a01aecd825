"""Complex tridiagonal and pentadiagonal solvers.

The tridiagonal solver is the Thomas algorithm. The pentadiagonal solver is a
banded LU factorisation (bandwidth 2, no pivoting) whose factors are reused
for every right-hand side. A dense Gaussian-elimination routine is kept as a
reference for tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

PIVOT_TOL = 1e-300


class SingularSystemError(ArithmeticError):
    """A pivot vanished during elimination."""


def _as_vector(values, n: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim == 0:
        return np.full(n, arr, dtype=np.complex128)
    if arr.shape != (n,):
        raise ValueError(f"{name} has shape {arr.shape}, expected ({n},)")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class TridiagonalSystem:
    """Tridiagonal matrix with diagonal ``diag`` and off-diagonals ``lower``/``upper``.

    The off-diagonals are complex scalars for the constant-band case; use
    :meth:`from_bands` for general sub/super-diagonal sequences, which are
    stored padded to length ``N`` (``lower[0]`` and ``upper[-1]`` unused).
    """

    diag: np.ndarray
    lower: complex | np.ndarray
    upper: complex | np.ndarray

    @classmethod
    def constant(cls, diag, off) -> TridiagonalSystem:
        diag = np.ascontiguousarray(np.asarray(diag, dtype=np.complex128))
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diag must be a non-empty vector")
        return cls(diag, complex(off), complex(off))

    @classmethod
    def from_bands(cls, sub, diag, sup) -> TridiagonalSystem:
        diag = np.ascontiguousarray(np.asarray(diag, dtype=np.complex128))
        n = diag.size
        sub = np.asarray(sub, dtype=np.complex128)
        sup = np.asarray(sup, dtype=np.complex128)
        if sub.shape != (n - 1,) or sup.shape != (n - 1,):
            raise ValueError("sub/super-diagonals must have length N - 1")
        lower = np.zeros(n, dtype=np.complex128)
        upper = np.zeros(n, dtype=np.complex128)
        lower[1:] = sub
        upper[:-1] = sup
        return cls(diag, lower, upper)

    @property
    def n(self) -> int:
        return self.diag.size

    @property
    def is_constant(self) -> bool:
        return np.isscalar(self.lower)

    def bands(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded ``(lower, upper)`` vectors of length ``N``."""
        n = self.n
        lower = _as_vector(self.lower, n, "lower").copy()
        upper = _as_vector(self.upper, n, "upper").copy()
        lower[0] = 0
        upper[-1] = 0
        return lower, upper

    def to_dense(self) -> np.ndarray:
        lower, upper = self.bands()
        return (np.diag(self.diag) + np.diag(lower[1:], -1) + np.diag(upper[:-1], 1))

    def matvec(self, vec) -> np.ndarray:
        lower, upper = self.bands()
        return _general_matvec(self.diag, lower, upper, None, None, vec)


@dataclass(frozen=True)
class PentadiagonalSystem:
    """Pentadiagonal matrix with two sub- and two super-diagonals.

    :meth:`constant` builds the symmetric constant-band matrix of the
    five-point scheme from scalars ``off1``/``off2``; :meth:`from_bands`
    takes five explicit diagonals.
    """

    diag: np.ndarray
    lower1: complex | np.ndarray
    upper1: complex | np.ndarray
    lower2: complex | np.ndarray
    upper2: complex | np.ndarray

    @classmethod
    def constant(cls, diag, off1, off2) -> PentadiagonalSystem:
        diag = np.ascontiguousarray(np.asarray(diag, dtype=np.complex128))
        if diag.ndim != 1:
            raise ValueError("diag must be a vector")
        if diag.size < 3:
            raise ValueError(f"pentadiagonal system needs N >= 3, got {diag.size}")
        return cls(diag, complex(off1), complex(off1), complex(off2), complex(off2))

    @classmethod
    def from_bands(cls, sub2, sub1, diag, sup1, sup2) -> PentadiagonalSystem:
        diag = np.ascontiguousarray(np.asarray(diag, dtype=np.complex128))
        n = diag.size
        if n < 3:
            raise ValueError(f"pentadiagonal system needs N >= 3, got {n}")
        bands = []
        for name, band, width in (("sub1", sub1, 1), ("sup1", sup1, 1),
                                  ("sub2", sub2, 2), ("sup2", sup2, 2)):
            band = np.asarray(band, dtype=np.complex128)
            if band.shape != (n - width,):
                raise ValueError(f"{name} must have length N - {width}")
            padded = np.zeros(n, dtype=np.complex128)
            if name.startswith("sub"):
                padded[width:] = band
            else:
                padded[:-width] = band
            bands.append(padded)
        l1, u1, l2, u2 = bands
        return cls(diag, l1, u1, l2, u2)

    @property
    def n(self) -> int:
        return self.diag.size

    def bands(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Padded ``(lower2, lower1, upper1, upper2)`` vectors of length ``N``."""
        n = self.n
        l2 = _as_vector(self.lower2, n, "lower2").copy()
        l1 = _as_vector(self.lower1, n, "lower1").copy()
        u1 = _as_vector(self.upper1, n, "upper1").copy()
        u2 = _as_vector(self.upper2, n, "upper2").copy()
        l2[:2] = 0
        l1[:1] = 0
        u1[-1:] = 0
        u2[-2:] = 0
        return l2, l1, u1, u2

    def to_dense(self) -> np.ndarray:
        l2, l1, u1, u2 = self.bands()
        return (np.diag(self.diag) + np.diag(l1[1:], -1) + np.diag(u1[:-1], 1)
                + np.diag(l2[2:], -2) + np.diag(u2[:-2], 2))

    def matvec(self, vec) -> np.ndarray:
        l2, l1, u1, u2 = self.bands()
        return _general_matvec(self.diag, l1, u1, l2, u2, vec)


def _general_matvec(diag, l1, u1, l2, u2, vec):
    v = np.asarray(vec, dtype=np.complex128)
    if v.shape != diag.shape:
        raise ValueError(f"vector has shape {v.shape}, expected {diag.shape}")
    y = diag * v
    y[1:] += l1[1:] * v[:-1]
    y[:-1] += u1[:-1] * v[1:]
    if l2 is not None:
        y[2:] += l2[2:] * v[:-2]
        y[:-2] += u2[:-2] * v[2:]
    return y


# ---------------------------------------------------------------- Thomas


@njit(cache=True)
def _thomas_constant(diag, off, rhs, tol):
    n = diag.size
    cp = np.empty(n, dtype=np.complex128)
    x = np.empty(n, dtype=np.complex128)
    piv = diag[0]
    if abs(piv) < tol:
        return x, 0
    cp[0] = off / piv
    x[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - off * cp[i - 1]
        if abs(piv) < tol:
            return x, i
        cp[i] = off / piv
        x[i] = (rhs[i] - off * x[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return x, -1


@njit(cache=True)
def _thomas_general(lower, diag, upper, rhs, tol):
    n = diag.size
    cp = np.empty(n, dtype=np.complex128)
    x = np.empty(n, dtype=np.complex128)
    piv = diag[0]
    if abs(piv) < tol:
        return x, 0
    cp[0] = upper[0] / piv
    x[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - lower[i] * cp[i - 1]
        if abs(piv) < tol:
            return x, i
        cp[i] = upper[i] / piv
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return x, -1


def thomas_solve(sys: TridiagonalSystem, rhs) -> np.ndarray:
    """Solve ``sys @ x = rhs`` with the Thomas algorithm (no pivoting).

    Raises
    ------
    SingularSystemError
        If a pivot smaller than ``1e-300`` in magnitude is met.
    """
    rhs = np.ascontiguousarray(np.asarray(rhs, dtype=np.complex128))
    if rhs.shape != (sys.n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({sys.n},)")
    if sys.is_constant and sys.lower == sys.upper:
        x, bad = _thomas_constant(sys.diag, complex(sys.lower), rhs, PIVOT_TOL)
    else:
        lower, upper = sys.bands()
        x, bad = _thomas_general(lower, sys.diag, upper, rhs, PIVOT_TOL)
    if bad >= 0:
        raise SingularSystemError(f"zero pivot in Thomas elimination at row {bad}")
    return x


# ---------------------------------------------------------------- banded LU


@njit(cache=True)
def _penta_lu(l2, l1, d, u1, u2, tol):
    n = d.size
    m2 = np.zeros(n, dtype=np.complex128)  # L[i, i-2]
    m1 = np.zeros(n, dtype=np.complex128)  # L[i, i-1]
    r0 = np.zeros(n, dtype=np.complex128)  # U[i, i]
    r1 = np.zeros(n, dtype=np.complex128)  # U[i, i+1]
    r2 = u2.copy()                         # U[i, i+2], untouched without pivoting
    for i in range(n):
        if i >= 2:
            m2[i] = l2[i] / r0[i - 2]
        if i >= 1:
            m1[i] = l1[i]
            if i >= 2:
                m1[i] -= m2[i] * r1[i - 2]
            m1[i] /= r0[i - 1]
        r0[i] = d[i]
        if i >= 2:
            r0[i] -= m2[i] * r2[i - 2]
        if i >= 1:
            r0[i] -= m1[i] * r1[i - 1]
        if abs(r0[i]) < tol:
            return m2, m1, r0, r1, r2, i
        r1[i] = u1[i]
        if i >= 1:
            r1[i] -= m1[i] * r2[i - 1]
    return m2, m1, r0, r1, r2, -1


@njit(cache=True)
def _penta_substitute(m2, m1, r0, r1, r2, rhs):
    n = r0.size
    y = np.empty(n, dtype=np.complex128)
    for i in range(n):
        acc = rhs[i]
        if i >= 1:
            acc -= m1[i] * y[i - 1]
        if i >= 2:
            acc -= m2[i] * y[i - 2]
        y[i] = acc
    x = np.empty(n, dtype=np.complex128)
    for i in range(n - 1, -1, -1):
        acc = y[i]
        if i + 1 < n:
            acc -= r1[i] * x[i + 1]
        if i + 2 < n:
            acc -= r2[i] * x[i + 2]
        x[i] = acc / r0[i]
    return x


@dataclass(frozen=True)
class PentaFactorization:
    """``A = L U`` with unit-lower ``L`` and upper ``U``, both of bandwidth 2.

    ``lower1``/``lower2`` hold the multipliers ``L[i, i-1]``/``L[i, i-2]``;
    ``pivots``, ``upper1``, ``upper2`` hold ``U[i, i]``, ``U[i, i+1]``, ``U[i, i+2]``.
    """

    lower2: np.ndarray
    lower1: np.ndarray
    pivots: np.ndarray
    upper1: np.ndarray
    upper2: np.ndarray

    @property
    def n(self) -> int:
        return self.pivots.size

    def factors(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense ``(L, U)``; only meant for inspection in tests."""
        n = self.n
        L = np.eye(n, dtype=np.complex128) + np.diag(self.lower1[1:], -1) + np.diag(self.lower2[2:], -2)
        U = np.diag(self.pivots) + np.diag(self.upper1[:-1], 1) + np.diag(self.upper2[:-2], 2)
        return L, U


def penta_factorize(sys: PentadiagonalSystem) -> PentaFactorization:
    if sys.n < 3:
        raise ValueError(f"pentadiagonal system needs N >= 3, got {sys.n}")
    l2, l1, u1, u2 = sys.bands()
    m2, m1, r0, r1, r2, bad = _penta_lu(l2, l1, sys.diag, u1, u2, PIVOT_TOL)
    if bad >= 0:
        raise SingularSystemError(
            f"zero pivot in banded LU at row {bad}; the unpivoted factorisation "
            "does not apply to this matrix")
    for arr in (m2, m1, r0, r1, r2):
        arr.setflags(write=False)
    return PentaFactorization(m2, m1, r0, r1, r2)


def penta_solve(fact: PentaFactorization, rhs) -> np.ndarray:
    """Forward then backward substitution of ``rhs`` through a cached factorisation."""
    rhs = np.ascontiguousarray(np.asarray(rhs, dtype=np.complex128))
    if rhs.shape != (fact.n,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({fact.n},)")
    return _penta_substitute(fact.lower2, fact.lower1, fact.pivots,
                             fact.upper1, fact.upper2, rhs)


def banded_matvec(diag, off1, vec, off2=None) -> np.ndarray:
    """Symmetric constant-band product, treating out-of-range entries as zero.

    ``y_j = a_j v_j + b (v_{j-1} + v_{j+1}) [+ c (v_{j-2} + v_{j+2})]``.
    """
    diag = np.asarray(diag, dtype=np.complex128)
    v = np.asarray(vec, dtype=np.complex128)
    if diag.shape != v.shape or diag.ndim != 1:
        raise ValueError(f"length mismatch: diag {diag.shape}, vec {v.shape}")
    y = diag * v
    y[1:] += off1 * v[:-1]
    y[:-1] += off1 * v[1:]
    if off2 is not None:
        y[2:] += off2 * v[:-2]
        y[:-2] += off2 * v[2:]
    return y


def dense_solve_oracle(matrix, rhs) -> np.ndarray:
    """Gaussian elimination with partial pivoting on a dense square matrix."""
    A = np.array(matrix, dtype=np.complex128)
    b = np.array(rhs, dtype=np.complex128)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise ValueError("matrix must be square and match rhs")
    tol = max(PIVOT_TOL, n * np.finfo(float).eps * np.abs(A).max(initial=0.0))
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= tol:
            raise SingularSystemError(f"singular matrix at column {k}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        f = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(f, A[k, k:])
        b[k + 1:] -= f * b[k]
    x = np.empty(n, dtype=np.complex128)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - A[k, k + 1:] @ x[k + 1:]) / A[k, k]
    return x
