"""Exact integer/rational linear algebra for adjacency-matrix certification.

Everything is deterministic and exact: the rational path does fraction-free
(Bareiss) elimination over Python integers, the modular path does vectorized
elimination over a fixed prime field.  Because rank over F_p never exceeds
rank over Q, a full-rank or corank-one result mod p can certify the rational
rank exactly once an explicit kernel vector is checked; a failed modular
certificate is never an error, it just falls back to the exact path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .primes import is_prime

# Largest Mersenne prime below 2**31.  Row updates f*x with f, x < p then fit
# comfortably in int64, which keeps the modular elimination fully vectorized.
DEFAULT_PRIME = 2**31 - 1

EXACT_ELIMINATION = "exact-elimination"
MODULAR_PLUS_KERNEL = "modular-plus-kernel"
MODULAR_RANK_FULL = "modular-rank-full"


class CandidateNotInKernel(ValueError):
    """Raised when a claimed kernel vector fails A*v = 0."""


@dataclass(frozen=True)
class NullityResult:
    """Exact nullity with a rational kernel basis and the method that proved it."""

    nullity: int
    basis: tuple[tuple[Fraction, ...], ...]
    method: str


def _int_rows(matrix) -> list[list[int]]:
    """Copy an array-like of integers into plain Python-int rows."""
    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        return [[int(x) for x in row] for row in matrix]
    rows = [[int(x) for x in row] for row in matrix]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.  Returns (echelon rows, pivot columns).

    Row operations are of the form row_i <- (p*row_i - m*row_r) / prev_pivot
    with exact integer division, so the row space (hence the kernel) is
    preserved while intermediate entries stay determinant-sized.
    """
    m = [row[:] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pivot = m[r][c]
        for i in range(r + 1, n_rows):
            row_i = m[i]
            row_r = m[r]
            f = row_i[c]
            for j in range(c, n_cols):
                q, rem = divmod(pivot * row_i[j] - f * row_r[j], prev)
                if rem:
                    raise ArithmeticError("inexact division in fraction-free step")
                row_i[j] = q
        prev = pivot
        piv_cols.append(c)
        r += 1
        if r == n_rows:
            break
    return m, piv_cols


def rank_rational(matrix) -> int:
    """Exact rank over the rationals (fraction-free elimination)."""
    rows = _int_rows(matrix)
    if not rows:
        return 0
    _, piv_cols = _bareiss_echelon(rows)
    return len(piv_cols)


def _normalize(vec: list[Fraction]) -> tuple[Fraction, ...]:
    """Scale so the first nonzero coordinate is 1 (canonical representative)."""
    lead = next((x for x in vec if x), None)
    if lead is None or lead == 1:
        return tuple(vec)
    return tuple(x / lead for x in vec)


def nullspace_rational(matrix) -> NullityResult:
    """Exact nullity and kernel basis of a square integer matrix over Q.

    The basis vectors are indexed by the free columns in ascending order and
    each is scaled so its first nonzero coordinate is 1; the result is
    therefore deterministic.
    """
    rows = _int_rows(matrix)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n == 0:
        return NullityResult(0, (), EXACT_ELIMINATION)
    ech, piv_cols = _bareiss_echelon(rows)
    piv_set = set(piv_cols)
    free_cols = [c for c in range(n) if c not in piv_set]
    basis = []
    for f in free_cols:
        x: list[Fraction] = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r in reversed(range(len(piv_cols))):
            c = piv_cols[r]
            row = ech[r]
            s = sum((row[j] * x[j] for j in range(c + 1, n) if row[j] and x[j]), Fraction(0))
            x[c] = -s / row[c]
        basis.append(_normalize(x))
    return NullityResult(len(free_cols), tuple(basis), EXACT_ELIMINATION)


def rank_mod_p(matrix, p: int = DEFAULT_PRIME) -> int:
    """Rank of the matrix reduced mod the prime p, by elimination over F_p.

    Always a lower bound for the rational rank.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    rows = _int_rows(matrix)
    if not rows:
        return 0
    if p < 2**31:
        return _rank_mod_p_vectorized(rows, p)
    return _rank_mod_p_generic(rows, p)


def _rank_mod_p_vectorized(rows: list[list[int]], p: int) -> int:
    mat = np.array([[x % p for x in row] for row in rows], dtype=np.int64)
    n_rows, n_cols = mat.shape
    r = 0
    for c in range(n_cols):
        nz = np.nonzero(mat[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            mat[[r, piv]] = mat[[piv, r]]
        inv = pow(int(mat[r, c]), -1, p)
        mat[r, c:] = (mat[r, c:] * inv) % p
        below = np.nonzero(mat[r + 1 :, c])[0] + r + 1
        if below.size:
            mat[below, c:] = (mat[below, c:] - np.outer(mat[below, c], mat[r, c:])) % p
        r += 1
        if r == n_rows:
            break
    return r


def _rank_mod_p_generic(rows: list[list[int]], p: int) -> int:
    mat = [[x % p for x in row] for row in rows]
    n_rows = len(mat)
    n_cols = len(mat[0])
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if mat[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [x * inv % p for x in mat[r]]
        for i in range(r + 1, n_rows):
            f = mat[i][c]
            if f:
                row_r = mat[r]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], row_r)]
        r += 1
        if r == n_rows:
            break
    return r


def _as_fraction_vector(vec) -> list[Fraction]:
    return [x if isinstance(x, Fraction) else Fraction(x) for x in vec]


def kernel_check(matrix, vec) -> bool:
    """Exactly decide whether A*v = 0 for a nonzero rational vector v."""
    vf = _as_fraction_vector(vec)
    if all(x == 0 for x in vf):
        raise ValueError("zero vector: kernel membership is vacuous")
    scale = lcm(*(x.denominator for x in vf)) if vf else 1
    w = [int(x * scale) for x in vf]
    if isinstance(matrix, np.ndarray):
        if matrix.ndim != 2 or matrix.shape[1] != len(w):
            raise ValueError("vector length does not match matrix columns")
        bound = int(np.abs(matrix).max(initial=0)) * max(abs(x) for x in w) * len(w)
        if bound < 2**62:
            prod = matrix.astype(np.int64) @ np.array(w, dtype=np.int64)
            return not np.any(prod)
        rows = _int_rows(matrix)
    else:
        rows = _int_rows(matrix)
        if rows and len(rows[0]) != len(w):
            raise ValueError("vector length does not match matrix columns")
    for row in rows:
        if sum(a * x for a, x in zip(row, w) if a):
            return False
    return True


def certify_nullity_one(matrix, candidate, p: int = DEFAULT_PRIME) -> NullityResult:
    """Certify nullity exactly 1 from a candidate kernel vector.

    Soundness: a verified kernel vector gives rank over Q <= N-1, and
    rank mod p <= rank over Q always, so rank mod p = N-1 pins the rational
    rank at N-1, i.e. nullity exactly 1.  If the modular rank check fails the
    exact elimination path decides instead.

    Raises CandidateNotInKernel when the candidate fails A*v = 0.
    """
    rows_n = matrix.shape[0] if isinstance(matrix, np.ndarray) else len(matrix)
    if not kernel_check(matrix, candidate):
        raise CandidateNotInKernel("candidate not in kernel")
    if rank_mod_p(matrix, p) == rows_n - 1:
        vf = _as_fraction_vector(candidate)
        return NullityResult(1, (_normalize(vf),), MODULAR_PLUS_KERNEL)
    return nullspace_rational(matrix)
