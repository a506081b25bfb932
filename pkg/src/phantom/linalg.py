"""Exact linear algebra: rank over a prime field and integer determinants.

The prime-field rank works on ``int64`` arrays inside a compiled kernel.
Entries are kept reduced to ``[0, p)`` so a single product stays below
``2**62`` for any prime ``p < 2**31``.  The Mersenne prime ``2**31 - 1`` gets
a shift-and-mask reduction instead of an integer division.
"""

from __future__ import annotations

import numba
import numpy as np

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

# largest prime the int64 elimination can handle without intermediate overflow
MAX_PRIME = 2**31 - 1


def checked(value: int) -> int:
    """Return ``value`` unchanged, or raise if it leaves the signed 64-bit range."""
    if value > INT64_MAX or value < INT64_MIN:
        raise OverflowError(f"integer {value} does not fit in 64 bits")
    return value


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for every ``p < 3.3e24``."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@numba.njit(cache=True)
def _rank_kernel(a, p):  # pragma: no cover - compiled
    rows, cols = a.shape
    mersenne = p == 2147483647
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivot = -1
        for r in range(rank, rows):
            if a[r, col] != 0:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(col, cols):
                t = a[rank, j]
                a[rank, j] = a[pivot, j]
                a[pivot, j] = t
        base = a[rank, col]
        e = p - 2
        inv = 1
        while e:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(col + 1, cols):
            a[rank, j] = a[rank, j] * inv % p
        for i in range(rank + 1, rows):
            f = a[i, col]
            if f == 0:
                continue
            for j in range(col + 1, cols):
                t = f * a[rank, j]
                if mersenne:
                    t = (t & p) + (t >> 31)
                    t = (t & p) + (t >> 31)
                    if t >= p:
                        t -= p
                else:
                    t = t % p
                v = a[i, j] - t
                if v < 0:
                    v += p
                a[i, j] = v
            a[i, col] = 0
        rank += 1
    return rank


def rank_mod_p(matrix, p: int) -> int:
    """Rank of an integer matrix over the field with ``p`` elements."""
    if not 2 <= p <= MAX_PRIME:
        raise ValueError(f"prime {p} outside the supported range [2, 2**31 - 1]")
    a = np.array(matrix, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise ValueError("expected a two-dimensional matrix")
    if a.size == 0:
        return 0
    a %= p
    return int(_rank_kernel(a, np.int64(p)))


def det_bareiss(matrix) -> int:
    """Exact determinant of a square integer matrix by fraction-free elimination.

    Every intermediate value is a minor of the input; each one is checked
    against the 64-bit range so that an oversized input fails loudly.
    """
    a = [[checked(int(x)) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                # exact by Sylvester's identity
                a[i][j] = checked(num // prev)
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
