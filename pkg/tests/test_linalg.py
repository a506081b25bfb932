import itertools
import random

import numpy as np
import pytest

from phantom.linalg import MAX_PRIME, checked, det_bareiss, is_prime, rank_mod_p


def reference_rank(rows, p):
    # plain Python elimination, no numpy, no compiled kernel
    rows = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] * inv % p
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def leibniz_det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= m[i][perm[i]]
        total += term
    return total


@pytest.mark.parametrize("p", [2, 3, 101, MAX_PRIME])
def test_rank_matches_reference(p):
    rng = random.Random(p)
    for _ in range(60):
        r, c = rng.randint(1, 9), rng.randint(1, 9)
        base = [[rng.randrange(p) for _ in range(c)] for _ in range(rng.randint(1, r))]
        # add dependent rows so that rank deficiency is common
        rows = base + [[(rng.randrange(3) * x + y) % p for x, y in zip(base[0], base[-1])] for _ in range(r)]
        assert rank_mod_p(rows, p) == reference_rank(rows, p)


def test_rank_mersenne_edge_values():
    p = MAX_PRIME
    m = np.array([[p - 1, p - 1, 1], [p - 1, 1, p - 1], [1, p - 1, p - 1]])
    assert rank_mod_p(m, p) == reference_rank(m.tolist(), p)
    assert rank_mod_p([[1, 2], [2, 4]], p) == 1
    assert rank_mod_p(np.zeros((3, 0)), p) == 0


def test_rank_rejects_large_prime():
    with pytest.raises(ValueError):
        rank_mod_p([[1]], 2**31 + 11)


def test_det_against_leibniz():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 5)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert det_bareiss(m) == leibniz_det(m)


def test_det_zero_pivot_and_empty():
    assert det_bareiss([[0, 1], [1, 0]]) == -1
    assert det_bareiss([[0, 0], [0, 1]]) == 0
    assert det_bareiss([]) == 1


def test_checked_bounds():
    assert checked(2**63 - 1) == 2**63 - 1
    with pytest.raises(OverflowError):
        checked(2**63)
    with pytest.raises(OverflowError):
        det_bareiss([[2**62, 0], [0, 2**62]])


def test_is_prime():
    primes = [p for p in range(2, 200) if all(p % q for q in range(2, p))]
    assert [p for p in range(200) if is_prime(p)] == primes
    assert is_prime(MAX_PRIME)
    assert not is_prime(2**31 + 1)
