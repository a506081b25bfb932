"""Picard lattice of the plane blown up in ``n`` points.

A class ``dH - m_1 E_1 - ... - m_n E_n`` is stored as ``DivisorClass(d, m)``,
so classes like ``E_1`` carry *negative* stored multiplicities.  The
intersection form is ``H^2 = 1``, ``E_i^2 = -1`` and all other products zero.

Point indices are 1-based throughout, matching the usual ``E_1, ..., E_n``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import checked, det_bareiss

_LITERAL = re.compile(r"-?\d+")


class DivisorParseError(ValueError):
    """A divisor literal did not match ``d;m1,...,mn``."""

    def __init__(self, text: str, position: int, reason: str):
        super().__init__(f"{reason} at position {position} in {text!r}")
        self.text = text
        self.position = position


@dataclass(frozen=True)
class DivisorClass:
    d: int
    m: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(checked(int(x)) for x in self.m))
        object.__setattr__(self, "d", checked(int(self.d)))

    @property
    def n(self) -> int:
        return len(self.m)

    # constructors

    @classmethod
    def zero(cls, n: int) -> DivisorClass:
        return cls(0, (0,) * n)

    @classmethod
    def hyperplane(cls, n: int) -> DivisorClass:
        return cls(1, (0,) * n)

    @classmethod
    def exceptional(cls, n: int, i: int) -> DivisorClass:
        """The class ``E_i`` (1-based)."""
        if not 1 <= i <= n:
            raise IndexError(f"point index {i} outside 1..{n}")
        return cls(0, tuple(-1 if j == i else 0 for j in range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> DivisorClass:
        """Parse the literal ``"d;m1,m2,...,mn"`` (no whitespace, ``"d;"`` for n = 0)."""
        head, sep, tail = text.partition(";")
        if not sep:
            raise DivisorParseError(text, len(text), "missing ';'")
        if not _LITERAL.fullmatch(head):
            raise DivisorParseError(text, 0, "degree is not an integer")
        m: list[int] = []
        pos = len(head) + 1
        if tail:
            for part in tail.split(","):
                if not _LITERAL.fullmatch(part):
                    raise DivisorParseError(text, pos, "bad multiplicity")
                m.append(int(part))
                pos += len(part) + 1
        return cls(int(head), tuple(m))

    def __str__(self) -> str:
        return f"{self.d};" + ",".join(str(x) for x in self.m)

    # arithmetic

    def _same_rank(self, other: DivisorClass) -> None:
        if self.n != other.n:
            raise ValueError(f"divisor classes live on different blow-ups ({self.n} vs {other.n} points)")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._same_rank(other)
        return DivisorClass(checked(self.d + other.d), tuple(checked(a + b) for a, b in zip(self.m, other.m)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._same_rank(other)
        return DivisorClass(checked(self.d - other.d), tuple(checked(a - b) for a, b in zip(self.m, other.m)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(-self.d, tuple(-x for x in self.m))

    def __mul__(self, k: int) -> DivisorClass:
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(checked(k * self.d), tuple(checked(k * x) for x in self.m))

    __rmul__ = __mul__

    def coordinates(self) -> tuple[int, ...]:
        """Coordinates in the basis ``(H, E_1, ..., E_n)``."""
        return (self.d,) + tuple(-x for x in self.m)

    @classmethod
    def from_coordinates(cls, coords: Sequence[int]) -> DivisorClass:
        return cls(coords[0], tuple(-x for x in coords[1:]))

    def permuted(self, perm: Sequence[int]) -> DivisorClass:
        """Class whose i-th multiplicity is ``m[perm[i]]`` (0-based source indices)."""
        return DivisorClass(self.d, tuple(self.m[j] for j in perm))

    def sorted_key(self) -> tuple[int, tuple[int, ...]]:
        """Representative of the class up to relabelling the points."""
        return self.d, tuple(sorted(self.m, reverse=True))


def intersect(a: DivisorClass, b: DivisorClass) -> int:
    a._same_rank(b)
    total = a.d * b.d - sum(x * y for x, y in zip(a.m, b.m))
    return checked(total)


def canonical_class(n: int) -> DivisorClass:
    """``K = -3H + E_1 + ... + E_n``."""
    if n < 0:
        raise ValueError("number of points must be non-negative")
    return DivisorClass(-3, (-1,) * n)


def basis(n: int) -> list[DivisorClass]:
    return [DivisorClass.hyperplane(n)] + [DivisorClass.exceptional(n, i) for i in range(1, n + 1)]


def gram(n: int) -> list[list[int]]:
    return [[intersect(u, v) for v in basis(n)] for u in basis(n)]


@dataclass(frozen=True)
class LatticeIsometry:
    """Integer matrix acting on coordinates in the basis ``(H, E_1, ..., E_n)``.

    Column ``j`` holds the image of the ``j``-th basis vector.
    """

    n: int
    matrix: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        rows = tuple(tuple(checked(int(x)) for x in row) for row in self.matrix)
        if len(rows) != self.n + 1 or any(len(r) != self.n + 1 for r in rows):
            raise ValueError(f"isometry of a rank {self.n + 1} lattice needs a square matrix of that size")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def from_map(cls, n: int, fn, name: str = "") -> LatticeIsometry:
        """Tabulate a linear map given as a function on divisor classes."""
        images = [fn(v).coordinates() for v in basis(n)]
        return cls(n, tuple(tuple(images[j][i] for j in range(n + 1)) for i in range(n + 1)), name)

    def __call__(self, D: DivisorClass) -> DivisorClass:
        return apply_isometry(self, D)

    def compose(self, other: LatticeIsometry) -> LatticeIsometry:
        """``self`` after ``other``."""
        if self.n != other.n:
            raise ValueError("cannot compose isometries of different rank")
        size = self.n + 1
        prod = tuple(
            tuple(checked(sum(self.matrix[i][k] * other.matrix[k][j] for k in range(size))) for j in range(size))
            for i in range(size)
        )
        name = f"{self.name}*{other.name}" if self.name and other.name else ""
        return LatticeIsometry(self.n, prod, name)

    def determinant(self) -> int:
        return det_bareiss(self.matrix)

    def preserves_form(self) -> bool:
        images = [self(v) for v in basis(self.n)]
        return [[intersect(u, v) for v in images] for u in images] == gram(self.n)

    def fixes_canonical(self) -> bool:
        K = canonical_class(self.n)
        return self(K) == K


def apply_isometry(iso: LatticeIsometry, D: DivisorClass) -> DivisorClass:
    if iso.n != D.n:
        raise ValueError(f"isometry acts on {iso.n} points, divisor has {D.n}")
    v = D.coordinates()
    out = [checked(sum(row[j] * v[j] for j in range(len(v)))) for row in iso.matrix]
    return DivisorClass.from_coordinates(out)


def identity_isometry(n: int) -> LatticeIsometry:
    return LatticeIsometry(n, tuple(tuple(int(i == j) for j in range(n + 1)) for i in range(n + 1)), "id")


def iota_involution(n: int = 10) -> LatticeIsometry:
    """``v -> -v - 2 (v.K) K``: minus one on the orthogonal complement of K, identity on K.

    Only integral and well defined when ``K^2 = -1``, i.e. for ten points.
    """
    if n != 10:
        raise ValueError(f"the involution needs K^2 = -1 (10 points), got {n} points")
    K = canonical_class(n)
    return LatticeIsometry.from_map(n, lambda v: -v - (2 * intersect(v, K)) * K, "iota")


def cremona_reflection(n: int, i: int, j: int, k: int) -> LatticeIsometry:
    """Reflection in the root ``r = H - E_i - E_j - E_k``: ``v -> v + (v.r) r``."""
    idx = (i, j, k)
    if n < 3 or len(set(idx)) != 3 or not all(1 <= t <= n for t in idx):
        raise ValueError(f"cremona_reflection needs three distinct indices in 1..{n}, got {idx}")
    H = DivisorClass.hyperplane(n)
    r = H - DivisorClass.exceptional(n, i) - DivisorClass.exceptional(n, j) - DivisorClass.exceptional(n, k)
    return LatticeIsometry.from_map(n, lambda v: v + intersect(v, r) * r, f"cremona({i},{j},{k})")


def permutation_isometry(n: int, perm: Sequence[int]) -> LatticeIsometry:
    """Relabel points: ``E_i -> E_{perm[i-1]}`` (1-based images)."""
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    images = {i: perm[i - 1] for i in range(1, n + 1)}

    def act(v: DivisorClass) -> DivisorClass:
        m = [0] * n
        for i, mult in enumerate(v.m, start=1):
            m[images[i] - 1] = mult
        return DivisorClass(v.d, tuple(m))

    return LatticeIsometry.from_map(n, act, f"perm{tuple(perm)}")


@dataclass(frozen=True)
class MinusOneClass:
    cls: DivisorClass

    def __post_init__(self):
        K = canonical_class(self.cls.n)
        if intersect(self.cls, self.cls) != -1 or intersect(self.cls, K) != -1:
            raise ValueError(f"{self.cls} is not a (-1)-class")


def _signed_vectors(n: int, total: int, squares: int, bound: int) -> Iterable[tuple[int, ...]]:
    # integer vectors with given sum and sum of squares, entries in [-bound, bound]
    if n == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    for b in range(-bound, bound + 1):
        rest_sq = squares - b * b
        if rest_sq < 0:
            continue
        rest = total - b
        # Cauchy-Schwarz: rest^2 <= (n-1) * rest_sq
        if rest * rest > (n - 1) * rest_sq:
            continue
        for tail in _signed_vectors(n - 1, rest, rest_sq, bound):
            yield (b,) + tail


def enumerate_minus_one_classes(n: int, degree_bound: int) -> list[MinusOneClass]:
    """All ``C = aH - sum b_i E_i`` with ``0 <= a <= degree_bound``, ``C^2 = -1``, ``C.K = -1``.

    The two conditions read ``sum b_i = 3a - 1`` and ``sum b_i^2 = a^2 + 1``,
    which also bounds ``|b_i| <= a + 1``.  Output is sorted by ``(a, b)``.
    """
    if degree_bound < 0:
        raise ValueError("degree bound must be non-negative")
    found = []
    for a in range(degree_bound + 1):
        for b in _signed_vectors(n, 3 * a - 1, a * a + 1, a + 1):
            found.append((a, b))
    found.sort()
    return [MinusOneClass(DivisorClass(a, b)) for a, b in found]



def _sorted_vectors(n: int, total: int, squares: int, hi: int, lo: int) -> Iterable[tuple[int, ...]]:
    # non-increasing vectors with entries in [lo, hi]
    if n == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    for b in range(hi, lo - 1, -1):
        rest_sq = squares - b * b
        if rest_sq < 0:
            continue
        rest = total - b
        if rest * rest > (n - 1) * rest_sq:
            continue
        for tail in _sorted_vectors(n - 1, rest, rest_sq, b, lo):
            yield (b,) + tail


def minus_one_orbit_representatives(n: int, degree_bound: int) -> list[DivisorClass]:
    """One (-1)-class per orbit of point relabellings, multiplicities non-increasing."""
    reps = []
    for a in range(degree_bound + 1):
        for b in _sorted_vectors(n, 3 * a - 1, a * a + 1, a + 1, -(a + 1)):
            reps.append(DivisorClass(a, b))
    return reps


def min_minus_one_pairing(D: DivisorClass, degree_bound: int) -> tuple[int, DivisorClass | None]:
    """Smallest ``C.D`` over all (-1)-classes of degree at most ``degree_bound``.

    Within a relabelling orbit ``C.D = a d - sum b_i m_i`` is smallest when the
    b's and m's are sorted the same way (rearrangement inequality), so only the
    sorted representatives are scanned.  Returns ``(value, witness)``; the
    witness is ``None`` when there are no classes in range.
    """
    order = sorted(range(D.n), key=lambda i: -D.m[i])
    best, witness = None, None
    for rep in minus_one_orbit_representatives(D.n, degree_bound):
        b = [0] * D.n
        for slot, i in enumerate(order):
            b[i] = rep.m[slot]
        C = DivisorClass(rep.d, tuple(b))
        value = intersect(C, D)
        if best is None or value < best:
            best, witness = value, C
    return (best if best is not None else 0), witness
