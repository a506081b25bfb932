"""Riemann-Roch, the Euler pairing on line bundles, and K_0 checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .lattice import DivisorClass, canonical_class, intersect
from .linalg import det_bareiss


class ConsistencyError(ArithmeticError):
    """An identity that must hold exactly was violated."""


def chi_divisor(D: DivisorClass) -> int:
    """Euler characteristic ``1 + (D^2 - D.K) / 2`` of ``O(D)``."""
    num = intersect(D, D) - intersect(D, canonical_class(D.n))
    if num % 2:
        raise ConsistencyError(f"D^2 - D.K is odd for {D}")
    return 1 + num // 2


def euler_pairing(A: DivisorClass, B: DivisorClass) -> int:
    """``chi(O(A), O(B)) = chi(O(B - A))``."""
    return chi_divisor(B - A)


@dataclass(frozen=True)
class Collection:
    """Ordered line bundles ``O(D_1), ..., O(D_k)`` on the same blow-up."""

    entries: tuple[DivisorClass, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("a collection needs at least one entry")
        if len({D.n for D in entries}) != 1:
            raise ValueError("all entries of a collection must live on the same blow-up")
        labels = tuple(self.labels) or tuple(str(D) for D in entries)
        if len(labels) != len(entries):
            raise ValueError("need one label per entry")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.entries[0].n

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def twisted(self, T: DivisorClass) -> Collection:
        return Collection(tuple(D + T for D in self.entries), self.labels)

    def normalized(self) -> tuple[DivisorClass, ...]:
        """Entries with the first one subtracted: the collection up to common twist."""
        first = self.entries[0]
        return tuple(D - first for D in self.entries)


def standard_collection(n: int = 10) -> Collection:
    """The full strong collection ``O, O(E_1), ..., O(E_n), O(H), O(2H)``."""
    H = DivisorClass.hyperplane(n)
    entries = [DivisorClass.zero(n)] + [DivisorClass.exceptional(n, i) for i in range(1, n + 1)] + [H, 2 * H]
    labels = ["O"] + [f"O(E{i})" for i in range(1, n + 1)] + ["O(H)", "O(2H)"]
    return Collection(tuple(entries), tuple(labels))


@dataclass(frozen=True)
class GramMatrix:
    rows: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def gram_matrix(c: Collection) -> GramMatrix:
    return GramMatrix(tuple(tuple(euler_pairing(a, b) for b in c) for a in c))


class Violation(NamedTuple):
    row: int
    col: int
    value: int


class ExceptionalityCheck(NamedTuple):
    ok: bool
    violation: Violation | None


def is_numerically_exceptional(c: Collection) -> ExceptionalityCheck:
    """Unit upper-triangular Gram matrix?  Reports the first offender in row-major order (1-based)."""
    g = gram_matrix(c)
    for i, row in enumerate(g.rows):
        for j, value in enumerate(row):
            if (i == j and value != 1) or (i > j and value != 0):
                return ExceptionalityCheck(False, Violation(i + 1, j + 1, value))
    return ExceptionalityCheck(True, None)


@dataclass(frozen=True)
class K0Vector:
    rank: int
    c1: DivisorClass
    chi: int

    def flat(self) -> tuple[int, ...]:
        return (self.rank,) + self.c1.coordinates() + (self.chi,)


def k0_vector(D: DivisorClass) -> K0Vector:
    return K0Vector(1, D, chi_divisor(D))


class BasisCheck(NamedTuple):
    ok: bool
    determinant: int | None
    reason: str


def is_maximal_length_basis(c: Collection) -> BasisCheck:
    """Do the classes ``[O(D_k)]`` form a basis of ``K_0 = Z^(n+3)``?"""
    expected = c.n + 3
    if len(c) != expected:
        return BasisCheck(False, None, f"wrong length: {len(c)} entries, K_0 has rank {expected}")
    det = det_bareiss([k0_vector(D).flat() for D in c])
    if abs(det) == 1:
        return BasisCheck(True, det, "unimodular")
    return BasisCheck(False, det, f"determinant {det} is not a unit")


def serre_partner(D: DivisorClass) -> DivisorClass:
    """``K - D``: Serre duality gives ``h^2(D) = h^0(K - D)``."""
    return canonical_class(D.n) - D

