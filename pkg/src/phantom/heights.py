"""Relative heights and pseudoheights of collections of line bundles.

For line bundles ``Ext^k(O(A), O(B)) = H^k(O(B - A))``, so the relative
height ``e(A, B)`` is the first ``k`` with ``h^k(B - A) != 0``, or ``TOP`` when
all three groups vanish.  ``TOP`` is ``math.inf``: it sorts above every
integer and absorbs addition.

The oracle only ever over-reports cohomology, so every computed relative
height is at most the true one, and computed pseudoheights are lower bounds
for the true ones.  A computed ``ph_ac > -2`` therefore remains a valid
obstruction to fullness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .lattice import DivisorClass, canonical_class
from .linear_systems import CohomologyVector, OracleConfig, cohomology_vector
from .numerical import Collection

TOP = math.inf

SURFACE_DIM = 2


def relative_height(A: DivisorClass, B: DivisorClass, config: OracleConfig = OracleConfig()):
    """``e(O(A), O(B))`` as an int in {0, 1, 2}, or ``TOP``."""
    return height_of(cohomology_vector(B - A, config))


def height_of(h: CohomologyVector):
    for k in range(3):
        if h[k]:
            return k
    return TOP


def _fmt(value):
    return "TOP" if value == TOP else int(value)


@dataclass(frozen=True)
class ChainReport:
    """One chain ``a_0 < ... < a_p`` (0-based indices) and its value.

    ``edges`` are the forward relative heights, ``closing`` the height of
    the closing pair in the chosen twist (Serre or anticanonical).
    """

    chain: tuple[int, ...]
    edges: tuple
    closing: object
    closing_kind: str
    value: object

    @property
    def p(self) -> int:
        return len(self.chain) - 1

    def to_json(self) -> dict:
        return {
            "chain": list(self.chain),
            "edges": [
                {"from": a, "to": b, "height": _fmt(e)}
                for (a, b), e in zip(zip(self.chain, self.chain[1:]), self.edges)
            ],
            "closing": {"from": self.chain[-1], "to": self.chain[0], "kind": self.closing_kind,
                        "height": _fmt(self.closing)},
            "value": _fmt(self.value),
        }


@dataclass
class HeightTables:
    """Forward heights ``e(E_a, E_b)`` for ``a < b`` and closing heights
    ``e(E_b, E_a (x) omega^-1)`` for ``a <= b``, all 0-based."""

    forward: dict
    closing: dict
    size: int


def height_tables(c: Collection, config: OracleConfig = OracleConfig()) -> HeightTables:
    K = canonical_class(c.n)
    forward, closing = {}, {}
    for a, b in itertools.combinations(range(len(c)), 2):
        forward[a, b] = relative_height(c[a], c[b], config)
    for a in range(len(c)):
        for b in range(a, len(c)):
            closing[a, b] = relative_height(c[b], c[a] - K, config)
    return HeightTables(forward, closing, len(c))


def chain_value(chain: Sequence[int], tables: HeightTables, shift: int = 0):
    """``sum of edges + closing - p`` (+ ``shift`` on the closing term)."""
    edges = [tables.forward[a, b] for a, b in zip(chain, chain[1:])]
    closing = tables.closing[chain[0], chain[-1]] + shift
    return sum(edges) + closing - (len(chain) - 1)


def minimize_chains(tables: HeightTables, shift: int = 0, kind: str = "anticanonical") -> ChainReport | None:
    """Minimum of ``chain_value`` over all non-empty increasing chains.

    Shortest paths in the DAG of forward edges weighted ``e - 1``, one pass
    per start index.  ``None`` when every chain passes through ``TOP``.
    """
    k = tables.size
    best: ChainReport | None = None
    for a0 in range(k):
        dist = {a0: 0}
        prev: dict[int, int] = {}
        for b in range(a0 + 1, k):
            cand, arg = TOP, None
            for a in range(a0, b):
                if a not in dist:
                    continue
                w = dist[a] + tables.forward[a, b] - 1
                if w < cand:
                    cand, arg = w, a
            if arg is not None and cand != TOP:
                dist[b], prev[b] = cand, arg
        for ap, cost in dist.items():
            total = cost + tables.closing[a0, ap] + shift
            if total == TOP:
                continue
            if best is not None and total >= best.value:
                continue
            chain = [ap]
            while chain[-1] != a0:
                chain.append(prev[chain[-1]])
            chain.reverse()
            edges = tuple(tables.forward[x, y] for x, y in zip(chain, chain[1:]))
            best = ChainReport(tuple(chain), edges, tables.closing[a0, ap] + shift, kind, total)
    return best


def brute_force_minimum(tables: HeightTables, shift: int = 0):
    """Same minimum by listing all ``2^k - 1`` chains; for cross-checks only."""
    best = TOP
    for r in range(1, tables.size + 1):
        for chain in itertools.combinations(range(tables.size), r):
            best = min(best, chain_value(chain, tables, shift))
    return best


@dataclass(frozen=True)
class PseudoheightResult:
    value: object
    witness: ChainReport | None
    tables: HeightTables

    def to_json(self) -> dict:
        return {"value": _fmt(self.value), "witness": self.witness.to_json() if self.witness else None}


def _result(tables: HeightTables, shift: int, kind: str) -> PseudoheightResult:
    report = minimize_chains(tables, shift, kind)
    return PseudoheightResult(report.value if report else TOP, report, tables)


def pseudoheight(c: Collection, config: OracleConfig = OracleConfig(),
                 tables: HeightTables | None = None) -> PseudoheightResult:
    """Pseudoheight with the Serre-twisted closing term.

    ``S^-1(E) = E (x) omega^-1 [-2]`` and shifting down by 2 raises every
    Ext-degree by 2, so the closing term is the anticanonical one plus 2.
    """
    tables = tables or height_tables(c, config)
    return _result(tables, SURFACE_DIM, "serre")


def anticanonical_pseudoheight(c: Collection, config: OracleConfig = OracleConfig(),
                               tables: HeightTables | None = None) -> PseudoheightResult:
    tables = tables or height_tables(c, config)
    return _result(tables, 0, "anticanonical")


@dataclass(frozen=True)
class NotFullEvidence:
    not_full: bool
    ph_ac: PseudoheightResult

    def to_json(self) -> dict:
        t = self.ph_ac.tables
        return {
            "not_full": self.not_full,
            "ph_ac": self.ph_ac.to_json(),
            "bound": -SURFACE_DIM,
            "forward_heights": [
                {"from": a, "to": b, "height": _fmt(e)} for (a, b), e in sorted(t.forward.items())
            ],
        }


def not_full_criterion(c: Collection, config: OracleConfig = OracleConfig()) -> NotFullEvidence:
    """``ph_ac > -dim X`` forces positive height, and positive height forbids fullness.

    Assumes ``c`` is already known to be exceptional.  A ``False`` answer
    only means the criterion found no obstruction.
    """
    ph = anticanonical_pseudoheight(c, config)
    return NotFullEvidence(ph.value > -SURFACE_DIM, ph)


@dataclass(frozen=True)
class PresiltingViolation:
    a: int
    b: int
    degree: int
    dimension: int

    def to_json(self) -> dict:
        return {"from": self.a, "to": self.b, "ext_degree": self.degree, "dimension": self.dimension}


class PresiltingResult(NamedTuple):
    ok: bool
    violations: list[PresiltingViolation]

    @property
    def first(self) -> PresiltingViolation | None:
        return self.violations[0] if self.violations else None


def presilting_check(c: Collection, shifts: Sequence[int], config: OracleConfig = OracleConfig()) -> PresiltingResult:
    """Is ``P = sum O(D_a)[s_a]`` free of positive self-extensions?

    ``Hom(P, P[i]) = sum Ext^(s_b - s_a + i)(O(D_a), O(D_b))``; only degrees
    0..2 can be nonzero.  Every offending ``(a, b, k)`` is listed, pairs in
    row-major order with 0-based indices.
    """
    if len(shifts) != len(c):
        raise ValueError(f"{len(shifts)} shifts for a collection of length {len(c)}")
    violations = []
    for a, b in itertools.product(range(len(c)), repeat=2):
        lowest = max(0, shifts[b] - shifts[a] + 1)
        if lowest > 2:
            continue
        h = cohomology_vector(c[b] - c[a], config)
        violations += [PresiltingViolation(a, b, k, h[k]) for k in range(lowest, 3) if h[k]]
    return PresiltingResult(not violations, violations)
