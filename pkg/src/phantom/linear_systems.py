"""Plane curves with assigned multiplicities at general points.

``h^0(dH - sum m_i E_i)`` is the dimension of degree ``d`` forms vanishing to
order ``m_i`` at ``p_i``.  For general points it is computed here by choosing
random points over a prime field and taking the rank of the interpolation
conditions.  Specialising the points can only lose rank, so the answer is an
upper bound for the characteristic-zero generic value:

* ``0`` is a proof that the system is empty (``RANK_CERTIFICATE``);
* a positive answer is only a Monte Carlo estimate (``MONTE_CARLO``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .lattice import DivisorClass, cremona_reflection
from .linalg import MAX_PRIME, is_prime, rank_mod_p
from .numerical import ConsistencyError, chi_divisor, serre_partner

DEFAULT_PRIME = 2**31 - 1
DEFAULT_TRIALS = 3
SAMPLING_RETRIES = 100


class Certificate(str, Enum):
    RANK_CERTIFICATE = "RANK_CERTIFICATE"
    MONTE_CARLO = "MONTE_CARLO"


class Verdict(str, Enum):
    STANDARD_FORM = "STANDARD_FORM"
    NEGATIVE_DEGREE = "NEGATIVE_DEGREE"
    # some m_i > d >= 0: no nonzero form of degree d has such a point
    EXCESS_MULTIPLICITY = "EXCESS_MULTIPLICITY"
    EMPTY_BY_CLIP = "EMPTY_BY_CLIP"


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    trials: int = DEFAULT_TRIALS

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")

    def seeds(self) -> list[int]:
        return [self.seed + t for t in range(self.trials)]


# standard form and Cremona reduction


def is_standard_form(D: DivisorClass) -> bool:
    """``d >= m_1 >= ... >= m_n`` and ``d - m_1 - m_2 - m_3 >= 0``.

    With fewer than three points only the ordering is required.
    """
    chain = (D.d,) + D.m
    if any(a < b for a, b in zip(chain, chain[1:])):
        return False
    if D.n >= 3:
        return D.d - D.m[0] - D.m[1] - D.m[2] >= 0
    return True


@dataclass(frozen=True)
class ReductionStep:
    kind: str  # "sort" or "cremona"
    data: tuple[int, ...]  # source permutation (0-based) or 1-based Cremona triple

    def apply(self, D: DivisorClass) -> DivisorClass:
        if self.kind == "sort":
            return D.permuted(self.data)
        return cremona_reflection(D.n, *self.data)(D)

    def to_json(self) -> dict:
        return {"kind": self.kind, "data": list(self.data)}


@dataclass(frozen=True)
class ReductionTrace:
    start: DivisorClass
    steps: tuple[ReductionStep, ...]
    result: DivisorClass
    verdict: Verdict

    @property
    def cremona_steps(self) -> int:
        return sum(1 for s in self.steps if s.kind == "cremona")

    def replay(self) -> list[DivisorClass]:
        """Every intermediate class, starting with the input."""
        out = [self.start]
        for step in self.steps:
            out.append(step.apply(out[-1]))
        return out

    def to_json(self) -> dict:
        return {
            "input": str(self.start),
            "result": str(self.result),
            "verdict": self.verdict.value,
            "steps": [s.to_json() for s in self.steps],
        }


def standard_form_reduce(D: DivisorClass) -> ReductionTrace:
    """Sort multiplicities, apply the quadratic transformation at the three largest, repeat.

    Each Cremona step lowers the degree by ``m_1 + m_2 + m_3 - d > 0``, so the
    loop stops once the degree is negative if not earlier.
    """
    if D.n < 3:
        raise ValueError("standard-form reduction needs at least three points")
    steps: list[ReductionStep] = []
    cur = D
    while True:
        perm = tuple(sorted(range(cur.n), key=lambda i: -cur.m[i]))
        if perm != tuple(range(cur.n)):
            steps.append(ReductionStep("sort", perm))
            cur = cur.permuted(perm)
        if cur.d < 0:
            verdict = Verdict.NEGATIVE_DEGREE
            break
        if cur.m[0] > cur.d:
            verdict = Verdict.EXCESS_MULTIPLICITY
            break
        if cur.d - cur.m[0] - cur.m[1] - cur.m[2] >= 0:
            verdict = Verdict.STANDARD_FORM
            break
        step = ReductionStep("cremona", (1, 2, 3))
        steps.append(step)
        cur = step.apply(cur)
    return ReductionTrace(D, tuple(steps), cur, verdict)


def expected_dimension(D: DivisorClass) -> int:
    """The SHGH prediction ``max(0, chi)``; not a certified value."""
    return max(0, chi_divisor(D))


# finite-field interpolation oracle


def clip(D: DivisorClass) -> DivisorClass:
    """Drop negative multiplicities: adding ``E_i`` to a class never adds sections."""
    return DivisorClass(D.d, tuple(max(0, x) for x in D.m))


def monomial_exponents(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponents ``(i, j)`` of ``x^i y^j`` with ``i + j <= d`` (the chart ``z = 1``)."""
    pairs = [(i, j) for i in range(d + 1) for j in range(d + 1 - i)]
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def _shifted_powers(coord: int, d: int, m: int, p: int) -> np.ndarray:
    # table[s, i] = C(i, s) * coord^(i - s) mod p, zero for i < s
    table = np.zeros((m, d + 1), dtype=np.int64)
    powers = [1] * (d + 1)
    for e in range(1, d + 1):
        powers[e] = powers[e - 1] * coord % p
    for s in range(m):
        for i in range(s, d + 1):
            table[s, i] = math.comb(i, s) % p * powers[i - s] % p
    return table


def condition_matrix(D: DivisorClass, points, p: int) -> np.ndarray:
    """Rows: Taylor coefficients of order ``< m_k`` at each point; columns: monomials.

    The coefficient of ``u^s v^t`` in ``(a + u)^i (b + v)^j`` is
    ``C(i, s) a^(i-s) C(j, t) b^(j-t)``.  Expects clipped multiplicities.
    """
    if D.d < 0:
        return np.zeros((0, 0), dtype=np.int64)
    I, J = monomial_exponents(D.d)
    blocks = []
    for (a, b), m in zip(points, D.m):
        if m <= 0:
            continue
        A = _shifted_powers(a, D.d, m, p)
        B = _shifted_powers(b, D.d, m, p)
        S, T = zip(*[(s, t) for s in range(m) for t in range(m - s)])
        blocks.append(A[np.array(S)][:, I] * B[np.array(T)][:, J] % p)
    if not blocks:
        return np.zeros((0, len(I)), dtype=np.int64)
    return np.vstack(blocks)


def h0_at_points(D: DivisorClass, points, p: int) -> int:
    """Dimension of the linear system for one explicit point configuration (after clipping)."""
    D = clip(D)
    if D.d < 0:
        return 0
    cols = (D.d + 1) * (D.d + 2) // 2
    M = condition_matrix(D, points, p)
    if M.shape[0] == 0:
        return cols
    return cols - rank_mod_p(M, p)


def sample_points(n: int, p: int, seed: int) -> list[tuple[int, int]]:
    """``n`` distinct affine points ``(a, b, 1)`` over the field with ``p`` elements."""
    rng = np.random.default_rng(seed)
    for _ in range(SAMPLING_RETRIES):
        pts = [tuple(int(x) for x in row) for row in rng.integers(0, p, size=(n, 2))]
        if len(set(pts)) == n:
            return pts
    raise SamplingError(f"could not draw {n} distinct points over F_{p}")


def _check_oracle_params(D: DivisorClass, p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_PRIME:
        raise ValueError(f"prime {p} exceeds the supported maximum {MAX_PRIME}")
    biggest = max((D.d,) + D.m)
    if p <= biggest:
        raise ValueError(f"prime {p} must exceed the degree and every multiplicity (max {biggest})")


@dataclass(frozen=True)
class OracleResult:
    divisor: DivisorClass
    prime: int
    seeds: tuple[int, ...]
    values: tuple[int, ...]
    certificate: Certificate

    @property
    def value(self) -> int:
        return min(self.values)

    def to_json(self) -> dict:
        return {
            "divisor": str(self.divisor),
            "prime": self.prime,
            "seeds": list(self.seeds),
            "value": self.value,
            "values": list(self.values),
            "certificate": self.certificate.value,
        }


@lru_cache(maxsize=4096)
def _h0_sorted(d: int, m: tuple[int, ...], p: int, seed: int) -> int:
    D = DivisorClass(d, m)
    return h0_at_points(D, sample_points(D.n, p, seed), p)


def h0_oracle(D: DivisorClass, config: OracleConfig = OracleConfig()) -> OracleResult:
    """Generic ``h^0(D)`` from ``config.trials`` random configurations.

    Multiplicities are clipped at zero and sorted before sampling: for general
    points the answer only depends on the multiset, and sorting makes results
    shareable across relabelled divisors.  The reported value is the minimum
    over trials; 0 from any trial is a certificate.
    """
    p = config.prime
    _check_oracle_params(D, p)
    seeds = tuple(config.seeds())
    C = clip(D)
    if C.d < 0:
        return OracleResult(D, p, seeds, (0,) * len(seeds), Certificate.RANK_CERTIFICATE)
    d, m = C.sorted_key()
    values = tuple(_h0_sorted(d, m, p, s) for s in seeds)
    cert = Certificate.RANK_CERTIFICATE if min(values) == 0 else Certificate.MONTE_CARLO
    return OracleResult(D, p, seeds, values, cert)


@dataclass(frozen=True)
class CohomologyVector:
    h0: int
    h1: int
    h2: int
    certificate: Certificate
    seeds: tuple[int, ...] = field(default=())

    def __getitem__(self, k: int) -> int:
        return (self.h0, self.h1, self.h2)[k]

    def to_json(self) -> dict:
        return {"h0": self.h0, "h1": self.h1, "h2": self.h2,
                "certificate": self.certificate.value, "seeds": list(self.seeds)}


CONSISTENCY_RETRIES = 3


def cohomology_vector(D: DivisorClass, config: OracleConfig = OracleConfig()) -> CohomologyVector:
    """``(h^0, h^1, h^2)`` of ``O(D)`` via the oracle, Serre duality and Riemann-Roch.

    Every entry is an upper bound for the generic value.  The certificate is
    ``RANK_CERTIFICATE`` only when both oracle calls certified their value,
    i.e. when ``h^0 = h^2 = 0`` (and then ``h^1 = -chi`` exactly).
    """
    chi = chi_divisor(D)
    cfg = config
    for attempt in range(CONSISTENCY_RETRIES):
        r0 = h0_oracle(D, cfg)
        r2 = h0_oracle(serre_partner(D), cfg)
        h1 = r0.value + r2.value - chi
        if h1 >= 0:
            certified = r0.certificate == r2.certificate == Certificate.RANK_CERTIFICATE
            cert = Certificate.RANK_CERTIFICATE if certified else Certificate.MONTE_CARLO
            return CohomologyVector(r0.value, h1, r2.value, cert, r0.seeds)
        # non-generic sample; move to fresh seeds
        cfg = OracleConfig(cfg.prime, cfg.seed + 1_000_003 * (attempt + 1), cfg.trials)
    raise ConsistencyError(f"negative h^1 for {D} after {CONSISTENCY_RETRIES} attempts")
