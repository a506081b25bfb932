import json

import pytest

from phantom.lattice import DivisorClass, LatticeIsometry, cremona_reflection, iota_involution
from phantom.numerical import Collection, gram_matrix, is_numerically_exceptional, standard_collection
from phantom.verifier import (
    ListEntry,
    Tag,
    TheoremConfig,
    build_theorem_collection,
    orbit_search,
    verify_exceptionality,
    verify_theorem,
    vanishing_lists,
)

N = 10


def test_theorem_collection_entries(theorem):
    assert len(theorem) == 13
    assert theorem[0] == DivisorClass.zero(N)
    assert theorem[1] == DivisorClass(-6, (-1,) + (-2,) * 9)
    assert theorem[11] == DivisorClass(-19, (-6,) * 10)
    assert theorem[12] == DivisorClass(-38, (-12,) * 10)
    assert theorem.labels[0] == "O" and theorem.labels[-1] == "2F"


def test_vanishing_lists():
    first, second = vanishing_lists()
    assert len(first) == 32
    keys = {e.divisor.sorted_key() for e in first}
    assert (32, (11,) + (10,) * 9) in keys
    assert (19, (6,) * 10) in keys
    assert (38, (12,) * 10) in keys
    assert (6, (2,) * 9 + (1,)) in keys
    assert (13, (5,) + (4,) * 9) in keys
    assert len(second) == 10 + 2 + 10 + 10 + 90
    assert all(e.tag is Tag.TRIVIAL_VANISHING for e in second)


def test_exceptionality_stage():
    stage = verify_exceptionality(TheoremConfig())
    assert stage.passed
    per_divisor = [c for c in stage.certificates if "name" in c]
    assert len(per_divisor) == 32
    assert all(c["certificate"] == "RANK_CERTIFICATE" and c["values"] == [0, 0, 0] for c in per_divisor)
    assert len({tuple(c["seeds"]) for c in per_divisor}) == 1 and len(per_divisor[0]["seeds"]) == 3


def test_tampered_divisor_fails_before_oracle():
    bad = DivisorClass(6, (2,) * 9 + (0,))
    stage = verify_exceptionality(TheoremConfig(), [ListEntry("tampered", bad)])
    assert not stage.passed
    assert stage.witnesses[0]["chi"] == 1
    assert not [c for c in stage.certificates if "name" in c]


def test_prime_guard():
    with pytest.raises(ValueError):
        TheoremConfig(prime=31)


def test_verify_theorem_default():
    report = verify_theorem()
    assert report.passed
    names = [s.name for s in report.stages]
    assert names == ["construction", "numerically_exceptional", "maximal_length", "exceptionality",
                     "not_full", "presilting"]
    payload = report.to_json()
    assert payload["schema"] == 1 and payload["verdict"] == "pass"
    assert "MONTE_CARLO" not in json.dumps(payload["stages"][3])


def test_verify_theorem_is_deterministic():
    cfg = TheoremConfig(seed=3, trials=1, degree_bound=4)
    a = json.dumps(verify_theorem(cfg).to_json(durations=False), sort_keys=True)
    b = json.dumps(verify_theorem(cfg).to_json(durations=False), sort_keys=True)
    assert a == b


def test_replacing_D1_breaks_numerical_stage(theorem):
    entries = list(theorem.entries)
    entries[1] = DivisorClass.exceptional(N, 1)
    report = verify_theorem(TheoremConfig(trials=1, degree_bound=2), Collection(tuple(entries)))
    stage = {s.name: s for s in report.stages}["numerically_exceptional"]
    assert not stage.passed
    assert stage.witnesses[0]["value"] != 0
    assert report.verdict == "fail"


def test_orbit_search_iota_finds_theorem(theorem):
    found = orbit_search([iota_involution()], standard_collection(), 1)
    assert theorem.normalized() in {c.normalized() for c in found}


def test_orbit_search_empty_generators():
    base = standard_collection()
    assert orbit_search([], base, 3) == [base]


def test_orbit_search_cremona():
    c = cremona_reflection(N, 1, 2, 3)
    found = orbit_search([c, iota_involution()], standard_collection(), 2)
    assert len(found) > 2
    for col in found:
        assert is_numerically_exceptional(col).ok
        assert gram_matrix(col) == gram_matrix(standard_collection())


def test_orbit_search_rejects_non_K_fixing():
    minus_id = LatticeIsometry(N, tuple(tuple(-int(i == j) for j in range(N + 1)) for i in range(N + 1)))
    with pytest.raises(ValueError):
        orbit_search([minus_id], standard_collection(), 1)
