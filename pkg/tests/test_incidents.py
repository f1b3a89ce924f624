import itertools
import json
import warnings

import pytest

from ecoscope.errors import EmptyInputError
from ecoscope.incidents import (
    AttackType,
    Goal,
    IncidentRecord,
    Strategy,
    TaxonomyWarning,
    Vector,
    Victims,
    dump_incidents,
    incident_summary,
    load_incidents,
    read_incidents,
)


@pytest.fixture(scope="module")
def bundled():
    return load_incidents()


def by_id(records):
    return {r.id: r for r in records}


def test_eight_incidents(bundled):
    assert len(bundled) == 8


def test_eslint_scope(bundled):
    r = by_id(bundled)["eslint-scope"]
    assert r.attack_type is AttackType.DIRECT
    assert r.strategy is Strategy.CREDENTIAL_STEALING
    assert r.vector is Vector.INSTALLATION_SCRIPT
    assert r.victims is Victims.FIRST_PARTY
    assert r.goal is Goal.CREDENTIAL_THEFT
    assert r.time_to_discovery_days == 0


def test_event_stream(bundled):
    r = by_id(bundled)["event-stream"]
    assert r.attack_type is AttackType.INFLUENCER
    assert r.vector is Vector.PACKAGE_CODE
    assert r.goal is Goal.CRYPTO_THEFT
    assert r.time_to_discovery_days == 46


def test_table_values(bundled):
    ttd = sorted(r.time_to_discovery_days for r in bundled)
    assert ttd == [0, 0, 1.5, 3, 12, 20, 46, 99]
    # goals kept distinct, including the two outside the three named classes
    goals = by_id(bundled)
    assert goals["go-bindata"].goal is Goal.UNKNOWN
    assert goals["pypi-typosquatting"].goal is Goal.DRY_RUN


def test_bait_implies_social_engineering(bundled):
    for r in bundled:
        assert r.check_consistency() == []


def test_summary(bundled):
    s = incident_summary(bundled)
    assert s.median_ttd_days == 7.5
    assert s.mean_ttd_days == pytest.approx(181.5 / 8)
    assert s.counts["attack_type"] == {"bait": 2, "direct": 4, "influencer": 2}
    for dim, tally in s.counts.items():
        assert sum(tally.values()) == 8, dim


def test_singleton():
    rec = IncidentRecord("x", "", AttackType.BAIT, Strategy.SOCIAL_ENGINEERING, Vector.PACKAGE_CODE,
                         Victims.FIRST_PARTY, Goal.DRY_RUN, 5)
    s = incident_summary([rec])
    assert s.median_ttd_days == 5
    for tally in s.counts.values():
        assert sorted(tally.values())[-1] == 1
        assert sum(tally.values()) == 1


def test_empty():
    with pytest.raises(EmptyInputError):
        incident_summary([])


def test_median_permutation_invariant(bundled):
    base = incident_summary(bundled).median_ttd_days
    for perm in itertools.islice(itertools.permutations(bundled), 0, 5000, 97):
        assert incident_summary(perm).median_ttd_days == base


def test_round_trip(bundled):
    assert read_incidents(dump_incidents(bundled)) == bundled


def test_user_data_validation():
    row = {"id": "odd", "attack_type": "bait", "strategy": "credential-stealing", "vector": "package-code",
           "victims": "first-party", "goal": "unknown", "time_to_discovery_days": 2}
    with pytest.warns(TaxonomyWarning):
        read_incidents(json.dumps(row))
    with pytest.raises(ValueError):
        read_incidents(json.dumps(row), strict=True)
    with pytest.raises(ValueError):
        read_incidents(json.dumps(dict(row, goal="ransom")))
    with pytest.raises(ValueError):
        read_incidents(json.dumps(dict(row, time_to_discovery_days=-1)))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        read_incidents(json.dumps(dict(row, strategy="social-engineering")))
