import random
import string

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ecoscope.errors import EmptyArchiveError, NoNamesOfLengthError, WrongEcosystemError
from ecoscope.snapshot import Ecosystem, PackageRecord, Snapshot
from ecoscope.squatting import (
    NameIndex,
    SquatKind,
    candidate_pairs,
    content_similarity,
    deletion_neighborhood,
    edit_distance,
    import_squat_candidates,
    rank_typo_candidates,
    short_name_saturation,
)


@pytest.mark.parametrize("a, b, d", [
    ("crossenv", "cross-env", 1),
    ("a", "a", 0),
    ("graphql-tools", "graphql-tool", 1),
    ("", "abc", 3),
    ("kitten", "sitting", 3),
    ("Cross-Env", "cross-env", 0),
    ("ab", "ba", 2),
])
def test_edit_distance(a, b, d):
    assert edit_distance(a, b) == d


def test_transposition_flag():
    assert edit_distance("reqeusts", "requests") == 2
    assert edit_distance("reqeusts", "requests", transpositions=True) == 1
    assert edit_distance("ca", "abc", transpositions=True) == 3


words = st.text(alphabet="abc-", max_size=8)


@given(words, words)
def test_matches_oracle(a, b):
    assert edit_distance(a, b) == oracles.levenshtein(a, b)


@given(words, words, words)
def test_metric(a, b, c):
    assert edit_distance(a, b) == edit_distance(b, a)
    assert (edit_distance(a, b) == 0) == (a.lower() == b.lower())
    assert edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)


def test_deletion_neighborhood():
    assert deletion_neighborhood("abc", 1) == {"abc", "bc", "ac", "ab"}
    assert "a" in deletion_neighborhood("abc", 2)


def test_candidate_pairs_examples():
    assert candidate_pairs(set(), 1, 0) == set()
    assert candidate_pairs({"abc", "abd", "xyz"}, 1, 0) == {("abc", "abd")}
    assert candidate_pairs({"abc", "abd", "xyz"}, 1, 4) == set()


def test_candidate_pairs_case_variants():
    # case-only differences are the same name, not a typo pair
    assert candidate_pairs({"Foo", "foo", "fop"}, 1, 0) == {("Foo", "fop"), ("foo", "fop")}


def random_names(rng, n, lo=3, hi=12, alphabet="abcde"):
    return {"".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi))) for _ in range(n)}


def test_candidate_pairs_random_500():
    rng = random.Random(11)
    names = random_names(rng, 500, alphabet="abc")
    assert candidate_pairs(names, 1, 0) == oracles.pairwise_pairs(names, 1)


@pytest.mark.parametrize("seed", range(4))
def test_candidate_pairs_distance_two(seed):
    rng = random.Random(seed)
    names = random_names(rng, 300, 1, 7, "abcd")
    assert candidate_pairs(names, 2, 0) == oracles.pairwise_pairs(names, 2)
    assert candidate_pairs(names, 2, 4) == oracles.pairwise_pairs(names, 2, 4)


def test_candidate_pairs_rejects_distance():
    with pytest.raises(ValueError):
        candidate_pairs({"a"}, 3, 0)


def test_name_index_query():
    idx = NameIndex(["cross-env", "crossenv", "cross-spawn", "Cross-Env2"], depth=2)
    assert dict(idx.query("crossenv", 1)) == {"cross-env": 1}
    assert dict(idx.query("cross-env", 1)) == {"crossenv": 1, "Cross-Env2": 1}
    assert dict(idx.query("CROSS-ENV", 2)) == {"crossenv": 1, "Cross-Env2": 1}


def test_short_name_saturation():
    assert short_name_saturation({"aa", "ab", "zz"}, 2) == pytest.approx(2 / 3)
    assert short_name_saturation({"abc", "zzzzz"}, 3) == 0.0
    with pytest.raises(NoNamesOfLengthError):
        short_name_saturation({"abc"}, 7)


def test_content_similarity():
    assert content_similarity({"a", "b"}, {"a", "b"}) == 1.0
    assert content_similarity({"a"}, {"b"}) == 0.0
    assert content_similarity({"a", "b", "c"}, {"a", "b", "d"}) == 0.5
    with pytest.raises(EmptyArchiveError):
        content_similarity(set(), {"a"})


@given(st.frozensets(st.integers(0, 9), min_size=1), st.frozensets(st.integers(0, 9), min_size=1))
def test_content_similarity_range(a, b):
    s = content_similarity(a, b)
    assert 0.0 <= s <= 1.0
    assert (s == 1.0) == (a == b)


def npm(records):
    return Snapshot.from_records(Ecosystem.NPM, 10, [
        PackageRecord(n, Ecosystem.NPM, downloads=d) for n, d in records])


def test_rank_orientation():
    snap = npm([("x", 100), ("y", 10**6)])
    (c,) = rank_typo_candidates([("x", "y")], snap)
    assert (c.subject, c.target, c.popularity_ratio, c.kind) == ("x", "y", 10**4, SquatKind.TYPO_PAIR)
    (c,) = rank_typo_candidates([("y", "x")], npm([("x", 7), ("y", 7)]))
    assert (c.subject, c.target, c.popularity_ratio) == ("x", "y", 1.0)


def test_rank_order_matches_sort_oracle():
    rng = random.Random(4)
    names = [f"pkg{c}" for c in string.ascii_lowercase[:20]]
    snap = npm([(n, rng.choice([0, 1, 10, 100, 5000, 10**6])) for n in names])
    pairs = [(names[i], names[i + 1]) for i in range(0, 20, 2)]
    ranked = rank_typo_candidates(pairs, snap)
    expected = []
    for a, b in pairs:
        lo, hi = sorted([snap[a], snap[b]], key=lambda r: (r.downloads, r.name))
        expected.append((-(max(hi.downloads, 1) / max(lo.downloads, 1)), lo.name, hi.name))
    expected.sort()
    assert [(-c.popularity_ratio, c.subject, c.target) for c in ranked] == expected


def test_rank_attaches_similarity(pypi30):
    ranked = rank_typo_candidates(candidate_pairs(pypi30.records, 1, 0), pypi30)
    by_subject = {c.subject: c for c in ranked}
    assert by_subject["urlib3"].content_similarity == pytest.approx(2 / 4)
    assert by_subject["python-dateutils"].content_similarity is None


def test_import_squat_examples(pypi30):
    cands = {c.subject: c for c in import_squat_candidates(pypi30)}
    assert cands["beautifulsoup4"].target == "bs4"
    assert cands["beautifulsoup4"].status == "collision"
    assert cands["requirements-parser"].target == "requirements"
    assert cands["requirements-parser"].status == "collision"
    assert cands["pyyaml"].status == "open-slot"
    assert "six" not in cands and "requests-oauth" not in cands


def test_import_squat_never_self(pypi30):
    from ecoscope.squatting import normalize_module
    for c in import_squat_candidates(pypi30):
        assert normalize_module(c.target) != normalize_module(c.subject)
        assert c.kind is SquatKind.IMPORT_SQUAT


def test_import_squat_wrong_ecosystem(crossenv):
    with pytest.raises(WrongEcosystemError):
        import_squat_candidates(crossenv)
