"""Typosquatting and import-squatting candidate detection.

Names are compared case-insensitively. Near-name search uses a deletion
neighborhood index: every name is filed under itself and every string obtained
by deleting up to ``depth`` characters. Two names within Levenshtein distance
``k <= depth`` always share such a key, so candidates come only from shared
buckets and are then verified exactly.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations

from .errors import EmptyArchiveError, NoNamesOfLengthError, WrongEcosystemError
from .snapshot import Ecosystem, Snapshot

MAX_INDEX_DISTANCE = 2


def fold(name: str) -> str:
    return name.lower()


def edit_distance(a: str, b: str, transpositions: bool = False) -> int:
    """Levenshtein distance between case-folded names.

    With ``transpositions=True`` swapping two adjacent characters costs one edit
    (optimal string alignment). That variant is not a metric.
    """
    a, b = fold(a), fold(b)
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev2 = None
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, 1):
            cost = ca != cb
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            if transpositions and prev2 is not None and j > 1 and ca == b[j - 2] and a[i - 2] == cb:
                cur[j] = min(cur[j], prev2[j - 2] + 1)
        prev2, prev = prev, cur
    return prev[-1]


def _within_one(a, b):
    """Fast check for Levenshtein(a, b) <= 1 on already folded strings."""
    la, lb = len(a), len(b)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    if la - lb > 1:
        return False
    i = 0
    while i < lb and a[i] == b[i]:
        i += 1
    if la == lb:
        return a[i + 1:] == b[i + 1:]
    return a[i + 1:] == b[i:]


def _distance_at_most(a, b, k):
    if abs(len(a) - len(b)) > k:
        return False
    if k == 1:
        return _within_one(a, b)
    return edit_distance(a, b) <= k


def deletion_neighborhood(word: str, depth: int) -> set[str]:
    """``word`` plus every string reachable by deleting up to ``depth`` characters."""
    out = {word}
    frontier = {word}
    for _ in range(depth):
        frontier = {w[:i] + w[i + 1:] for w in frontier for i in range(len(w))}
        out |= frontier
    return out


class NameIndex:
    """Deletion-neighborhood index over a collection of names."""

    def __init__(self, names, depth: int = 1):
        if not 1 <= depth <= MAX_INDEX_DISTANCE:
            raise ValueError(f"index depth must be 1..{MAX_INDEX_DISTANCE}")
        self.depth = depth
        self.originals: dict[str, list[str]] = defaultdict(list)
        for name in names:
            self.originals[fold(name)].append(name)
        for group in self.originals.values():
            group.sort()
        self.buckets: dict[str, list[str]] = defaultdict(list)
        for folded in self.originals:
            for key in deletion_neighborhood(folded, depth):
                self.buckets[key].append(folded)

    def pairs(self, max_distance: int) -> set[tuple[str, str]]:
        """Folded name pairs at distance 1..max_distance, each as (smaller, larger)."""
        if not 1 <= max_distance <= self.depth:
            raise ValueError(f"max_distance must be 1..{self.depth} for this index")
        found = set()
        for bucket in self.buckets.values():
            if len(bucket) < 2:
                continue
            for a, b in combinations(bucket, 2):
                pair = (a, b) if a < b else (b, a)
                if pair not in found and _distance_at_most(a, b, max_distance):
                    found.add(pair)
        return found

    def query(self, name: str, max_distance: int) -> list[tuple[str, int]]:
        """Indexed names within ``max_distance`` of ``name`` (itself excluded), with distances."""
        if not 1 <= max_distance <= self.depth:
            raise ValueError(f"max_distance must be 1..{self.depth} for this index")
        q = fold(name)
        seen = set()
        for key in deletion_neighborhood(q, max_distance):
            seen.update(self.buckets.get(key, ()))
        seen.discard(q)
        hits = []
        for folded in sorted(seen):
            if _distance_at_most(q, folded, max_distance):
                d = edit_distance(q, folded)
                hits.extend((orig, d) for orig in self.originals[folded])
        return hits


def candidate_pairs(names, max_distance: int = 1, min_length: int = 0) -> set[tuple[str, str]]:
    """All unordered name pairs with 1 <= edit distance <= ``max_distance`` where
    both names are at least ``min_length`` long. Pairs are returned as sorted tuples."""
    if max_distance not in (1, 2):
        raise ValueError("max_distance must be 1 or 2")
    if min_length < 0:
        raise ValueError("min_length must be >= 0")
    kept = [n for n in set(names) if len(n) >= min_length]
    if len(kept) < 2:
        return set()
    index = NameIndex(kept, depth=max_distance)
    out = set()
    for fa, fb in index.pairs(max_distance):
        for a in index.originals[fa]:
            for b in index.originals[fb]:
                out.add((a, b) if a < b else (b, a))
    return out


def short_name_saturation(names, length: int) -> float:
    """Fraction of names of exactly ``length`` characters that sit in some distance-1 pair."""
    if length < 1:
        raise ValueError("length must be >= 1")
    names = set(names)
    of_length = {n for n in names if len(n) == length}
    if not of_length:
        raise NoNamesOfLengthError(f"no names of length {length}")
    paired = set()
    for a, b in candidate_pairs(names, 1, 0):
        paired.add(a)
        paired.add(b)
    return len(of_length & paired) / len(of_length)


def content_similarity(hashes_a, hashes_b) -> float:
    """Jaccard index of two sets of file digests."""
    a, b = set(hashes_a), set(hashes_b)
    if not a or not b:
        raise EmptyArchiveError("content similarity needs two non-empty digest sets")
    return len(a & b) / len(a | b)


class SquatKind(str, enum.Enum):
    TYPO_PAIR = "typo-pair"
    IMPORT_SQUAT = "import-squat"


@dataclass(frozen=True)
class SquatCandidate:
    kind: SquatKind
    subject: str
    target: str
    popularity_ratio: float
    distance: int | None = None
    content_similarity: float | None = None
    evidence: str = ""
    # import squats only: "collision" or "open-slot"
    status: str | None = None

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "subject": self.subject,
            "target": self.target,
            "distance": self.distance,
            "popularity_ratio": self.popularity_ratio,
            "content_similarity": self.content_similarity,
            "status": self.status,
            "evidence": self.evidence,
        }


def _ratio(target_downloads, subject_downloads):
    # zero downloads count as one so brand new packages get a finite ratio
    return max(target_downloads, 1) / max(subject_downloads, 1)


def rank_typo_candidates(pairs, snapshot: Snapshot) -> list[SquatCandidate]:
    """Orient each pair so the less downloaded name is the subject, attach
    evidence, and sort by popularity ratio (largest first)."""
    out = []
    for a, b in pairs:
        ra, rb = snapshot[a], snapshot[b]
        if (ra.downloads, ra.name) > (rb.downloads, rb.name):
            ra, rb = rb, ra
        similarity = None
        if ra.file_hashes and rb.file_hashes:
            similarity = content_similarity(ra.file_hashes, rb.file_hashes)
        dist = edit_distance(ra.name, rb.name)
        out.append(SquatCandidate(
            kind=SquatKind.TYPO_PAIR,
            subject=ra.name,
            target=rb.name,
            distance=dist,
            popularity_ratio=_ratio(rb.downloads, ra.downloads),
            content_similarity=similarity,
            evidence=(f"{ra.name} ({ra.downloads} downloads) is {dist} edit(s) from "
                      f"{rb.name} ({rb.downloads} downloads)"),
        ))
    out.sort(key=lambda c: (-c.popularity_ratio, c.subject, c.target))
    return out


def normalize_module(name: str) -> str:
    return name.lower().replace("_", "-")


def import_squat_candidates(snapshot: Snapshot) -> list[SquatCandidate]:
    """Packages whose provided top-level modules differ from their own name.

    A candidate is a "collision" when the module name is also a registered
    package, otherwise an "open-slot". Module listings are static only and may
    miss modules synthesized at install time.
    """
    if snapshot.ecosystem is not Ecosystem.PYPI:
        raise WrongEcosystemError(f"import squatting applies to PyPI, not {snapshot.ecosystem.value}")
    registered = {}
    for name in sorted(snapshot.records):
        registered.setdefault(normalize_module(name), name)

    out = []
    for name in sorted(snapshot.records):
        rec = snapshot.records[name]
        own = normalize_module(name)
        emitted = set()
        for module in rec.modules:
            key = normalize_module(module)
            if key == own or key in emitted:
                continue
            emitted.add(key)
            other = registered.get(key)
            if other is not None:
                other_dl = snapshot[other].downloads
                out.append(SquatCandidate(
                    kind=SquatKind.IMPORT_SQUAT, subject=name, target=module,
                    popularity_ratio=_ratio(other_dl, rec.downloads), status="collision",
                    evidence=(f"{name} provides module {module}, which is also the registered "
                              f"package {other} ({other_dl} downloads); static module listing"),
                ))
            else:
                out.append(SquatCandidate(
                    kind=SquatKind.IMPORT_SQUAT, subject=name, target=module,
                    popularity_ratio=0.0, status="open-slot",
                    evidence=(f"{name} provides module {module}; no package of that name "
                              f"is registered; static module listing"),
                ))
    return out
