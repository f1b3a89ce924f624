"""Typed taxonomy of historical ecosystem attacks and the bundled incident set."""

from __future__ import annotations

import enum
import io
import json
import statistics
import warnings
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .errors import EmptyInputError

FORMAT_TAG = "ecoscope-incidents"


class AttackType(str, enum.Enum):
    BAIT = "bait"
    DIRECT = "direct"
    INFLUENCER = "influencer"


class Strategy(str, enum.Enum):
    SOCIAL_ENGINEERING = "social-engineering"
    CREDENTIAL_STEALING = "credential-stealing"


class Vector(str, enum.Enum):
    PACKAGE_CODE = "package-code"
    INSTALLATION_SCRIPT = "installation-script"
    NOT_APPLICABLE = "n/a"


class Victims(str, enum.Enum):
    FIRST_PARTY = "first-party"
    SECOND_PARTY = "second-party"


class Goal(str, enum.Enum):
    DRY_RUN = "dry-run"
    CRYPTO_THEFT = "crypto-theft"
    CREDENTIAL_THEFT = "credential-theft"
    UNKNOWN = "unknown"


DIMENSIONS = {
    "attack_type": AttackType,
    "strategy": Strategy,
    "vector": Vector,
    "victims": Victims,
    "goal": Goal,
}


class TaxonomyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class IncidentRecord:
    id: str
    description: str
    attack_type: AttackType
    strategy: Strategy
    vector: Vector
    victims: Victims
    goal: Goal
    # "same day" is 0
    time_to_discovery_days: float

    @classmethod
    def from_dict(cls, obj) -> "IncidentRecord":
        """Build a record, rejecting any taxonomy value outside the closed enums."""
        kwargs = {}
        for dim, enum_cls in DIMENSIONS.items():
            try:
                kwargs[dim] = enum_cls(obj[dim])
            except KeyError:
                raise ValueError(f"incident {obj.get('id')!r}: missing {dim}") from None
            except ValueError:
                raise ValueError(f"incident {obj.get('id')!r}: {obj[dim]!r} is not a valid {dim}") from None
        ttd = obj.get("time_to_discovery_days")
        if isinstance(ttd, bool) or not isinstance(ttd, (int, float)) or ttd < 0:
            raise ValueError(f"incident {obj.get('id')!r}: time_to_discovery_days must be >= 0")
        return cls(id=obj["id"], description=obj.get("description", ""),
                   time_to_discovery_days=float(ttd), **kwargs)

    def to_dict(self):
        d = {"id": self.id, "description": self.description,
             "time_to_discovery_days": self.time_to_discovery_days}
        for dim in DIMENSIONS:
            d[dim] = getattr(self, dim).value
        return d

    def check_consistency(self):
        """Return a list of taxonomy inconsistencies (empty when consistent)."""
        problems = []
        if self.attack_type is AttackType.BAIT and self.strategy is not Strategy.SOCIAL_ENGINEERING:
            problems.append(f"{self.id}: bait attack with strategy {self.strategy.value}")
        return problems


def read_incidents(stream, strict=False) -> list[IncidentRecord]:
    """Read user-supplied incidents; inconsistencies warn unless ``strict``."""
    if isinstance(stream, (str, bytes)):
        stream = io.StringIO(stream.decode() if isinstance(stream, bytes) else stream)
    records = []
    for raw in stream:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        if not raw.strip():
            continue
        obj = json.loads(raw)
        if obj.get("format") == FORMAT_TAG:
            continue
        rec = IncidentRecord.from_dict(obj)
        for problem in rec.check_consistency():
            if strict:
                raise ValueError(problem)
            warnings.warn(problem, TaxonomyWarning, stacklevel=2)
        records.append(rec)
    return records


def load_incidents() -> list[IncidentRecord]:
    """The eight bundled incidents, validated strictly."""
    text = resources.files("ecoscope").joinpath("data/incidents.jsonl").read_text("utf-8")
    return read_incidents(text, strict=True)


def dump_incidents(records) -> str:
    lines = [json.dumps({"format": FORMAT_TAG, "version": 1})]
    lines += [json.dumps(r.to_dict(), sort_keys=True) for r in records]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SummaryStats:
    total: int
    counts: dict[str, dict[str, int]]
    median_ttd_days: float
    mean_ttd_days: float


def incident_summary(records) -> SummaryStats:
    records = list(records)
    if not records:
        raise EmptyInputError("no incidents to summarize")
    counts = {}
    for dim, enum_cls in DIMENSIONS.items():
        tally = Counter(getattr(r, dim) for r in records)
        counts[dim] = {member.value: tally.get(member, 0) for member in enum_cls}
    ttd = [r.time_to_discovery_days for r in records]
    return SummaryStats(
        total=len(records),
        counts=counts,
        median_ttd_days=float(statistics.median(ttd)),
        mean_ttd_days=float(statistics.fmean(ttd)),
    )
