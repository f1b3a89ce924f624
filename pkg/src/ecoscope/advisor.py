"""Obscurity alerts for install, update and import-name requests.

Alerts are advice only. Nothing here refuses an installation; the caller
decides whether to ask for confirmation.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field, fields
from functools import cached_property

from .abandonment import is_abandoned, release_age_days
from .snapshot import PackageRecord, Snapshot
from .squatting import MAX_INDEX_DISTANCE, NameIndex, fold, normalize_module


class AlertKind(str, enum.Enum):
    POSSIBLE_TYPOSQUAT = "PossibleTyposquat"
    ABANDONED_PACKAGE = "AbandonedPackage"
    IMPORT_NAME_COLLISION = "ImportNameCollision"
    UNKNOWN_PACKAGE = "UnknownPackage"


class Severity(str, enum.Enum):
    WARN = "warn"
    BLOCK_BY_DEFAULT = "block-by-default"


@dataclass(frozen=True)
class AdvisorPolicy:
    obscure_download_threshold: int = 1000
    popularity_ratio_threshold: float = 100.0
    max_alert_distance: int = 1
    # names at least this long are matched up to long_name_max_distance
    long_name_length: int = 10
    long_name_max_distance: int = 2
    abandonment_window_days: int = 365
    strict: bool = False

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name != "strict" and not value > 0:
                raise ValueError(f"policy field {f.name} must be positive, got {value!r}")
        for f in ("max_alert_distance", "long_name_max_distance"):
            if getattr(self, f) > MAX_INDEX_DISTANCE:
                raise ValueError(f"{f} must be <= {MAX_INDEX_DISTANCE}")

    @classmethod
    def from_file(cls, path, **overrides):
        with open(path, encoding="utf-8") as fh:
            values = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown policy fields: {', '.join(sorted(unknown))}")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def distance_for(self, name):
        if len(name) >= self.long_name_length:
            return max(self.max_alert_distance, self.long_name_max_distance)
        return self.max_alert_distance

    @property
    def severity(self):
        return Severity.BLOCK_BY_DEFAULT if self.strict else Severity.WARN


@dataclass(frozen=True)
class Alert:
    kind: AlertKind
    severity: Severity
    subject: str
    suggestion: str | None = None
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        d["severity"] = self.severity.value
        return d

    def describe(self) -> str:
        ev = self.evidence
        if self.kind is AlertKind.POSSIBLE_TYPOSQUAT:
            return (f"'{self.subject}' is an obscure package ({ev['requested_downloads']} downloads) "
                    f"{ev['distance']} edit(s) away from the popular '{self.suggestion}' "
                    f"({ev['suggestion_downloads']} downloads). Did you mean '{self.suggestion}'?")
        if self.kind is AlertKind.ABANDONED_PACKAGE:
            return (f"'{self.subject}' has had no release for {ev['release_age_days']:.0f} days "
                    f"(window {ev['window_days']} days); it may be abandoned.")
        if self.kind is AlertKind.IMPORT_NAME_COLLISION:
            return (f"'{self.subject}' is the import name of a module provided by '{self.suggestion}', "
                    f"but is registered as a different package. Did you mean '{self.suggestion}'?")
        text = f"'{self.subject}' is not in the package index."
        if self.suggestion:
            text += f" Did you mean '{self.suggestion}'?"
        return text


class PackageIndex:
    """Name, popularity and module lookups derived from one snapshot."""

    def __init__(self, snapshot: Snapshot):
        self.snapshot = snapshot
        self.by_folded = {}
        for name in sorted(snapshot.records):
            self.by_folded.setdefault(fold(name), snapshot.records[name])
        self.module_providers: dict[str, list[str]] = {}
        for rec in snapshot:
            for module in rec.modules:
                self.module_providers.setdefault(normalize_module(module), []).append(rec.name)
        for providers in self.module_providers.values():
            providers.sort(key=lambda n: (-snapshot[n].downloads, n))

    @cached_property
    def names(self) -> NameIndex:
        return NameIndex(self.snapshot.records, depth=MAX_INDEX_DISTANCE)

    def get(self, name) -> PackageRecord | None:
        return self.by_folded.get(fold(name))

    def downloads(self, name):
        return self.snapshot[name].downloads


def _popular_neighbor(index, name, downloads, policy):
    """Most downloaded name within alert distance that dwarfs ``downloads``."""
    need = policy.popularity_ratio_threshold * max(downloads, 1)
    best = None
    for other, dist in index.names.query(name, policy.distance_for(name)):
        other_dl = index.downloads(other)
        if other_dl < need:
            continue
        key = (-other_dl, dist, other)
        if best is None or key < best[0]:
            best = (key, other, other_dl, dist)
    return best


def check_install(index: PackageIndex, requested: str, policy: AdvisorPolicy = AdvisorPolicy(),
                  reference_time: float | None = None) -> list[Alert]:
    """Alerts for installing ``requested``. ``reference_time`` defaults to the
    snapshot's capture time."""
    rec = index.get(requested)
    sev = policy.severity
    if rec is None:
        hit = _popular_neighbor(index, requested, 0, policy)
        suggestion = hit[1] if hit else None
        return [Alert(AlertKind.UNKNOWN_PACKAGE, sev, requested, suggestion,
                      {"suggestion_downloads": hit[2], "distance": hit[3]} if hit else {})]

    alerts = []
    if rec.downloads < policy.obscure_download_threshold:
        hit = _popular_neighbor(index, rec.name, rec.downloads, policy)
        if hit is not None:
            _, other, other_dl, dist = hit
            alerts.append(Alert(AlertKind.POSSIBLE_TYPOSQUAT, sev, requested, other, {
                "distance": dist,
                "requested_downloads": rec.downloads,
                "suggestion_downloads": other_dl,
                "popularity_ratio": other_dl / max(rec.downloads, 1),
            }))
    ref = index.snapshot.captured_at if reference_time is None else reference_time
    alerts.extend(check_update(rec, ref, policy))
    return alerts


def check_update(record: PackageRecord, reference_time: float,
                 policy: AdvisorPolicy = AdvisorPolicy()) -> list[Alert]:
    """AbandonedPackage alert when the package being updated has gone stale."""
    if not is_abandoned(record, reference_time, policy.abandonment_window_days):
        return []
    return [Alert(AlertKind.ABANDONED_PACKAGE, policy.severity, record.name, None, {
        "release_age_days": release_age_days(record, reference_time),
        "window_days": policy.abandonment_window_days,
        "last_release": record.last_release,
        "downloads": record.downloads,
    })]


def check_import(index: PackageIndex, requested: str, policy: AdvisorPolicy = AdvisorPolicy()) -> list[Alert]:
    """Alerts when ``requested`` is an import name provided by some other package."""
    key = normalize_module(requested)
    providers = [p for p in index.module_providers.get(key, ()) if normalize_module(p) != key]
    if not providers:
        return []
    rec = index.get(requested)
    if rec is not None and key in {normalize_module(m) for m in rec.modules}:
        # the requested package provides this module itself
        return []
    provider = providers[0]
    evidence = {"module": requested, "providers": providers,
                "provider_downloads": index.downloads(provider)}
    if rec is None:
        return [Alert(AlertKind.UNKNOWN_PACKAGE, policy.severity, requested, provider, evidence)]
    evidence["requested_downloads"] = rec.downloads
    return [Alert(AlertKind.IMPORT_NAME_COLLISION, policy.severity, requested, provider, evidence)]
