"""Release-recency abandonment classification."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptySnapshotError, FutureReleaseError
from .snapshot import PackageRecord, Snapshot

DAY = 86400
DEFAULT_WINDOW_DAYS = 365


def release_age_days(record: PackageRecord, reference_time: float) -> float:
    age = reference_time - record.last_release
    if age < 0:
        raise FutureReleaseError(
            f"{record.name}: last release {record.last_release} is after reference time {reference_time}")
    return age / DAY


def is_abandoned(record: PackageRecord, reference_time: float, window_days: int = DEFAULT_WINDOW_DAYS) -> bool:
    """True when no release happened in the ``window_days`` before ``reference_time``.

    The boundary is strict: a release exactly ``window_days`` old is still active.
    """
    return release_age_days(record, reference_time) > window_days


@dataclass(frozen=True)
class AbandonmentReport:
    total: int
    abandoned: int
    fraction: float
    top_abandoned: list[tuple[str, int]]
    cumulative_abandoned_downloads: int
    reference_time: float
    window_days: int = DEFAULT_WINDOW_DAYS


def abandonment_report(snapshot: Snapshot, reference_time: float | None = None, top_n: int = 10,
                       window_days: int = DEFAULT_WINDOW_DAYS) -> AbandonmentReport:
    """Classify every record; ``reference_time`` defaults to the snapshot's capture time."""
    if not len(snapshot):
        raise EmptySnapshotError("snapshot has no packages")
    if reference_time is None:
        reference_time = snapshot.captured_at
    stale = [r for r in snapshot if is_abandoned(r, reference_time, window_days)]
    stale.sort(key=lambda r: (-r.downloads, r.name))
    return AbandonmentReport(
        total=len(snapshot),
        abandoned=len(stale),
        fraction=len(stale) / len(snapshot),
        top_abandoned=[(r.name, r.downloads) for r in stale[:top_n]],
        cumulative_abandoned_downloads=sum(r.downloads for r in stale),
        reference_time=reference_time,
        window_days=window_days,
    )
