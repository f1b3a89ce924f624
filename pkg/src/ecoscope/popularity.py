"""Download-count analytics: concentration, thresholds, CCDF and power-law fit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySampleError,
    EmptySnapshotError,
    InsufficientTailError,
    InvalidXminError,
    ZeroTotalError,
)
from .snapshot import Ecosystem, Snapshot

DEFAULT_XMIN = 1e4


@dataclass(frozen=True)
class DownloadSample:
    """Strictly positive download counts, one per package."""

    values: np.ndarray
    ecosystem: Ecosystem | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if np.any(values <= 0):
            raise ValueError("download samples must be strictly positive")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_snapshot(cls, snapshot: Snapshot) -> "DownloadSample":
        """Zero-download packages are dropped."""
        return cls(np.array([r.downloads for r in snapshot if r.downloads > 0], dtype=float),
                   snapshot.ecosystem)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    xmin: float
    n_tail: int

    def ccdf(self, x):
        """P(X >= x | X >= xmin) for the fitted continuous power law."""
        return (np.asarray(x, dtype=float) / self.xmin) ** (1.0 - self.alpha)


def top_packages(snapshot: Snapshot, k: int) -> list[tuple[str, int]]:
    """The ``k`` most downloaded packages; ties broken by name ascending."""
    ranked = sorted(snapshot, key=lambda r: (-r.downloads, r.name))
    return [(r.name, r.downloads) for r in ranked[:k]]


def top_share(snapshot: Snapshot, k: int) -> float:
    """Fraction of all downloads that go to the ``k`` most downloaded packages."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not len(snapshot):
        raise EmptySnapshotError("snapshot has no packages")
    total = sum(r.downloads for r in snapshot)
    if total == 0:
        raise ZeroTotalError("snapshot has zero total downloads")
    return sum(d for _, d in top_packages(snapshot, k)) / total


def count_at_least(snapshot: Snapshot, threshold: int) -> int:
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return sum(1 for r in snapshot if r.downloads >= threshold)


def fit_power_law(sample: DownloadSample, xmin: float = DEFAULT_XMIN) -> PowerLawFit:
    """Continuous maximum-likelihood exponent for the tail ``x >= xmin``:

        alpha = 1 + n / sum(log(x_i / xmin))
    """
    if not xmin > 0:
        raise InvalidXminError(f"xmin must be positive, got {xmin}")
    values = sample.values if isinstance(sample, DownloadSample) else np.asarray(sample, dtype=float)
    tail = values[values >= xmin]
    n = len(tail)
    if n < 2:
        raise InsufficientTailError(f"need at least 2 samples >= xmin, got {n}")
    log_sum = np.log(tail / xmin).sum()
    if log_sum <= 0:
        # every tail sample sits at xmin: the likelihood has no finite maximum
        raise InsufficientTailError("all tail samples equal xmin")
    return PowerLawFit(alpha=float(1.0 + n / log_sum), xmin=float(xmin), n_tail=n)


def ccdf(sample: DownloadSample) -> list[tuple[float, float]]:
    """(value, fraction of samples >= value) at every distinct value."""
    values = sample.values if isinstance(sample, DownloadSample) else np.asarray(sample, dtype=float)
    if len(values) == 0:
        raise EmptySampleError("empty download sample")
    distinct, counts = np.unique(values, return_counts=True)
    at_least = np.cumsum(counts[::-1])[::-1]
    n = len(values)
    return [(float(v), int(c) / n) for v, c in zip(distinct, at_least)]


def ccdf_overlay(sample: DownloadSample, fit: PowerLawFit) -> list[tuple[float, float]]:
    """Fitted CCDF at each distinct tail value, scaled to the tail's share of the
    sample so it lies on top of the empirical CCDF."""
    values = sample.values
    if len(values) == 0:
        raise EmptySampleError("empty download sample")
    scale = fit.n_tail / len(values)
    xs = np.unique(values[values >= fit.xmin])
    return [(float(x), float(scale * y)) for x, y in zip(xs, fit.ccdf(xs))]


def sample_power_law(alpha, xmin, size, rng=None) -> np.ndarray:
    """Inverse-transform sampler: ``x = xmin * (1 - u) ** (-1 / (alpha - 1))``."""
    rng = np.random.default_rng(rng)
    u = rng.random(size)
    return xmin * (1.0 - u) ** (-1.0 / (alpha - 1.0))


def format_series(points) -> str:
    """Two whitespace-separated columns per line, for plotting tools."""
    return "".join(f"{x} {y}\n" for x, y in points)
