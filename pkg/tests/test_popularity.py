import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ecoscope.errors import (
    EmptySampleError,
    EmptySnapshotError,
    InsufficientTailError,
    InvalidXminError,
    ZeroTotalError,
)
from ecoscope.popularity import (
    DownloadSample,
    PowerLawFit,
    ccdf,
    ccdf_overlay,
    count_at_least,
    fit_power_law,
    format_series,
    sample_power_law,
    top_packages,
    top_share,
)
from ecoscope.snapshot import Ecosystem, PackageRecord, Snapshot


def snap_of(counts):
    return Snapshot.from_records(Ecosystem.NPM, 10, [
        PackageRecord(f"p{i}", Ecosystem.NPM, downloads=c) for i, c in enumerate(counts)])


def test_top_share_examples():
    assert top_share(snap_of([7]), 1) == 1.0
    assert top_share(snap_of([100, 50, 25, 25]), 2) == 0.75


def test_top_share_errors():
    with pytest.raises(EmptySnapshotError):
        top_share(snap_of([]), 1)
    with pytest.raises(ZeroTotalError):
        top_share(snap_of([0, 0]), 1)
    with pytest.raises(ValueError):
        top_share(snap_of([1]), 0)


def test_top_packages_tie_break():
    snap = Snapshot.from_records(Ecosystem.NPM, 10, [
        PackageRecord(n, Ecosystem.NPM, downloads=5) for n in ["zeta", "alpha", "mid"]])
    assert top_packages(snap, 2) == [("alpha", 5), ("mid", 5)]


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=30).filter(any))
def test_top_share_monotone_in_k(counts):
    snap = snap_of(counts)
    shares = [top_share(snap, k) for k in range(1, len(counts) + 1)]
    assert all(a <= b for a, b in zip(shares, shares[1:]))
    assert shares[-1] == 1.0


def test_count_at_least():
    assert count_at_least(snap_of([0, 5, 7]), 0) == 3
    assert count_at_least(snap_of([10, 1000, 999]), 1000) == 1


def test_count_at_least_fixture(pypi30):
    for t in (0, 1, 100, 1000, 10**4, 10**6, 10**8):
        assert count_at_least(pypi30, t) == len([r for r in pypi30 if r.downloads >= t])


def test_fit_closed_form():
    xmin = 1e4
    fit = fit_power_law(DownloadSample(np.full(50, xmin * math.e)), xmin)
    assert abs(fit.alpha - 2.0) < 1e-9
    assert fit.n_tail == 50


def test_fit_errors():
    with pytest.raises(InvalidXminError):
        fit_power_law(DownloadSample([1.0, 2.0]), 0)
    with pytest.raises(InsufficientTailError):
        fit_power_law(DownloadSample([1.0, 2e4]), 1e4)
    with pytest.raises(InsufficientTailError):
        fit_power_law(DownloadSample([1e4, 1e4]), 1e4)


def test_fit_recovers_alpha():
    x = sample_power_law(1.8, 1e4, 100_000, rng=1)
    fit = fit_power_law(DownloadSample(x), 1e4)
    assert 1.78 <= fit.alpha <= 1.82


def test_fit_ignores_below_xmin():
    x = np.concatenate([sample_power_law(2.5, 1e4, 5000, rng=2), np.arange(1, 9999, dtype=float)])
    only_tail = fit_power_law(DownloadSample(x[x >= 1e4]), 1e4)
    assert fit_power_law(DownloadSample(x), 1e4) == only_tail


@given(st.lists(st.floats(1.0, 1e9), min_size=2, max_size=40), st.floats(0.01, 1000))
def test_fit_scale_free(values, c):
    xmin = min(values)
    if max(values) <= xmin * (1 + 1e-9):
        return
    a = fit_power_law(DownloadSample(values), xmin)
    b = fit_power_law(DownloadSample([v * c for v in values]), xmin * c)
    assert a.n_tail == b.n_tail
    assert b.alpha == pytest.approx(a.alpha, rel=1e-7)


def test_ccdf_examples():
    assert ccdf(DownloadSample([1, 2, 3])) == [(1.0, 1.0), (2.0, 2 / 3), (3.0, 1 / 3)]
    assert ccdf(DownloadSample([5, 5, 5])) == [(5.0, 1.0)]
    with pytest.raises(EmptySampleError):
        ccdf(DownloadSample([]))


@given(st.lists(st.integers(1, 50), min_size=1, max_size=60))
def test_ccdf_properties(values):
    pts = ccdf(DownloadSample(values))
    fracs = [f for _, f in pts]
    assert fracs[0] == 1.0
    assert all(a > b for a, b in zip(fracs, fracs[1:]))
    for v, f in pts:
        count = f * len(values)
        assert count == pytest.approx(round(count))
        assert round(count) == sum(1 for x in values if x >= v)


def test_sample_excludes_zero(pypi30):
    sample = DownloadSample.from_snapshot(pypi30)
    assert len(sample) == 28
    with pytest.raises(ValueError):
        DownloadSample([0, 1])


def test_overlay():
    x = sample_power_law(2.0, 10.0, 1000, rng=5)
    sample = DownloadSample(np.concatenate([x, [1.0, 2.0]]))
    fit = fit_power_law(sample, 10.0)
    pts = ccdf_overlay(sample, fit)
    assert pts[0][0] >= 10.0
    assert pts[0][1] == pytest.approx(fit.n_tail / len(sample) * fit.ccdf(pts[0][0]))
    assert all(a[1] >= b[1] for a, b in zip(pts, pts[1:]))


def test_format_series():
    assert format_series([(1.0, 0.5), (2, 0.25)]) == "1.0 0.5\n2 0.25\n"
    assert PowerLawFit(2.0, 1.0, 2).ccdf(4.0) == pytest.approx(0.25)
