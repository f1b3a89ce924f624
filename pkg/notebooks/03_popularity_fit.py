# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Download popularity
#
# Heavy-tailed download counts: a few packages take most of the downloads.
# Fit the tail exponent by maximum likelihood on synthetic data with known
# exponents, then on the fixture.

# %%
from pathlib import Path

import numpy as np

from ecoscope import DownloadSample, ccdf, count_at_least, fit_power_law, read_snapshot, top_share
from ecoscope.popularity import ccdf_overlay, format_series, sample_power_law

for alpha in (1.44, 1.83, 2.5):
    fits = [fit_power_law(DownloadSample(sample_power_law(alpha, 1e4, 10**5, rng=s))).alpha for s in range(5)]
    print(f"true {alpha}: fitted {np.round(fits, 4)}")

# %% [markdown]
# Share of downloads held by the top packages in a synthetic registry of
# 50,000 packages drawn with alpha = 1.44.

# %%
x = sample_power_law(1.44, 10, 50_000, rng=1)
x.sort()
for frac in (0.001, 0.01, 0.05):
    k = int(len(x) * frac)
    print(f"top {frac:.1%}: {x[-k:].sum() / x.sum():.1%} of downloads")

# %%
FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "pypi30.snap"
snap = read_snapshot(FIXTURE)
print("top-2 share:", round(top_share(snap, 2), 4))
print("packages with >= 1000 downloads:", count_at_least(snap, 1000))
sample = DownloadSample.from_snapshot(snap)
fit = fit_power_law(sample)
print(fit)

# %% [markdown]
# Two-column series for plotting the empirical CCDF with the fitted line on top.

# %%
print(format_series(ccdf(sample)[:5]), end="")
print(format_series(ccdf_overlay(sample, fit)[:5]), end="")
