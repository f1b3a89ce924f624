# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Abandoned packages
#
# A package counts as abandoned when its latest release is more than a year
# older than the snapshot's capture time. Still-popular abandoned packages are
# attractive targets for takeover.

# %%
from pathlib import Path

from ecoscope import abandonment_report, is_abandoned, read_snapshot

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "pypi30.snap"
snap = read_snapshot(FIXTURE)
report = abandonment_report(snap, top_n=5)
print(f"{report.abandoned}/{report.total} abandoned ({report.fraction:.1%})")
print("downloads of abandoned packages:", report.cumulative_abandoned_downloads)
for name, downloads in report.top_abandoned:
    print(f"  {name:<18} {downloads}")

# %% [markdown]
# The window is strict: exactly 365 days old is still maintained.

# %%
print("six (365 days):", is_abandoned(snap["six"], snap.captured_at))
print("markupsafe (366 days):", is_abandoned(snap["markupsafe"], snap.captured_at))

# %% [markdown]
# Sensitivity to the window length.

# %%
for days in (90, 180, 365, 730):
    r = abandonment_report(snap, window_days=days)
    print(f"{days:>4} days: {r.abandoned} abandoned")
