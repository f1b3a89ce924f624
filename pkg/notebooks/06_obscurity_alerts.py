# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Obscurity alerts
#
# What an install-time check would say for a few requests against the npm
# fixture, under the default and a stricter policy.

# %%
from pathlib import Path

from ecoscope import AdvisorPolicy, PackageIndex, check_import, check_install, read_snapshot

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
npm = PackageIndex(read_snapshot(DATA / "crossenv.snap"))
for request in ("crossenv", "cross-env", "graphql-tool", "left-pad", "cros-env"):
    alerts = check_install(npm, request)
    print(request, "->", [a.kind.value for a in alerts] or "no alerts")
    for a in alerts:
        print("   ", a.describe())

# %% [markdown]
# The strict profile only changes severity.

# %%
strict = AdvisorPolicy(strict=True)
print([(a.kind.value, a.severity.value) for a in check_install(npm, "crossenv", strict)])

# %% [markdown]
# Import-name confusion on the PyPI fixture.

# %%
pypi = PackageIndex(read_snapshot(DATA / "pypi30.snap"))
for request in ("bs4", "beautifulsoup4", "yaml"):
    print(request, "->", [(a.kind.value, a.suggestion) for a in check_import(pypi, request)])
