# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Typosquatting and import squatting
#
# Candidate name pairs come from a deletion-neighborhood index, which avoids
# comparing every pair of names.

# %%
import random
import string
import time
from pathlib import Path

from ecoscope import candidate_pairs, import_squat_candidates, rank_typo_candidates, read_snapshot
from ecoscope import short_name_saturation

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "pypi30.snap"
snap = read_snapshot(FIXTURE)
pairs = candidate_pairs(snap.records, max_distance=1)
for c in rank_typo_candidates(pairs, snap):
    print(c.subject, "->", c.target, f"ratio={c.popularity_ratio:g}", f"similarity={c.content_similarity}")

# %% [markdown]
# Allowing two edits catches more, at the price of many more pairs.

# %%
for c in rank_typo_candidates(candidate_pairs(snap.records, max_distance=2), snap):
    print(c.subject, "->", c.target, "distance", c.distance)

# %% [markdown]
# Packages that ship a module under another registered package's name.

# %%
for c in import_squat_candidates(snap):
    print(c.subject, "provides", c.target, c.status)

# %% [markdown]
# Scale check on 100,000 random names, and how crowded the short-name space is.

# %%
rng = random.Random(0)
names = {"".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(2, 12))) for _ in range(100_000)}
start = time.perf_counter()
found = candidate_pairs(names)
print(len(names), "names,", len(found), "pairs,", round(time.perf_counter() - start, 1), "s")
for length in (2, 3, 4):
    print(f"length {length}: {short_name_saturation(names, length):.1%} of names are one edit from another")
