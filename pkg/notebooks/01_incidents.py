# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Historical attacks
#
# Eight documented incidents, each described along five taxonomy dimensions
# plus the number of days between publication and discovery.

# %%
from ecoscope import incident_summary, load_incidents

records = load_incidents()
for r in records:
    print(f"{r.id:<24} {r.attack_type.value:<10} {r.goal.value:<16} {r.time_to_discovery_days:g} days")

# %% [markdown]
# Counts per dimension and the discovery-time summary.

# %%
summary = incident_summary(records)
for dim, tally in summary.counts.items():
    print(dim, tally)
print("median days to discovery:", summary.median_ttd_days)
print("mean days to discovery:", round(summary.mean_ttd_days, 2))
