# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Dependency structure
#
# Build the graph from the 30-package PyPI fixture, drop packages with no
# edges at all, then look at transitive closure size and chain depth.

# %%
from pathlib import Path

import numpy as np

from ecoscope import build_graph, chain_depth, closure_size, closure_size_distribution, graph_summary, prune_disconnected
from ecoscope import read_snapshot
from ecoscope.depgraph import DependencyGraph

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "pypi30.snap"
snap = read_snapshot(FIXTURE)
graph = build_graph(snap)
print(len(graph), "packages,", graph.edge_count, "edges,", len(graph.unresolved), "unresolved")

# %%
kept, removed = prune_disconnected(graph)
print("removed", removed, "isolated packages")
print(graph_summary(kept))

# %% [markdown]
# Per-package view. The loop-alpha / loop-beta cycle is collapsed into one
# component, so both members see the same closure.

# %%
for name in sorted(kept.nodes, key=lambda n: -closure_size(kept, n))[:8]:
    print(f"{name:<16} closure={closure_size(kept, name):<3} depth={chain_depth(kept, name)}")

# %%
for size, frac in closure_size_distribution(kept):
    print(size, round(frac, 3))

# %% [markdown]
# A larger random graph: 2,000 packages, each depending on a few older ones,
# with a strong lean toward a small core of widely used packages.

# %%
rng = np.random.default_rng(3)
n = 2000
nodes = [f"p{i}" for i in range(n)]
edges = set()
for i in range(1, n):
    weights = 1.0 / np.arange(1, i + 1) ** 1.5
    for j in rng.choice(i, size=min(i, rng.poisson(3)), p=weights / weights.sum()):
        edges.add((nodes[i], nodes[j]))
big = DependencyGraph.from_edges(nodes, sorted(edges))
print(graph_summary(prune_disconnected(big)[0]))
