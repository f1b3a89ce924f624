"""Dependency graph construction and structural metrics.

Edges point from depender to dependee: ``a -> b`` means *a depends on b*.

Per-node metrics are computed on the strongly connected component
condensation, visited once in reverse topological order:

* closure size: number of distinct nodes reachable from a node, itself
  excluded. Reachability sets are Python ints used as bitsets over node
  positions, with the members of each component laid out contiguously.
* chain depth: for a component C,
  ``depth(C) = (|C| - 1) + max(1 + depth(D) for D in successors(C))``,
  or ``|C| - 1`` when C has no successors. On a DAG this is the longest path
  edge count.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .errors import EmptyGraphError, UnknownPackageError
from .snapshot import Snapshot


@dataclass(frozen=True)
class DependencyGraph:
    nodes: frozenset[str]
    edges: Mapping[str, tuple[str, ...]]
    unresolved: tuple[tuple[str, str], ...] = ()
    # number of disconnected nodes dropped by prune_disconnected
    pruned: int = 0

    @classmethod
    def from_edges(cls, nodes, edges) -> "DependencyGraph":
        """Build from an iterable of nodes and (depender, dependee) pairs.

        Self-loops and duplicate edges are dropped; endpoints must be nodes.
        """
        nodes = frozenset(nodes)
        adj: dict[str, list[str]] = {n: [] for n in nodes}
        for src, dst in edges:
            if src not in nodes or dst not in nodes:
                raise UnknownPackageError(src if src not in nodes else dst)
            if src != dst and dst not in adj[src]:
                adj[src].append(dst)
        return cls(nodes, {n: tuple(v) for n, v in adj.items()})

    def successors(self, name) -> tuple[str, ...]:
        return self.edges.get(name, ())

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, name):
        return name in self.nodes

    @property
    def edge_count(self):
        return sum(len(v) for v in self.edges.values())

    def outdegree(self, name):
        self._require(name)
        return len(self.edges.get(name, ()))

    def _require(self, name):
        if name not in self.nodes:
            raise UnknownPackageError(name)

    @cached_property
    def _metrics(self) -> "_Condensation":
        return _Condensation(self)

    def to_edge_list(self) -> str:
        """``depender dependee`` per line, sorted."""
        lines = [f"{src} {dst}" for src in sorted(self.edges) for dst in sorted(self.edges[src])]
        return "".join(line + "\n" for line in lines)


def build_graph(snapshot: Snapshot) -> DependencyGraph:
    nodes = frozenset(snapshot.records)
    edges = {}
    unresolved = []
    for name in sorted(nodes):
        resolved = []
        for dep in snapshot.records[name].dependencies:
            if dep == name:
                continue
            if dep in nodes:
                if dep not in resolved:
                    resolved.append(dep)
            else:
                unresolved.append((name, dep))
        edges[name] = tuple(resolved)
    return DependencyGraph(nodes, edges, tuple(unresolved))


def prune_disconnected(graph: DependencyGraph) -> tuple[DependencyGraph, int]:
    """Drop nodes with neither dependencies nor dependents."""
    touched = set()
    for src, dsts in graph.edges.items():
        if dsts:
            touched.add(src)
            touched.update(dsts)
    removed = len(graph.nodes) - len(touched)
    edges = {n: graph.edges.get(n, ()) for n in touched}
    pruned = DependencyGraph(frozenset(touched), edges, graph.unresolved, graph.pruned + removed)
    return pruned, removed


def strongly_connected_components(graph: DependencyGraph) -> list[list[str]]:
    """Tarjan's algorithm, iterative. Components come out in reverse topological
    order: every component appears after all components it has edges into."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    components = []
    counter = 0

    for root in sorted(graph.nodes):
        if root in index:
            continue
        work = [(root, iter(graph.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = low[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(graph.successors(succ))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                components.append(comp)
    return components


class _Condensation:
    def __init__(self, graph):
        comps = strongly_connected_components(graph)
        comp_of = {}
        for cid, members in enumerate(comps):
            for m in members:
                comp_of[m] = cid

        # component cid occupies bits [offset[cid], offset[cid] + size)
        offsets = []
        pos = 0
        for members in comps:
            offsets.append(pos)
            pos += len(members)

        reach = [0] * len(comps)  # strictly downstream nodes, own component excluded
        depth = [0] * len(comps)
        for cid, members in enumerate(comps):
            succ = set()
            for m in members:
                for d in graph.successors(m):
                    dc = comp_of[d]
                    if dc != cid:
                        succ.add(dc)
            bits = 0
            best = -1
            for dc in succ:
                size = len(comps[dc])
                bits |= reach[dc] | (((1 << size) - 1) << offsets[dc])
                best = max(best, depth[dc])
            reach[cid] = bits
            depth[cid] = len(members) - 1 + (best + 1 if succ else 0)

        self.comp_of = comp_of
        self.sizes = [len(c) for c in comps]
        self.closure = [reach[c].bit_count() + self.sizes[c] - 1 for c in range(len(comps))]
        self.depth = depth


def closure_size(graph: DependencyGraph, pkg: str) -> int:
    """Number of direct and indirect dependencies of ``pkg``."""
    graph._require(pkg)
    m = graph._metrics
    return m.closure[m.comp_of[pkg]]


def chain_depth(graph: DependencyGraph, pkg: str) -> int:
    """Longest dependency chain below ``pkg`` (cycles collapsed, see module doc)."""
    graph._require(pkg)
    m = graph._metrics
    return m.depth[m.comp_of[pkg]]


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    avg_outdegree: float
    avg_tree_size: float
    avg_tree_depth: float
    disconnected_removed: int = 0
    unresolved: int = field(default=0)


def graph_summary(graph: DependencyGraph) -> GraphStats:
    if not graph.nodes:
        raise EmptyGraphError("graph has no nodes")
    m = graph._metrics
    n = len(graph.nodes)
    sizes = sum(m.closure[m.comp_of[p]] for p in graph.nodes)
    depths = sum(m.depth[m.comp_of[p]] for p in graph.nodes)
    return GraphStats(
        node_count=n,
        avg_outdegree=graph.edge_count / n,
        avg_tree_size=sizes / n,
        avg_tree_depth=depths / n,
        disconnected_removed=graph.pruned,
        unresolved=len(graph.unresolved),
    )


def closure_size_distribution(graph: DependencyGraph) -> list[tuple[int, float]]:
    """Empirical CDF of closure sizes: (size, fraction of nodes with closure <= size)."""
    if not graph.nodes:
        raise EmptyGraphError("graph has no nodes")
    m = graph._metrics
    hist = Counter(m.closure[m.comp_of[p]] for p in graph.nodes)
    n = len(graph.nodes)
    points = []
    running = 0
    for size in sorted(hist):
        running += hist[size]
        points.append((size, running / n))
    return points
