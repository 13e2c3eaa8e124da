"""Skill co-occurrence graph: projection, statistics, and community structure.

Projects are projected onto a weighted unipartite skill network: two skills
are linked whenever they appear together in a project, and the link weight
counts how many projects they share. Communities come from a seeded Louvain
pass over the weighted modularity objective.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import PartitionError, ThresholdError
from .ingest import ProjectTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SkillStats:
    """Demand (projects requesting) and supply (distinct workers) of a skill."""

    skill: str
    demand: int
    supply: int


@dataclass(frozen=True)
class SkillGraph:
    """Weighted undirected co-occurrence network over skills.

    ``nodes`` is sorted; ``edges`` maps (a, b) with a < b to the
    co-occurrence count. Instances are immutable after construction.
    """

    nodes: tuple[str, ...]
    stats: dict[str, SkillStats]
    edges: dict[tuple[str, str], float]
    min_projects: int
    _adj: dict[str, dict[str, float]] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        adj: dict[str, dict[str, float]] = {u: {} for u in self.nodes}
        for (a, b), w in self.edges.items():
            adj[a][b] = w
            adj[b][a] = w
        object.__setattr__(self, "_adj", adj)

    def __contains__(self, slug: str) -> bool:
        return slug in self._adj

    def neighbors(self, slug: str) -> dict[str, float]:
        return self._adj[slug]

    def degree(self, slug: str) -> int:
        return len(self._adj[slug])

    def weighted_degree(self, slug: str) -> float:
        return float(sum(self._adj[slug].values()))

    def total_weight(self) -> float:
        return float(sum(self.edges.values()))


@dataclass(frozen=True)
class CommunityPartition:
    """Louvain community assignment over the graph's nodes."""

    assignment: dict[str, int]
    labels: dict[int, str]
    modularity: float
    seed: int
    resolution: float

    def communities(self) -> list[int]:
        return sorted(set(self.assignment.values()))

    def members(self, community: int) -> list[str]:
        return sorted(s for s, c in self.assignment.items() if c == community)

    def relabel(self, labels: dict[int, str]) -> "CommunityPartition":
        merged = dict(self.labels)
        merged.update(labels)
        return CommunityPartition(self.assignment, merged, self.modularity, self.seed, self.resolution)


def compute_skill_stats(projects: ProjectTable) -> dict[str, SkillStats]:
    """Per-skill demand (project count) and supply (distinct worker count)."""
    demand: dict[str, int] = {}
    workers: dict[str, set[str]] = {}
    for rec in projects.records:
        for slug in rec.skills:
            demand[slug] = demand.get(slug, 0) + 1
            workers.setdefault(slug, set()).add(rec.worker_id)
    return {
        slug: SkillStats(skill=slug, demand=demand[slug], supply=len(workers[slug]))
        for slug in sorted(demand)
    }


def build_graph(projects: ProjectTable, min_projects: int = 20) -> SkillGraph:
    """Project the table onto the skill network, keeping popular skills only.

    Skills below the demand threshold are removed before pair enumeration,
    so edges never touch filtered-out skills.
    """
    if min_projects < 1:
        raise ThresholdError("min_projects must be >= 1")
    stats = compute_skill_stats(projects)
    kept = {slug for slug, st in stats.items() if st.demand >= min_projects}
    if not kept:
        raise ThresholdError(f"no skills above threshold (min_projects={min_projects})")
    edges: dict[tuple[str, str], float] = {}
    for rec in projects.records:
        retained = [s for s in rec.skills if s in kept]
        for a, b in combinations(retained, 2):
            edges[(a, b)] = edges.get((a, b), 0.0) + 1.0
    nodes = tuple(sorted(kept))
    return SkillGraph(
        nodes=nodes,
        stats={s: stats[s] for s in nodes},
        edges=edges,
        min_projects=min_projects,
    )


def degree_centrality(graph: SkillGraph) -> dict[str, float]:
    """Unweighted degree: number of incident edges per node."""
    return {u: float(graph.degree(u)) for u in graph.nodes}


def weighted_degree_centrality(graph: SkillGraph) -> dict[str, float]:
    return {u: graph.weighted_degree(u) for u in graph.nodes}


def modularity(graph: SkillGraph, partition: CommunityPartition) -> float:
    """Weighted Newman-Girvan modularity of a partition (resolution 1).

    Q = (1/2m) * sum_ij [w_ij - k_i*k_j/(2m)] * delta(c_i, c_j).
    """
    missing = [u for u in graph.nodes if u not in partition.assignment]
    if missing:
        raise PartitionError(f"partition missing {len(missing)} nodes (e.g. {missing[0]!r})")
    m = graph.total_weight()
    if m == 0:
        return 0.0
    intra: dict[int, float] = {}
    tot: dict[int, float] = {}
    for u in graph.nodes:
        c = partition.assignment[u]
        tot[c] = tot.get(c, 0.0) + graph.weighted_degree(u)
    for (a, b), w in graph.edges.items():
        ca, cb = partition.assignment[a], partition.assignment[b]
        if ca == cb:
            intra[ca] = intra.get(ca, 0.0) + w
    q = 0.0
    for c, t in sorted(tot.items()):
        q += intra.get(c, 0.0) / m - (t / (2.0 * m)) ** 2
    return q


# ---------------------------------------------------------------------------
# Louvain
# ---------------------------------------------------------------------------


def _one_level(
    n: int,
    adj: list[list[tuple[int, float]]],
    degrees: list[float],
    m: float,
    order: list[int],
    resolution: float,
) -> tuple[list[int], bool]:
    """Single Louvain level: local moves until no move improves modularity.

    Node visiting order is fixed for the whole level. On equal gain the
    incumbent community wins; among non-incumbent ties the lowest community
    id wins, keeping the procedure deterministic.
    """
    comm = list(range(n))
    comm_tot = list(degrees)
    two_m_sq = 2.0 * m * m
    improved = False
    moved = True
    while moved:
        moved = False
        for u in order:
            cu = comm[u]
            k_u = degrees[u]
            nbr_w: dict[int, float] = {}
            for v, w in adj[u]:
                if v == u:
                    continue
                c = comm[v]
                nbr_w[c] = nbr_w.get(c, 0.0) + w
            comm_tot[cu] -= k_u
            best_c = cu
            best_gain = nbr_w.get(cu, 0.0) / m - resolution * comm_tot[cu] * k_u / two_m_sq
            for c in sorted(nbr_w):
                if c == cu:
                    continue
                gain = nbr_w[c] / m - resolution * comm_tot[c] * k_u / two_m_sq
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            comm_tot[best_c] += k_u
            if best_c != cu:
                comm[u] = best_c
                moved = True
                improved = True
    return comm, improved


def _aggregate(
    edges: dict[tuple[int, int], float], comm: list[int]
) -> tuple[dict[tuple[int, int], float], list[int], int]:
    """Collapse communities into supernodes; returns (edges, relabel map, n)."""
    labels = sorted(set(comm))
    relabel = {old: new for new, old in enumerate(labels)}
    mapped = [relabel[c] for c in comm]
    new_edges: dict[tuple[int, int], float] = {}
    for (u, v), w in edges.items():
        a, b = mapped[u], mapped[v]
        if a > b:
            a, b = b, a
        new_edges[(a, b)] = new_edges.get((a, b), 0.0) + w
    return new_edges, mapped, len(labels)


def _build_adj(
    n: int, edges: dict[tuple[int, int], float]
) -> tuple[list[list[tuple[int, float]]], list[float]]:
    """Adjacency lists plus degrees; a self-loop counts twice in the degree."""
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    degrees = [0.0] * n
    for (u, v), w in sorted(edges.items()):
        adj[u].append((v, w))
        if u != v:
            adj[v].append((u, w))
            degrees[u] += w
            degrees[v] += w
        else:
            degrees[u] += 2.0 * w
    return adj, degrees


def detect_communities(
    graph: SkillGraph, seed: int, resolution: float = 1.0
) -> CommunityPartition:
    """Seeded Louvain over the weighted co-occurrence graph.

    Deterministic for a fixed (graph, seed, resolution): node visiting order
    comes from one seeded generator and all tie-breaks are fixed.
    """
    index = {u: i for i, u in enumerate(graph.nodes)}
    n = len(graph.nodes)
    if not graph.edges:
        logger.warning("edgeless graph: every node becomes its own community")
        assignment = {u: i for i, u in enumerate(graph.nodes)}
        labels = {i: f"community-{i}" for i in range(n)}
        return CommunityPartition(assignment, labels, 0.0, seed, resolution)

    rng = np.random.default_rng(seed)
    edges = {(index[a], index[b]): w for (a, b), w in graph.edges.items()}
    m = sum(edges.values())
    membership = list(range(n))  # original node -> current supernode
    size = n
    while True:
        adj, degrees = _build_adj(size, edges)
        order = [int(x) for x in rng.permutation(size)]
        comm, improved = _one_level(size, adj, degrees, m, order, resolution)
        if not improved:
            break
        edges, mapped, new_size = _aggregate(edges, comm)
        membership = [mapped[comm[s]] for s in membership]
        if new_size == size:
            break
        size = new_size

    # canonical ids: order of first appearance over sorted slugs
    canonical: dict[int, int] = {}
    assignment: dict[str, int] = {}
    for u in graph.nodes:
        c = membership[index[u]]
        if c not in canonical:
            canonical[c] = len(canonical)
        assignment[u] = canonical[c]
    labels = {c: f"community-{c}" for c in sorted(canonical.values())}
    partition = CommunityPartition(assignment, labels, 0.0, seed, resolution)
    q = modularity(graph, partition)
    return CommunityPartition(assignment, labels, q, seed, resolution)


def hop_distances(graph: SkillGraph, source: str) -> dict[str, int]:
    """Unweighted BFS hop counts from ``source`` to every reachable node."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in sorted(graph.neighbors(u)):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist
