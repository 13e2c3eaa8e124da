"""Skill complementarity via PageRank over the co-occurrence network.

The plain variant distributes each node's rank proportionally to edge
weights. The value-weighted variant scales what a node sends out by its
(min-max normalized) economic value, so mass flows preferentially through
high-value skills; because that update does not conserve mass, the score
vector is renormalized to sum one after every sweep.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import ConfigError, MissingValueError
from .graph import SkillGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-12
    max_iterations: int = 10000
    value_floor: float = 0.01

    def validate(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ConfigError("damping must lie strictly between 0 and 1")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if not 0.0 < self.value_floor <= 1.0:
            raise ConfigError("value_floor must lie in (0, 1]")


@dataclass(frozen=True)
class ComplementarityScores:
    """Normalized centrality scores (sum one, strictly positive)."""

    scores: dict[str, float]
    variant: str  # "plain" | "value_weighted"
    value_source: str  # "uniform" | "premium" | "price"
    iterations_used: int
    converged: bool

    def as_list(self) -> list[tuple[str, float]]:
        return sorted(self.scores.items(), key=lambda kv: (-kv[1], kv[0]))


def normalize_values(
    values: dict[str, float], nodes: tuple[str, ...], floor: float
) -> dict[str, float]:
    """Min-max map raw values into [floor, 1]; a constant map becomes all ones."""
    missing = [u for u in nodes if u not in values]
    if missing:
        raise MissingValueError(f"missing value for {len(missing)} nodes (e.g. {missing[0]!r})")
    vals = [values[u] for u in nodes]
    lo, hi = min(vals), max(vals)
    if hi == lo:
        return {u: 1.0 for u in nodes}
    span = hi - lo
    return {u: floor + (1.0 - floor) * (values[u] - lo) / span for u in nodes}


def _power_iteration(
    graph: SkillGraph,
    v: dict[str, float],
    config: PageRankConfig,
    renormalize: bool,
) -> tuple[dict[str, float], int, bool]:
    nodes = graph.nodes
    n = len(nodes)
    d = config.damping
    degree = {u: graph.weighted_degree(u) for u in nodes}
    adjacency = {u: sorted(graph.neighbors(u).items()) for u in nodes}
    x = {u: 1.0 / n for u in nodes}
    iterations = 0
    converged = False
    base = (1.0 - d) / n
    while iterations < config.max_iterations:
        iterations += 1
        nxt = {u: base for u in nodes}
        isolated_mass = 0.0
        for j in nodes:
            c_j = degree[j]
            if c_j == 0.0:
                isolated_mass += x[j] * v[j]
                continue
            out = d * x[j] * v[j] / c_j
            for nbr, w in adjacency[j]:
                nxt[nbr] += out * w
        if isolated_mass:
            share = d * isolated_mass / n
            for u in nodes:
                nxt[u] += share
        if renormalize:
            total = 0.0
            for u in nodes:
                total += nxt[u]
            for u in nodes:
                nxt[u] /= total
        err = 0.0
        for u in nodes:
            err += abs(nxt[u] - x[u])
        x = nxt
        if err < config.tolerance:
            converged = True
            break
    total = 0.0
    for u in nodes:
        total += x[u]
    scores = {u: x[u] / total for u in nodes}
    if not converged:
        logger.warning("pagerank did not converge within %d iterations", iterations)
    return scores, iterations, converged


def pagerank(graph: SkillGraph, config: PageRankConfig = PageRankConfig()) -> ComplementarityScores:
    """Standard weighted PageRank on the undirected skill graph.

    Node j distributes its rank proportionally to edge weights (c_j is the
    weighted degree); isolated nodes redistribute uniformly.
    """
    config.validate()
    if not graph.nodes:
        raise ConfigError("empty graph")
    ones = {u: 1.0 for u in graph.nodes}
    scores, iters, converged = _power_iteration(graph, ones, config, renormalize=False)
    return ComplementarityScores(
        scores=scores,
        variant="plain",
        value_source="uniform",
        iterations_used=iters,
        converged=converged,
    )


def value_weighted_pagerank(
    graph: SkillGraph,
    values: dict[str, float],
    config: PageRankConfig = PageRankConfig(),
    value_source: str = "premium",
) -> ComplementarityScores:
    """PageRank where a node's outflow is scaled by its normalized value.

    Raw values (negative premia included) are min-max mapped to
    [value_floor, 1]; when all values coincide the result matches the plain
    variant exactly.
    """
    config.validate()
    if not graph.nodes:
        raise ConfigError("empty graph")
    v = normalize_values(values, graph.nodes, config.value_floor)
    scores, iters, converged = _power_iteration(graph, v, config, renormalize=True)
    return ComplementarityScores(
        scores=scores,
        variant="value_weighted",
        value_source=value_source,
        iterations_used=iters,
        converged=converged,
    )
