"""What-if reskilling queries over a built model artifact.

A bundle of skills is treated as a pseudo-worker: its domain is the modal
community of the bundle. A candidate skill is then scored by its
domain-conditional premium (matrix cell, with a flagged fallback to the
global premium), its complementarity, and its automation risk, combined as
a z-score composite: z(premium) + z(complementarity) - z(automation).
"""

from __future__ import annotations

import difflib
import math
from dataclasses import dataclass

from .artifact import ModelArtifact
from .errors import ConfigError, EmptyBundleError, UnknownSkillError
from .graph import hop_distances

DEFAULT_WEIGHTS = (1.0, 1.0, 1.0)


@dataclass(frozen=True)
class WhatIfResult:
    bundle: tuple[str, ...]
    inferred_domain: int
    candidate: str
    candidate_premium_in_domain: float | None
    premium_fallback: bool
    candidate_complementarity: float
    automation_probability: float | None
    distance: float | None
    verdict_score: float
    no_op: bool = False

    def to_dict(self) -> dict:
        return {
            "bundle": list(self.bundle),
            "inferred_domain": self.inferred_domain,
            "candidate": self.candidate,
            "candidate_premium_in_domain": self.candidate_premium_in_domain,
            "fallback": self.premium_fallback,
            "candidate_complementarity": self.candidate_complementarity,
            "automation_probability": self.automation_probability,
            "distance": self.distance,
            "verdict_score": self.verdict_score,
            "no_op": self.no_op,
        }


def suggest_slugs(slug: str, known, n: int = 3) -> list[str]:
    return difflib.get_close_matches(slug, sorted(known), n=n, cutoff=0.5)


def _check_slugs(slugs, artifact: ModelArtifact) -> None:
    for slug in slugs:
        if slug not in artifact.graph:
            raise UnknownSkillError(
                f"unknown skill {slug!r}",
                suggestions=suggest_slugs(slug, artifact.graph.nodes),
            )


def infer_domain(bundle: tuple[str, ...], artifact: ModelArtifact) -> tuple[int, float]:
    """Modal community of the bundle's distinct skills; ties to the lowest id."""
    counts: dict[int, int] = {}
    for slug in set(bundle):
        comm = artifact.partition.assignment[slug]
        counts[comm] = counts.get(comm, 0) + 1
    domain = min(counts, key=lambda c: (-counts[c], c))
    return domain, counts[domain] / len(set(bundle))


class _Zscore:
    """z-transform against a fixed population; degenerate spread maps to 0."""

    def __init__(self, population):
        values = [v for v in population if v is not None]
        n = len(values)
        self.mean = sum(values) / n if n else 0.0
        var = sum((v - self.mean) ** 2 for v in values) / n if n else 0.0
        self.std = math.sqrt(var)

    def __call__(self, x: float | None) -> float:
        if x is None or self.std == 0.0:
            return 0.0
        return (x - self.mean) / self.std


def _populations(artifact: ModelArtifact) -> tuple[_Zscore, _Zscore, _Zscore]:
    artifact.require("premia")
    artifact.require("scores_premium")
    z_premium = _Zscore([p.premium for p in artifact.premia.values()])
    z_comp = _Zscore(list(artifact.scores_premium.scores.values()))
    z_auto = _Zscore(
        list(artifact.automation.values()) if artifact.automation else []
    )
    return z_premium, z_comp, z_auto


def whatif(
    bundle,
    candidate: str,
    artifact: ModelArtifact,
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS,
) -> WhatIfResult:
    """Evaluate adding one candidate skill to a bundle."""
    bundle = tuple(dict.fromkeys(bundle))  # dedupe, keep order
    if not bundle:
        raise EmptyBundleError("empty bundle: cannot infer a domain")
    _check_slugs(bundle, artifact)
    _check_slugs([candidate], artifact)
    artifact.require("premia")
    artifact.require("scores_premium")

    domain, _ = infer_domain(bundle, artifact)
    candidate_community = artifact.partition.assignment[candidate]

    cell = None
    if artifact.domain_matrix is not None:
        cell = artifact.domain_matrix.cell(domain, candidate_community)
    fallback = cell is None
    if fallback:
        prem_obj = artifact.premia.get(candidate)
        premium_used = prem_obj.premium if prem_obj is not None else None
    else:
        premium_used = cell

    complementarity = artifact.scores_premium.scores[candidate]
    automation = (
        artifact.automation.get(candidate) if artifact.automation is not None else None
    )

    dist_map = hop_distances(artifact.graph, candidate)
    hops = [dist_map[s] for s in bundle if s in dist_map and s != candidate]
    distance = sum(hops) / len(hops) if hops else None

    z_premium, z_comp, z_auto = _populations(artifact)
    w_p, w_c, w_a = weights
    score = (
        w_p * z_premium(premium_used)
        + w_c * z_comp(complementarity)
        - w_a * z_auto(automation)
    )
    return WhatIfResult(
        bundle=bundle,
        inferred_domain=domain,
        candidate=candidate,
        candidate_premium_in_domain=premium_used,
        premium_fallback=fallback,
        candidate_complementarity=complementarity,
        automation_probability=automation,
        distance=distance,
        verdict_score=score,
        no_op=candidate in bundle,
    )


def recommend(
    bundle,
    k: int,
    artifact: ModelArtifact,
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS,
) -> list[WhatIfResult]:
    """Top-k candidates by verdict score; ties break alphabetically."""
    if k <= 0:
        raise ConfigError("k must be positive")
    bundle = tuple(dict.fromkeys(bundle))
    if not bundle:
        raise EmptyBundleError("empty bundle: cannot infer a domain")
    _check_slugs(bundle, artifact)
    results = []
    for slug in artifact.graph.nodes:
        if slug in bundle:
            continue
        results.append(whatif(bundle, slug, artifact, weights=weights))
    results.sort(key=lambda r: (-r.verdict_score, r.candidate))
    return results[:k]
