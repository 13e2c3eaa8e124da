"""Persisted model snapshot: graph, valuations, scores, and fitted models.

The artifact is a single versioned JSON document (optionally gzipped) built
up by the pipeline stages and served read-only. Serialization is canonical:
sorted keys, fixed list orders, and full-precision floats, so identical
inputs and seeds produce byte-identical files. The build timestamp honours
the SOURCE_DATE_EPOCH convention for reproducible runs.
"""

from __future__ import annotations

import gzip
import io
import json
import logging
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import analysis as an
from . import complementarity as comp
from . import graph as gr
from . import valuation as val
from .errors import (
    ArtifactError,
    DegenerateTestError,
    FoldError,
    NoComplementError,
    PriceUnidentifiableError,
    RegressionError,
)
from .ingest import ProjectRecord, ProjectTable

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def build_timestamp() -> str:
    """UTC ISO timestamp; SOURCE_DATE_EPOCH overrides the wall clock."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    ts = int(epoch) if epoch else datetime.now(timezone.utc).timestamp()
    return datetime.fromtimestamp(int(ts), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class ModelArtifact:
    """In-memory form of the persisted snapshot; stages fill sections in order."""

    schema_version: int
    timestamp: str
    config: dict
    projects: ProjectTable
    graph: gr.SkillGraph
    partition: gr.CommunityPartition
    premia: dict[str, val.SkillPremium] | None = None
    prices: dict[str, val.SkillPrice] | None = None
    trends: dict[str, val.TrendSeries] | None = None
    windows: tuple[tuple[int, int], ...] | None = None
    scores_premium: comp.ComplementarityScores | None = None
    scores_price: comp.ComplementarityScores | None = None
    features: list[an.SkillFeatureRow] | None = None
    models: list[dict] | None = None
    domain_matrix: an.DomainPremiumMatrix | None = None
    automation: dict[str, float] | None = None
    worker_domains: dict | None = None
    ai_cohort: dict | None = None
    reference_community: int | None = None

    def require(self, section: str) -> None:
        if getattr(self, section) is None:
            raise ArtifactError(
                f"artifact is missing the {section!r} section; run the earlier pipeline stage"
            )

    def validate(self) -> None:
        nodes = set(self.graph.nodes)
        for name in ("premia", "prices", "trends", "automation"):
            mapping = getattr(self, name)
            if mapping is not None:
                stray = sorted(set(mapping) - nodes)
                if stray:
                    raise ArtifactError(f"{name} contains slugs outside the graph: {stray[:3]}")
        for u in self.graph.nodes:
            if u not in self.partition.assignment:
                raise ArtifactError(f"partition missing graph node {u!r}")

    def counts(self) -> dict:
        return {
            "projects": len(self.projects),
            "workers": len({r.worker_id for r in self.projects.records}),
            "skills": len(self.graph.nodes),
            "edges": len(self.graph.edges),
            "communities": len(set(self.partition.assignment.values())),
        }


# ---------------------------------------------------------------------------
# Pipeline stages
# ---------------------------------------------------------------------------


def stage_build(
    projects: ProjectTable,
    min_projects: int = 20,
    seed: int = 0,
    resolution: float = 1.0,
    labels: dict[int, str] | None = None,
) -> ModelArtifact:
    """Graph construction plus community detection; creates the artifact."""
    skill_graph = gr.build_graph(projects, min_projects=min_projects)
    partition = gr.detect_communities(skill_graph, seed=seed, resolution=resolution)
    if labels:
        partition = partition.relabel(labels)
    config = {
        "min_projects": min_projects,
        "seed": seed,
        "resolution": resolution,
        "source": projects.provenance,
    }
    return ModelArtifact(
        schema_version=SCHEMA_VERSION,
        timestamp=build_timestamp(),
        config=config,
        projects=projects,
        graph=skill_graph,
        partition=partition,
    )


def stage_value(
    artifact: ModelArtifact, windows=val.DEFAULT_WINDOWS
) -> ModelArtifact:
    """Premia, prices, and windowed trends for every graph node."""
    windows = val.validate_windows(windows)
    premia: dict[str, val.SkillPremium] = {}
    prices: dict[str, val.SkillPrice] = {}
    trends: dict[str, val.TrendSeries] = {}
    for slug in artifact.graph.nodes:
        try:
            premia[slug] = val.premium(slug, artifact.projects)
        except NoComplementError:
            logger.warning("skipping premium of %s: no complement set", slug)
        try:
            prices[slug] = val.price(slug, artifact.projects)
        except (PriceUnidentifiableError, RegressionError) as exc:
            logger.warning("skipping price of %s: %s", slug, exc)
        trends[slug] = val.windowed_premium(slug, artifact.projects, windows)
    artifact.premia = premia
    artifact.prices = prices
    artifact.trends = trends
    artifact.windows = windows
    artifact.config["windows"] = [list(w) for w in windows]
    return artifact


def stage_complement(
    artifact: ModelArtifact, config: comp.PageRankConfig = comp.PageRankConfig()
) -> ModelArtifact:
    """Both PageRank variants; needs the valuation stage for the weights."""
    artifact.require("premia")
    artifact.require("prices")
    premium_values = {
        u: (artifact.premia[u].premium if u in artifact.premia else 0.0)
        for u in artifact.graph.nodes
    }
    price_values = {
        u: (artifact.prices[u].factor if u in artifact.prices else 1.0)
        for u in artifact.graph.nodes
    }
    artifact.scores_premium = comp.value_weighted_pagerank(
        artifact.graph, premium_values, config, value_source="premium"
    )
    artifact.scores_price = comp.value_weighted_pagerank(
        artifact.graph, price_values, config, value_source="price"
    )
    artifact.config["pagerank"] = {
        "damping": config.damping,
        "tolerance": config.tolerance,
        "max_iterations": config.max_iterations,
        "value_floor": config.value_floor,
    }
    return artifact


def resolve_reference_community(
    artifact: ModelArtifact, requested: int | None = None
) -> int:
    """Requested id, else the community labelled 'Software & Tech', else the largest."""
    if requested is not None:
        return requested
    for cid, label in sorted(artifact.partition.labels.items()):
        if label == "Software & Tech":
            return cid
    sizes: dict[int, int] = {}
    for c in artifact.partition.assignment.values():
        sizes[c] = sizes.get(c, 0) + 1
    return min(sizes, key=lambda c: (-sizes[c], c))


def stage_analyze(
    artifact: ModelArtifact,
    automation_table: an.AutomationTable | None = None,
    ai_slugs: list[str] | None = None,
    min_obs: int = 20,
    folds: int = 5,
    seed: int = 0,
    reference_community: int | None = None,
    global_complement: bool = False,
) -> ModelArtifact:
    """Model battery, worker domains, premium matrix, automation, AI cohort."""
    for section in ("premia", "prices", "scores_premium", "scores_price"):
        artifact.require(section)
    reference = resolve_reference_community(artifact, reference_community)
    features = an.build_feature_rows(
        artifact.graph,
        artifact.partition,
        artifact.premia,
        artifact.prices,
        artifact.scores_premium.scores,
        artifact.scores_price.scores,
    )
    fits = an.fit_premium_models(features, reference)
    models = []
    for spec, fit in zip(an.model_specs(), fits):
        try:
            oos = an.out_of_sample_r2(
                features, spec, k=folds, seed=seed, reference_community=reference
            )
        except (FoldError, RegressionError) as exc:
            logger.warning("out-of-sample R2 unavailable for %s: %s", spec.name, exc)
            oos = None
        models.append(
            {
                "name": spec.name,
                "target": spec.target,
                "coefficients": dict(sorted(fit.coefficients.items())),
                "standard_errors": dict(sorted(fit.standard_errors.items())),
                "r2": fit.r2,
                "adjusted_r2": fit.adjusted_r2,
                "n_obs": fit.n_obs,
                "n_params": fit.n_params,
                "dropped_terms": list(fit.dropped_terms),
                "oos_r2": oos,
            }
        )

    domains = an.assign_worker_domains(artifact.projects, artifact.partition)
    matrix = an.domain_premium_matrix(
        artifact.projects,
        domains,
        artifact.partition,
        min_obs=min_obs,
        global_complement=global_complement,
    )
    domain_counts: dict[str, int] = {}
    for d in domains:
        domain_counts[str(d.domain)] = domain_counts.get(str(d.domain), 0) + 1
    worker_summary = {
        "counts": dict(sorted(domain_counts.items())),
        "attribution_rate": an.attribution_rate(domains),
        "n_workers": len(domains),
    }

    automation = None
    if automation_table is not None:
        automation = an.automation_all(
            artifact.projects, automation_table, list(artifact.graph.nodes)
        )

    ai_cohort = None
    if ai_slugs is None:
        ai_slugs = an.load_ai_skills()
    cohort_members = sorted(set(ai_slugs) & set(f.skill for f in features))
    if len(cohort_members) >= 2:
        try:
            stats = an.ai_cohort_stats(features, automation, ai_slugs)
            ai_cohort = {
                "skills": cohort_members,
                "tests": {
                    metric: {
                        "t": res.t,
                        "df": res.df,
                        "p_value": res.p_value,
                        "mean_cohort": res.mean_a,
                        "mean_rest": res.mean_b,
                    }
                    for metric, res in sorted(stats.items())
                },
            }
        except DegenerateTestError as exc:
            logger.warning("AI cohort comparison skipped: %s", exc)
    else:
        logger.warning(
            "AI cohort comparison skipped: %d matching skills", len(cohort_members)
        )

    artifact.features = features
    artifact.models = models
    artifact.domain_matrix = matrix
    artifact.automation = automation
    artifact.worker_domains = worker_summary
    artifact.ai_cohort = ai_cohort
    artifact.reference_community = reference
    artifact.config["analysis"] = {
        "min_obs": min_obs,
        "folds": folds,
        "seed": seed,
        "reference_community": reference,
        "global_complement": global_complement,
    }
    return artifact


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _scores_to_dict(scores: comp.ComplementarityScores) -> dict:
    return {
        "scores": dict(sorted(scores.scores.items())),
        "variant": scores.variant,
        "value_source": scores.value_source,
        "iterations_used": scores.iterations_used,
        "converged": scores.converged,
    }


def _scores_from_dict(raw: dict) -> comp.ComplementarityScores:
    return comp.ComplementarityScores(
        scores=dict(raw["scores"]),
        variant=raw["variant"],
        value_source=raw["value_source"],
        iterations_used=raw["iterations_used"],
        converged=raw["converged"],
    )


def to_dict(artifact: ModelArtifact) -> dict:
    doc: dict = {
        "schema_version": artifact.schema_version,
        "build_timestamp": artifact.timestamp,
        "config": artifact.config,
        "projects": {
            "provenance": artifact.projects.provenance,
            "records": [
                {
                    "project_id": r.project_id,
                    "worker_id": r.worker_id,
                    "year": r.year,
                    "hourly_wage": r.hourly_wage,
                    "occupation": r.occupation,
                    "worker_experience": r.worker_experience,
                    "skills": list(r.skills),
                }
                for r in artifact.projects.records
            ],
        },
        "graph": {
            "min_projects": artifact.graph.min_projects,
            "nodes": [
                {
                    "skill": u,
                    "demand": artifact.graph.stats[u].demand,
                    "supply": artifact.graph.stats[u].supply,
                }
                for u in artifact.graph.nodes
            ],
            "edges": [[a, b, w] for (a, b), w in sorted(artifact.graph.edges.items())],
        },
        "partition": {
            "assignment": dict(sorted(artifact.partition.assignment.items())),
            "labels": {str(c): l for c, l in sorted(artifact.partition.labels.items())},
            "modularity": artifact.partition.modularity,
            "seed": artifact.partition.seed,
            "resolution": artifact.partition.resolution,
        },
    }
    if artifact.premia is not None:
        doc["valuation"] = {
            "windows": [list(w) for w in (artifact.windows or ())],
            "premia": {
                s: {
                    "premium": p.premium,
                    "n_with": p.n_with,
                    "n_without": p.n_without,
                    "mean_with": p.mean_with,
                    "mean_without": p.mean_without,
                }
                for s, p in sorted(artifact.premia.items())
            },
            "prices": {
                s: {
                    "coefficient": p.coefficient,
                    "stderr": p.stderr,
                    "factor": p.factor,
                    "additive": p.additive,
                    "n_obs": p.n_obs,
                }
                for s, p in sorted((artifact.prices or {}).items())
            },
            "trends": {
                s: {
                    "windows": [list(w) for w in t.windows],
                    "premium": list(t.premium_per_window),
                    "demand": list(t.demand_per_window),
                    "supply": list(t.supply_per_window),
                }
                for s, t in sorted((artifact.trends or {}).items())
            },
        }
    if artifact.scores_premium is not None:
        doc["complementarity"] = {
            "config": artifact.config.get("pagerank", {}),
            "premium": _scores_to_dict(artifact.scores_premium),
            "price": _scores_to_dict(artifact.scores_price),
        }
    if artifact.features is not None:
        doc["analysis"] = {
            "reference_community": artifact.reference_community,
            "features": [
                {
                    "skill": f.skill,
                    "premium": f.premium,
                    "price_factor": f.price_factor,
                    "log_supply": f.log_supply,
                    "log_demand": f.log_demand,
                    "community": f.community,
                    "degree_log": f.degree_log,
                    "wpr_premium": f.wpr_premium,
                    "wpr_price": f.wpr_price,
                }
                for f in artifact.features
            ],
            "models": artifact.models,
            "domain_matrix": {
                "min_obs": artifact.domain_matrix.min_obs,
                "domains": list(artifact.domain_matrix.domains),
                "communities": list(artifact.domain_matrix.communities),
                "cells": [
                    [d, c, v, artifact.domain_matrix.observations[(d, c)]]
                    for (d, c), v in sorted(artifact.domain_matrix.cells.items())
                ],
            },
            "automation": (
                dict(sorted(artifact.automation.items()))
                if artifact.automation is not None
                else None
            ),
            "worker_domains": artifact.worker_domains,
            "ai_cohort": artifact.ai_cohort,
        }
    return doc


def from_dict(doc: dict) -> ModelArtifact:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ArtifactError(
            f"unsupported artifact schema_version {doc.get('schema_version')!r} "
            f"(expected {SCHEMA_VERSION})"
        )
    records = tuple(
        ProjectRecord(
            project_id=r["project_id"],
            worker_id=r["worker_id"],
            year=int(r["year"]),
            hourly_wage=float(r["hourly_wage"]),
            occupation=r["occupation"],
            worker_experience=int(r["worker_experience"]),
            skills=tuple(r["skills"]),
        )
        for r in doc["projects"]["records"]
    )
    projects = ProjectTable(records, provenance=doc["projects"]["provenance"])
    g = doc["graph"]
    skill_graph = gr.SkillGraph(
        nodes=tuple(n["skill"] for n in g["nodes"]),
        stats={
            n["skill"]: gr.SkillStats(n["skill"], int(n["demand"]), int(n["supply"]))
            for n in g["nodes"]
        },
        edges={(a, b): float(w) for a, b, w in g["edges"]},
        min_projects=int(g["min_projects"]),
    )
    p = doc["partition"]
    partition = gr.CommunityPartition(
        assignment={s: int(c) for s, c in p["assignment"].items()},
        labels={int(c): l for c, l in p["labels"].items()},
        modularity=float(p["modularity"]),
        seed=int(p["seed"]),
        resolution=float(p["resolution"]),
    )
    artifact = ModelArtifact(
        schema_version=doc["schema_version"],
        timestamp=doc["build_timestamp"],
        config=doc["config"],
        projects=projects,
        graph=skill_graph,
        partition=partition,
    )
    if "valuation" in doc:
        v = doc["valuation"]
        artifact.windows = tuple((int(a), int(b)) for a, b in v["windows"])
        artifact.premia = {
            s: val.SkillPremium(
                skill=s,
                premium=d["premium"],
                n_with=d["n_with"],
                n_without=d["n_without"],
                mean_with=d["mean_with"],
                mean_without=d["mean_without"],
            )
            for s, d in v["premia"].items()
        }
        artifact.prices = {
            s: val.SkillPrice(
                skill=s,
                coefficient=d["coefficient"],
                stderr=d["stderr"],
                factor=d["factor"],
                additive=d["additive"],
                n_obs=d["n_obs"],
            )
            for s, d in v["prices"].items()
        }
        artifact.trends = {
            s: val.TrendSeries(
                skill=s,
                windows=tuple((int(a), int(b)) for a, b in d["windows"]),
                premium_per_window=tuple(d["premium"]),
                demand_per_window=tuple(d["demand"]),
                supply_per_window=tuple(d["supply"]),
            )
            for s, d in v["trends"].items()
        }
    if "complementarity" in doc:
        artifact.scores_premium = _scores_from_dict(doc["complementarity"]["premium"])
        artifact.scores_price = _scores_from_dict(doc["complementarity"]["price"])
    if "analysis" in doc:
        a = doc["analysis"]
        artifact.reference_community = a["reference_community"]
        artifact.features = [
            an.SkillFeatureRow(
                skill=f["skill"],
                premium=f["premium"],
                price_factor=f["price_factor"],
                log_supply=f["log_supply"],
                log_demand=f["log_demand"],
                community=int(f["community"]),
                degree_log=f["degree_log"],
                wpr_premium=f["wpr_premium"],
                wpr_price=f["wpr_price"],
            )
            for f in a["features"]
        ]
        artifact.models = a["models"]
        dm = a["domain_matrix"]
        artifact.domain_matrix = an.DomainPremiumMatrix(
            domains=tuple(int(d) for d in dm["domains"]),
            communities=tuple(int(c) for c in dm["communities"]),
            cells={(int(d), int(c)): float(v) for d, c, v, _ in dm["cells"]},
            observations={(int(d), int(c)): int(o) for d, c, _, o in dm["cells"]},
            min_obs=int(dm["min_obs"]),
        )
        artifact.automation = a["automation"]
        artifact.worker_domains = a["worker_domains"]
        artifact.ai_cohort = a["ai_cohort"]
    artifact.validate()
    return artifact


def save(artifact: ModelArtifact, path: str) -> None:
    """Write canonical JSON; a .gz suffix selects gzip with a fixed mtime."""
    payload = json.dumps(to_dict(artifact), sort_keys=True, indent=1).encode("utf-8")
    if path.endswith(".gz"):
        buf = io.BytesIO()
        with gzip.GzipFile(fileobj=buf, mode="wb", mtime=0) as fh:
            fh.write(payload)
        data = buf.getvalue()
    else:
        data = payload
    with open(path, "wb") as fh:
        fh.write(data)


def load(path: str) -> ModelArtifact:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ArtifactError(f"cannot read artifact {path!r}: {exc}") from exc
    if path.endswith(".gz") or data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"artifact {path!r} is not valid JSON: {exc}") from exc
    return from_dict(doc)
