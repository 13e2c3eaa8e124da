"""Delimited and JSON exports of a built artifact.

Float cells use repr() so exports are full-precision and reproducible
byte-for-byte across runs.
"""

from __future__ import annotations

import csv
import json
import os

from .artifact import ModelArtifact, to_dict


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_nodes_csv(artifact: ModelArtifact, path: str) -> None:
    rows = (
        (
            u,
            artifact.graph.stats[u].demand,
            artifact.graph.stats[u].supply,
            artifact.partition.assignment[u],
        )
        for u in artifact.graph.nodes
    )
    _write_rows(path, ["skill", "demand", "supply", "community"], rows)


def write_edges_csv(artifact: ModelArtifact, path: str) -> None:
    rows = ((a, b, w) for (a, b), w in sorted(artifact.graph.edges.items()))
    _write_rows(path, ["skill_a", "skill_b", "weight"], rows)


def write_partition_json(artifact: ModelArtifact, path: str) -> None:
    doc = {
        "assignment": dict(sorted(artifact.partition.assignment.items())),
        "labels": {str(c): l for c, l in sorted(artifact.partition.labels.items())},
        "modularity": artifact.partition.modularity,
        "seed": artifact.partition.seed,
        "resolution": artifact.partition.resolution,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def write_valuation_csv(artifact: ModelArtifact, path: str) -> None:
    artifact.require("premia")
    rows = []
    for u in artifact.graph.nodes:
        prem = artifact.premia.get(u)
        price = (artifact.prices or {}).get(u)
        rows.append(
            (
                u,
                prem.premium if prem else None,
                price.factor if price else None,
                price.additive if price else None,
                artifact.graph.stats[u].demand,
                artifact.graph.stats[u].supply,
                artifact.partition.assignment[u],
            )
        )
    _write_rows(
        path,
        ["skill", "premium", "price_factor", "price_additive", "demand", "supply", "community"],
        rows,
    )


def write_skill_table_csv(artifact: ModelArtifact, path: str) -> None:
    """Full per-skill table: valuation, complementarity, automation."""
    artifact.require("premia")
    rows = []
    for u in artifact.graph.nodes:
        prem = artifact.premia.get(u)
        price = (artifact.prices or {}).get(u)
        comp_p = artifact.scores_premium.scores.get(u) if artifact.scores_premium else None
        comp_f = artifact.scores_price.scores.get(u) if artifact.scores_price else None
        auto = artifact.automation.get(u) if artifact.automation else None
        rows.append(
            (
                u,
                prem.premium if prem else None,
                price.factor if price else None,
                price.additive if price else None,
                comp_p,
                comp_f,
                auto,
                artifact.graph.stats[u].demand,
                artifact.graph.stats[u].supply,
                artifact.partition.assignment[u],
            )
        )
    _write_rows(
        path,
        [
            "skill",
            "premium",
            "price_factor",
            "price_additive",
            "complementarity_premium",
            "complementarity_price",
            "automation_probability",
            "demand",
            "supply",
            "community",
        ],
        rows,
    )


def write_trends_csv(artifact: ModelArtifact, path: str) -> None:
    artifact.require("trends")
    rows = []
    for slug in sorted(artifact.trends):
        t = artifact.trends[slug]
        for (start, end), prem, dem, sup in zip(
            t.windows, t.premium_per_window, t.demand_per_window, t.supply_per_window
        ):
            rows.append((slug, start, end, prem, dem, sup))
    _write_rows(
        path,
        ["skill", "window_start", "window_end", "premium", "demand", "supply"],
        rows,
    )


def write_scores_csv(artifact: ModelArtifact, path: str) -> None:
    artifact.require("scores_premium")
    rows = []
    for scores in (artifact.scores_premium, artifact.scores_price):
        for slug in sorted(scores.scores):
            rows.append(
                (slug, scores.scores[slug], scores.variant, scores.value_source, scores.converged)
            )
    _write_rows(path, ["skill", "score", "variant", "value_source", "converged"], rows)


def write_models_json(artifact: ModelArtifact, path: str) -> None:
    artifact.require("models")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"models": artifact.models}, fh, sort_keys=True, indent=1)
        fh.write("\n")


def write_domain_matrix_csv(artifact: ModelArtifact, path: str) -> None:
    artifact.require("domain_matrix")
    matrix = artifact.domain_matrix
    header = ["worker_domain"] + [f"community_{c}" for c in matrix.communities]
    rows = []
    for dom in matrix.domains:
        rows.append([dom] + [matrix.cell(dom, c) for c in matrix.communities])
    _write_rows(path, header, rows)


def write_meta_json(artifact: ModelArtifact, path: str) -> None:
    doc = {
        "schema_version": artifact.schema_version,
        "build_timestamp": artifact.timestamp,
        "config": artifact.config,
        "counts": artifact.counts(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def export_all(artifact: ModelArtifact, outdir: str) -> list[str]:
    """Write every table the artifact has sections for; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []

    def emit(name: str, writer) -> None:
        path = os.path.join(outdir, name)
        writer(artifact, path)
        written.append(path)

    emit("meta.json", write_meta_json)
    emit("nodes.csv", write_nodes_csv)
    emit("edges.csv", write_edges_csv)
    emit("partition.json", write_partition_json)
    if artifact.premia is not None:
        emit("valuation.csv", write_valuation_csv)
        emit("skill_table.csv", write_skill_table_csv)
        emit("trends.csv", write_trends_csv)
    if artifact.scores_premium is not None:
        emit("scores.csv", write_scores_csv)
    if artifact.models is not None:
        emit("models.json", write_models_json)
        emit("domain_matrix.csv", write_domain_matrix_csv)
    return written
