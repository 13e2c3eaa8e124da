"""Shared fixtures and independent oracles used across the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from skillprice.analysis import SkillFeatureRow
from skillprice.ingest import ProjectRecord, ProjectTable


def make_table(rows, provenance="test") -> ProjectTable:
    """Build a table from (skills, wage) or (skills, wage, worker, year, occ, exp) rows."""
    records = []
    for i, row in enumerate(rows):
        skills = tuple(sorted(set(row[0])))
        wage = float(row[1])
        worker = row[2] if len(row) > 2 else f"w{i}"
        year = row[3] if len(row) > 3 else 2019
        occ = row[4] if len(row) > 4 else "General"
        exp = row[5] if len(row) > 5 else 0
        records.append(
            ProjectRecord(
                project_id=f"p{i}",
                worker_id=worker,
                year=year,
                hourly_wage=wage,
                occupation=occ,
                worker_experience=exp,
                skills=skills,
            )
        )
    return ProjectTable(tuple(records), provenance=provenance)


def random_table(rng: np.random.Generator, max_projects=50, n_skills=8, n_workers=6) -> ProjectTable:
    """Small fuzzed table with positive wages and non-empty skill sets."""
    n = int(rng.integers(2, max_projects + 1))
    slugs = [f"s{i}" for i in range(n_skills)]
    rows = []
    for _ in range(n):
        k = int(rng.integers(1, min(4, n_skills) + 1))
        skills = list(rng.choice(slugs, size=k, replace=False))
        wage = float(np.round(rng.uniform(5.0, 120.0), 2))
        worker = f"w{int(rng.integers(0, n_workers))}"
        year = int(rng.integers(2014, 2022))
        rows.append((skills, wage, worker, year, f"occ-{int(rng.integers(0, 3))}", int(rng.integers(0, 20))))
    return make_table(rows)


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def brute_premium(skill: str, table: ProjectTable) -> tuple[float, float, float]:
    """Two-mean loop the premium implementation is checked against."""
    sum_w = 0.0
    n_w = 0
    sum_o = 0.0
    n_o = 0
    for rec in table.records:
        if skill in rec.skills:
            sum_w += rec.hourly_wage
            n_w += 1
        else:
            sum_o += rec.hourly_wage
            n_o += 1
    mean_w = sum_w / n_w
    mean_o = sum_o / n_o
    return mean_w, mean_o, mean_w / mean_o - 1.0


def brute_modularity(graph, assignment: dict[str, int]) -> float:
    """O(n^2) evaluation of Q = (1/2m) sum_ij [w_ij - k_i k_j / 2m] delta."""
    nodes = list(graph.nodes)
    m2 = 2.0 * sum(graph.edges.values())
    if m2 == 0:
        return 0.0
    k = {u: graph.weighted_degree(u) for u in nodes}
    q = 0.0
    for u in nodes:
        for v in nodes:
            if assignment[u] != assignment[v]:
                continue
            w = graph.neighbors(u).get(v, 0.0) if u != v else 0.0
            q += w - k[u] * k[v] / m2
    return q / m2


def dense_pagerank(
    nodes,
    edges,
    damping=0.85,
    values=None,
    floor=0.01,
    tol=1e-13,
    max_iter=20000,
):
    """Dense-matrix power iteration oracle for both PageRank variants.

    Column j of the transition matrix distributes mass proportionally to
    edge weights (uniformly for isolated nodes); the value-weighted variant
    scales column j by the min-max normalized value of j and renormalizes
    the vector every sweep.
    """
    nodes = list(nodes)
    n = len(nodes)
    idx = {u: i for i, u in enumerate(nodes)}
    W = np.zeros((n, n))
    for (a, b), w in edges.items():
        W[idx[a], idx[b]] = w
        W[idx[b], idx[a]] = w
    col = W.sum(axis=0)
    M = np.empty((n, n))
    for j in range(n):
        M[:, j] = W[:, j] / col[j] if col[j] > 0 else 1.0 / n
    if values is None:
        v = np.ones(n)
        renorm = False
    else:
        raw = np.array([values[u] for u in nodes], dtype=float)
        lo, hi = raw.min(), raw.max()
        v = np.ones(n) if hi == lo else floor + (1.0 - floor) * (raw - lo) / (hi - lo)
        renorm = True
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = (1.0 - damping) / n + damping * (M @ (v * x))
        if renorm:
            nxt = nxt / nxt.sum()
        err = float(np.abs(nxt - x).sum())
        x = nxt
        if err < tol:
            break
    x = x / x.sum()
    return dict(zip(nodes, x))


def planted_feature_rows(
    n=400,
    seed=0,
    coef_supply=-0.1,
    coef_demand=0.1,
    coef_wpr=2.0,
    noise=0.02,
    n_communities=4,
    offset_scale=0.5,
) -> tuple[list[SkillFeatureRow], dict]:
    """Skill-level feature table with known linear structure.

    premium = 0.5 + coef_supply*log_supply + coef_demand*log_demand +
    community offset + coef_wpr*wpr_premium + noise; degree_log is a noisy
    proxy of wpr_premium so the centrality swap in the model battery gains
    signal. price_factor follows the same structure on wpr_price.
    """
    rng = np.random.default_rng(seed)
    offsets = {
        c: float(o) for c, o in enumerate(rng.uniform(-offset_scale, offset_scale, n_communities))
    }
    rows = []
    for i in range(n):
        ls = float(rng.normal(0.0, 1.0))
        ld = float(rng.normal(0.0, 1.0))
        comm = int(rng.integers(0, n_communities))
        wpr = float(rng.normal(0.0, 1.0))
        wpr_price = wpr + float(rng.normal(0.0, 0.3))
        degree_log = 0.8 * wpr + float(rng.normal(0.0, 0.6))
        prem = (
            0.5
            + coef_supply * ls
            + coef_demand * ld
            + offsets[comm]
            + coef_wpr * wpr
            + float(rng.normal(0.0, noise))
        )
        pf = (
            1.0
            + coef_supply * ls
            + coef_demand * ld
            + offsets[comm]
            + coef_wpr * wpr_price
            + float(rng.normal(0.0, noise))
        )
        rows.append(
            SkillFeatureRow(
                skill=f"skill-{i:03d}",
                premium=prem,
                price_factor=pf,
                log_supply=ls,
                log_demand=ld,
                community=comm,
                degree_log=degree_log,
                wpr_premium=wpr,
                wpr_price=wpr_price,
            )
        )
    truth = {
        "coef_supply": coef_supply,
        "coef_demand": coef_demand,
        "coef_wpr": coef_wpr,
        "offsets": offsets,
        "intercept": 0.5,
    }
    return rows, truth


@pytest.fixture
def simple_table():
    return make_table(
        [
            (["a"], 20.0, "w1"),
            (["a", "b"], 30.0, "w2"),
            (["b"], 10.0, "w3"),
        ]
    )


def build_full_artifact(seed=101, n_projects=800, min_obs=10):
    """Run every pipeline stage in-process on a small planted corpus."""
    from skillprice import artifact as art
    from skillprice.analysis import AutomationTable
    from skillprice.ingest import SynthConfig, generate_synthetic

    rng = np.random.default_rng(seed)
    n_skills = 20
    effects = {
        f"skill-{i:03d}": float(np.exp(rng.uniform(-0.3, 0.3))) for i in range(n_skills)
    }
    cfg = SynthConfig(
        n_workers=120,
        n_projects=n_projects,
        n_skills=n_skills,
        n_communities=3,
        community_wage_offsets=(1.0, 1.1, 0.92),
        planted_skill_effects=effects,
        noise_sigma=0.15,
        concentration=0.8,
        seed=seed,
    )
    out = generate_synthetic(cfg)
    snap = art.stage_build(out.table, min_projects=10, seed=3)
    art.stage_value(snap)
    art.stage_complement(snap)
    probs = {
        occ: float(np.round(rng.uniform(0.1, 0.9), 3)) for occ in out.table.occupations()
    }
    art.stage_analyze(
        snap,
        automation_table=AutomationTable(probs, provenance="synthetic"),
        min_obs=min_obs,
        seed=3,
    )
    return snap


@pytest.fixture(scope="session")
def built_artifact():
    return build_full_artifact()
