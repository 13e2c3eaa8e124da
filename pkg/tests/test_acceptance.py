"""Acceptance suite: one test per release criterion, each printing a
pass/fail line. Tolerances are pinned here and nowhere else."""

import filecmp
import math
import pathlib
import shutil
from itertools import combinations
from time import perf_counter

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from skillprice.analysis import (
    AutomationTable,
    assign_worker_domains,
    automation_probability,
    domain_premium_matrix,
    fit_premium_models,
    model_specs,
    out_of_sample_r2,
)
from skillprice.complementarity import PageRankConfig, pagerank, value_weighted_pagerank
from skillprice.graph import (
    CommunityPartition,
    SkillGraph,
    SkillStats,
    build_graph,
    detect_communities,
    modularity,
)
from skillprice.ingest import SynthConfig, generate_synthetic
from skillprice.valuation import pearson, premium_all, price_all, windowed_premium

from conftest import (
    brute_modularity,
    brute_premium,
    dense_pagerank,
    planted_feature_rows,
    random_table,
)

HERE = pathlib.Path(__file__).resolve().parent


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# Premium oracle equivalence
# ---------------------------------------------------------------------------


def test_premium_oracle_equivalence():
    """1,000 fuzzed tables: premium_all equals the brute-force two-mean loop."""
    rng = np.random.default_rng(8601)
    t0 = perf_counter()
    checked = 0
    for _ in range(1000):
        table = random_table(rng, max_projects=50)
        batch = premium_all(table, min_projects=1)
        for slug, got in batch.items():
            mean_w, mean_o, prem = brute_premium(slug, table)
            assert got.mean_with == mean_w  # bitwise
            assert got.mean_without == mean_o  # bitwise
            assert abs(got.premium - prem) <= 1e-12
            checked += 1
    elapsed = perf_counter() - t0
    _report(
        "premium oracle equivalence",
        elapsed < 10.0,
        f"{checked} premia over 1000 tables in {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# Noiseless and noisy price recovery
# ---------------------------------------------------------------------------


def test_price_recovery():
    t0 = perf_counter()
    # noiseless: one planted effect per corpus, recovered to 1e-8
    betas = [0.3, -0.25, 0.45, 0.1, -0.4]
    worst = 0.0
    for i, beta in enumerate(betas):
        slug = f"skill-{(2 * i) % 12:03d}"
        cfg = SynthConfig(
            n_workers=80,
            n_projects=1200,
            n_skills=12,
            n_communities=3,
            community_wage_offsets=(1.0, 1.15, 0.9),
            planted_skill_effects={slug: math.exp(beta)},
            noise_sigma=0.0,
            concentration=0.8,
            seed=500 + i,
        )
        out = generate_synthetic(cfg)
        prices = price_all(out.table, min_projects=20)
        worst = max(worst, abs(prices[slug].coefficient - beta))
    assert worst < 1e-8

    # noisy: 5,000 projects, every planted coefficient within 3 SE for >=95%
    n_skills = 40
    planted = {}
    for i in range(n_skills):
        sign = 1 if i % 2 == 0 else -1
        planted[f"skill-{i:03d}"] = sign * (0.05 + 0.3 * ((i // 2) % 10) / 10)
    cfg = SynthConfig(
        n_workers=300,
        n_projects=5000,
        n_skills=n_skills,
        n_communities=4,
        community_wage_offsets=(1.0, 1.1, 0.95, 1.05),
        planted_skill_effects={s: math.exp(b) for s, b in planted.items()},
        noise_sigma=0.2,
        concentration=0.75,
        skills_per_project=(1, 3),
        seed=1,
    )
    out = generate_synthetic(cfg)
    prices = price_all(out.table, min_projects=20)
    covered = sum(
        1 for s, p in prices.items() if abs(p.coefficient - planted[s]) <= 3 * p.stderr
    )
    coverage = covered / len(prices)
    elapsed = perf_counter() - t0
    _report(
        "noiseless and noisy price recovery",
        worst < 1e-8 and coverage >= 0.95 and elapsed < 60.0,
        f"noiseless max err {worst:.2e}; coverage {covered}/{len(prices)}; {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# PageRank correctness
# ---------------------------------------------------------------------------


def _tiny_graph(nodes, edges):
    return SkillGraph(
        nodes=tuple(nodes),
        stats={u: SkillStats(u, 1, 1) for u in nodes},
        edges=edges,
        min_projects=1,
    )


def _structured_suite():
    for n in range(1, 13):
        nodes = [f"n{i:02d}" for i in range(n)]
        yield nodes, {}  # edgeless
        if n >= 2:
            yield nodes, {(nodes[i], nodes[i + 1]): 1.0 for i in range(n - 1)}  # path
            yield nodes, {(nodes[0], nodes[i]): float(i) for i in range(1, n)}  # star
            yield nodes, {(a, b): 1.0 for a, b in combinations(nodes, 2)}  # complete
        if n >= 3:
            cycle = {(nodes[i], nodes[i + 1]): 1.0 for i in range(n - 1)}
            cycle[(nodes[0], nodes[n - 1])] = 2.0
            yield nodes, cycle


def _random_suite(count=200, seed=77):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 13))
        nodes = [f"n{i:02d}" for i in range(n)]
        edges = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.35:
                    edges[(nodes[i], nodes[j])] = float(np.round(rng.uniform(0.5, 4.0), 3))
        yield nodes, edges, {u: float(rng.normal()) for u in nodes}


def test_pagerank_matches_dense_oracle():
    config = PageRankConfig(tolerance=1e-12, max_iterations=20000)
    worst = 0.0
    graphs = 0
    rng = np.random.default_rng(5)

    def check(nodes, edges, values):
        nonlocal worst, graphs
        graphs += 1
        g = _tiny_graph(nodes, edges)
        plain = pagerank(g, config)
        oracle = dense_pagerank(nodes, edges, damping=config.damping)
        worst = max(worst, max(abs(plain.scores[u] - oracle[u]) for u in nodes))
        assert abs(sum(plain.scores.values()) - 1.0) <= 1e-9
        weighted = value_weighted_pagerank(g, values, config)
        oracle_w = dense_pagerank(nodes, edges, damping=config.damping, values=values)
        worst = max(worst, max(abs(weighted.scores[u] - oracle_w[u]) for u in nodes))
        assert abs(sum(weighted.scores.values()) - 1.0) <= 1e-9
        constant = value_weighted_pagerank(g, {u: 3.3 for u in nodes}, config)
        worst_const = max(abs(constant.scores[u] - plain.scores[u]) for u in nodes)
        assert worst_const <= 1e-9

    for nodes, edges in _structured_suite():
        check(nodes, edges, {u: float(rng.normal()) for u in nodes})
    for nodes, edges, values in _random_suite():
        check(nodes, edges, values)

    _report(
        "pagerank dense-oracle equivalence",
        worst <= 1e-9,
        f"{graphs} graphs, max Linf {worst:.2e}",
    )


# ---------------------------------------------------------------------------
# Community recovery
# ---------------------------------------------------------------------------


def test_community_recovery():
    worst_ari = 1.0
    worst_ratio = 0.0
    worst_q = 0.0
    for seed in range(20):
        cfg = SynthConfig(
            n_workers=80,
            n_projects=900,
            n_skills=40,
            n_communities=4,
            concentration=0.97,
            noise_sigma=0.1,
            seed=1000 + seed,
        )
        out = generate_synthetic(cfg)
        g = build_graph(out.table, min_projects=5)
        truth = out.sidecar["planted_partition"]
        intra = sum(w for (a, b), w in g.edges.items() if truth[a] == truth[b])
        inter = sum(w for (a, b), w in g.edges.items() if truth[a] != truth[b])
        worst_ratio = max(worst_ratio, inter / intra)
        part = detect_communities(g, seed=seed)
        ari = adjusted_rand_score(
            [truth[u] for u in g.nodes], [part.assignment[u] for u in g.nodes]
        )
        worst_ari = min(worst_ari, ari)
        worst_q = max(worst_q, abs(part.modularity - brute_modularity(g, part.assignment)))
    _report(
        "planted community recovery",
        worst_ratio <= 0.1 and worst_ari >= 0.95 and worst_q <= 1e-10,
        f"20 seeds, inter/intra <= {worst_ratio:.3f}, ARI >= {worst_ari:.3f}, |dQ| <= {worst_q:.1e}",
    )


# ---------------------------------------------------------------------------
# Nested models
# ---------------------------------------------------------------------------


def test_nested_model_behaviour():
    ok_all = True
    detail = []
    for seed in range(10):
        rows, _ = planted_feature_rows(
            n=400,
            seed=3000 + seed,
            coef_supply=-0.8,
            coef_demand=0.8,
            coef_wpr=2.0,
            offset_scale=2.0,
            noise=0.05,
        )
        m5 = fit_premium_models(rows, reference_community=0)[4]
        signs_ok = (
            m5.coefficients["log_supply"] < 0
            and m5.coefficients["log_demand"] > 0
            and m5.coefficients["wpr_premium"] > 0
        )
        seq = [
            out_of_sample_r2(rows, spec, k=5, seed=seed, reference_community=0)
            for spec in model_specs()[:5]
        ]
        nondec = all(b >= a - 1e-12 for a, b in zip(seq, seq[1:]))
        if not (signs_ok and nondec):
            ok_all = False
            detail.append(f"seed {seed}: signs={signs_ok} seq={seq}")
    _report("nested-model signs and out-of-sample sequence", ok_all, "; ".join(detail) or "10 seeds")


# ---------------------------------------------------------------------------
# Premium-price coherence
# ---------------------------------------------------------------------------


def test_premium_price_coherence():
    rng = np.random.default_rng(31)
    n_skills = 36
    effects = {
        f"skill-{i:03d}": math.exp(b) for i, b in enumerate(rng.uniform(-0.35, 0.35, n_skills))
    }
    worst_r = 1.0
    for seed in (11, 12, 13):
        cfg = SynthConfig(
            n_workers=250,
            n_projects=3000,
            n_skills=n_skills,
            n_communities=4,
            community_wage_offsets=(1.0, 1.12, 0.9, 1.05),
            planted_skill_effects=effects,
            noise_sigma=0.25,
            concentration=0.75,
            seed=seed,
        )
        out = generate_synthetic(cfg)
        premia = premium_all(out.table, min_projects=20)
        prices = price_all(out.table, min_projects=20)
        common = sorted(set(premia) & set(prices))
        r = pearson(
            [premia[s].premium for s in common], [prices[s].factor - 1.0 for s in common]
        )
        worst_r = min(worst_r, r)
    _report("premium-price coherence", worst_r > 0.6, f"min pearson {worst_r:.3f} over 3 corpora")


# ---------------------------------------------------------------------------
# Automation mapping
# ---------------------------------------------------------------------------


def test_automation_mapping():
    from conftest import make_table

    rows = [(["x"], 10.0, f"w{i}", 2019, "A") for i in range(3)]
    rows.append((["x"], 10.0, "w9", 2019, "B"))
    table = make_table(rows)
    probs = AutomationTable({"A": 0.2, "B": 0.6})
    exact = automation_probability("x", table, probs)
    exact_ok = exact == 0.75 * 0.2 + 0.25 * 0.6

    rng = np.random.default_rng(44)
    bounds_ok = True
    for _ in range(100):
        table = random_table(rng)
        fuzz_probs = AutomationTable(
            {occ: float(rng.uniform(0, 1)) for occ in table.occupations()}
        )
        lo = min(fuzz_probs.probabilities.values())
        hi = max(fuzz_probs.probabilities.values())
        for slug in table.all_skills():
            p = automation_probability(slug, table, fuzz_probs)
            if not (lo - 1e-12 <= p <= hi + 1e-12):
                bounds_ok = False
    _report(
        "automation mapping bounds and example",
        exact_ok and bounds_ok,
        f"0.30 example exact={exact_ok}, convex bounds on 100 fuzzed tables",
    )


# ---------------------------------------------------------------------------
# Domain-matrix diagonal dominance
# ---------------------------------------------------------------------------


def test_domain_matrix_diagonal_dominance():
    ok_all = True
    detail = []
    for seed in range(10):
        cfg = SynthConfig(
            n_workers=120,
            n_projects=2500,
            n_skills=24,
            n_communities=3,
            concentration=0.7,
            noise_sigma=0.05,
            same_domain_boost=0.5,
            seed=4000 + seed,
        )
        out = generate_synthetic(cfg)
        part = CommunityPartition(out.sidecar["planted_partition"], {}, 0.0, 0, 1.0)
        domains = assign_worker_domains(out.table, part)
        matrix = domain_premium_matrix(out.table, domains, part, min_obs=10)
        for dom in matrix.domains:
            diag = matrix.cell(dom, dom)
            if diag is None:
                ok_all = False
                detail.append(f"seed {seed}: empty diagonal {dom}")
                continue
            for comm in matrix.communities:
                off = matrix.cell(dom, comm)
                if comm != dom and off is not None and diag <= off:
                    ok_all = False
                    detail.append(f"seed {seed}: cell({dom},{comm})={off:.3f} >= diag {diag:.3f}")
    _report("domain-matrix diagonal dominance", ok_all, "; ".join(detail) or "10 seeds")


# ---------------------------------------------------------------------------
# Pipeline determinism
# ---------------------------------------------------------------------------


def test_pipeline_determinism(tmp_path, monkeypatch):
    """Two seeded CLI runs produce byte-identical artifacts and exports."""
    from skillprice.cli import main

    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    t0 = perf_counter()
    for run in ("one", "two"):
        workdir = tmp_path / run
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        for argv in (
            ["synth", "--seed", "7", "--out", "data.csv", "--automation-out", "auto.csv"],
            ["build", "--data", "data.csv", "--artifact", "artifact.json", "--seed", "7"],
            ["value", "--artifact", "artifact.json"],
            ["complement", "--artifact", "artifact.json"],
            ["analyze", "--artifact", "artifact.json", "--automation", "auto.csv", "--seed", "7"],
            ["export", "--artifact", "artifact.json", "--outdir", "exports"],
        ):
            assert main(argv) == 0, argv
    elapsed = perf_counter() - t0
    identical = filecmp.cmp(
        tmp_path / "one" / "artifact.json", tmp_path / "two" / "artifact.json", shallow=False
    )
    exports_ok = True
    names = sorted(p.name for p in (tmp_path / "one" / "exports").iterdir())
    assert names
    for name in names:
        a = (tmp_path / "one" / "exports" / name).read_bytes()
        b = (tmp_path / "two" / "exports" / name).read_bytes()
        if a != b:
            exports_ok = False
    _report(
        "pipeline determinism",
        identical and exports_ok and elapsed < 120.0,
        f"artifact + {len(names)} exports byte-identical in {elapsed:.1f}s",
    )


def test_pipeline_matches_committed_goldens(tmp_path, monkeypatch):
    """The fixture pipeline reproduces the committed golden files."""
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    data = HERE / "data"
    golden = HERE / "golden"
    shutil.copy(data / "fixture_projects.csv", tmp_path / "fixture_projects.csv")
    shutil.copy(data / "fixture_automation.csv", tmp_path / "fixture_automation.csv")
    from make_golden import run_pipeline

    run_pipeline(tmp_path)
    mismatched = []
    if not filecmp.cmp(tmp_path / "artifact.json", golden / "artifact.json", shallow=False):
        mismatched.append("artifact.json")
    for golden_file in sorted((golden / "exports").iterdir()):
        if (tmp_path / "exports" / golden_file.name).read_bytes() != golden_file.read_bytes():
            mismatched.append(golden_file.name)
    _report(
        "golden-file reproduction",
        not mismatched,
        "all exports byte-identical" if not mismatched else f"mismatch: {mismatched}",
    )


# ---------------------------------------------------------------------------
# Windowed trend ordering
# ---------------------------------------------------------------------------


def test_windowed_trend_ordering():
    ok_all = True
    detail = []
    for seed in range(10):
        cfg = SynthConfig(
            n_workers=150,
            n_projects=2400,
            n_skills=20,
            n_communities=3,
            planted_skill_effects={"skill-005": math.exp(0.3)},
            late_skill_effects={"skill-005": math.exp(0.6)},
            late_start_year=2018,
            noise_sigma=0.15,
            seed=2000 + seed,
        )
        out = generate_synthetic(cfg)
        series = windowed_premium("skill-005", out.table)
        p1, p2 = series.premium_per_window
        if p1 is None or p2 is None or p2 <= p1:
            ok_all = False
            detail.append(f"seed {seed}: w1={p1} w2={p2}")
    _report("windowed trend ordering", ok_all, "; ".join(detail) or "10 seeds")
