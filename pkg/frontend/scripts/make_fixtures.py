"""Record API fixtures for the explorer UI tests.

Builds a deterministic artifact, serves it through the real FastAPI app via
the test client, and captures responses plus independently computed
expectations (session summary, quadrant placements) that the TypeScript
tests must reproduce. Run from the repository root:

    python frontend/scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import os
import pathlib
import sys

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "frontend" / "test" / "fixtures"


def build_artifact():
    from skillprice import artifact as art
    from skillprice.analysis import AutomationTable
    from skillprice.ingest import default_synth_config, generate_synthetic

    os.environ["SOURCE_DATE_EPOCH"] = "0"
    cfg = default_synth_config(seed=42)
    out = generate_synthetic(cfg)
    snap = art.stage_build(out.table, min_projects=20, seed=42)
    art.stage_value(snap)
    art.stage_complement(snap)
    rng = np.random.default_rng(4242)
    probs = {occ: float(np.round(rng.uniform(0.1, 0.9), 3)) for occ in out.table.occupations()}
    art.stage_analyze(snap, automation_table=AutomationTable(probs), min_obs=20, seed=42)
    return snap


def main() -> int:
    from fastapi.testclient import TestClient

    from skillprice.service import create_app

    snap = build_artifact()
    client = TestClient(create_app(snap))
    FIXTURES.mkdir(parents=True, exist_ok=True)

    def dump(name: str, payload) -> None:
        with open(FIXTURES / name, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
            fh.write("\n")

    skills = client.get("/api/v1/skills", params={"limit": 100000, "sort": "skill"}).json()
    dump("skills.json", skills)
    dump("communities.json", client.get("/api/v1/communities").json())
    dump("meta.json", client.get("/api/v1/meta").json())

    nodes = [row["skill"] for row in skills["skills"]]
    bundle = nodes[:2]
    dump(
        "neighbors.json",
        {
            slug: client.get(f"/api/v1/skills/{slug}/neighbors", params={"k": 8}).json()
            for slug in bundle
        },
    )

    # 20 candidates scored against the fixed bundle
    candidates = [n for n in nodes if n not in bundle][:20]
    whatifs = {}
    for cand in candidates:
        res = client.post("/api/v1/whatif", json={"bundle": bundle, "candidate": cand})
        assert res.status_code == 200, cand
        whatifs[cand] = res.json()
    dump("whatifs.json", whatifs)

    # mean-split quadrant expectations, computed independently of the UI code
    with_both = [
        r
        for r in skills["skills"]
        if r["premium"] is not None and r["automation_probability"] is not None
    ]
    mean_premium = sum(r["premium"] for r in with_both) / len(with_both)
    mean_auto = sum(r["automation_probability"] for r in with_both) / len(with_both)
    placements = {}
    for cand, res in whatifs.items():
        prem = res["candidate_premium_in_domain"]
        auto = res["automation_probability"]
        if prem is None or auto is None:
            placements[cand] = None
            continue
        high = prem >= mean_premium
        low_risk = auto < mean_auto
        placements[cand] = (
            ("high-value-" if high else "low-value-") + ("low-risk" if low_risk else "high-risk")
        )
    dump(
        "quadrant_expected.json",
        {"mean_premium": mean_premium, "mean_automation": mean_auto, "placements": placements},
    )

    # a session history over real responses plus its expected final summary
    first, second, third = candidates[0], candidates[1], candidates[2]
    actions = [
        {"kind": "add", "skill": bundle[0]},
        {"kind": "add", "skill": bundle[1]},
        {"kind": "whatif", "result": whatifs[first]},
        {"kind": "apply", "result": whatifs[first]},
        {"kind": "remove", "skill": bundle[1]},
        {"kind": "whatif", "result": whatifs[second]},
        {"kind": "whatif", "result": whatifs[third]},
        {"kind": "apply", "result": whatifs[third]},
        {"kind": "add", "skill": bundle[0]},  # duplicate add: no-op
    ]
    expected_summary = {
        "bundle": [bundle[0], first, third],
        "size": 3,
        "inferredDomain": whatifs[third]["inferred_domain"],
        "lastWhatIfCandidate": third,
    }
    dump("session.json", {"actions": actions, "expected": expected_summary})
    print(f"fixtures written to {FIXTURES}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
