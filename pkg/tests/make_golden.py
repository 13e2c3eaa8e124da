"""Regenerate the committed pipeline fixture and its golden outputs.

Run from the repository root:

    python tests/make_golden.py

The golden files pin the byte-exact output of the full CLI pipeline on a
200-project corpus; refresh them only when an intentional change to the
pipeline output format or numerics is made.
"""

from __future__ import annotations

import json
import os
import pathlib
import shutil
import sys

HERE = pathlib.Path(__file__).resolve().parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

FIXTURE_SYNTH_CONFIG = {
    "n_workers": 40,
    "n_projects": 200,
    "n_skills": 16,
    "n_communities": 3,
    "community_wage_offsets": [1.0, 1.15, 0.9],
    "planted_skill_effects": {
        f"skill-{i:03d}": factor
        for i, factor in enumerate(
            [1.30, 1.22, 1.15, 1.08, 1.02, 0.97, 0.92, 0.88, 1.25, 1.18, 1.10, 1.01, 0.95, 0.90, 1.05, 0.99]
        )
    },
    "noise_sigma": 0.15,
    "concentration": 0.85,
    "seed": 424242,
}

PIPELINE = [
    ["build", "--data", "fixture_projects.csv", "--artifact", "artifact.json", "--min-projects", "20", "--seed", "7"],
    ["value", "--artifact", "artifact.json"],
    ["complement", "--artifact", "artifact.json"],
    ["analyze", "--artifact", "artifact.json", "--automation", "fixture_automation.csv", "--min-obs", "20", "--seed", "7"],
    ["export", "--artifact", "artifact.json", "--outdir", "exports"],
]


def run_pipeline(workdir: pathlib.Path) -> None:
    """Run the golden pipeline inside workdir (expects the fixtures there)."""
    from skillprice.cli import main

    old = os.getcwd()
    os.chdir(workdir)
    try:
        for argv in PIPELINE:
            code = main(argv)
            if code != 0:
                raise SystemExit(f"pipeline step failed ({code}): {argv}")
    finally:
        os.chdir(old)


def main() -> None:
    os.environ["SOURCE_DATE_EPOCH"] = "0"
    DATA.mkdir(exist_ok=True)
    if GOLDEN.exists():
        shutil.rmtree(GOLDEN)
    GOLDEN.mkdir()

    from skillprice.cli import main as cli_main

    with open(DATA / "fixture_synth.json", "w", encoding="utf-8") as fh:
        json.dump(FIXTURE_SYNTH_CONFIG, fh, sort_keys=True, indent=1)
        fh.write("\n")

    old = os.getcwd()
    os.chdir(DATA)
    try:
        code = cli_main(
            [
                "synth",
                "--config",
                "fixture_synth.json",
                "--out",
                "fixture_projects.csv",
                "--sidecar",
                "fixture_sidecar.json",
                "--automation-out",
                "fixture_automation.csv",
            ]
        )
        if code != 0:
            raise SystemExit("synth failed")
    finally:
        os.chdir(old)

    work = GOLDEN
    shutil.copy(DATA / "fixture_projects.csv", work / "fixture_projects.csv")
    shutil.copy(DATA / "fixture_automation.csv", work / "fixture_automation.csv")
    run_pipeline(work)
    # the inputs are committed under data/, not golden/
    (work / "fixture_projects.csv").unlink()
    (work / "fixture_automation.csv").unlink()
    print(f"golden outputs written to {GOLDEN}")


if __name__ == "__main__":
    sys.exit(main())
