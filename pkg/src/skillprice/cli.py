"""Command-line pipeline driver.

Stages read and write a single artifact file:
synth/ingest -> build -> value -> complement -> analyze, then
export/report/recommend/serve consume the result. Exit codes: 0 success,
1 validation error, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import artifact as art
from . import export as exp
from . import ingest
from .analysis import load_ai_skills, load_automation_table
from .complementarity import PageRankConfig
from .errors import ConfigError, SkillPriceError
from .valuation import DEFAULT_WINDOWS
from .whatif import recommend, whatif

logger = logging.getLogger(__name__)


def parse_windows(text: str) -> tuple[tuple[int, int], ...]:
    """Parse '2014-2017,2018-2021' into year windows."""
    windows = []
    for part in text.split(","):
        try:
            start, end = part.strip().split("-")
            windows.append((int(start), int(end)))
        except ValueError as exc:
            raise ConfigError(f"bad window {part!r}; expected START-END") from exc
    return tuple(windows)


def _load_synth_config(args) -> ingest.SynthConfig:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        raw.setdefault("seed", args.seed)
        return ingest.synth_config_from_dict(raw)
    cfg = ingest.default_synth_config(seed=args.seed)
    return cfg


def cmd_synth(args) -> int:
    cfg = _load_synth_config(args)
    out = ingest.generate_synthetic(cfg)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        if args.out.endswith((".jsonl", ".ndjson")):
            ingest.write_jsonl(out.table, fh)
        else:
            ingest.write_csv(out.table, fh)
    print(f"wrote {len(out.table)} projects to {args.out}")
    if args.sidecar:
        with open(args.sidecar, "w", encoding="utf-8") as fh:
            json.dump(out.sidecar, fh, sort_keys=True, indent=1)
            fh.write("\n")
        print(f"wrote ground-truth sidecar to {args.sidecar}")
    if args.automation_out:
        occupations = out.table.occupations()
        rng = np.random.default_rng(cfg.seed ^ 0xA070)
        with open(args.automation_out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["occupation", "probability"])
            for occ in occupations:
                writer.writerow([occ, repr(float(np.round(rng.uniform(0.05, 0.95), 4)))])
        print(f"wrote automation table to {args.automation_out}")
    return 0


def cmd_ingest(args) -> int:
    table = ingest.load_projects(args.input, fmt=args.format)
    if table.row_errors:
        print(f"rejected {len(table.row_errors)} rows:", file=sys.stderr)
        for line, reason in table.row_errors[:20]:
            print(f"  line {line}: {reason}", file=sys.stderr)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        if args.out.endswith((".jsonl", ".ndjson")):
            ingest.write_jsonl(table, fh)
        else:
            ingest.write_csv(table, fh)
    print(f"validated {len(table)} projects -> {args.out}")
    return 0


def cmd_build(args) -> int:
    table = ingest.load_projects(args.data)
    labels = None
    if args.labels:
        with open(args.labels, encoding="utf-8") as fh:
            labels = {int(k): str(v) for k, v in json.load(fh).items()}
    snapshot = art.stage_build(
        table,
        min_projects=args.min_projects,
        seed=args.seed,
        resolution=args.resolution,
        labels=labels,
    )
    art.save(snapshot, args.artifact)
    counts = snapshot.counts()
    print(
        f"built graph: {counts['skills']} skills, {counts['edges']} edges, "
        f"{counts['communities']} communities (modularity {snapshot.partition.modularity:.4f})"
    )
    return 0


def cmd_value(args) -> int:
    snapshot = art.load(args.artifact)
    windows = parse_windows(args.windows) if args.windows else DEFAULT_WINDOWS
    art.stage_value(snapshot, windows=windows)
    art.save(snapshot, args.artifact)
    print(f"valued {len(snapshot.premia)} skills ({len(snapshot.prices)} prices)")
    return 0


def cmd_complement(args) -> int:
    snapshot = art.load(args.artifact)
    config = PageRankConfig(
        damping=args.damping,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        value_floor=args.value_floor,
    )
    art.stage_complement(snapshot, config)
    art.save(snapshot, args.artifact)
    flag = "" if snapshot.scores_premium.converged else " (NOT converged)"
    print(
        f"pagerank done in {snapshot.scores_premium.iterations_used}/"
        f"{snapshot.scores_price.iterations_used} iterations{flag}"
    )
    return 0


def cmd_analyze(args) -> int:
    snapshot = art.load(args.artifact)
    automation = None
    if args.automation:
        with open(args.automation, "rb") as fh:
            automation = load_automation_table(fh, provenance=args.automation)
    ai_slugs = load_ai_skills(args.ai_skills) if args.ai_skills else None
    art.stage_analyze(
        snapshot,
        automation_table=automation,
        ai_slugs=ai_slugs,
        min_obs=args.min_obs,
        folds=args.folds,
        seed=args.seed,
        reference_community=args.reference_community,
        global_complement=args.global_complement,
    )
    art.save(snapshot, args.artifact)
    for model in snapshot.models:
        oos = "n/a" if model["oos_r2"] is None else f"{model['oos_r2']:.3f}"
        print(
            f"{model['name']}: adj R2 {model['adjusted_r2']:.3f}, out-of-sample R2 {oos}"
        )
    print(f"worker attribution rate: {snapshot.worker_domains['attribution_rate']:.2%}")
    return 0


def cmd_export(args) -> int:
    snapshot = art.load(args.artifact)
    written = exp.export_all(snapshot, args.outdir)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_report(args) -> int:
    from .report import render_report

    snapshot = art.load(args.artifact)
    written = render_report(snapshot, args.outdir)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_recommend(args) -> int:
    snapshot = art.load(args.artifact)
    bundle = [s.strip() for s in args.bundle.split(",") if s.strip()]
    if args.candidate:
        results = [whatif(bundle, args.candidate, snapshot)]
    else:
        results = recommend(bundle, args.k, snapshot)
    if args.json:
        print(json.dumps([r.to_dict() for r in results], sort_keys=True, indent=1))
        return 0
    for i, r in enumerate(results, start=1):
        prem = "n/a" if r.candidate_premium_in_domain is None else f"{r.candidate_premium_in_domain:+.2%}"
        auto = "n/a" if r.automation_probability is None else f"{r.automation_probability:.2f}"
        tag = " [global premium]" if r.premium_fallback else ""
        noop = " [already in bundle]" if r.no_op else ""
        print(
            f"{i:2d}. {r.candidate:30s} score {r.verdict_score:+.3f}  "
            f"premium {prem}  automation {auto}{tag}{noop}"
        )
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    snapshot = art.load(args.artifact)
    serve(snapshot, host=args.host, port=args.port, ui_dir=args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillprice",
        description="Price skills from project-level labour-market data and explain them through network complementarity.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a planted-truth synthetic corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV (or .jsonl) path")
    p.add_argument("--sidecar", help="optional ground-truth JSON path")
    p.add_argument("--automation-out", help="optional synthetic automation CSV path")
    p.add_argument("--config", help="SynthConfig JSON path")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("ingest", help="validate and convert a project file")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("build", help="build the skill graph and communities")
    p.add_argument("--data", required=True, help="project CSV/JSONL path")
    p.add_argument("--artifact", required=True)
    p.add_argument("--min-projects", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--labels", help="JSON file mapping community id to label")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("value", help="compute premia, prices, and trends")
    p.add_argument("--artifact", required=True)
    p.add_argument("--windows", help="e.g. 2014-2017,2018-2021")
    p.set_defaults(fn=cmd_value)

    p = sub.add_parser("complement", help="compute both PageRank variants")
    p.add_argument("--artifact", required=True)
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--max-iterations", type=int, default=10000)
    p.add_argument("--value-floor", type=float, default=0.01)
    p.set_defaults(fn=cmd_complement)

    p = sub.add_parser("analyze", help="fit models, domains, matrix, automation")
    p.add_argument("--artifact", required=True)
    p.add_argument("--automation", help="occupation,probability CSV")
    p.add_argument("--ai-skills", help="one slug per line (default: packaged list)")
    p.add_argument("--min-obs", type=int, default=20)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reference-community", type=int, default=None)
    p.add_argument("--global-complement", action="store_true")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("export", help="write CSV/JSON tables")
    p.add_argument("--artifact", required=True)
    p.add_argument("--outdir", required=True)
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("report", help="write tables plus rendered figures")
    p.add_argument("--artifact", required=True)
    p.add_argument("--outdir", required=True)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("recommend", help="what-if queries over the artifact")
    p.add_argument("--artifact", required=True)
    p.add_argument("--bundle", required=True, help="comma-separated slugs")
    p.add_argument("--candidate", help="evaluate one candidate instead of ranking")
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_recommend)

    p = sub.add_parser("serve", help="serve the read-only HTTP API")
    p.add_argument("--artifact", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="static directory for the explorer UI")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.fn(args)
    except SkillPriceError as exc:
        print(f'error code={exc.code} message="{exc.message}"', file=sys.stderr)
        return 1
    except Exception as exc:  # unexpected: exit 2 with a one-line diagnostic
        logger.debug("internal error", exc_info=True)
        print(f'error code=internal message="{exc}"', file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
