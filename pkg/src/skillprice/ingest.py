"""Project-record schema, parsers, and the synthetic corpus generator.

This module is the single source of truth for what a project looks like.
Everything downstream (graph construction, valuation, regressions) consumes
the :class:`ProjectTable` produced here.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import re
from dataclasses import dataclass, field, replace
from typing import BinaryIO, Iterable, TextIO

import numpy as np

from .errors import ConfigError, CorruptInputError, InputFormatError

logger = logging.getLogger(__name__)

CSV_FIELDS = (
    "project_id",
    "worker_id",
    "year",
    "hourly_wage",
    "occupation",
    "worker_experience",
    "skills",
)

DEFAULT_YEAR_RANGE = (2014, 2021)

_WHITESPACE = re.compile(r"\s+")


def normalize_slug(raw: str) -> str:
    """Lowercase a skill name and replace internal whitespace with hyphens."""
    return _WHITESPACE.sub("-", raw.strip().lower())


@dataclass(frozen=True)
class ProjectRecord:
    """One completed freelance project, the unit of observation everywhere.

    ``skills`` is stored as a sorted, deduplicated tuple so that iteration
    order is stable across processes (set semantics, canonical order).
    """

    project_id: str
    worker_id: str
    year: int
    hourly_wage: float
    occupation: str
    worker_experience: int
    skills: tuple[str, ...]

    def has_skill(self, slug: str) -> bool:
        return slug in self.skills


@dataclass(frozen=True)
class ProjectTable:
    """Validated, ordered collection of project records."""

    records: tuple[ProjectRecord, ...]
    provenance: str = ""
    row_errors: tuple[tuple[int, str], ...] = ()

    def __len__(self) -> int:
        return len(self.records)

    def restrict_years(self, start: int, end: int) -> "ProjectTable":
        """Sub-table of records with start <= year <= end."""
        kept = tuple(r for r in self.records if start <= r.year <= end)
        return ProjectTable(kept, provenance=f"{self.provenance}[{start}-{end}]")

    def restrict_workers(self, worker_ids: set[str]) -> "ProjectTable":
        kept = tuple(r for r in self.records if r.worker_id in worker_ids)
        return ProjectTable(kept, provenance=f"{self.provenance}[workers]")

    def all_skills(self) -> list[str]:
        seen: set[str] = set()
        for rec in self.records:
            seen.update(rec.skills)
        return sorted(seen)

    def occupations(self) -> list[str]:
        return sorted({r.occupation for r in self.records})


def _validate_row(
    raw: dict,
    line: int,
    seen_ids: set[str],
    year_range: tuple[int, int],
) -> ProjectRecord | str:
    """Return a record, or a rejection reason string."""
    project_id = str(raw.get("project_id", "")).strip()
    worker_id = str(raw.get("worker_id", "")).strip()
    if not project_id:
        return "missing project_id"
    if project_id in seen_ids:
        return "duplicate project_id"
    if not worker_id:
        return "missing worker_id"
    try:
        year = int(raw["year"])
    except (ValueError, TypeError, KeyError):
        return "year is not an integer"
    lo, hi = year_range
    if not lo <= year <= hi:
        return f"year {year} outside validity range {lo}-{hi}"
    try:
        wage = float(raw["hourly_wage"])
    except (ValueError, TypeError, KeyError):
        return "hourly_wage is not a number"
    if not math.isfinite(wage) or wage <= 0:
        return "non-positive wage"
    occupation = str(raw.get("occupation", "")).strip()
    if not occupation:
        return "missing occupation"
    try:
        experience = int(raw["worker_experience"])
    except (ValueError, TypeError, KeyError):
        return "worker_experience is not an integer"
    if experience < 0:
        return "negative worker_experience"

    raw_skills = raw.get("skills")
    if isinstance(raw_skills, str):
        parts: Iterable[str] = raw_skills.split(";")
    elif isinstance(raw_skills, list):
        if not all(isinstance(s, str) for s in raw_skills):
            return "skills must be strings"
        parts = raw_skills
    else:
        return "missing skills"
    skills = tuple(sorted({normalize_slug(s) for s in parts if s.strip()}))
    if not skills:
        return "empty skills"

    return ProjectRecord(
        project_id=project_id,
        worker_id=worker_id,
        year=year,
        hourly_wage=wage,
        occupation=occupation,
        worker_experience=experience,
        skills=skills,
    )


def parse_projects(
    source: BinaryIO | TextIO | str,
    fmt: str,
    *,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
    max_reject_fraction: float = 0.5,
    provenance: str = "",
) -> ProjectTable:
    """Parse a CSV or JSONL stream into a validated :class:`ProjectTable`.

    Invalid rows are recorded in ``row_errors`` with their line number and a
    reason; row order of the valid records matches the input. If more than
    ``max_reject_fraction`` of data rows are rejected the whole input is
    treated as corrupt.
    """
    if fmt not in ("csv", "jsonl"):
        raise InputFormatError(f"unknown format {fmt!r} (expected csv or jsonl)")

    if isinstance(source, str):
        text = source
    else:
        data = source.read()
        if isinstance(data, bytes):
            try:
                text = data.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise InputFormatError(f"input is not valid UTF-8: {exc}") from exc
        else:
            text = data

    records: list[ProjectRecord] = []
    row_errors: list[tuple[int, str]] = []
    seen_ids: set[str] = set()
    n_rows = 0

    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None:
            raise InputFormatError("empty CSV input (missing header)")
        if set(reader.fieldnames) != set(CSV_FIELDS):
            raise InputFormatError(
                f"CSV header {reader.fieldnames} does not match schema {list(CSV_FIELDS)}"
            )
        for raw in reader:
            n_rows += 1
            line = reader.line_num
            if any(v is None for v in raw.values()) or None in raw:
                row_errors.append((line, "wrong number of fields"))
                continue
            result = _validate_row(raw, line, seen_ids, year_range)
            if isinstance(result, str):
                row_errors.append((line, result))
            else:
                seen_ids.add(result.project_id)
                records.append(result)
    else:
        for i, line_text in enumerate(text.splitlines(), start=1):
            if not line_text.strip():
                continue
            n_rows += 1
            try:
                raw = json.loads(line_text)
            except json.JSONDecodeError:
                row_errors.append((i, "invalid JSON"))
                continue
            if not isinstance(raw, dict):
                row_errors.append((i, "row is not an object"))
                continue
            result = _validate_row(raw, i, seen_ids, year_range)
            if isinstance(result, str):
                row_errors.append((i, result))
            else:
                seen_ids.add(result.project_id)
                records.append(result)

    if n_rows > 0 and len(row_errors) / n_rows > max_reject_fraction:
        raise CorruptInputError(
            f"corrupt input: {len(row_errors)}/{n_rows} rows rejected "
            f"(threshold {max_reject_fraction:.0%})"
        )
    if row_errors:
        logger.warning("rejected %d of %d rows", len(row_errors), n_rows)
    return ProjectTable(tuple(records), provenance=provenance, row_errors=tuple(row_errors))


def write_csv(table: ProjectTable, stream: TextIO) -> None:
    """Serialize a table to the canonical CSV schema (skills ';'-joined)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in table.records:
        writer.writerow(
            [
                r.project_id,
                r.worker_id,
                r.year,
                repr(r.hourly_wage),
                r.occupation,
                r.worker_experience,
                ";".join(r.skills),
            ]
        )


def write_jsonl(table: ProjectTable, stream: TextIO) -> None:
    for r in table.records:
        stream.write(
            json.dumps(
                {
                    "project_id": r.project_id,
                    "worker_id": r.worker_id,
                    "year": r.year,
                    "hourly_wage": r.hourly_wage,
                    "occupation": r.occupation,
                    "worker_experience": r.worker_experience,
                    "skills": list(r.skills),
                },
                sort_keys=True,
            )
        )
        stream.write("\n")


def load_projects(path: str, fmt: str | None = None, **kwargs) -> ProjectTable:
    """Parse a file, inferring the format from the extension when not given."""
    if fmt is None:
        fmt = "jsonl" if path.endswith((".jsonl", ".ndjson")) else "csv"
    with open(path, "rb") as fh:
        return parse_projects(fh, fmt, provenance=path, **kwargs)


# ---------------------------------------------------------------------------
# Synthetic corpus generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the planted-truth corpus generator.

    ``planted_skill_effects`` maps slugs to multiplicative wage factors; a
    factor f enters log-wage as log(f) whenever the skill is present.
    ``late_skill_effects`` optionally overrides those factors for projects
    in years >= ``late_start_year``, which lets tests plant trend changes.
    ``concentration`` is the probability that a worker draws a skill from
    their home community rather than uniformly from the rest.
    """

    n_workers: int = 200
    n_projects: int = 1500
    n_skills: int = 48
    n_communities: int = 4
    community_wage_offsets: tuple[float, ...] = ()
    planted_skill_effects: dict[str, float] = field(default_factory=dict)
    noise_sigma: float = 0.2
    seed: int = 0
    base_wage: float = 30.0
    concentration: float = 0.85
    skills_per_project: tuple[int, int] = (2, 5)
    same_domain_boost: float = 0.0
    late_skill_effects: dict[str, float] | None = None
    late_start_year: int = 2018
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE

    def validate(self) -> None:
        for name in ("n_workers", "n_projects", "n_skills", "n_communities"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")
        if self.n_communities > self.n_skills:
            raise ConfigError("n_communities cannot exceed n_skills")
        if not 0.0 <= self.concentration <= 1.0:
            raise ConfigError("concentration must lie in [0, 1]")
        lo, hi = self.skills_per_project
        if lo < 1 or hi < lo:
            raise ConfigError("skills_per_project must be a valid (min, max) with min >= 1")
        offsets = self.offsets()
        if any(o <= 0 for o in offsets):
            raise ConfigError("community_wage_offsets must be positive factors")

    def offsets(self) -> tuple[float, ...]:
        if self.community_wage_offsets:
            if len(self.community_wage_offsets) != self.n_communities:
                raise ConfigError("community_wage_offsets length must equal n_communities")
            return self.community_wage_offsets
        return tuple(1.0 for _ in range(self.n_communities))

    def skill_slugs(self) -> list[str]:
        return [f"skill-{i:03d}" for i in range(self.n_skills)]

    def skill_community(self, index: int) -> int:
        # contiguous blocks of near-equal size
        return index * self.n_communities // self.n_skills


@dataclass(frozen=True)
class SynthOutput:
    table: ProjectTable
    sidecar: dict


def default_synth_config(seed: int = 0) -> SynthConfig:
    """Demo-scale config with seeded heterogeneous effects and offsets."""
    rng = np.random.default_rng(seed ^ 0x5EED)
    n_skills = 48
    slugs = [f"skill-{i:03d}" for i in range(n_skills)]
    log_effects = rng.uniform(-0.35, 0.35, size=n_skills)
    effects = {slug: float(np.exp(b)) for slug, b in zip(slugs, log_effects)}
    offsets = tuple(float(np.exp(o)) for o in rng.uniform(-0.12, 0.12, size=4))
    return SynthConfig(
        n_workers=250,
        n_projects=2000,
        n_skills=n_skills,
        n_communities=4,
        community_wage_offsets=offsets,
        planted_skill_effects=effects,
        noise_sigma=0.2,
        seed=seed,
    )


def generate_synthetic(config: SynthConfig) -> SynthOutput:
    """Generate a deterministic planted-truth corpus.

    log-wage = log(base) + log(community offset of the worker's home
    community) + sum of planted skill effects + optional same-domain boost
    per matching skill + Gaussian noise. The sidecar records the planted
    effects and partition so tests can compare estimates to ground truth.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    slugs = config.skill_slugs()
    partition = {slug: config.skill_community(i) for i, slug in enumerate(slugs)}
    offsets = config.offsets()
    by_community: list[list[str]] = [[] for _ in range(config.n_communities)]
    for slug, comm in partition.items():
        by_community[comm].append(slug)

    homes = [w % config.n_communities for w in range(config.n_workers)]
    lo_y, hi_y = config.year_range
    lo_k, hi_k = config.skills_per_project
    hi_k = min(hi_k, config.n_skills)

    # pass 1: structure (worker, year, skills) for every project
    workers = rng.integers(0, config.n_workers, size=config.n_projects)
    years = rng.integers(lo_y, hi_y + 1, size=config.n_projects)
    project_skills: list[set[str]] = []
    for p in range(config.n_projects):
        home = homes[workers[p]]
        k = int(rng.integers(lo_k, hi_k + 1))
        chosen: set[str] = set()
        pool = by_community[home]
        for _ in range(k):
            if pool and rng.random() < config.concentration:
                chosen.add(pool[int(rng.integers(0, len(pool)))])
            else:
                chosen.add(slugs[int(rng.integers(0, config.n_skills))])
        project_skills.append(chosen)

    # guarantee every planted-effect skill appears at least once
    present: set[str] = set()
    for s in project_skills:
        present.update(s)
    inject_at = 0
    for slug in sorted(config.planted_skill_effects):
        if slug not in present and slug in partition:
            project_skills[inject_at % config.n_projects].add(slug)
            inject_at += 1

    noise = rng.normal(0.0, config.noise_sigma, size=config.n_projects) if config.noise_sigma > 0 else np.zeros(config.n_projects)

    def effect_for(slug: str, year: int) -> float:
        if (
            config.late_skill_effects is not None
            and year >= config.late_start_year
            and slug in config.late_skill_effects
        ):
            return config.late_skill_effects[slug]
        return config.planted_skill_effects.get(slug, 1.0)

    records: list[ProjectRecord] = []
    experience = [0] * config.n_workers
    for p in range(config.n_projects):
        w = int(workers[p])
        home = homes[w]
        year = int(years[p])
        skills = tuple(sorted(project_skills[p]))
        log_wage = math.log(config.base_wage) + math.log(offsets[home])
        for slug in skills:
            log_wage += math.log(effect_for(slug, year))
            if config.same_domain_boost and partition[slug] == home:
                log_wage += config.same_domain_boost
        log_wage += float(noise[p])
        records.append(
            ProjectRecord(
                project_id=f"p{p:05d}",
                worker_id=f"w{w:04d}",
                year=year,
                hourly_wage=math.exp(log_wage),
                occupation=f"occ-{home}",
                worker_experience=experience[w],
                skills=skills,
            )
        )
        experience[w] += 1

    sidecar = {
        "planted_effects": {s: config.planted_skill_effects.get(s, 1.0) for s in slugs},
        "planted_partition": partition,
        "seed": config.seed,
    }
    if config.late_skill_effects is not None:
        sidecar["late_effects"] = dict(config.late_skill_effects)
        sidecar["late_start_year"] = config.late_start_year
    table = ProjectTable(tuple(records), provenance=f"synthetic(seed={config.seed})")
    return SynthOutput(table=table, sidecar=sidecar)


def synth_config_from_dict(raw: dict) -> SynthConfig:
    """Build a SynthConfig from parsed JSON, tolerating list-valued tuples."""
    known = {f.name for f in SynthConfig.__dataclass_fields__.values()}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown synth config keys: {sorted(unknown)}")
    cfg = dict(raw)
    for key in ("community_wage_offsets", "skills_per_project", "year_range"):
        if key in cfg and cfg[key] is not None:
            cfg[key] = tuple(cfg[key])
    return replace(SynthConfig(), **cfg)
