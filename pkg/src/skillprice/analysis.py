"""Explaining skill values: nested regressions, worker domains, automation.

Covers the model battery that regresses premia on supply, demand, community
membership, and centrality; the grouping of workers into domains by their
modal skill community; the domain-by-community premium matrix; the mapping
of occupation-level automation probabilities onto skills; and Welch cohort
comparisons.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy import stats as sstats

from .errors import (
    DegenerateTestError,
    FoldError,
    InputFormatError,
    MissingOccupationError,
    RegressionError,
    UnknownSkillError,
)
from .graph import CommunityPartition, SkillGraph
from .ingest import ProjectTable
from .valuation import RegressionFit, SkillPremium, SkillPrice, ols_fit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SkillFeatureRow:
    """One row of the skill-level regression table."""

    skill: str
    premium: float
    price_factor: float
    log_supply: float
    log_demand: float
    community: int
    degree_log: float
    wpr_premium: float
    wpr_price: float


def build_feature_rows(
    graph: SkillGraph,
    partition: CommunityPartition,
    premia: dict[str, SkillPremium],
    prices: dict[str, SkillPrice],
    wpr_premium: dict[str, float],
    wpr_price: dict[str, float],
) -> list[SkillFeatureRow]:
    """Assemble complete feature rows; skills missing any input are skipped."""
    rows: list[SkillFeatureRow] = []
    skipped = 0
    for slug in graph.nodes:
        if slug not in premia or slug not in prices:
            skipped += 1
            continue
        st = graph.stats[slug]
        rows.append(
            SkillFeatureRow(
                skill=slug,
                premium=premia[slug].premium,
                price_factor=prices[slug].factor,
                log_supply=math.log(st.supply),
                log_demand=math.log(st.demand),
                community=partition.assignment[slug],
                degree_log=math.log1p(graph.degree(slug)),
                wpr_premium=wpr_premium[slug],
                wpr_price=wpr_price[slug],
            )
        )
    if skipped:
        logger.warning("feature table skips %d skills with missing valuations", skipped)
    return rows


@dataclass(frozen=True)
class ModelSpec:
    """Which regressors explain which target in one model of the battery."""

    name: str
    target: str  # "premium" | "price_factor"
    regressors: tuple[str, ...]
    community_dummies: bool


def model_specs() -> list[ModelSpec]:
    """The six nested specifications, from supply-only to centrality-augmented."""
    return [
        ModelSpec("model1", "premium", ("log_supply",), False),
        ModelSpec("model2", "premium", ("log_supply", "log_demand"), False),
        ModelSpec("model3", "premium", ("log_supply", "log_demand"), True),
        ModelSpec("model4", "premium", ("log_supply", "log_demand", "degree_log"), True),
        ModelSpec("model5", "premium", ("log_supply", "log_demand", "wpr_premium"), True),
        ModelSpec("model6", "price_factor", ("log_supply", "log_demand", "wpr_price"), True),
    ]


def build_model_design(
    features: list[SkillFeatureRow],
    spec: ModelSpec,
    reference_community: int,
) -> tuple[np.ndarray, list[str], np.ndarray]:
    """Design matrix for one model; community dummies omit the reference level."""
    if not features:
        raise RegressionError("empty feature table")
    levels = sorted({row.community for row in features})
    if reference_community not in levels:
        logger.warning(
            "reference community %s not in data; using %s", reference_community, levels[0]
        )
        reference_community = levels[0]
    dummy_levels = [c for c in levels if c != reference_community]

    terms = ["intercept"] + list(spec.regressors)
    if spec.community_dummies:
        terms += [f"community:{c}" for c in dummy_levels]
    n = len(features)
    X = np.zeros((n, len(terms)))
    y = np.zeros(n)
    X[:, 0] = 1.0
    for i, row in enumerate(features):
        for j, reg in enumerate(spec.regressors, start=1):
            X[i, j] = getattr(row, reg)
        if spec.community_dummies and row.community != reference_community:
            X[i, terms.index(f"community:{row.community}")] = 1.0
        y[i] = getattr(row, spec.target)
    return X, terms, y


def fit_premium_models(
    features: list[SkillFeatureRow], reference_community: int
) -> list[RegressionFit]:
    """Fit the whole battery with the given community reference level."""
    fits = []
    for spec in model_specs():
        X, terms, y = build_model_design(features, spec, reference_community)
        fits.append(ols_fit(X, y, terms))
    return fits


def out_of_sample_r2(
    features: list[SkillFeatureRow],
    spec: ModelSpec,
    k: int = 5,
    seed: int = 0,
    reference_community: int | None = None,
) -> float:
    """Seeded k-fold cross-validation R-squared of pooled out-of-fold predictions."""
    if k < 2:
        raise FoldError("k must be >= 2")
    if reference_community is None:
        reference_community = min(row.community for row in features)
    X, terms, y = build_model_design(features, spec, reference_community)
    n = len(features)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    folds = np.array_split(perm, k)
    preds = np.empty(n)
    for i, fold in enumerate(folds):
        mask = np.ones(n, dtype=bool)
        mask[fold] = False
        if int(mask.sum()) <= len(terms):
            raise FoldError(
                f"fold {i}: {int(mask.sum())} training rows cannot fit {len(terms)} parameters"
            )
        fit = ols_fit(X[mask], y[mask], terms)
        preds[fold] = fit.predict(X[fold], terms)
    sse = float(np.sum((y - preds) ** 2))
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        raise RegressionError("zero-variance target")
    return 1.0 - sse / sst


# ---------------------------------------------------------------------------
# Worker domains and the domain-by-community premium matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WorkerDomain:
    """Community contributing the largest share of a worker's distinct skills."""

    worker_id: str
    domain: int
    share: float
    n_skills: int


def assign_worker_domains(
    projects: ProjectTable, partition: CommunityPartition
) -> list[WorkerDomain]:
    """Attribute each worker to their modal skill community.

    Skills outside the partition are ignored; ties go to the lowest
    community id; workers with no partitioned skill are excluded.
    """
    worker_skills: dict[str, set[str]] = {}
    for rec in projects.records:
        worker_skills.setdefault(rec.worker_id, set()).update(rec.skills)

    unknown: set[str] = set()
    out: list[WorkerDomain] = []
    excluded = 0
    for worker_id in sorted(worker_skills):
        counts: dict[int, int] = {}
        total = 0
        for slug in worker_skills[worker_id]:
            comm = partition.assignment.get(slug)
            if comm is None:
                unknown.add(slug)
                continue
            counts[comm] = counts.get(comm, 0) + 1
            total += 1
        if total == 0:
            excluded += 1
            continue
        domain = min(counts, key=lambda c: (-counts[c], c))
        out.append(
            WorkerDomain(
                worker_id=worker_id,
                domain=domain,
                share=counts[domain] / total,
                n_skills=total,
            )
        )
    if unknown:
        logger.warning("%d skills outside the partition were ignored", len(unknown))
    if excluded:
        logger.warning("%d workers had no partitioned skills and were excluded", excluded)
    return out


def attribution_rate(domains: list[WorkerDomain], threshold: float = 0.5) -> float:
    """Fraction of workers whose modal-community share reaches the threshold."""
    if not domains:
        return 0.0
    return sum(1 for d in domains if d.share >= threshold) / len(domains)


@dataclass(frozen=True)
class DomainPremiumMatrix:
    """Worker-domain rows by skill-community columns of aggregated premia.

    ``cells`` holds the demand-weighted mean premium of the community's
    skills within that worker domain; pairs below ``min_obs`` observations
    contribute nothing, and empty cells are missing (absent key).
    """

    domains: tuple[int, ...]
    communities: tuple[int, ...]
    cells: dict[tuple[int, int], float]
    observations: dict[tuple[int, int], int]
    min_obs: int

    def cell(self, domain: int, community: int) -> float | None:
        return self.cells.get((domain, community))


def domain_premium_matrix(
    projects: ProjectTable,
    domains: list[WorkerDomain],
    partition: CommunityPartition,
    min_obs: int = 20,
    global_complement: bool = False,
) -> DomainPremiumMatrix:
    """Premium of each skill community conditional on the worker's domain.

    For every (domain D, skill s) pair with at least ``min_obs`` applications
    by domain-D workers, the skill premium is computed over domain-D projects
    (the complement restricted to the same domain unless
    ``global_complement``), then aggregated per skill community as a
    demand-weighted mean.
    """
    domain_of = {d.worker_id: d.domain for d in domains}
    by_domain: dict[int, list] = {}
    for rec in projects.records:
        dom = domain_of.get(rec.worker_id)
        if dom is None:
            continue
        by_domain.setdefault(dom, []).append(rec)

    communities = tuple(sorted(set(partition.assignment.values())))
    row_ids = tuple(sorted(by_domain))
    cells: dict[tuple[int, int], float] = {}
    observations: dict[tuple[int, int], int] = {}

    for dom in row_ids:
        records = by_domain[dom]
        demand: dict[str, int] = {}
        for rec in records:
            for slug in rec.skills:
                if slug in partition.assignment:
                    demand[slug] = demand.get(slug, 0) + 1
        weighted: dict[int, float] = {}
        weights: dict[int, int] = {}
        for slug in sorted(demand):
            if demand[slug] < min_obs:
                continue
            sum_with = 0.0
            n_with = 0
            sum_without = 0.0
            n_without = 0
            for rec in records:
                if slug in rec.skills:
                    sum_with += rec.hourly_wage
                    n_with += 1
                elif not global_complement:
                    sum_without += rec.hourly_wage
                    n_without += 1
            if global_complement:
                for rec in projects.records:
                    if slug not in rec.skills:
                        sum_without += rec.hourly_wage
                        n_without += 1
            if n_with == 0 or n_without == 0:
                continue
            prem = (sum_with / n_with) / (sum_without / n_without) - 1.0
            comm = partition.assignment[slug]
            weighted[comm] = weighted.get(comm, 0.0) + prem * demand[slug]
            weights[comm] = weights.get(comm, 0) + demand[slug]
        for comm in sorted(weighted):
            cells[(dom, comm)] = weighted[comm] / weights[comm]
            observations[(dom, comm)] = weights[comm]

    return DomainPremiumMatrix(
        domains=row_ids,
        communities=communities,
        cells=cells,
        observations=observations,
        min_obs=min_obs,
    )


# ---------------------------------------------------------------------------
# Automation probabilities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AutomationTable:
    """Occupation-level computerisation probabilities, consumed as input."""

    probabilities: dict[str, float]
    provenance: str = ""


def load_automation_table(source, provenance: str = "") -> AutomationTable:
    """Read an `occupation,probability` CSV; probabilities must lie in [0, 1]."""
    if isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or set(reader.fieldnames) != {"occupation", "probability"}:
        raise InputFormatError("automation table must have header occupation,probability")
    probs: dict[str, float] = {}
    for raw in reader:
        occ = raw["occupation"].strip()
        try:
            p = float(raw["probability"])
        except (TypeError, ValueError) as exc:
            raise InputFormatError(f"bad probability for {occ!r}") from exc
        if not 0.0 <= p <= 1.0:
            raise InputFormatError(f"probability for {occ!r} outside [0, 1]: {p}")
        probs[occ] = p
    return AutomationTable(probabilities=probs, provenance=provenance)


def automation_probability(
    skill: str,
    projects: ProjectTable,
    occ_probs: AutomationTable,
    formula: str = "share_weighted",
) -> float:
    """Automation probability of a skill from its hosting occupations.

    ``share_weighted`` (default) averages occupation probabilities weighted
    by the share of the skill's projects under each occupation. ``printed``
    instead sums prob/count per occupation; it is exposed for comparison
    only and is not a convex combination.
    """
    counts: dict[str, int] = {}
    total = 0
    for rec in projects.records:
        if skill in rec.skills:
            counts[rec.occupation] = counts.get(rec.occupation, 0) + 1
            total += 1
    if total == 0:
        raise UnknownSkillError(f"skill {skill!r} does not occur in any project")
    missing = sorted(o for o in counts if o not in occ_probs.probabilities)
    if missing:
        raise MissingOccupationError(
            f"occupations missing from automation table: {', '.join(missing)}"
        )
    if formula == "share_weighted":
        return sum(
            (counts[o] / total) * occ_probs.probabilities[o] for o in sorted(counts)
        )
    if formula == "printed":
        return sum(occ_probs.probabilities[o] / counts[o] for o in sorted(counts))
    raise InputFormatError(f"unknown automation formula {formula!r}")


def automation_all(
    projects: ProjectTable,
    occ_probs: AutomationTable,
    skills: list[str],
    formula: str = "share_weighted",
) -> dict[str, float]:
    return {
        slug: automation_probability(slug, projects, occ_probs, formula=formula)
        for slug in sorted(skills)
    }


# ---------------------------------------------------------------------------
# Cohort comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WelchResult:
    t: float
    df: float
    p_value: float
    mean_a: float
    mean_b: float
    n_a: int
    n_b: int


def cohort_compare(group_a, group_b) -> WelchResult:
    """Welch two-sample t-test with Satterthwaite degrees of freedom."""
    a = np.asarray(group_a, dtype=float)
    b = np.asarray(group_b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise DegenerateTestError("both groups need at least 2 observations")
    va = float(a.var(ddof=1))
    vb = float(b.var(ddof=1))
    ma, mb = float(a.mean()), float(b.mean())
    se2 = va / a.size + vb / b.size
    if se2 == 0.0:
        if ma == mb:
            raise DegenerateTestError("degenerate test: zero variance and equal means")
        return WelchResult(
            t=math.inf if ma > mb else -math.inf,
            df=float(a.size + b.size - 2),
            p_value=0.0,
            mean_a=ma,
            mean_b=mb,
            n_a=int(a.size),
            n_b=int(b.size),
        )
    t = (ma - mb) / math.sqrt(se2)
    df = se2**2 / (
        (va / a.size) ** 2 / (a.size - 1) + (vb / b.size) ** 2 / (b.size - 1)
    )
    p = 2.0 * float(sstats.t.sf(abs(t), df))
    return WelchResult(
        t=t, df=df, p_value=p, mean_a=ma, mean_b=mb, n_a=int(a.size), n_b=int(b.size)
    )


def load_ai_skills(path: str | None = None) -> list[str]:
    """AI-skill slugs, one per line; defaults to the packaged list."""
    if path is None:
        text = resources.files("skillprice.data").joinpath("ai_skills.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return sorted({line.strip() for line in text.splitlines() if line.strip()})


def ai_cohort_stats(
    features: list[SkillFeatureRow],
    automation: dict[str, float] | None,
    ai_slugs: list[str],
) -> dict[str, WelchResult]:
    """Welch tests of the AI cohort against all other skills, per metric."""
    cohort = {f.skill for f in features} & set(ai_slugs)
    rest = {f.skill for f in features} - cohort
    if len(cohort) < 2 or len(rest) < 2:
        raise DegenerateTestError(
            f"AI cohort too small for comparison ({len(cohort)} vs {len(rest)})"
        )
    by_skill = {f.skill: f for f in features}
    out: dict[str, WelchResult] = {}
    for metric in ("premium", "wpr_premium"):
        a = [getattr(by_skill[s], metric) for s in sorted(cohort)]
        b = [getattr(by_skill[s], metric) for s in sorted(rest)]
        out[metric] = cohort_compare(a, b)
    if automation is not None:
        a = [automation[s] for s in sorted(cohort) if s in automation]
        b = [automation[s] for s in sorted(rest) if s in automation]
        if len(a) >= 2 and len(b) >= 2:
            out["automation"] = cohort_compare(a, b)
    return out
