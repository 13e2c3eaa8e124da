"""Economic value of skills: raw premia, regression-adjusted prices, trends.

The premium compares mean hourly wages of projects with and without a skill.
The price controls for year, occupation, and worker experience in a log-wage
model and reads the skill's value off its dummy coefficient. Both sit on a
shared least-squares core.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

from .errors import (
    NoComplementError,
    PriceUnidentifiableError,
    RegressionError,
    UnknownSkillError,
)
from .graph import compute_skill_stats
from .ingest import ProjectTable

logger = logging.getLogger(__name__)

DEFAULT_WINDOWS: tuple[tuple[int, int], ...] = ((2014, 2017), (2018, 2021))


@dataclass(frozen=True)
class RegressionFit:
    """OLS result with classical (homoskedastic) standard errors."""

    coefficients: dict[str, float]
    standard_errors: dict[str, float]
    r2: float
    adjusted_r2: float
    n_obs: int
    n_params: int
    dropped_terms: tuple[str, ...] = ()
    condition_warning: bool = False

    def predict(self, design: np.ndarray, terms: list[str]) -> np.ndarray:
        """Apply the fit to a design with the same term naming; dropped terms count as zero."""
        X = np.asarray(design, dtype=float)
        beta = np.array([self.coefficients.get(t, 0.0) for t in terms])
        return X @ beta


def ols_fit(
    design: np.ndarray, response: np.ndarray, terms: list[str] | None = None
) -> RegressionFit:
    """Least squares via pivoted QR with rank-deficiency handling.

    Rank-deficient columns are dropped (reported in ``dropped_terms``) and a
    condition warning is raised when the retained design is ill-conditioned.
    A zero-variance response yields all-zero slopes and R-squared 0.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float).ravel()
    if X.ndim != 2:
        raise RegressionError("design must be a 2-d matrix")
    n, p = X.shape
    if n != y.shape[0]:
        raise RegressionError(f"design has {n} rows but response has {y.shape[0]}")
    if n <= p:
        raise RegressionError(f"need more observations than parameters ({n} <= {p})")
    if terms is None:
        terms = [f"x{i}" for i in range(p)]
    if len(terms) != p:
        raise RegressionError("terms must name every design column")

    _, R, piv = sla.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = diag[0] * max(n, p) * np.finfo(float).eps if diag.size and diag[0] > 0 else 0.0
    rank = int(np.sum(diag > tol))
    if rank == 0:
        raise RegressionError("design matrix has rank zero")
    kept = sorted(int(j) for j in piv[:rank])
    dropped = tuple(terms[int(j)] for j in sorted(piv[rank:]))
    condition_warning = bool(dropped)
    if rank >= 2 and diag[rank - 1] > 0 and diag[0] / diag[rank - 1] > 1e8:
        condition_warning = True
    if dropped:
        logger.warning("dropping rank-deficient columns: %s", ", ".join(dropped))

    Xk = X[:, kept]
    Qk, Rk = np.linalg.qr(Xk)
    beta = sla.solve_triangular(Rk, Qk.T @ y)
    resid = y - Xk @ beta
    rss = float(resid @ resid)
    dof = n - rank
    sigma2 = rss / dof
    rinv = sla.solve_triangular(Rk, np.eye(rank))
    se = np.sqrt(np.maximum(sigma2 * np.sum(rinv * rinv, axis=1), 0.0))

    tss = float(np.sum((y - y.mean()) ** 2))
    if tss == 0.0:
        logger.warning("zero-variance response: forcing all-zero slopes, R2=0")
        beta = np.zeros(rank)
        const_idx = next(
            (i for i, j in enumerate(kept) if np.all(X[:, j] == X[0, j]) and X[0, j] != 0),
            None,
        )
        if const_idx is not None:
            beta[const_idx] = y[0] / X[0, kept[const_idx]]
        se = np.zeros(rank)
        r2 = 0.0
        adjusted = 0.0
    else:
        r2 = 1.0 - rss / tss
        adjusted = 1.0 - (1.0 - r2) * (n - 1) / (n - rank)

    coefficients = {terms[j]: float(b) for j, b in zip(kept, beta)}
    standard_errors = {terms[j]: float(s) for j, s in zip(kept, se)}
    return RegressionFit(
        coefficients=coefficients,
        standard_errors=standard_errors,
        r2=r2,
        adjusted_r2=adjusted,
        n_obs=n,
        n_params=rank,
        dropped_terms=dropped,
        condition_warning=condition_warning,
    )


# ---------------------------------------------------------------------------
# Premium
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkillPremium:
    """Ratio of mean wages with/without the skill, minus one (a fraction)."""

    skill: str
    premium: float
    n_with: int
    n_without: int
    mean_with: float
    mean_without: float


def premium(skill: str, projects: ProjectTable) -> SkillPremium:
    """Mean wage of projects requiring the skill over mean of the rest, minus 1.

    Sums accumulate in record order so results are reproducible bit-for-bit.
    """
    sum_with = 0.0
    sum_without = 0.0
    n_with = 0
    n_without = 0
    for rec in projects.records:
        if skill in rec.skills:
            sum_with += rec.hourly_wage
            n_with += 1
        else:
            sum_without += rec.hourly_wage
            n_without += 1
    if n_with == 0:
        raise UnknownSkillError(f"skill {skill!r} does not occur in any project")
    if n_without == 0:
        raise NoComplementError(f"skill {skill!r} occurs in every project; no complement set")
    mean_with = sum_with / n_with
    mean_without = sum_without / n_without
    return SkillPremium(
        skill=skill,
        premium=mean_with / mean_without - 1.0,
        n_with=n_with,
        n_without=n_without,
        mean_with=mean_with,
        mean_without=mean_without,
    )


def premium_all(projects: ProjectTable, min_projects: int = 20) -> dict[str, SkillPremium]:
    """Premium for every skill meeting the popularity threshold.

    Skills whose premium is undefined (present in every project) are skipped
    with a warning rather than failing the batch.
    """
    stats = compute_skill_stats(projects)
    out: dict[str, SkillPremium] = {}
    for slug in sorted(stats):
        if stats[slug].demand < min_projects:
            continue
        try:
            out[slug] = premium(slug, projects)
        except NoComplementError:
            logger.warning("skipping %s: no complement set", slug)
    return out


# ---------------------------------------------------------------------------
# Price (log-wage regression)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PriceRegressionSpec:
    """Dummy layout of the per-skill log-wage model.

    One reference level per dummy set keeps the design full rank: years get
    dummies within ``dummy_years`` except the reference, occupations get
    dummies except the reference (largest category when unset).
    """

    dummy_years: tuple[int, int] = (2014, 2020)
    reference_year: int = 2014
    reference_occupation: str | None = "Web, Mobile & Software Dev"
    include_experience: bool = True


@dataclass(frozen=True)
class SkillPrice:
    """Skill-dummy coefficient of the log-wage model, exp-transformed.

    ``factor`` is the multiplicative wage effect exp(beta); ``additive`` is
    the implied USD/hour value at the sample-mean baseline wage.
    """

    skill: str
    coefficient: float
    stderr: float
    factor: float
    additive: float
    n_obs: int


def _resolve_reference_occupation(projects: ProjectTable, spec: PriceRegressionSpec) -> str:
    counts: dict[str, int] = {}
    for rec in projects.records:
        counts[rec.occupation] = counts.get(rec.occupation, 0) + 1
    if spec.reference_occupation is not None and spec.reference_occupation in counts:
        return spec.reference_occupation
    return max(sorted(counts), key=lambda occ: counts[occ])


def build_price_design(
    skill: str, projects: ProjectTable, spec: PriceRegressionSpec = PriceRegressionSpec()
) -> tuple[np.ndarray, list[str], np.ndarray]:
    """Design matrix, term names, and log-wage response for one skill model."""
    records = projects.records
    if not records:
        raise RegressionError("empty project table")
    lo, hi = spec.dummy_years
    years = sorted({r.year for r in records})
    dummy_years = [y for y in years if lo <= y <= hi and y != spec.reference_year]
    ref_occ = _resolve_reference_occupation(projects, spec)
    occs = [o for o in sorted({r.occupation for r in records}) if o != ref_occ]

    terms = ["intercept"]
    terms += [f"year:{y}" for y in dummy_years]
    terms += [f"occupation:{o}" for o in occs]
    if spec.include_experience:
        terms.append("experience")
    terms.append(f"skill:{skill}")

    n = len(records)
    X = np.zeros((n, len(terms)))
    y = np.zeros(n)
    X[:, 0] = 1.0
    year_col = {yr: 1 + i for i, yr in enumerate(dummy_years)}
    occ_col = {o: 1 + len(dummy_years) + i for i, o in enumerate(occs)}
    exp_col = 1 + len(dummy_years) + len(occs) if spec.include_experience else None
    skill_col = len(terms) - 1
    for i, rec in enumerate(records):
        if rec.year in year_col:
            X[i, year_col[rec.year]] = 1.0
        if rec.occupation in occ_col:
            X[i, occ_col[rec.occupation]] = 1.0
        if exp_col is not None:
            X[i, exp_col] = rec.worker_experience
        if skill in rec.skills:
            X[i, skill_col] = 1.0
        y[i] = math.log(rec.hourly_wage)
    return X, terms, y


def price(
    skill: str, projects: ProjectTable, spec: PriceRegressionSpec = PriceRegressionSpec()
) -> SkillPrice:
    """Fit the per-skill log-wage model and exp-transform the skill dummy."""
    X, terms, y = build_price_design(skill, projects, spec)
    fit = ols_fit(X, y, terms)
    term = f"skill:{skill}"
    if term not in fit.coefficients or "intercept" not in fit.coefficients:
        raise PriceUnidentifiableError(
            f"price unidentifiable: skill dummy for {skill!r} is collinear with other regressors"
        )
    beta = fit.coefficients[term]
    factor = math.exp(beta)
    baseline = sum(r.hourly_wage for r in projects.records) / len(projects.records)
    return SkillPrice(
        skill=skill,
        coefficient=beta,
        stderr=fit.standard_errors[term],
        factor=factor,
        additive=(factor - 1.0) * baseline,
        n_obs=fit.n_obs,
    )


def price_all(
    projects: ProjectTable,
    min_projects: int = 20,
    spec: PriceRegressionSpec = PriceRegressionSpec(),
) -> dict[str, SkillPrice]:
    """Price for every skill meeting the popularity threshold."""
    stats = compute_skill_stats(projects)
    out: dict[str, SkillPrice] = {}
    for slug in sorted(stats):
        if stats[slug].demand < min_projects:
            continue
        try:
            out[slug] = price(slug, projects, spec)
        except (PriceUnidentifiableError, RegressionError) as exc:
            logger.warning("skipping price of %s: %s", slug, exc)
    return out


# ---------------------------------------------------------------------------
# Correlation and trends
# ---------------------------------------------------------------------------


def pearson(x, y) -> float:
    """Sample Pearson correlation; undefined for constant vectors."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise RegressionError("pearson expects two equal-length vectors")
    if xa.size < 2:
        raise RegressionError("pearson needs at least 2 points")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx = float(np.sqrt(np.sum(xc * xc)))
    sy = float(np.sqrt(np.sum(yc * yc)))
    if sx == 0.0 or sy == 0.0:
        raise RegressionError("undefined correlation: constant vector")
    return float(np.sum(xc * yc) / (sx * sy))


@dataclass(frozen=True)
class TrendSeries:
    """Per-window premium, demand, and supply for one skill.

    A ``None`` premium marks windows where the skill is absent or has no
    complement set.
    """

    skill: str
    windows: tuple[tuple[int, int], ...]
    premium_per_window: tuple[float | None, ...]
    demand_per_window: tuple[int, ...]
    supply_per_window: tuple[int, ...]


def validate_windows(windows) -> tuple[tuple[int, int], ...]:
    norm = tuple((int(a), int(b)) for a, b in windows)
    prev_end = None
    for start, end in norm:
        if end < start:
            raise RegressionError(f"window {start}-{end} has end before start")
        if prev_end is not None and start <= prev_end:
            raise RegressionError("windows must be disjoint and ordered")
        prev_end = end
    return norm


def windowed_premium(
    skill: str,
    projects: ProjectTable,
    windows=DEFAULT_WINDOWS,
) -> TrendSeries:
    """Premium, demand, and supply of a skill restricted to each year window."""
    norm = validate_windows(windows)
    premia: list[float | None] = []
    demand: list[int] = []
    supply: list[int] = []
    for start, end in norm:
        sub = projects.restrict_years(start, end)
        stats = compute_skill_stats(sub).get(skill)
        demand.append(stats.demand if stats else 0)
        supply.append(stats.supply if stats else 0)
        try:
            premia.append(premium(skill, sub).premium)
        except (UnknownSkillError, NoComplementError):
            premia.append(None)
    return TrendSeries(
        skill=skill,
        windows=norm,
        premium_per_window=tuple(premia),
        demand_per_window=tuple(demand),
        supply_per_window=tuple(supply),
    )
