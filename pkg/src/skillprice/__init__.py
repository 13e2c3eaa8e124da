"""Skill pricing and complementarity analytics for labour-market project data."""

from .analysis import (
    AutomationTable,
    DomainPremiumMatrix,
    SkillFeatureRow,
    WorkerDomain,
    assign_worker_domains,
    automation_probability,
    cohort_compare,
    domain_premium_matrix,
    fit_premium_models,
    out_of_sample_r2,
)
from .complementarity import (
    ComplementarityScores,
    PageRankConfig,
    pagerank,
    value_weighted_pagerank,
)
from .graph import (
    CommunityPartition,
    SkillGraph,
    SkillStats,
    build_graph,
    compute_skill_stats,
    degree_centrality,
    detect_communities,
    modularity,
)
from .ingest import (
    ProjectRecord,
    ProjectTable,
    SynthConfig,
    generate_synthetic,
    parse_projects,
)
from .valuation import (
    RegressionFit,
    SkillPremium,
    SkillPrice,
    TrendSeries,
    ols_fit,
    pearson,
    premium,
    premium_all,
    price,
    price_all,
    windowed_premium,
)

__version__ = "0.1.0"

__all__ = [
    "AutomationTable",
    "CommunityPartition",
    "ComplementarityScores",
    "DomainPremiumMatrix",
    "PageRankConfig",
    "ProjectRecord",
    "ProjectTable",
    "RegressionFit",
    "SkillFeatureRow",
    "SkillGraph",
    "SkillPremium",
    "SkillPrice",
    "SkillStats",
    "SynthConfig",
    "TrendSeries",
    "WorkerDomain",
    "assign_worker_domains",
    "automation_probability",
    "build_graph",
    "cohort_compare",
    "compute_skill_stats",
    "degree_centrality",
    "detect_communities",
    "domain_premium_matrix",
    "fit_premium_models",
    "generate_synthetic",
    "modularity",
    "ols_fit",
    "out_of_sample_r2",
    "pagerank",
    "parse_projects",
    "pearson",
    "premium",
    "premium_all",
    "price",
    "price_all",
    "value_weighted_pagerank",
    "windowed_premium",
]
