"""Read-only JSON API over a loaded model artifact.

Every successful response carries the artifact's schema_version and
build_timestamp; errors use the shape
``{"error": {"code", "message", "suggestions?"}}``. The service never
mutates the artifact, so concurrent identical requests return identical
responses.
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .artifact import ModelArtifact
from .errors import SkillPriceError, UnknownSkillError
from .whatif import recommend, suggest_slugs, whatif

logger = logging.getLogger(__name__)

API_PREFIX = "/api/v1"


class WhatIfRequest(BaseModel):
    bundle: list[str]
    candidate: str


class RecommendRequest(BaseModel):
    bundle: list[str]
    k: int = Field(default=5)


def _error_body(code: str, message: str, suggestions: list[str] | None = None) -> dict:
    err: dict = {"code": code, "message": message}
    if suggestions:
        err["suggestions"] = suggestions
    return {"error": err}


def _skill_row(artifact: ModelArtifact, slug: str) -> dict:
    stats = artifact.graph.stats[slug]
    prem = (artifact.premia or {}).get(slug)
    price = (artifact.prices or {}).get(slug)
    community = artifact.partition.assignment[slug]
    return {
        "skill": slug,
        "premium": prem.premium if prem else None,
        "price_factor": price.factor if price else None,
        "price_additive": price.additive if price else None,
        "complementarity_premium": (
            artifact.scores_premium.scores.get(slug) if artifact.scores_premium else None
        ),
        "complementarity_price": (
            artifact.scores_price.scores.get(slug) if artifact.scores_price else None
        ),
        "automation_probability": (
            artifact.automation.get(slug) if artifact.automation else None
        ),
        "demand": stats.demand,
        "supply": stats.supply,
        "community": community,
        "community_label": artifact.partition.labels.get(community, f"community-{community}"),
    }


_SORT_KEYS = {
    "premium": lambda row: row["premium"],
    "price": lambda row: row["price_factor"],
    "complementarity": lambda row: row["complementarity_premium"],
    "demand": lambda row: row["demand"],
    "supply": lambda row: row["supply"],
    "skill": lambda row: row["skill"],
}


def create_app(artifact: ModelArtifact) -> FastAPI:
    artifact.validate()
    app = FastAPI(title="skillprice", docs_url=None, redoc_url=None)

    def envelope(payload: dict) -> dict:
        return {
            "schema_version": artifact.schema_version,
            "build_timestamp": artifact.timestamp,
            **payload,
        }

    @app.exception_handler(SkillPriceError)
    async def on_domain_error(_request: Request, exc: SkillPriceError):
        if isinstance(exc, UnknownSkillError):
            return JSONResponse(
                status_code=404,
                content=_error_body(exc.code, exc.message, exc.suggestions),
            )
        return JSONResponse(status_code=400, content=_error_body(exc.code, exc.message))

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content=_error_body("malformed-request", str(exc.errors()[:2])),
        )

    @app.get(API_PREFIX + "/meta")
    def meta():
        return envelope({"counts": artifact.counts(), "config": artifact.config})

    @app.get(API_PREFIX + "/skills")
    def skills(community: int | None = None, sort: str = "premium", limit: int = 100):
        if sort not in _SORT_KEYS:
            return JSONResponse(
                status_code=400,
                content=_error_body(
                    "malformed-request", f"unknown sort {sort!r}; one of {sorted(_SORT_KEYS)}"
                ),
            )
        if limit < 1:
            return JSONResponse(
                status_code=400, content=_error_body("malformed-request", "limit must be >= 1")
            )
        rows = [_skill_row(artifact, u) for u in artifact.graph.nodes]
        if community is not None:
            rows = [r for r in rows if r["community"] == community]
        key = _SORT_KEYS[sort]
        rows = [r for r in rows if key(r) is not None]
        if sort != "skill":  # numeric sorts descend; slug ties stay alphabetical
            rows.sort(key=key, reverse=True)
        return envelope({"skills": rows[:limit], "total": len(rows)})

    @app.get(API_PREFIX + "/skills/{slug}")
    def skill_detail(slug: str):
        if slug not in artifact.graph:
            raise UnknownSkillError(
                f"unknown skill {slug!r}", suggestions=suggest_slugs(slug, artifact.graph.nodes)
            )
        row = _skill_row(artifact, slug)
        trend = (artifact.trends or {}).get(slug)
        if trend is not None:
            row["trend"] = {
                "windows": [list(w) for w in trend.windows],
                "premium": list(trend.premium_per_window),
                "demand": list(trend.demand_per_window),
                "supply": list(trend.supply_per_window),
            }
        return envelope(row)

    @app.get(API_PREFIX + "/skills/{slug}/neighbors")
    def neighbors(slug: str, k: int = 10):
        if slug not in artifact.graph:
            raise UnknownSkillError(
                f"unknown skill {slug!r}", suggestions=suggest_slugs(slug, artifact.graph.nodes)
            )
        if k < 1:
            return JSONResponse(
                status_code=400, content=_error_body("malformed-request", "k must be >= 1")
            )
        ranked = sorted(
            artifact.graph.neighbors(slug).items(), key=lambda kv: (-kv[1], kv[0])
        )[:k]
        items = []
        for nbr, weight in ranked:
            row = _skill_row(artifact, nbr)
            row["weight"] = weight
            items.append(row)
        return envelope({"skill": slug, "neighbors": items})

    @app.get(API_PREFIX + "/communities")
    def communities():
        sums: dict[int, float] = {}
        sizes: dict[int, int] = {}
        for u in artifact.graph.nodes:
            c = artifact.partition.assignment[u]
            sizes[c] = sizes.get(c, 0) + 1
            prem = (artifact.premia or {}).get(u)
            if prem is not None:
                sums[c] = sums.get(c, 0.0) + prem.premium
        items = [
            {
                "community": c,
                "label": artifact.partition.labels.get(c, f"community-{c}"),
                "size": sizes[c],
                "mean_premium": (sums.get(c, 0.0) / sizes[c]) if artifact.premia else None,
            }
            for c in sorted(sizes)
        ]
        return envelope({"communities": items, "modularity": artifact.partition.modularity})

    @app.get(API_PREFIX + "/trends/{slug}")
    def trends(slug: str):
        if artifact.trends is None or slug not in artifact.trends:
            raise UnknownSkillError(
                f"no trend series for {slug!r}",
                suggestions=suggest_slugs(slug, artifact.trends or {}),
            )
        t = artifact.trends[slug]
        return envelope(
            {
                "skill": slug,
                "windows": [list(w) for w in t.windows],
                "premium": list(t.premium_per_window),
                "demand": list(t.demand_per_window),
                "supply": list(t.supply_per_window),
            }
        )

    @app.post(API_PREFIX + "/whatif")
    def whatif_endpoint(req: WhatIfRequest):
        result = whatif(req.bundle, req.candidate, artifact)
        return envelope(result.to_dict())

    @app.post(API_PREFIX + "/recommend")
    def recommend_endpoint(req: RecommendRequest):
        results = recommend(req.bundle, req.k, artifact)
        return envelope({"results": [r.to_dict() for r in results]})

    return app


def serve(artifact: ModelArtifact, host: str = "127.0.0.1", port: int = 8000, ui_dir: str | None = None) -> None:
    """Run the API (and optionally the static explorer UI) until interrupted."""
    import uvicorn

    app = create_app(artifact)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="info")
