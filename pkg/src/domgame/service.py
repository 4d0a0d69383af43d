"""HTTP facade over the solver, lemma checkers, and tree lab.

Domain errors (bad graph text, precondition violations, capacity) map to
400; shape errors are FastAPI's usual 422. Scans run synchronously in the
request, so callers should set a budget for large orders.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .graphs import PartialState, VertexSet, state_from_text
from .lemmas import classification_of, run_lemma_batch
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    ClassifyRequest,
    ClassifyResponse,
    HealthResponse,
    LemmaCheckRequest,
    LemmaCheckResponse,
    ScanRequest,
    ScanResponse,
    SolveRequest,
    SolveResponse,
    SpiderRequest,
    SpiderResponse,
    TraceStep,
    VerdictModel,
)
from .solver import GameConfig, GameSolver, PassEntitlement, Turn
from .trees import analyze, scan_critical_trees, verify_spider

app = FastAPI(title="domgame", version=__version__)


@app.exception_handler(ValueError)
async def _domain_error(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _state_with_extra(graph: str, dominated: list[int]) -> PartialState:
    state = state_from_text(graph)
    extra = VertexSet.from_ids(dominated)
    if not extra.issubset(state.graph.full_set):
        raise ValueError(
            f"dominated ids {sorted(extra.ids())} exceed graph order {state.graph.order}"
        )
    return state.with_dominated(extra)


@app.get("/health", response_model=HealthResponse)
async def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/solve", response_model=SolveResponse, response_model_exclude_none=True)
async def solve_endpoint(req: SolveRequest) -> SolveResponse:
    state = _state_with_extra(req.graph, req.dominated)
    cfg = GameConfig(Turn(req.first), PassEntitlement(req.pass_entitlement))
    solver = GameSolver(state.graph)
    moves = solver.value(state.dominated, cfg)
    trace = None
    if req.trace:
        trace = [TraceStep(**step) for step in solver.trace(state.dominated, cfg)]
    return SolveResponse(moves=moves, trace=trace)


@app.post("/classify", response_model=ClassifyResponse, response_model_by_alias=True)
async def classify_endpoint(req: ClassifyRequest) -> ClassifyResponse:
    state = state_from_text(req.graph)
    solver = GameSolver(state.graph)
    d = solver.value(state.dominated, GameConfig(Turn.DOMINATOR))
    s = solver.value(state.dominated, GameConfig(Turn.STALLER))
    return ClassifyResponse(
        gamma_g=d, gamma_g_prime=s, classification=classification_of(d, s).value
    )


@app.post("/analyze", response_model=AnalyzeResponse)
async def analyze_endpoint(req: AnalyzeRequest) -> AnalyzeResponse:
    report = analyze(state_from_text(req.graph).graph)
    return AnalyzeResponse(**report.to_dict())


@app.post("/lemmas/check", response_model=LemmaCheckResponse)
async def lemmas_endpoint(req: LemmaCheckRequest) -> LemmaCheckResponse:
    batch = run_lemma_batch(
        req.lemma, instances=req.instances, seed=req.seed, count=req.count
    )
    verdicts = [
        VerdictModel(
            lemma_id=v.lemma_id, instance=v.instance, lhs=v.lhs, rhs=v.rhs, holds=v.holds
        )
        for v in batch.verdicts
    ]
    return LemmaCheckResponse(
        lemma=req.lemma,
        seed=batch.seed,
        holds=batch.holds,
        violations=batch.violations,
        verdicts=verdicts,
    )


@app.post("/spider", response_model=SpiderResponse)
async def spider_endpoint(req: SpiderRequest) -> SpiderResponse:
    return SpiderResponse(**verify_spider(req.p, req.q, req.r).to_dict())


@app.post("/scan-trees", response_model=ScanResponse)
async def scan_endpoint(req: ScanRequest) -> ScanResponse:
    result = scan_critical_trees(req.n, budget=req.budget)
    return ScanResponse(
        n=result.n,
        trees_scanned=result.trees_scanned,
        critical_count=result.critical_count,
        wall_time=round(result.wall_time, 3),
        complete=result.complete,
        reports=[AnalyzeResponse(**r.to_dict()) for r in result.reports],
    )
