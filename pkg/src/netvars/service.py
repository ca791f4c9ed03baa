"""Stateful HTTP/JSON API: upload a dataset once, build its dependency
network, then iterate cheaply on centrality measure, Top-n and clustering.

Payload schemas are documented in docs/api.md. Sessions live in memory and
expire after an idle timeout; a measure switch only recomputes centrality,
never the network (asserted by the build counter exposed at
/sessions/{id}/stats).
"""

from __future__ import annotations

import threading
import time
import uuid
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from netvars.centrality import MEASURES, compute_centrality, rank_top_n, scores_to_json
from netvars.cluster import elbow_curve, gmm_to_json, kmeans, kmeans_to_json, select_gmm
from netvars.depnet import DependencyNetwork, build_network
from netvars.ingest import DataTable, LoadError, drop_constant_columns, load_csv
from netvars.linmod import METHOD_NAMES, SelectionMethod
from netvars.metrics import Partition, davies_bouldin, pca_project


class NetworkParams(BaseModel):
    p_enter: float = Field(default=0.1, gt=0, lt=1)
    p_exit: float = Field(default=0.25, gt=0, lt=1)
    lasso_lambda: float | None = Field(default=None, gt=0)


class NetworkRequest(BaseModel):
    method: Literal["stepwise", "forward", "stepaic", "lasso"]
    params: NetworkParams = NetworkParams()
    edge_direction: Literal["child-to-parent", "parent-to-child"] = "child-to-parent"


class ClusterRequest(BaseModel):
    variables: list[str] = Field(min_length=1)
    algo: Literal["kmeans", "gmm"]
    k: int | None = Field(default=None, ge=1)
    seed: int = 0
    restarts: int = Field(default=5, ge=1)
    k_max: int = Field(default=9, ge=1)


class Session:
    def __init__(self, table: DataTable, warnings: list[str]):
        self.id = uuid.uuid4().hex
        self.table = table
        self.warnings = warnings
        self.created_at = time.time()
        self.last_access = self.created_at
        self.lock = threading.RLock()
        self.network: DependencyNetwork | None = None
        self.network_key: dict | None = None
        self.centrality_cache: dict[tuple, object] = {}
        self.build_count = 0
        self.building = False

    def touch(self):
        self.last_access = time.time()


class SessionStore:
    def __init__(self, idle_timeout: float):
        self.idle_timeout = idle_timeout
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def add(self, session: Session):
        with self._lock:
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        self.evict_idle()
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.touch()
        return session

    def evict_idle(self):
        cutoff = time.time() - self.idle_timeout
        with self._lock:
            stale = [sid for sid, s in self._sessions.items() if s.last_access < cutoff]
            for sid in stale:
                del self._sessions[sid]

    def count(self) -> int:
        with self._lock:
            return len(self._sessions)


def _measure_kwargs(measure: str, damping, attenuation, beta) -> dict:
    if measure == "pagerank" and damping is not None:
        return {"damping": damping}
    if measure == "alpha" and attenuation is not None:
        return {"attenuation": attenuation}
    if measure == "power" and beta is not None:
        return {"beta": beta}
    return {}


def create_app(
    data_dir: str | None = None,
    ui_dir: str | None = None,
    idle_timeout: float = 3600.0,
    max_upload_bytes: int = 50 * 1024 * 1024,
) -> FastAPI:
    app = FastAPI(title="netvars service", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(idle_timeout=idle_timeout)
    app.state.store = store

    @app.get("/health", response_class=PlainTextResponse)
    async def health() -> str:
        return "ok"

    @app.post("/datasets")
    async def upload_dataset(request: Request) -> JSONResponse:
        body = await request.body()
        if len(body) > max_upload_bytes:
            raise HTTPException(status_code=413, detail="upload too large")
        try:
            loaded = load_csv(body)
            table, dropped = drop_constant_columns(loaded.table)
        except (LoadError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        warnings = list(loaded.warnings)
        if dropped:
            warnings.append(f"dropped constant column(s): {', '.join(dropped)}")
        session = Session(table, warnings)
        store.add(session)
        store.evict_idle()
        return JSONResponse(
            {
                "session_id": session.id,
                "columns": list(table.column_names),
                "m": table.row_count,
                "d": table.col_count,
                "warnings": warnings,
            }
        )

    @app.post("/sessions/{session_id}/network")
    def build_session_network(session_id: str, req: NetworkRequest):
        session = store.get(session_id)
        with session.lock:
            if session.building:
                raise HTTPException(status_code=409, detail="a network build is already running")
            session.building = True
        try:
            method = SelectionMethod(
                name=req.method,
                p_enter=req.params.p_enter,
                p_exit=req.params.p_exit,
                lasso_lambda=req.params.lasso_lambda,
            )
            started = time.perf_counter()
            try:
                network = build_network(session.table, method, edge_direction=req.edge_direction)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            except RuntimeError as exc:
                raise HTTPException(status_code=500, detail=str(exc)) from exc
            elapsed_ms = (time.perf_counter() - started) * 1000
            with session.lock:
                session.network = network
                session.network_key = req.model_dump()
                session.centrality_cache = {}
                session.build_count += 1
        finally:
            with session.lock:
                session.building = False
        return {
            "nodes": list(network.nodes),
            "edges": [[a, b] for a, b in network.edge_names()],
            "per_node_summary": {
                nf.name: {"selected": list(nf.selected), "rss": nf.rss}
                for nf in network.per_node
            },
            "method": req.model_dump(),
            "elapsed_ms": elapsed_ms,
            "build_count": session.build_count,
        }

    def _scores_for(session: Session, measure: str, damping, attenuation, beta):
        if measure not in MEASURES:
            raise HTTPException(status_code=422, detail=f"unknown measure '{measure}'")
        with session.lock:
            network = session.network
        if network is None:
            raise HTTPException(status_code=409, detail="no network built for this session")
        kwargs = _measure_kwargs(measure, damping, attenuation, beta)
        key = (measure, tuple(sorted(kwargs.items())))
        with session.lock:
            cached = session.centrality_cache.get(key)
        if cached is not None:
            return cached
        try:
            scores = compute_centrality(network, measure, **kwargs)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        with session.lock:
            session.centrality_cache[key] = scores
        return scores

    @app.get("/sessions/{session_id}/centrality")
    def session_centrality(
        session_id: str,
        measure: str = Query(...),
        damping: float | None = Query(default=None, gt=0, lt=1),
        attenuation: float | None = Query(default=None, gt=0),
        beta: float | None = Query(default=None),
    ):
        session = store.get(session_id)
        scores = _scores_for(session, measure, damping, attenuation, beta)
        return scores_to_json(scores)

    @app.get("/sessions/{session_id}/topn")
    def session_topn(
        session_id: str,
        measure: str = Query(...),
        n: int = Query(..., ge=1),
        damping: float | None = Query(default=None, gt=0, lt=1),
        attenuation: float | None = Query(default=None, gt=0),
        beta: float | None = Query(default=None),
    ):
        session = store.get(session_id)
        scores = _scores_for(session, measure, damping, attenuation, beta)
        if n > len(scores.nodes):
            raise HTTPException(status_code=422, detail=f"n exceeds {len(scores.nodes)} variables")
        return {"names": rank_top_n(scores, n)}

    @app.post("/sessions/{session_id}/cluster")
    def session_cluster(session_id: str, req: ClusterRequest):
        session = store.get(session_id)
        unknown = [v for v in req.variables if v not in session.table.column_names]
        if unknown:
            raise HTTPException(status_code=422, detail=f"unknown variable(s): {unknown}")
        if len(set(req.variables)) != len(req.variables):
            raise HTTPException(status_code=422, detail="duplicate variables")
        reduced = session.table.select(req.variables)
        payload: dict = {"algo": req.algo, "variables": req.variables}
        try:
            if req.algo == "kmeans":
                if req.k is None:
                    raise HTTPException(status_code=422, detail="k is required for kmeans")
                if req.k > reduced.row_count:
                    raise HTTPException(status_code=422, detail="k exceeds row count")
                result = kmeans(reduced, req.k, restarts=req.restarts, seed=req.seed)
                payload["kmeans"] = kmeans_to_json(result)
                payload["elbow"] = [
                    [k, w]
                    for k, w in elbow_curve(
                        reduced, 1, min(9, reduced.row_count), restarts=req.restarts, seed=req.seed
                    )
                ]
                labels = result.labels
            else:
                selection = select_gmm(reduced, k_max=req.k_max, seed=req.seed)
                payload["gmm"] = gmm_to_json(selection.best)
                payload["bic_table"] = selection.table
                labels = selection.best.labels
        except HTTPException:
            raise
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        payload["labels"] = labels.tolist()
        payload["dbi"] = (
            davies_bouldin(reduced, Partition(labels))
            if len(set(labels.tolist())) >= 2
            else None
        )
        if reduced.col_count >= 2:
            coords, ratios = pca_project(reduced)
            payload["pca"] = {
                "coords": coords.tolist(),
                "explained_variance_ratio": ratios.tolist(),
            }
        else:
            payload["pca"] = None
        return payload

    @app.get("/sessions/{session_id}/stats")
    def session_stats(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return {
                "network_builds": session.build_count,
                "network_ready": session.network is not None,
                "network_key": session.network_key,
                "centrality_cache_size": len(session.centrality_cache),
                "created_at": session.created_at,
                "m": session.table.row_count,
                "d": session.table.col_count,
                "columns": list(session.table.column_names),
            }

    if data_dir:
        samples_root = Path(data_dir)

        @app.get("/samples")
        def list_samples():
            if not samples_root.is_dir():
                return {"samples": []}
            files = sorted(p.name for p in samples_root.glob("*.csv"))
            return {"samples": files}

        @app.get("/samples/{name}")
        def get_sample(name: str):
            if "/" in name or "\\" in name or name.startswith("."):
                raise HTTPException(status_code=404, detail="unknown sample")
            path = samples_root / name
            if not path.is_file():
                raise HTTPException(status_code=404, detail="unknown sample")
            return Response(content=path.read_bytes(), media_type="text/csv")

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
