"""Dependency-network construction: one regression per variable, edges to the
predictors its selection procedure keeps."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from netvars.ingest import DataTable, standardize
from netvars.linmod import FitResult, SelectionMethod, select_for_response

THREADS_ENV = "DISCOVARS_THREADS"

EDGE_DIRECTIONS = ("child-to-parent", "parent-to-child")


class NetworkBuildError(RuntimeError):
    def __init__(self, variable: str, cause: Exception):
        self.variable = variable
        self.cause = cause
        super().__init__(f"regression for variable '{variable}' failed: {cause}")


@dataclass(frozen=True)
class NodeFit:
    """Per-response summary: which predictors were kept and the fit's RSS."""

    name: str
    selected: tuple[str, ...]
    rss: float


@dataclass(frozen=True)
class DependencyNetwork:
    """Directed graph over variables. With the default child-to-parent
    direction, edge (i, s) means variable i's regression selected s."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    method: SelectionMethod
    edge_direction: str
    per_node: tuple[NodeFit, ...]

    def __post_init__(self):
        d = len(self.nodes)
        for i, j in self.edges:
            if i == j:
                raise ValueError("self-loop in dependency network")
            if not (0 <= i < d and 0 <= j < d):
                raise ValueError("edge endpoint out of range")

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 matrix, A[i, j] = 1 iff edge i -> j."""
        a = np.zeros((len(self.nodes), len(self.nodes)))
        for i, j in self.edges:
            a[i, j] = 1.0
        return a

    def edge_names(self) -> list[tuple[str, str]]:
        return sorted((self.nodes[i], self.nodes[j]) for i, j in self.edges)


def resolve_workers(workers: int | None, task_count: int) -> int:
    """Worker count: explicit argument, else the thread-cap env var, else CPU count."""
    if workers is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            workers = int(env)
        else:
            workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError("worker count must be >= 1")
    return max(1, min(workers, task_count))


def build_network(
    t: DataTable,
    method: SelectionMethod,
    edge_direction: str = "child-to-parent",
    workers: int | None = None,
) -> DependencyNetwork:
    """Fit every column against all the others and connect it to the selected
    predictors. The d regressions are independent and run on a worker pool;
    results are gathered by column index, so parallel and sequential builds
    produce identical networks.
    """
    if edge_direction not in EDGE_DIRECTIONS:
        raise ValueError(f"edge_direction must be one of {EDGE_DIRECTIONS}")
    d = t.col_count
    if d < 3:
        raise ValueError("network construction needs at least 3 columns")
    if np.any(t.values.std(axis=0) == 0):
        bad = [n for n, s in zip(t.column_names, t.values.std(axis=0)) if s == 0]
        raise ValueError(f"constant column(s) must be dropped first: {bad}")

    if method.name == "lasso":
        fit_table, _ = standardize(t)
    else:
        fit_table = t
    values = fit_table.values
    names = fit_table.column_names

    def fit_one(i: int) -> FitResult:
        predictors = [j for j in range(d) if j != i]
        return select_for_response(
            values[:, predictors], values[:, i], [names[j] for j in predictors], method
        )

    n_workers = resolve_workers(workers, d)
    fits: list[FitResult] = [None] * d  # type: ignore[list-item]
    if n_workers == 1:
        for i in range(d):
            try:
                fits[i] = fit_one(i)
            except Exception as exc:
                raise NetworkBuildError(names[i], exc) from exc
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            futures = {i: pool.submit(fit_one, i) for i in range(d)}
            failed = -1
            try:
                for i in range(d):
                    failed = i
                    fits[i] = futures[i].result()
            except Exception as exc:
                for f in futures.values():
                    f.cancel()
                raise NetworkBuildError(names[failed], exc) from exc

    index = {n: j for j, n in enumerate(names)}
    edges = set()
    per_node = []
    for i, fit in enumerate(fits):
        per_node.append(NodeFit(name=names[i], selected=fit.selected, rss=fit.rss))
        for s in fit.selected:
            j = index[s]
            edges.add((i, j) if edge_direction == "child-to-parent" else (j, i))

    return DependencyNetwork(
        nodes=tuple(names),
        edges=frozenset(edges),
        method=method,
        edge_direction=edge_direction,
        per_node=tuple(per_node),
    )


def network_to_edge_list(n: DependencyNetwork) -> str:
    """CSV edge list, `source,target` per line, lexicographically sorted."""
    lines = ["source,target"]
    lines.extend(f"{src},{dst}" for src, dst in n.edge_names())
    return "\n".join(lines) + "\n"


def edges_from_edge_list(text: str) -> list[tuple[str, str]]:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != "source,target":
        raise ValueError("missing edge-list header")
    return [tuple(ln.split(",", 1)) for ln in lines[1:]]  # type: ignore[misc]


def network_to_json(n: DependencyNetwork) -> dict:
    return {
        "nodes": list(n.nodes),
        "edges": [[src, dst] for src, dst in n.edge_names()],
        "method": n.method.name,
        "params": {
            "p_enter": n.method.p_enter,
            "p_exit": n.method.p_exit,
            "lasso_lambda": n.method.lasso_lambda,
        },
        "edge_direction": n.edge_direction,
        "per_node": {
            nf.name: {"selected": list(nf.selected), "rss": nf.rss} for nf in n.per_node
        },
    }


def network_from_json(payload: dict) -> DependencyNetwork:
    nodes = tuple(payload["nodes"])
    index = {n: j for j, n in enumerate(nodes)}
    method = SelectionMethod(
        name=payload["method"],
        p_enter=payload["params"].get("p_enter", 0.1),
        p_exit=payload["params"].get("p_exit", 0.25),
        lasso_lambda=payload["params"].get("lasso_lambda"),
    )
    per_node = tuple(
        NodeFit(name=name, selected=tuple(info["selected"]), rss=float(info["rss"]))
        for name, info in payload["per_node"].items()
    )
    edges = frozenset((index[src], index[dst]) for src, dst in payload["edges"])
    return DependencyNetwork(
        nodes=nodes,
        edges=edges,
        method=method,
        edge_direction=payload.get("edge_direction", "child-to-parent"),
        per_node=per_node,
    )


def network_json_dumps(n: DependencyNetwork) -> str:
    return json.dumps(network_to_json(n), sort_keys=True, indent=2)
