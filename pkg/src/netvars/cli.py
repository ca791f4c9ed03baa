"""Batch command-line interface: data preparation, the full pipeline, and the
HTTP service launcher.

The thread pool used for network construction and mixture selection is capped
by the DISCOVARS_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import date

import numpy as np

from netvars import __version__
from netvars.centrality import MEASURES, compute_centrality, rank_top_n, scores_to_json
from netvars.cluster import elbow_curve, gmm_to_json, kmeans, kmeans_to_json, select_gmm
from netvars.depnet import build_network, network_to_json
from netvars.ingest import DataTable, compute_returns, drop_constant_columns, load_csv, read_csv_rows
from netvars.linmod import METHOD_NAMES, SelectionMethod
from netvars.metrics import Partition, davies_bouldin, pca_project

REPORT_SCHEMA = 1


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _method_from_args(args) -> SelectionMethod:
    return SelectionMethod(
        name=args.method,
        p_enter=args.p_enter,
        p_exit=args.p_exit,
        lasso_lambda=args.lasso_lambda,
    )


def _measure_params(args) -> dict:
    if args.measure == "pagerank":
        return {"damping": args.damping}
    if args.measure == "alpha":
        return {"attenuation": args.attenuation}
    if args.measure == "power":
        return {"beta": args.beta}
    return {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netvars",
        description="Rank variables by centrality in a dependency network, then cluster the selected subset.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="run the full pipeline on a CSV and write a JSON report")
    b.add_argument("--input", required=True, help="input CSV path")
    b.add_argument("--method", choices=METHOD_NAMES, default="stepwise")
    b.add_argument("--measure", choices=MEASURES, default="alpha")
    b.add_argument("--top", type=_positive_int, default=5, help="how many top-ranked variables to keep")
    b.add_argument("--cluster", choices=("none", "kmeans", "gmm"), default="none")
    b.add_argument("--k", type=_positive_int, default=3, help="cluster count for k-means")
    b.add_argument("--gmm-kmax", type=_positive_int, default=9, help="largest mixture size tried per family")
    b.add_argument("--restarts", type=_positive_int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--output", help="report path (default: stdout)")
    b.add_argument("--edge-direction", choices=("child-to-parent", "parent-to-child"), default="child-to-parent")
    b.add_argument("--p-enter", type=float, default=0.1, help="entry p-value for stepwise/forward")
    b.add_argument("--p-exit", type=float, default=0.25, help="exit p-value for stepwise")
    b.add_argument("--lasso-lambda", type=float, default=None, help="L1 penalty (default: 16/m)")
    b.add_argument("--damping", type=float, default=0.85, help="pagerank damping")
    b.add_argument("--attenuation", type=float, default=0.85, help="alpha-centrality attenuation")
    b.add_argument("--beta", type=float, default=0.85, help="power-centrality decay")
    b.add_argument("--omit-timings", action="store_true", help="leave wall-clock timings out of the report")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("returns", help="turn a price CSV into returns plus lagged returns")
    r.add_argument("--input", required=True, help="price CSV path, rows in chronological order")
    r.add_argument("--date-col", default=None, help="date column to order-check and exclude")
    r.add_argument("--lags", type=_nonnegative_int, default=0)
    r.add_argument("--returns-denominator", choices=("current", "previous"), default="current")
    r.add_argument("--output", help="output CSV path (default: stdout)")
    r.set_defaults(func=cmd_returns)

    s = sub.add_parser("serve", help="start the HTTP service for the web UI")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    s.add_argument("--data-dir", default=None, help="directory of sample CSVs exposed at /samples")
    s.add_argument("--ui-dir", default=None, help="static UI bundle served at /ui")
    s.add_argument("--idle-timeout", type=float, default=3600.0, help="seconds before idle sessions expire")
    s.add_argument("--max-upload-mb", type=float, default=50.0)
    s.set_defaults(func=cmd_serve)

    return parser


def _load_input(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise RuntimeError(f"cannot read '{path}': {exc}") from exc
    return load_csv(raw)


def cmd_build(args) -> int:
    timings: dict[str, float] = {}
    started = time.perf_counter()
    loaded = _load_input(args.input)
    table, dropped_constants = drop_constant_columns(loaded.table)
    warnings = list(loaded.warnings)
    if dropped_constants:
        warnings.append(f"dropped constant column(s): {', '.join(dropped_constants)}")
    timings["load_ms"] = (time.perf_counter() - started) * 1000

    if args.top > table.col_count:
        raise RuntimeError(
            f"--top {args.top} exceeds the {table.col_count} usable columns"
        )

    method = _method_from_args(args)
    stage = time.perf_counter()
    network = build_network(table, method, edge_direction=args.edge_direction)
    timings["network_ms"] = (time.perf_counter() - stage) * 1000

    stage = time.perf_counter()
    scores = compute_centrality(network, args.measure, **_measure_params(args))
    top = rank_top_n(scores, args.top)
    timings["centrality_ms"] = (time.perf_counter() - stage) * 1000

    report = {
        "schema": REPORT_SCHEMA,
        "input": args.input,
        "m": table.row_count,
        "d": table.col_count,
        "columns": list(table.column_names),
        "warnings": warnings,
        "method": {
            "name": method.name,
            "p_enter": method.p_enter,
            "p_exit": method.p_exit,
            "lasso_lambda": method.resolve_lambda(table.row_count) if method.name == "lasso" else None,
        },
        "network": network_to_json(network),
        "centrality": scores_to_json(scores),
        "top": top,
        "seed": args.seed,
        "clustering": None,
        "metrics": None,
        "pca": None,
    }

    if args.cluster != "none":
        stage = time.perf_counter()
        reduced = table.select(top)
        clustering: dict = {"variables": top, "algo": args.cluster}
        if args.cluster == "kmeans":
            if args.k > reduced.row_count:
                raise RuntimeError(f"--k {args.k} exceeds the {reduced.row_count} rows")
            result = kmeans(reduced, args.k, restarts=args.restarts, seed=args.seed)
            clustering["kmeans"] = kmeans_to_json(result)
            clustering["elbow"] = [
                [k, w]
                for k, w in elbow_curve(
                    reduced, 1, min(9, reduced.row_count), restarts=args.restarts, seed=args.seed
                )
            ]
            labels = result.labels
        else:
            selection = select_gmm(reduced, k_max=args.gmm_kmax, seed=args.seed)
            clustering["gmm"] = gmm_to_json(selection.best)
            clustering["bic_table"] = selection.table
            labels = selection.best.labels
        report["clustering"] = clustering

        metrics: dict = {"dbi": None}
        if len(set(labels.tolist())) >= 2:
            metrics["dbi"] = davies_bouldin(reduced, Partition(labels))
        report["metrics"] = metrics
        if reduced.col_count >= 2:
            coords, ratios = pca_project(reduced)
            report["pca"] = {
                "coords": coords.tolist(),
                "explained_variance_ratio": ratios.tolist(),
            }
        timings["clustering_ms"] = (time.perf_counter() - stage) * 1000

    if not args.omit_timings:
        report["timings_ms"] = timings

    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def _check_dates_ascending(dates: list[str], col: str):
    def parse(cell: str):
        try:
            return date.fromisoformat(cell.strip())
        except ValueError:
            return cell.strip()

    parsed = [parse(c) for c in dates]
    if any(type(p) is not type(parsed[0]) for p in parsed):
        raise RuntimeError(f"date column '{col}' mixes formats")
    for i in range(1, len(parsed)):
        if parsed[i] <= parsed[i - 1]:
            raise RuntimeError(
                f"date column '{col}' is not strictly ascending at row {i + 1}"
            )


def cmd_returns(args) -> int:
    try:
        with open(args.input, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise RuntimeError(f"cannot read '{args.input}': {exc}") from exc

    if args.date_col:
        rows = read_csv_rows(raw)
        if not rows:
            raise RuntimeError("empty input")
        header = [c.strip() for c in rows[0]]
        if args.date_col not in header:
            raise RuntimeError(f"date column '{args.date_col}' not found")
        idx = header.index(args.date_col)
        _check_dates_ascending([row[idx] for row in rows[1:]], args.date_col)
        remaining = [
            [cell for j, cell in enumerate(row) if j != idx] for row in rows
        ]
        raw = "\n".join(",".join(row) for row in remaining).encode()

    loaded = load_csv(raw)
    out = compute_returns(loaded.table, lags=args.lags, denominator=args.returns_denominator)

    lines = [",".join(out.column_names)]
    for row in out.values:
        lines.append(",".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from netvars.service import create_app

    app = create_app(
        data_dir=args.data_dir,
        ui_dir=args.ui_dir,
        idle_timeout=args.idle_timeout,
        max_upload_bytes=int(args.max_upload_mb * 1024 * 1024),
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits 3 on startup failure (e.g. bind)
        return 1 if exc.code else 0
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
