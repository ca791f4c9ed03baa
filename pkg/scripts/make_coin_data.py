"""Generate the bundled synthetic crypto price panel (data/coin1_prices.csv).

Eight coins, 1090 daily closes, so that two-lag return construction yields a
1087 x 24 table. The return-generating process plants a dependency
structure: BNP acts as the market factor, BTC tracks it with its own
component, and the five alt coins load on BNP, BTC, lagged ETH returns and
lagged BNP. Running the pipeline (lasso selection at 16/m, eigen
centrality) on the derived return table recovers the planted hubs.

Deterministic: fixed seed, exact regeneration of the committed CSV.
"""

from __future__ import annotations

import argparse
from datetime import date, timedelta
from pathlib import Path

import numpy as np

SEED = 7
N_RETURNS = 1089  # price rows = N_RETURNS + 1
START_DATE = date(2017, 10, 1)

SYMBOLS = ["BTC", "ETH", "BNP", "XRP", "LTC", "ADA", "XLM", "DOGE"]
START_PRICES = {
    "BTC": 4400.0,
    "ETH": 300.0,
    "BNP": 1.50,
    "XRP": 0.20,
    "LTC": 55.0,
    "ADA": 0.022,
    "XLM": 0.015,
    "DOGE": 0.0011,
}

ALT_PARAMS = {
    # symbol: (bnp loading, btc loading, eth lag-1, eth lag-2, bnp lag-1)
    "XRP": (0.9, 0.96, 0.70, 0.60, 0.3),
    "LTC": (0.8, 1.20, 0.60, 0.65, 0.3),
    "ADA": (0.7, 0.84, 0.80, 0.50, 0.3),
    "XLM": (0.6, 1.32, 0.65, 0.55, 0.3),
    "DOGE": (0.5, 1.08, 0.85, 0.45, 0.3),
}


def generate_returns(seed: int = SEED) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    pad = N_RETURNS + 2  # two extra rows so every lag is defined
    f = rng.normal(size=pad)
    idio = {s: rng.normal(size=pad) for s in SYMBOLS}

    bnp = 0.020 * f + 0.006 * idio["BNP"]
    btc = 0.25 * bnp + 0.015 * idio["BTC"]
    eth = 0.013 * f + 0.012 * idio["ETH"]

    returns = {"BNP": bnp, "ETH": eth, "BTC": btc}
    for sym, (a, b, g1, g2, h) in ALT_PARAMS.items():
        x = np.zeros(pad)
        x[2:] = (
            a * bnp[2:]
            + b * btc[2:]
            + g1 * eth[1:-1]
            + g2 * eth[:-2]
            + h * bnp[1:-1]
            + 0.010 * idio[sym][2:]
        )
        x[:2] = a * bnp[:2] + 0.010 * idio[sym][:2]
        returns[sym] = x
    # drop the warm-up rows
    return {s: returns[s][2:] for s in SYMBOLS}


def returns_to_prices(returns: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Invert r_t = (p_t - p_{t-1}) / p_t, i.e. p_t = p_{t-1} / (1 - r_t)."""
    prices = {}
    for sym, r in returns.items():
        p = np.empty(r.shape[0] + 1)
        p[0] = START_PRICES[sym]
        for t, rt in enumerate(r, start=1):
            p[t] = p[t - 1] / (1.0 - rt)
        prices[sym] = p
    return prices


def write_csv(path: Path, prices: dict[str, np.ndarray]):
    n = len(next(iter(prices.values())))
    lines = ["Date," + ",".join(SYMBOLS)]
    for t in range(n):
        day = START_DATE + timedelta(days=t)
        row = ",".join(repr(float(prices[s][t])) for s in SYMBOLS)
        lines.append(f"{day.isoformat()},{row}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_returns_csv(path: Path, prices_path: Path):
    """The 1087 x 24 return table derived from the price file, as the web UI's
    upload-ready sample."""
    import csv
    import io

    from netvars.ingest import compute_returns, load_csv

    rows = list(csv.reader(io.StringIO(prices_path.read_text())))
    body = "\n".join(",".join(r[1:]) for r in rows).encode()
    table = compute_returns(load_csv(body).table, lags=2)
    lines = [",".join(table.column_names)]
    for row in table.values:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--output",
        default=str(Path(__file__).resolve().parent.parent / "data" / "coin1_prices.csv"),
    )
    args = parser.parse_args()
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, returns_to_prices(generate_returns()))
    print(f"wrote {out}")
    returns_out = out.parent / "coin1_returns.csv"
    write_returns_csv(returns_out, out)
    print(f"wrote {returns_out}")


if __name__ == "__main__":
    main()
