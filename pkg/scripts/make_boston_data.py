"""Generate the bundled housing benchmark table (data/boston.csv).

506 rows x 14 columns with the classic housing-study column names. The
columns are sampled from a Gaussian copula whose correlation matrix encodes
the well-known association structure of that study (strong tax-rad link,
the industry/nox/age/dis block, rm-medv-lstat), then mapped to realistic
marginal scales. chas is binarized to a rare indicator.

Deterministic: fixed seed, exact regeneration of the committed CSV.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

SEED = 1978
ROWS = 506

COLUMNS = [
    "crim", "zn", "indus", "chas", "nox", "rm", "age",
    "dis", "rad", "tax", "ptratio", "b", "lstat", "medv",
]

# target marginal (mean, sd); chas handled separately
MARGINALS = {
    "crim": (3.6, 8.6),
    "zn": (11.4, 23.3),
    "indus": (11.1, 6.9),
    "chas": (0.0, 1.0),
    "nox": (0.55, 0.12),
    "rm": (6.28, 0.70),
    "age": (68.6, 28.1),
    "dis": (3.8, 2.1),
    "rad": (9.5, 8.7),
    "tax": (408.0, 168.0),
    "ptratio": (18.5, 2.16),
    "b": (356.0, 91.0),
    "lstat": (12.7, 7.1),
    "medv": (22.5, 9.2),
}

# symmetric association targets; unspecified pairs default to 0
ASSOCIATIONS = {
    ("crim", "rad"): 0.63, ("crim", "tax"): 0.58, ("crim", "lstat"): 0.46,
    ("crim", "nox"): 0.42, ("crim", "indus"): 0.41, ("crim", "medv"): -0.39,
    ("crim", "b"): -0.39, ("crim", "dis"): -0.38, ("crim", "age"): 0.35,
    ("zn", "dis"): 0.66, ("zn", "indus"): -0.53, ("zn", "nox"): -0.52,
    ("zn", "age"): -0.57, ("zn", "lstat"): -0.41, ("zn", "medv"): 0.36,
    ("zn", "rad"): -0.31, ("zn", "tax"): -0.31, ("zn", "rm"): 0.31,
    ("indus", "nox"): 0.76, ("indus", "tax"): 0.72, ("indus", "age"): 0.64,
    ("indus", "dis"): -0.71, ("indus", "lstat"): 0.60, ("indus", "rad"): 0.60,
    ("indus", "medv"): -0.48, ("indus", "b"): -0.36, ("indus", "ptratio"): 0.38,
    ("indus", "rm"): -0.39,
    ("nox", "age"): 0.73, ("nox", "dis"): -0.77, ("nox", "rad"): 0.61,
    ("nox", "tax"): 0.67, ("nox", "lstat"): 0.59, ("nox", "medv"): -0.43,
    ("nox", "b"): -0.38, ("nox", "ptratio"): 0.19, ("nox", "rm"): -0.30,
    ("rm", "medv"): 0.70, ("rm", "lstat"): -0.61, ("rm", "ptratio"): -0.36,
    ("age", "dis"): -0.75, ("age", "lstat"): 0.60, ("age", "medv"): -0.38,
    ("age", "rad"): 0.46, ("age", "tax"): 0.51, ("age", "b"): -0.27,
    ("dis", "tax"): -0.53, ("dis", "lstat"): -0.50, ("dis", "rad"): -0.49,
    ("dis", "medv"): 0.25, ("dis", "b"): 0.29, ("dis", "ptratio"): -0.23,
    ("rad", "tax"): 0.91, ("rad", "lstat"): 0.49, ("rad", "ptratio"): 0.46,
    ("rad", "medv"): -0.38, ("rad", "b"): -0.44,
    ("tax", "lstat"): 0.54, ("tax", "ptratio"): 0.46, ("tax", "medv"): -0.47,
    ("tax", "b"): -0.44,
    ("ptratio", "medv"): -0.51, ("ptratio", "lstat"): 0.37, ("ptratio", "b"): -0.18,
    ("b", "lstat"): -0.37, ("b", "medv"): 0.33,
    ("lstat", "medv"): -0.74,
    ("chas", "medv"): 0.18, ("chas", "nox"): 0.09, ("chas", "crim"): -0.06,
}


def correlation_matrix() -> np.ndarray:
    d = len(COLUMNS)
    idx = {c: i for i, c in enumerate(COLUMNS)}
    corr = np.eye(d)
    for (a, b), rho in ASSOCIATIONS.items():
        corr[idx[a], idx[b]] = rho
        corr[idx[b], idx[a]] = rho
    # nearest PSD: clip eigenvalues, renormalize the diagonal
    vals, vecs = np.linalg.eigh(corr)
    vals = np.maximum(vals, 1e-4)
    fixed = vecs @ np.diag(vals) @ vecs.T
    scale = np.sqrt(np.diag(fixed))
    return fixed / np.outer(scale, scale)


def generate(seed: int = SEED) -> np.ndarray:
    corr = correlation_matrix()
    rng = np.random.default_rng(seed)
    z = rng.multivariate_normal(np.zeros(len(COLUMNS)), corr, size=ROWS, method="cholesky")
    idx = {c: i for i, c in enumerate(COLUMNS)}
    out = np.empty_like(z)
    for j, col in enumerate(COLUMNS):
        mean, sd = MARGINALS[col]
        if col == "chas":
            out[:, j] = (z[:, j] > 1.48).astype(float)  # ~7% ones
        elif col in ("crim", "zn"):
            # heavily right-skewed in the original; exponentiate
            raw = np.exp(z[:, j] * 1.1)
            raw = (raw - raw.mean()) / raw.std()
            out[:, j] = np.maximum(raw * sd + mean, 0.0)
        else:
            out[:, j] = z[:, j] * sd + mean
    # the original study has a discrete high-access block where rad and tax
    # take one shared value pair (24 / 666); reproduce it on the top ~26%
    # of the joint tax/rad latent
    urban = 0.5 * z[:, idx["tax"]] + 0.5 * z[:, idx["rad"]]
    block = urban >= np.quantile(urban, 0.74)
    rad = np.clip(np.round(2.2 * z[:, idx["rad"]] + 5.0), 1, 8)
    tax = np.clip(55 * z[:, idx["tax"]] + 330, 187, 469)
    rad[block] = 24.0
    tax[block] = 666.0
    out[:, idx["rad"]] = rad
    out[:, idx["tax"]] = tax
    # keep physically bounded columns sane
    cl = {"nox": (0.3, 0.95), "age": (2.0, 100.0), "dis": (0.5, 13.0),
          "ptratio": (12.0, 23.0), "b": (0.3, 397.0), "lstat": (1.5, 40.0),
          "medv": (5.0, 50.0), "rm": (3.5, 9.0), "indus": (0.5, 28.0)}
    for col, (lo, hi) in cl.items():
        j = idx[col]
        out[:, j] = np.clip(out[:, j], lo, hi)
    return out


def write_csv(path: Path, values: np.ndarray):
    lines = [",".join(COLUMNS)]
    for row in values:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--output",
        default=str(Path(__file__).resolve().parent.parent / "data" / "boston.csv"),
    )
    args = parser.parse_args()
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, generate())
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
