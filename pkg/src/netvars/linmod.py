"""Ordinary least squares with inference plus the subset-selection procedures
(stepwise, forward, AIC-bidirectional, L1-penalized) that decide which
predictors count as significant."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.special

METHOD_NAMES = ("stepwise", "forward", "stepaic", "lasso")

# pivot threshold for rank detection, relative to the largest pivot
_RANK_RTOL = 1e-10


class RankDeficientError(ValueError):
    def __init__(self, columns: list[str]):
        self.columns = columns
        super().__init__(f"design matrix is rank deficient; collinear column(s): {columns}")


@dataclass(frozen=True)
class SelectionMethod:
    """One of the four selection procedures plus its parameters.

    `lasso_lambda=None` means the data-dependent default 16/m.
    """

    name: str
    p_enter: float = 0.1
    p_exit: float = 0.25
    lasso_lambda: float | None = None

    def __post_init__(self):
        if self.name not in METHOD_NAMES:
            raise ValueError(f"unknown method '{self.name}', expected one of {METHOD_NAMES}")
        if not (0 < self.p_enter < 1) or not (0 < self.p_exit < 1):
            raise ValueError("p_enter and p_exit must lie in (0,1)")
        if self.p_enter >= self.p_exit:
            raise ValueError("p_enter must be smaller than p_exit")
        if self.lasso_lambda is not None and self.lasso_lambda <= 0:
            raise ValueError("lasso_lambda must be positive")

    def resolve_lambda(self, m: int) -> float:
        return self.lasso_lambda if self.lasso_lambda is not None else 16.0 / m


@dataclass(frozen=True)
class FitResult:
    """One regression's estimates and its selected-predictor set.

    For L1 fits the inference fields are None and `selected` holds the
    predictors with nonzero coefficients.
    """

    intercept: float
    coefficients: dict[str, float]
    rss: float
    selected: tuple[str, ...]
    n_obs: int
    std_errors: dict[str, float] | None = None
    t_stats: dict[str, float] | None = None
    p_values: dict[str, float] | None = None
    cap_hit: bool = False


def student_t_sf(t: float, df: int) -> float:
    """Two-sided Student-t survival value 2*P(T > |t|) with df degrees of freedom.

    Computed through the regularized incomplete beta function.
    """
    if df < 1:
        raise ValueError("df must be >= 1")
    t = float(t)
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return float(scipy.special.betainc(df / 2.0, 0.5, x))


def _check_design(X: np.ndarray, names: list[str] | tuple[str, ...]) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != len(names):
        raise ValueError("predictor name count does not match column count")
    return X


def ols_fit(X: np.ndarray, y: np.ndarray, names: list[str] | tuple[str, ...]) -> FitResult:
    """Least squares of y on X (with intercept), with t-based inference.

    Standard errors use sigma^2 = RSS/(n-p-1); p-values are two-sided.
    Rank deficiency is detected through pivoted QR and reported with the
    offending column names.
    """
    X = _check_design(X, names)
    y = np.asarray(y, dtype=np.float64).ravel()
    n, p = X.shape
    if y.shape[0] != n:
        raise ValueError("y length does not match X rows")
    if n <= p + 1:
        raise ValueError(f"need n > p+1 observations, got n={n}, p={p}")
    if p and np.any(X.std(axis=0) == 0):
        bad = [names[j] for j in range(p) if X[:, j].std() == 0]
        raise ValueError(f"constant predictor column(s): {bad}")

    design = np.column_stack([np.ones(n), X])
    q, r, piv = scipy.linalg.qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > _RANK_RTOL * diag[0])) if diag[0] > 0 else 0
    if rank < p + 1:
        collinear = sorted(
            names[j - 1] for j in piv[rank:] if j > 0
        )
        raise RankDeficientError(collinear)

    beta_piv = scipy.linalg.solve_triangular(r, q.T @ y)
    beta = np.empty_like(beta_piv)
    beta[piv] = beta_piv
    resid = y - design @ beta
    rss = float(resid @ resid)

    dof = n - p - 1
    sigma2 = rss / dof
    rinv = scipy.linalg.solve_triangular(r, np.eye(p + 1))
    cov_piv = rinv @ rinv.T
    cov = np.empty_like(cov_piv)
    cov[np.ix_(piv, piv)] = cov_piv
    se = np.sqrt(np.maximum(sigma2 * np.diag(cov), 0.0))

    tstats = np.divide(beta, se, out=np.zeros_like(beta), where=se > 0)
    pvals = np.array([student_t_sf(t, dof) for t in tstats])

    coef = {names[j]: float(beta[j + 1]) for j in range(p)}
    return FitResult(
        intercept=float(beta[0]),
        coefficients=coef,
        std_errors={names[j]: float(se[j + 1]) for j in range(p)},
        t_stats={names[j]: float(tstats[j + 1]) for j in range(p)},
        p_values={names[j]: float(pvals[j + 1]) for j in range(p)},
        rss=rss,
        selected=tuple(names),
        n_obs=n,
    )


def _intercept_only(y: np.ndarray) -> FitResult:
    y = np.asarray(y, dtype=np.float64).ravel()
    mean = float(y.mean())
    rss = float(((y - mean) ** 2).sum())
    return FitResult(
        intercept=mean, coefficients={}, std_errors={}, t_stats={}, p_values={},
        rss=rss, selected=(), n_obs=y.shape[0],
    )


def _fit_subset(X: np.ndarray, y: np.ndarray, names, subset: list[int]) -> FitResult:
    if not subset:
        return _intercept_only(y)
    return ols_fit(X[:, subset], y, [names[j] for j in subset])


def stepwise_select(
    X: np.ndarray,
    y: np.ndarray,
    names: list[str] | tuple[str, ...],
    p_enter: float = 0.1,
    p_exit: float = 0.25,
) -> FitResult:
    """Stepwise selection: admit the smallest-p candidate while p <= p_enter,
    then evict included predictors with p >= p_exit (largest first); repeat
    until stable or the 2d iteration cap is reached (cap sets `cap_hit`)."""
    X = _check_design(X, names)
    included: list[int] = []
    cap = 2 * X.shape[1]
    cap_hit = False
    for _ in range(cap + 1):
        changed = False
        # add step
        best_j, best_p = -1, math.inf
        for j in range(X.shape[1]):
            if j in included:
                continue
            fit = _fit_subset(X, y, names, included + [j])
            pj = fit.p_values[names[j]]
            if pj < best_p:
                best_j, best_p = j, pj
        if best_j >= 0 and best_p <= p_enter:
            included.append(best_j)
            changed = True
        # drop step; ties on p broken by ascending original index
        while included:
            fit = _fit_subset(X, y, names, included)
            worst_j, worst_p = -1, -math.inf
            for j in sorted(included):
                pj = fit.p_values[names[j]]
                if pj > worst_p:
                    worst_j, worst_p = j, pj
            if worst_p >= p_exit:
                included.remove(worst_j)
                changed = True
            else:
                break
        if not changed:
            break
    else:
        cap_hit = True
    fit = _fit_subset(X, y, names, included)
    if cap_hit:
        fit = dataclasses.replace(fit, cap_hit=True)
    return fit


def forward_select(
    X: np.ndarray,
    y: np.ndarray,
    names: list[str] | tuple[str, ...],
    p_enter: float = 0.1,
) -> FitResult:
    """Forward selection: add-only variant of stepwise_select."""
    X = _check_design(X, names)
    included: list[int] = []
    while len(included) < X.shape[1]:
        best_j, best_p = -1, math.inf
        for j in range(X.shape[1]):
            if j in included:
                continue
            fit = _fit_subset(X, y, names, included + [j])
            pj = fit.p_values[names[j]]
            if pj < best_p:
                best_j, best_p = j, pj
        if best_j < 0 or best_p > p_enter:
            break
        included.append(best_j)
    return _fit_subset(X, y, names, included)


def model_aic(rss: float, n: int, n_predictors: int) -> float:
    """n*ln(RSS/n) + 2*(p+1); the n*ln(2*pi)+n constant is dropped."""
    return n * math.log(max(rss, 1e-300) / n) + 2.0 * (n_predictors + 1)


def _subset_rss(X: np.ndarray, y: np.ndarray, subset: list[int]) -> float:
    n = y.shape[0]
    if not subset:
        return float(((y - y.mean()) ** 2).sum())
    design = np.column_stack([np.ones(n), X[:, subset]])
    coef = np.linalg.lstsq(design, y, rcond=None)[0]
    resid = y - design @ coef
    return float(resid @ resid)


def aic_select(X: np.ndarray, y: np.ndarray, names: list[str] | tuple[str, ...]) -> FitResult:
    """Greedy bidirectional AIC search starting from the full model.

    At each step every single addition and deletion is scored; the move with
    the lowest AIC is taken when it strictly improves the incumbent.
    """
    X = _check_design(X, names)
    y = np.asarray(y, dtype=np.float64).ravel()
    p = X.shape[1]
    # validate the full model up front so rank problems surface with names
    ols_fit(X, y, names)

    current = list(range(p))
    current_aic = model_aic(_subset_rss(X, y, current), y.shape[0], len(current))
    while True:
        best_move, best_aic = None, current_aic
        for j in current:  # deletions
            cand = [i for i in current if i != j]
            aic = model_aic(_subset_rss(X, y, cand), y.shape[0], len(cand))
            if aic < best_aic:
                best_move, best_aic = cand, aic
        for j in range(p):  # additions
            if j in current:
                continue
            cand = sorted(current + [j])
            aic = model_aic(_subset_rss(X, y, cand), y.shape[0], len(cand))
            if aic < best_aic:
                best_move, best_aic = cand, aic
        if best_move is None:
            break
        current, current_aic = best_move, best_aic
    return _fit_subset(X, y, names, sorted(current))


def _validate_standardized(X: np.ndarray, y: np.ndarray):
    m = X.shape[0]
    if np.any(np.abs(X.mean(axis=0)) > 1e-8):
        raise ValueError("lasso requires standardized predictors (nonzero column mean found)")
    norms = (X * X).sum(axis=0) / m
    if np.any(np.abs(norms - 1.0) > 1e-6):
        raise ValueError("lasso requires unit-variance predictors (population scaling)")
    scale = float(np.abs(y).max()) or 1.0
    if abs(float(y.mean())) > 1e-8 * scale + 1e-12:
        raise ValueError("lasso requires a centered response")


def _lasso_cd(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    tol: float = 1e-7,
    max_sweeps: int = 10000,
) -> tuple[np.ndarray, int, list[float]]:
    """Cyclic coordinate descent with soft-thresholding.

    Returns (beta, sweeps, objective history); objective is
    (1/2m)*||y - X beta||^2 + lam*||beta||_1.
    """
    m, p = X.shape
    norms = (X * X).sum(axis=0) / m
    beta = np.zeros(p)
    r = y.copy()
    history: list[float] = []
    for sweep in range(1, max_sweeps + 1):
        max_delta = 0.0
        for j in range(p):
            old = beta[j]
            if old != 0.0:
                r += X[:, j] * old
            rho = float(X[:, j] @ r) / m
            new = math.copysign(max(abs(rho) - lam, 0.0), rho) / norms[j]
            beta[j] = new
            if new != 0.0:
                r -= X[:, j] * new
            max_delta = max(max_delta, abs(new - old))
        history.append(float(r @ r) / (2 * m) + lam * float(np.abs(beta).sum()))
        if max_delta < tol:
            return beta, sweep, history
    raise RuntimeError(f"coordinate descent did not converge in {max_sweeps} sweeps")


def lasso_fit(
    X: np.ndarray,
    y: np.ndarray,
    names: list[str] | tuple[str, ...],
    lam: float | None = None,
) -> FitResult:
    """L1-penalized least squares at a single penalty, (1/2m)||y-Xb||^2 + lam*|b|_1.

    X must be population-standardized and y centered. lam=None uses 16/m.
    Selected predictors are exactly those with nonzero coefficients.
    """
    X = _check_design(X, names)
    y = np.asarray(y, dtype=np.float64).ravel()
    m = X.shape[0]
    if lam is None:
        lam = 16.0 / m
    if lam <= 0:
        raise ValueError("lambda must be positive")
    _validate_standardized(X, y)

    beta, _, history = _lasso_cd(X, y, lam)
    resid = y - X @ beta
    coef = {names[j]: float(beta[j]) for j in range(X.shape[1])}
    selected = tuple(names[j] for j in range(X.shape[1]) if beta[j] != 0.0)
    return FitResult(
        intercept=0.0,
        coefficients=coef,
        rss=float(resid @ resid),
        selected=selected,
        n_obs=m,
    )


def select_for_response(
    X: np.ndarray,
    y: np.ndarray,
    names: list[str] | tuple[str, ...],
    method: SelectionMethod,
) -> FitResult:
    """Dispatch one response's regression to the configured procedure."""
    if method.name == "stepwise":
        return stepwise_select(X, y, names, method.p_enter, method.p_exit)
    if method.name == "forward":
        return forward_select(X, y, names, method.p_enter)
    if method.name == "stepaic":
        return aic_select(X, y, names)
    return lasso_fit(X, y, names, method.resolve_lambda(X.shape[0]))
