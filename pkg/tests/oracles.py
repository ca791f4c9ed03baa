"""Definition-level reference implementations used to check the package.

Everything here recomputes results from first principles (explicit inverses,
exhaustive path enumeration, dense eigendecompositions, naive formulas) and
deliberately avoids the package's own code paths.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import scipy.integrate


# ---------------------------------------------------------------- linear models

def ols_reference(X: np.ndarray, y: np.ndarray, pvalue_route: str = "scipy"):
    """Normal-equation OLS; p-values from scipy.stats or direct quadrature."""
    import scipy.stats

    n = X.shape[0]
    design = np.column_stack([np.ones(n), X])
    beta = np.linalg.solve(design.T @ design, design.T @ y)
    resid = y - design @ beta
    rss = float(resid @ resid)
    dof = n - design.shape[1]
    sigma2 = rss / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    se = np.sqrt(np.diag(cov))
    tstats = beta / se
    if pvalue_route == "quadrature":
        pvals = np.array([t_sf_quadrature(abs(t), dof) for t in tstats])
    else:
        pvals = 2.0 * scipy.stats.t.sf(np.abs(tstats), dof)
    return beta, se, tstats, pvals, rss


def t_sf_quadrature(t: float, df: int) -> float:
    """Two-sided tail of Student's t by direct quadrature of the density."""
    log_c = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)

    def density(u):
        return math.exp(log_c - (df + 1) / 2 * math.log1p(u * u / df))

    tail, _ = scipy.integrate.quad(density, abs(t), np.inf, epsabs=1e-13, epsrel=1e-12)
    return 2.0 * tail


def subset_rss(X: np.ndarray, y: np.ndarray, subset) -> float:
    n = X.shape[0]
    cols = [np.ones(n)] + [X[:, j] for j in subset]
    design = np.column_stack(cols)
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    return float(resid @ resid)


def aic_of(rss: float, n: int, p: int) -> float:
    return n * math.log(max(rss, 1e-300) / n) + 2 * (p + 1)


def exhaustive_best_aic(X: np.ndarray, y: np.ndarray):
    """Brute force over all 2^d subsets; returns (best subset, best AIC)."""
    d = X.shape[1]
    n = X.shape[0]
    best_subset, best = None, math.inf
    for r in range(d + 1):
        for subset in itertools.combinations(range(d), r):
            aic = aic_of(subset_rss(X, y, subset), n, len(subset))
            if aic < best:
                best_subset, best = subset, aic
    return best_subset, best


def stepwise_reference(X: np.ndarray, y: np.ndarray, p_enter=0.1, p_exit=0.25):
    """Textbook add/drop loop written independently of the package."""
    d = X.shape[1]
    included: list[int] = []
    for _ in range(2 * d + 1):
        changed = False
        candidates = []
        for j in range(d):
            if j in included:
                continue
            cols = included + [j]
            _, _, _, pvals, _ = ols_reference(X[:, cols], y)
            candidates.append((pvals[len(cols)], j))  # candidate is the last column
        if candidates:
            p_best, j_best = min(candidates, key=lambda c: (c[0], c[1]))
            if p_best <= p_enter:
                included.append(j_best)
                changed = True
        while included:
            _, _, _, pvals, _ = ols_reference(X[:, included], y)
            worst = max(range(len(included)), key=lambda i: (pvals[i + 1], -included[i]))
            if pvals[worst + 1] >= p_exit:
                del included[worst]
                changed = True
            else:
                break
        if not changed:
            break
    return included


def forward_reference(X: np.ndarray, y: np.ndarray, p_enter=0.1):
    d = X.shape[1]
    included: list[int] = []
    while len(included) < d:
        candidates = []
        for j in range(d):
            if j in included:
                continue
            cols = included + [j]
            _, _, _, pvals, _ = ols_reference(X[:, cols], y)
            candidates.append((pvals[len(cols)], j))
        p_best, j_best = min(candidates, key=lambda c: (c[0], c[1]))
        if p_best > p_enter:
            break
        included.append(j_best)
    return included


def greedy_aic_reference(X: np.ndarray, y: np.ndarray):
    """Bidirectional AIC walk from the full model, coded from the definition."""
    n, d = X.shape
    current = set(range(d))
    current_aic = aic_of(subset_rss(X, y, sorted(current)), n, len(current))
    while True:
        moves = []
        for j in sorted(current):
            cand = current - {j}
            moves.append((aic_of(subset_rss(X, y, sorted(cand)), n, len(cand)), cand))
        for j in range(d):
            if j not in current:
                cand = current | {j}
                moves.append((aic_of(subset_rss(X, y, sorted(cand)), n, len(cand)), cand))
        if not moves:
            break
        best_aic, best_set = min(moves, key=lambda mv: mv[0])
        if best_aic < current_aic:
            current, current_aic = best_set, best_aic
        else:
            break
    return sorted(current), current_aic


# ---------------------------------------------------------------- graph measures

def oracle_degree(a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    return np.array([a[i].sum() + a[:, i].sum() for i in range(d)])


def oracle_pagerank(a: np.ndarray, damping=0.85) -> np.ndarray:
    """Closed form through an explicit matrix inverse."""
    d = a.shape[0]
    walk = np.empty((d, d))
    for i in range(d):
        out = a[i].sum()
        walk[i] = a[i] / out if out > 0 else np.full(d, 1.0 / d)
    lhs = np.eye(d) - damping * walk.T
    return np.linalg.inv(lhs) @ np.full(d, (1 - damping) / d)


def _psd_limit_from(start: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """lim (mat)^k start direction for symmetric PSD mat, via eigh projectors."""
    vals, vecs = np.linalg.eigh(mat)
    top = vals.max()
    keep = vals >= top - 1e-9 * max(top, 1.0)
    proj = vecs[:, keep] @ vecs[:, keep].T
    v = proj @ start
    return v


def oracle_hits(a: np.ndarray):
    d = a.shape[0]
    if a.sum() == 0:
        return np.zeros(d), np.zeros(d)
    hub = _psd_limit_from(np.ones(d), a @ a.T)
    auth = a.T @ hub
    return hub / hub.max(), auth / auth.max()


def _dominant_limit(b: np.ndarray) -> np.ndarray:
    """lim b^K * ones direction for nonnegative b.

    Simple dominant eigenvalue: read the Perron vector off a dense
    eigendecomposition. Tied or defective dominant eigenvalues (where eig's
    conditioning degrades to eps^(1/g)): renormalized chunked matrix powers
    up to b^(16^15).
    """
    w = np.linalg.eigvals(b)
    top = np.abs(w).max()
    near = np.abs(np.abs(w) - top) < 1e-6 * max(top, 1.0)
    if near.sum() == 1:
        vals, vecs = np.linalg.eig(b)
        idx = int(np.argmax(np.abs(vals)))
        v = np.real(vecs[:, idx])
        if v.sum() < 0:
            v = -v
        v = np.abs(v)  # Perron vector of a nonnegative matrix
        return v / v.max()
    m = b / top
    for _ in range(15):
        m = np.linalg.matrix_power(m, 16)
        m = m / m.max()
    x = m @ np.ones(b.shape[0])
    return x / x.max()


def is_acyclic(a: np.ndarray) -> bool:
    """Nilpotency test by explicit matrix powers (no graph traversal)."""
    d = a.shape[0]
    m = (a > 0).astype(np.int64)
    power = np.eye(d, dtype=np.int64)
    for _ in range(d):
        power = (power @ m > 0).astype(np.int64)
        if power.trace() > 0:
            return False
    return (np.linalg.matrix_power(m, d) == 0).all()


def oracle_eigen(a: np.ndarray):
    d = a.shape[0]
    if a.sum() == 0:
        return np.zeros(d), True
    if is_acyclic(a):
        sym = a + a.T
        return _dominant_limit(np.eye(d) + sym), True
    return _dominant_limit(np.eye(d) + a.T), False


def all_simple_paths(a: np.ndarray, s: int, t: int):
    """Every simple path from s to t by exhaustive enumeration."""
    d = a.shape[0]
    paths = []

    def extend(path):
        u = path[-1]
        if u == t and len(path) > 1:
            paths.append(list(path))
            return
        for v in range(d):
            if a[u, v] > 0 and v not in path:
                if v == t:
                    paths.append(list(path) + [v])
                else:
                    extend(path + [v])

    extend([s])
    return paths


def oracle_betweenness(a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    bc = np.zeros(d)
    for s in range(d):
        for t in range(d):
            if s == t:
                continue
            paths = all_simple_paths(a, s, t)
            if not paths:
                continue
            shortest = min(len(p) for p in paths)
            on_shortest = [p for p in paths if len(p) == shortest]
            sigma = len(on_shortest)
            for p in on_shortest:
                for v in p[1:-1]:
                    bc[v] += 1.0 / sigma
    return bc


def oracle_closeness(a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    scores = np.zeros(d)
    for u in range(d):
        dists = {}
        for v in range(d):
            if v == u:
                continue
            paths = all_simple_paths(a, u, v)
            if paths:
                dists[v] = min(len(p) for p in paths) - 1
        r = len(dists) + 1
        if r <= 1 or d <= 1:
            continue
        total = sum(dists.values())
        scores[u] = ((r - 1) / total) * ((r - 1) / (d - 1))
    return scores


def oracle_spectral_radius(a: np.ndarray) -> float:
    """Spectral radius from the exact integer characteristic polynomial
    (defective eigenvalues ruin plain eigvals' accuracy)."""
    import sympy

    mat = sympy.Matrix(a.astype(int))
    poly = mat.charpoly()
    # the dominant eigenvalue of a nonnegative matrix is its largest real root
    reals = sympy.real_roots(poly)
    return max((float(r.evalf(30)) for r in reals), default=0.0)


def oracle_alpha(a: np.ndarray, attenuation=0.85) -> np.ndarray:
    d = a.shape[0]
    lam = oracle_spectral_radius(a)
    lam = lam if lam > 1e-9 else 1.0
    f = attenuation / lam
    # Neumann series sum_k (f A^T)^k 1
    x = np.ones(d)
    term = np.ones(d)
    for _ in range(4000):
        term = f * (a.T @ term)
        x = x + term
        if np.abs(term).max() < 1e-16:
            break
    return x

def oracle_power(a: np.ndarray, beta=0.85) -> np.ndarray:
    d = a.shape[0]
    lam = oracle_spectral_radius(a)
    lam = lam if lam > 1e-9 else 1.0
    f = beta / lam
    rhs = a @ np.ones(d)
    c = rhs.copy()
    term = rhs.copy()
    for _ in range(4000):
        term = f * (a @ term)
        c = c + term
        if np.abs(term).max() < 1e-16:
            break
    ssq = float(c @ c)
    if ssq > 0:
        c = c * math.sqrt(d / ssq)
    return c


# ---------------------------------------------------------------- clustering

def dbi_reference(x: np.ndarray, labels: np.ndarray) -> float:
    ks = sorted(set(int(v) for v in labels))
    cents = {c: x[labels == c].mean(axis=0) for c in ks}
    scatter = {
        c: float(np.mean([np.linalg.norm(row - cents[c]) for row in x[labels == c]]))
        for c in ks
    }
    ratios = []
    for i in ks:
        worst = max(
            (scatter[i] + scatter[j]) / np.linalg.norm(cents[i] - cents[j])
            for j in ks
            if j != i
        )
        ratios.append(worst)
    return float(np.mean(ratios))


def ari_reference(a: np.ndarray, b: np.ndarray) -> float:
    """Pair-counting ARI computed literally over all O(m^2) pairs."""
    m = len(a)
    same_a = np.equal.outer(a, a)
    same_b = np.equal.outer(b, b)
    iu = np.triu_indices(m, k=1)
    n11 = int(np.sum(same_a[iu] & same_b[iu]))
    n00 = int(np.sum(~same_a[iu] & ~same_b[iu]))
    n10 = int(np.sum(same_a[iu] & ~same_b[iu]))
    n01 = int(np.sum(~same_a[iu] & same_b[iu]))
    total = n11 + n00 + n10 + n01
    expected = (n11 + n10) * (n11 + n01) / total
    maximum = 0.5 * ((n11 + n10) + (n11 + n01))
    if maximum == expected:
        return 1.0
    return (n11 - expected) / (maximum - expected)


def single_gaussian_loglik(x: np.ndarray, ridge: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Closed-form one-component fit: mean, covariance (divisor m, plus ridge),
    and the resulting log-likelihood, via scipy's multivariate normal."""
    from scipy.stats import multivariate_normal

    mean = x.mean(axis=0)
    diff = x - mean
    cov = (diff.T @ diff) / x.shape[0] + ridge * np.eye(x.shape[1])
    ll = float(multivariate_normal(mean=mean, cov=cov).logpdf(x).sum())
    return mean, cov, ll
