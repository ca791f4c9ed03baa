import numpy as np
import pytest

import oracles
import netvars.centrality as ct
from netvars.centrality import (
    CentralityScores,
    MEASURES,
    compute_centrality,
    has_cycle,
    rank_top_n,
    scores_to_json,
    spectral_radius,
)


def cycle3():
    a = np.zeros((3, 3))
    a[0, 1] = a[1, 2] = a[2, 0] = 1
    return a


def star_in(leaves=4):
    # edges leaf -> hub; hub is node 0
    a = np.zeros((leaves + 1, leaves + 1))
    a[1:, 0] = 1
    return a


def random_digraph(rng, max_nodes=5, p=0.3):
    d = int(rng.integers(1, max_nodes + 1))
    a = (rng.random((d, d)) < p).astype(float)
    np.fill_diagonal(a, 0.0)
    return a


# ----------------------------------------------------------- fixed examples

def test_cycle_pagerank_degree_betweenness():
    a = cycle3()
    np.testing.assert_allclose(ct.pagerank(a).scores, [1 / 3] * 3, atol=1e-9)
    np.testing.assert_allclose(ct.degree(a).scores, [2, 2, 2])
    np.testing.assert_allclose(ct.betweenness(a).scores, [1, 1, 1], atol=1e-12)


def test_star_hits():
    a = star_in(4)
    hub, auth = ct.hits(a)
    assert auth.scores[0] == pytest.approx(1.0)
    np.testing.assert_allclose(auth.scores[1:], 0.0, atol=1e-12)
    np.testing.assert_allclose(hub.scores[1:], 1.0, atol=1e-12)
    assert hub.scores[0] == pytest.approx(0.0, abs=1e-12)


def test_eigen_dag_falls_back_to_symmetrized():
    a = np.zeros((3, 3))
    a[0, 1] = a[1, 2] = 1  # path, acyclic
    s = ct.eigen(a)
    assert s.fallback_used
    expect, fallback = oracles.oracle_eigen(a)
    assert fallback
    np.testing.assert_allclose(s.scores, expect, atol=1e-9)


def test_eigen_cycle_no_fallback():
    s = ct.eigen(cycle3())
    assert not s.fallback_used
    np.testing.assert_allclose(s.scores, [1, 1, 1], atol=1e-12)


def test_edgeless_graph_degenerate_scores():
    a = np.zeros((3, 3))
    assert ct.eigen(a).fallback_used
    np.testing.assert_allclose(ct.eigen(a).scores, 0.0)
    hub, auth = ct.hits(a)
    np.testing.assert_allclose(hub.scores, 0.0)
    np.testing.assert_allclose(auth.scores, 0.0)
    np.testing.assert_allclose(ct.pagerank(a).scores, [1 / 3] * 3, atol=1e-12)
    np.testing.assert_allclose(ct.power(a).scores, 0.0)
    np.testing.assert_allclose(ct.alpha(a).scores, 1.0)


def test_single_node_graph():
    a = np.zeros((1, 1))
    for measure in MEASURES:
        s = compute_centrality(a, measure)
        assert np.all(np.isfinite(s.scores))
        assert s.ranking == (0,)


# ----------------------------------------------------------- oracle battery

def test_all_measures_match_oracles_on_small_digraphs():
    rng = np.random.default_rng(1234)
    checked = 0
    for _ in range(120):
        a = random_digraph(rng)
        _assert_matches_oracles(a)
        checked += 1
    assert checked == 120


def _assert_matches_oracles(a):
    np.testing.assert_allclose(ct.degree(a).scores, oracles.oracle_degree(a), atol=1e-6)
    np.testing.assert_allclose(
        ct.pagerank(a).scores, oracles.oracle_pagerank(a), atol=1e-6
    )
    hub, auth = ct.hits(a)
    ohub, oauth = oracles.oracle_hits(a)
    np.testing.assert_allclose(hub.scores, ohub, atol=1e-6)
    np.testing.assert_allclose(auth.scores, oauth, atol=1e-6)
    eig = ct.eigen(a)
    oeig, ofall = oracles.oracle_eigen(a)
    assert eig.fallback_used == ofall
    np.testing.assert_allclose(eig.scores, oeig, atol=1e-6)
    np.testing.assert_allclose(
        ct.betweenness(a).scores, oracles.oracle_betweenness(a), atol=1e-6
    )
    np.testing.assert_allclose(
        ct.closeness(a).scores, oracles.oracle_closeness(a), atol=1e-6
    )
    np.testing.assert_allclose(ct.alpha(a).scores, oracles.oracle_alpha(a), atol=1e-6)
    np.testing.assert_allclose(ct.power(a).scores, oracles.oracle_power(a), atol=1e-6)


def test_spectral_radius_matches_dense_eig():
    rng = np.random.default_rng(77)
    for _ in range(60):
        a = random_digraph(rng)
        mine = spectral_radius(a)
        ref = oracles.oracle_spectral_radius(a)
        if ref < 1e-9:
            assert mine == 0.0
        else:
            assert abs(mine - ref) < 1e-8 * max(ref, 1.0)


def test_has_cycle_matches_nilpotency():
    rng = np.random.default_rng(88)
    for _ in range(80):
        a = random_digraph(rng)
        assert has_cycle(a) == (not oracles.is_acyclic(a))


# ----------------------------------------------------------- invariants

def test_permutation_equivariance():
    rng = np.random.default_rng(5)
    a = (rng.random((6, 6)) < 0.35).astype(float)
    np.fill_diagonal(a, 0.0)
    perm = rng.permutation(6)
    pa = a[np.ix_(perm, perm)]
    for measure in MEASURES:
        base = compute_centrality(a, measure).scores
        permuted = compute_centrality(pa, measure).scores
        np.testing.assert_allclose(permuted, base[perm], atol=1e-8)


def test_pagerank_sums_to_one_and_positive():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a = random_digraph(rng)
        s = ct.pagerank(a)
        assert abs(s.scores.sum() - 1.0) < 1e-8
        assert np.all(s.scores > 0)


def test_betweenness_zero_for_tiny_graphs():
    for d in (1, 2):
        a = np.zeros((d, d))
        if d == 2:
            a[0, 1] = 1
        np.testing.assert_allclose(ct.betweenness(a).scores, 0.0)


def test_ranking_is_stable_and_prefix():
    scores = CentralityScores(
        measure="degree",
        params={},
        nodes=("a", "b", "c", "d"),
        scores=np.array([2.0, 5.0, 2.0, 1.0]),
        ranking=(1, 0, 2, 3),
    )
    assert rank_top_n(scores, 4) == ["b", "a", "c", "d"]
    for n in range(1, 5):
        assert rank_top_n(scores, n) == rank_top_n(scores, 4)[:n]
    with pytest.raises(ValueError):
        rank_top_n(scores, 0)
    with pytest.raises(ValueError):
        rank_top_n(scores, 5)


def test_equal_scores_tie_break_by_index():
    s = ct.degree(cycle3())
    assert s.ranking == (0, 1, 2)


def test_uniform_scaling_preserves_ranking():
    rng = np.random.default_rng(9)
    a = (rng.random((7, 7)) < 0.3).astype(float)
    np.fill_diagonal(a, 0.0)
    s = ct.pagerank(a)
    order = sorted(range(7), key=lambda i: (-3.0 * s.scores[i], i))
    assert tuple(order) == s.ranking


def test_dispatcher_validates():
    a = cycle3()
    with pytest.raises(ValueError):
        compute_centrality(a, "nope")
    with pytest.raises(ValueError):
        compute_centrality(a, "degree", damping=0.5)
    s = compute_centrality(a, "pagerank", damping=0.9)
    assert s.params == {"damping": 0.9}


def test_scores_json_shape():
    payload = scores_to_json(ct.degree(cycle3()))
    assert payload["measure"] == "degree"
    assert set(payload["scores"]) == {"n0", "n1", "n2"}
    assert payload["ranking"] == ["n0", "n1", "n2"]
    assert payload["fallback_used"] is False
