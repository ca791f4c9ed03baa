import io
import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient

from netvars.service import create_app


def make_csv(seed=0, n=80, d=4) -> bytes:
    rng = np.random.default_rng(seed)
    base = rng.normal(size=(n, d))
    base[:, d - 1] = base[:, 0] + base[:, 1] + rng.normal(scale=0.1, size=n)
    buf = io.StringIO()
    names = [f"v{j}" for j in range(d)]
    buf.write(",".join(names) + "\n")
    for row in base:
        buf.write(",".join(f"{v:.10f}" for v in row) + "\n")
    return buf.getvalue().encode()


@pytest.fixture()
def client(tmp_path):
    sample = tmp_path / "sample.csv"
    sample.write_bytes(make_csv())
    app = create_app(data_dir=str(tmp_path))
    with TestClient(app) as c:
        yield c


def upload(client, data=None):
    res = client.post("/datasets", content=data or make_csv())
    assert res.status_code == 200, res.text
    return res.json()


def test_health(client):
    res = client.get("/health")
    assert res.status_code == 200
    assert res.text == "ok"


def test_upload_reports_shape_and_warnings(client):
    payload = upload(client)
    assert payload["m"] == 80
    assert payload["d"] == 4
    assert payload["columns"] == ["v0", "v1", "v2", "v3"]
    assert isinstance(payload["warnings"], list)
    assert payload["session_id"]


def test_upload_invalid_csv_422(client):
    res = client.post("/datasets", content=b"")
    assert res.status_code == 422


def test_happy_path_flow(client):
    sid = upload(client)["session_id"]
    res = client.post(
        f"/sessions/{sid}/network", json={"method": "lasso", "params": {}}
    )
    assert res.status_code == 200, res.text
    body = res.json()
    assert body["nodes"] == ["v0", "v1", "v2", "v3"]
    assert body["build_count"] == 1
    assert "elapsed_ms" in body

    res = client.get(f"/sessions/{sid}/centrality", params={"measure": "pagerank"})
    assert res.status_code == 200
    scores = res.json()
    assert set(scores["scores"]) == {"v0", "v1", "v2", "v3"}
    assert abs(sum(scores["scores"].values()) - 1.0) < 1e-8

    res = client.get(f"/sessions/{sid}/topn", params={"measure": "pagerank", "n": 2})
    assert res.status_code == 200
    assert len(res.json()["names"]) == 2

    res = client.post(
        f"/sessions/{sid}/cluster",
        json={"variables": ["v0", "v1", "v3"], "algo": "kmeans", "k": 3},
    )
    assert res.status_code == 200
    body = res.json()
    assert len(set(body["labels"])) == 3
    assert body["pca"] is not None
    assert len(body["elbow"]) >= 1
    assert body["dbi"] is not None


def test_centrality_before_network_409(client):
    sid = upload(client)["session_id"]
    res = client.get(f"/sessions/{sid}/centrality", params={"measure": "degree"})
    assert res.status_code == 409


def test_unknown_session_404(client):
    assert client.get("/sessions/nope/stats").status_code == 404
    assert (
        client.get("/sessions/nope/centrality", params={"measure": "degree"}).status_code
        == 404
    )


def test_measure_switch_does_not_rebuild(client):
    sid = upload(client)["session_id"]
    client.post(f"/sessions/{sid}/network", json={"method": "forward", "params": {}})
    before = client.get(f"/sessions/{sid}/stats").json()
    assert before["network_builds"] == 1
    client.get(f"/sessions/{sid}/centrality", params={"measure": "pagerank"})
    client.get(f"/sessions/{sid}/centrality", params={"measure": "betweenness"})
    client.get(f"/sessions/{sid}/centrality", params={"measure": "betweenness"})
    after = client.get(f"/sessions/{sid}/stats").json()
    assert after["network_builds"] == 1
    assert after["centrality_cache_size"] == 2


def test_rebuild_invalidates_cache_and_counts(client):
    sid = upload(client)["session_id"]
    client.post(f"/sessions/{sid}/network", json={"method": "forward", "params": {}})
    client.get(f"/sessions/{sid}/centrality", params={"measure": "degree"})
    client.post(f"/sessions/{sid}/network", json={"method": "lasso", "params": {}})
    stats = client.get(f"/sessions/{sid}/stats").json()
    assert stats["network_builds"] == 2
    assert stats["centrality_cache_size"] == 0


def test_invalid_params_422(client):
    sid = upload(client)["session_id"]
    assert (
        client.post(f"/sessions/{sid}/network", json={"method": "banana"}).status_code
        == 422
    )
    client.post(f"/sessions/{sid}/network", json={"method": "lasso"})
    assert (
        client.get(f"/sessions/{sid}/centrality", params={"measure": "nope"}).status_code
        == 422
    )
    assert (
        client.get(
            f"/sessions/{sid}/topn", params={"measure": "degree", "n": 0}
        ).status_code
        == 422
    )
    assert (
        client.get(
            f"/sessions/{sid}/topn", params={"measure": "degree", "n": 99}
        ).status_code
        == 422
    )
    assert (
        client.post(
            f"/sessions/{sid}/cluster",
            json={"variables": ["v0", "ghost"], "algo": "kmeans", "k": 2},
        ).status_code
        == 422
    )
    assert (
        client.post(
            f"/sessions/{sid}/cluster", json={"variables": ["v0", "v1"], "algo": "kmeans"}
        ).status_code
        == 422
    )


def test_cluster_without_network_is_allowed(client):
    # variables are passed explicitly, so clustering does not require a network
    sid = upload(client)["session_id"]
    res = client.post(
        f"/sessions/{sid}/cluster",
        json={"variables": ["v0", "v1"], "algo": "kmeans", "k": 2},
    )
    assert res.status_code == 200


def test_gmm_cluster_response(client):
    sid = upload(client)["session_id"]
    res = client.post(
        f"/sessions/{sid}/cluster",
        json={"variables": ["v0", "v1", "v2"], "algo": "gmm", "k_max": 2},
    )
    assert res.status_code == 200
    body = res.json()
    assert "gmm" in body and "bic_table" in body
    assert len(body["bic_table"]) == 2 * 3


def test_sessions_isolated_and_deterministic(client):
    # serial run
    serial = {}
    for tag, seed in (("a", 1), ("b", 2)):
        sid = upload(client, make_csv(seed))["session_id"]
        client.post(f"/sessions/{sid}/network", json={"method": "lasso", "params": {}})
        serial[tag] = {
            "centrality": client.get(
                f"/sessions/{sid}/centrality", params={"measure": "pagerank"}
            ).json(),
            "topn": client.get(
                f"/sessions/{sid}/topn", params={"measure": "pagerank", "n": 3}
            ).json(),
        }

    # interleaved run from two threads
    results = {}

    def run(tag, seed):
        sid = upload(client, make_csv(seed))["session_id"]
        client.post(f"/sessions/{sid}/network", json={"method": "lasso", "params": {}})
        results[tag] = {
            "centrality": client.get(
                f"/sessions/{sid}/centrality", params={"measure": "pagerank"}
            ).json(),
            "topn": client.get(
                f"/sessions/{sid}/topn", params={"measure": "pagerank", "n": 3}
            ).json(),
        }

    threads = [
        threading.Thread(target=run, args=("a", 1)),
        threading.Thread(target=run, args=("b", 2)),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == serial


def test_samples_endpoints(client):
    listing = client.get("/samples").json()
    assert "sample.csv" in listing["samples"]
    res = client.get("/samples/sample.csv")
    assert res.status_code == 200
    assert res.content == make_csv()
    assert client.get("/samples/missing.csv").status_code == 404


def test_upload_size_limit(tmp_path):
    app = create_app(max_upload_bytes=100)
    with TestClient(app) as client:
        res = client.post("/datasets", content=b"a,b\n" + b"1,2\n" * 200)
        assert res.status_code == 413


def test_idle_eviction(tmp_path):
    app = create_app(idle_timeout=0.0)
    with TestClient(app) as client:
        res = client.post("/datasets", content=make_csv())
        sid = res.json()["session_id"]
        import time

        time.sleep(0.01)
        assert client.get(f"/sessions/{sid}/stats").status_code == 404


def test_ui_static_mount(tmp_path):
    ui = tmp_path / "dist"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>netvars</title>")
    app = create_app(ui_dir=str(ui))
    with TestClient(app) as client:
        res = client.get("/ui/")
        assert res.status_code == 200
        assert "netvars" in res.text


def test_concurrent_build_same_session_409(client, monkeypatch):
    import time as time_mod

    import netvars.service as service_mod

    real_build = service_mod.build_network

    def slow_build(*args, **kwargs):
        time_mod.sleep(0.6)
        return real_build(*args, **kwargs)

    monkeypatch.setattr(service_mod, "build_network", slow_build)
    sid = upload(client)["session_id"]
    codes = []

    def run():
        res = client.post(f"/sessions/{sid}/network", json={"method": "lasso"})
        codes.append(res.status_code)

    threads = [threading.Thread(target=run) for _ in range(2)]
    threads[0].start()
    time_mod.sleep(0.15)  # let the first request take the build slot
    threads[1].start()
    for t in threads:
        t.join()
    assert sorted(codes) == [200, 409]
