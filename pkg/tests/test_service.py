import threading

import pytest
from fastapi.testclient import TestClient

from storymix.backends import Gateway, MockSuite
from storymix.pipeline.service import create_app


def mock_gateway_factory(config):
    gw = Gateway(sleeper=lambda s: None, parallelism=config.parallelism)
    gw.register_suite(MockSuite())
    return gw


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path, gateway_factory=mock_gateway_factory)
    with TestClient(app) as c:
        yield c


@pytest.fixture
def project_id(client):
    resp = client.post("/api/projects", json={"prompt": "A stormy lighthouse tale."})
    assert resp.status_code == 201
    return resp.json()["project_id"]


class TestProjectEndpoints:
    def test_create_and_list(self, client, project_id):
        listed = client.get("/api/projects").json()
        assert any(p["project_id"] == project_id for p in listed)
        summary = client.get(f"/api/projects/{project_id}").json()
        assert summary["stage"] == "rendered"
        assert summary["current_version"] == 1

    def test_unknown_project_404(self, client):
        assert client.get("/api/projects/nope").status_code == 404
        assert client.get("/api/projects/nope/script").status_code == 404

    def test_get_script_and_render(self, client, project_id):
        script = client.get(f"/api/projects/{project_id}/script").json()
        assert script["schema_version"] == 1
        assert script["version"] == 1
        wav = client.get(f"/api/projects/{project_id}/render")
        assert wav.status_code == 200
        assert wav.headers["content-type"].startswith("audio/wav")
        assert wav.content[:4] == b"RIFF"

    def test_attempts_exposed(self, client, project_id):
        attempts = client.get(f"/api/projects/{project_id}/attempts").json()
        assert attempts
        for doc in attempts.values():
            assert "retained" in doc and "attempts" in doc


class TestFeedback:
    def test_lower_music_round(self, client, project_id):
        resp = client.post(
            f"/api/projects/{project_id}/feedback",
            json={"text": "lower the background music volume"},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert not body["no_parse"]
        assert body["version"] == 2
        assert body["applied"][0]["category"] == "signal_gain_control"
        assert body["regenerated"] == []
        wav = client.get(body["render_url"])
        assert wav.status_code == 200

    def test_historical_script_versions_unchanged(self, client, project_id):
        v1_before = client.get(f"/api/projects/{project_id}/script?version=1").json()
        client.post(f"/api/projects/{project_id}/feedback",
                    json={"text": "lower the background music volume"})
        client.post(f"/api/projects/{project_id}/feedback",
                    json={"text": "raise the dialogue volume by 1 dB"})
        v1_after = client.get(f"/api/projects/{project_id}/script?version=1").json()
        assert v1_before == v1_after
        assert client.get(f"/api/projects/{project_id}/script").json()["version"] == 3

    def test_no_parse_returns_notice_and_no_version_bump(self, client, project_id):
        resp = client.post(f"/api/projects/{project_id}/feedback",
                           json={"text": "frobnicate the timeline"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["no_parse"]
        assert body["unparsed"]
        assert body["version"] == 1

    def test_stale_version_conflict_409(self, client, project_id):
        client.post(f"/api/projects/{project_id}/feedback",
                    json={"text": "lower the background music volume"})
        resp = client.post(
            f"/api/projects/{project_id}/feedback",
            json={"text": "raise the dialogue volume", "expected_version": 1},
        )
        assert resp.status_code == 409

    def test_insert_with_cursor(self, client, project_id):
        resp = client.post(
            f"/api/projects/{project_id}/feedback",
            json={"text": "insert a scream here", "cursor_time": 3.0},
        )
        body = resp.json()
        assert not body["no_parse"]
        assert len(body["regenerated"]) == 1
        script = client.get(f"/api/projects/{project_id}/script").json()
        inserted = [t for t in script["tracks"] if t["entry_id"] == body["regenerated"][0]]
        assert inserted and inserted[0]["start_time"] == pytest.approx(3.0)

    def test_concurrent_feedback_applies_fifo(self, client, project_id):
        results = []

        def send(text):
            resp = client.post(f"/api/projects/{project_id}/feedback", json={"text": text})
            results.append(resp.json()["version"])

        threads = [
            threading.Thread(target=send, args=("lower the background music volume",)),
            threading.Thread(target=send, args=("raise the dialogue volume by 1 dB",)),
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(results) == [2, 3]
        summary = client.get(f"/api/projects/{project_id}").json()
        assert summary["current_version"] == 3
        assert summary["script_versions"] == [1, 2, 3]


class TestEvents:
    def test_events_are_sequential_and_poll_incrementally(self, client, project_id):
        first = client.get(f"/api/projects/{project_id}/events").json()
        assert first["events"]
        seqs = [e["seq"] for e in first["events"]]
        assert seqs == sorted(seqs)
        cursor = first["next_after"]

        client.post(f"/api/projects/{project_id}/feedback",
                    json={"text": "lower the background music volume"})
        newer = client.get(f"/api/projects/{project_id}/events?after={cursor}").json()
        assert newer["events"]
        assert all(e["seq"] > cursor for e in newer["events"])
        types = {e["type"] for e in newer["events"]}
        assert "feedback_applied" in types
        assert "render_done" in types
