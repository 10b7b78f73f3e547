import json

import pytest
from fastapi.testclient import TestClient

from conftest import FIXTURE_CSV
from isoas.engine import Engine
from isoas.server import create_app


@pytest.fixture
def client(engine):
    return TestClient(create_app(engine))


def test_query_endpoint_success(client):
    r = client.post("/api/query", json={"text": "I need document"})
    assert r.status_code == 200
    body = r.json()
    assert body["rules"] == ["stmt1"]
    assert [rec["id"] for rec in body["results"]] == [1, 3]
    assert body["error"] is None


def test_query_bytes_equal_in_process_call(tmp_path):
    eng_a = Engine(tmp_path / "a")
    eng_a.repo.ingest("main", FIXTURE_CSV)
    eng_b = Engine(tmp_path / "b")
    eng_b.repo.ingest("main", FIXTURE_CSV)
    expected = eng_a.process("I need document where between 1 and 5").to_json_bytes()
    via_http = TestClient(create_app(eng_b)).post(
        "/api/query", json={"text": "I need document where between 1 and 5"}
    )
    assert via_http.content == expected


def test_domain_errors_are_200_with_error_field(client):
    r = client.post("/api/query", json={"text": "They is searching music"})
    assert r.status_code == 200
    assert r.json()["error"]["type"] == "AgreementViolation"


def test_sql_endpoint(client):
    r = client.post(
        "/api/sql",
        json={"sql": "SELECT id, name, kind, value FROM records WHERE (kind = 'cad')"},
    )
    assert r.status_code == 200
    assert [rec["id"] for rec in r.json()["results"]] == [2]


def test_sql_syntax_error_is_domain_data(client):
    r = client.post("/api/sql", json={"sql": "SELEC nope"})
    assert r.status_code == 200
    assert r.json()["error"]["type"] == "SqlSyntaxError"
    assert r.json()["error"]["position"] == 0


def test_history_endpoint(client):
    client.post("/api/query", json={"text": "I need cad", "session": "s9"})
    r = client.get("/api/history", params={"session": "s9"})
    assert [e["stage"] for e in r.json()["entries"]] == [
        "input", "lexed", "parsed", "modeled", "resolved", "executed",
    ]


def test_stores_lifecycle(client):
    assert client.post("/api/stores", json={"name": "pdm"}).status_code == 201
    listed = client.get("/api/stores").json()["stores"]
    assert {"main", "pdm"} <= {s["name"] for s in listed}
    assert client.post("/api/stores/pdm/detach").json()["state"] == "detached"
    assert client.post("/api/stores/pdm/attach").json()["state"] == "attached"


def test_store_conflicts_and_missing(client):
    client.post("/api/stores", json={"name": "pdm"})
    assert client.post("/api/stores", json={"name": "pdm"}).status_code == 409
    assert client.post("/api/stores/ghost/attach").status_code == 404
    assert client.post("/api/stores/pdm/attach").status_code == 409  # already attached


def test_ingest_endpoint(client):
    client.post("/api/stores", json={"name": "pdm"})
    r = client.post("/api/ingest", json={"store": "pdm", "csv": FIXTURE_CSV})
    assert r.status_code == 200
    assert r.json()["count"] == 3
    bad = client.post("/api/ingest", json={"store": "pdm", "csv": "id,nope\n"})
    assert bad.status_code == 400


def test_saved_query_crud_and_run(client):
    ir = json.dumps(
        {
            "store": "main",
            "concepts": ["document"],
            "attribute": "value",
            "filter": {"type": "hole", "op": ">"},
            "notes": [],
        }
    )
    created = client.post(
        "/api/saved", json={"name": "docs-gt", "body": ir, "kind": "ir"}
    )
    assert created.status_code == 201
    assert client.get("/api/saved/docs-gt").json()["kind"] == "ir"
    assert "docs-gt" in [q["name"] for q in client.get("/api/saved").json()["queries"]]

    run = client.post("/api/saved/docs-gt/run", json={"bindings": [5]})
    assert run.status_code == 200
    assert [rec["id"] for rec in run.json()["results"]] == [3]

    conflict = client.post("/api/saved", json={"name": "docs-gt", "body": ir, "kind": "ir"})
    assert conflict.status_code == 409
    updated = client.post(
        "/api/saved",
        json={"name": "docs-gt", "body": ir, "kind": "ir", "overwrite": True},
    )
    assert updated.status_code == 201

    assert client.delete("/api/saved/docs-gt").status_code == 200
    assert client.get("/api/saved/docs-gt").status_code == 404
    assert client.post("/api/saved/docs-gt/run", json={}).status_code == 404


def test_saved_run_arity_error_is_domain_data(client):
    ir = json.dumps(
        {
            "store": "main",
            "concepts": ["document"],
            "attribute": "value",
            "filter": {"type": "hole", "op": ">"},
            "notes": [],
        }
    )
    client.post("/api/saved", json={"name": "holey", "body": ir, "kind": "ir"})
    r = client.post("/api/saved/holey/run", json={"bindings": []})
    assert r.status_code == 200
    assert r.json()["error"]["type"] == "ArityMismatch"


def test_index_without_console_lists_api(client):
    r = client.get("/")
    assert r.status_code == 200
    assert "POST /api/query" in r.json()["api"]


def test_console_static_mount(tmp_path, engine):
    console = tmp_path / "console"
    console.mkdir()
    (console / "index.html").write_text("<html><body>console</body></html>")
    client = TestClient(create_app(engine, console_dir=console))
    r = client.get("/")
    assert r.status_code == 200
    assert "console" in r.text
    # the API still wins over the static mount
    assert client.get("/api/stores").status_code == 200
