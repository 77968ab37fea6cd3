#!/usr/bin/env python3
"""Record API responses over the toy corpus as JSON fixtures for the UI tests.

Run from the repository root:

    python3 frontend/scripts/record_fixtures.py

The UI tests never import the Python package; they consume these recorded
HTTP payloads, so the contract they pin is exactly what the wire carries.
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from sketchlet.corpus import parse_vertical
from sketchlet.index import build_index, save_index
from sketchlet.service import create_app

ROOT = Path(__file__).resolve().parents[2]
FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    docs = parse_vertical((ROOT / "corpora" / "toy.vert").read_text())
    cc = build_index(docs)
    with tempfile.TemporaryDirectory() as td:
        idx = str(Path(td) / "toy.idx")
        save_index(cc, idx)
        client = TestClient(create_app(index_path=idx))
        record(client)
    return 0


def record(client: TestClient) -> None:
    def save(name: str, resp) -> None:
        (FIXTURES / name).write_text(
            json.dumps(resp.json(), indent=2, sort_keys=True) + "\n")
        print(f"{name}: HTTP {resp.status_code}")

    save("corpus.json", client.get("/api/corpus"))
    save("search_amount.json", client.post(
        "/api/search", json={"query": {"lemma": "amount"}}))
    save("freq_user.json", client.post(
        "/api/freq",
        json={"query": {"lemma": "amount"}, "group_by": "texttype:user"}))
    save("freq_forms.json", client.post(
        "/api/freq",
        json={"query": {"lemma": "amount"}, "group_by": "node_forms"}))
    save("sketch_amount.json", client.post(
        "/api/sketch", json={"lemma": "amount"}))
    save("diff_wordforms.json", client.post(
        "/api/sketchdiff",
        json={"mode": "two-wordforms", "lemma": "amount",
              "form_a": "amount", "form_b": "amounts"}))
    save("krcs_hydrograph.json", client.post(
        "/api/krcs", json={"lemma": "hydrograph", "relation": "generic"}))

    resp = client.post("/api/search", json={"query": {"cql": "[lemma="}})
    assert resp.status_code == 400, resp.status_code
    save("error_syntax.json", resp)


if __name__ == "__main__":
    sys.exit(main())
