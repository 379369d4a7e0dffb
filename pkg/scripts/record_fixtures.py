#!/usr/bin/env python3
"""Record API responses from the engine into frontend/tests/fixtures/.

Drives the real service in-process over the bundled mini corpus with a fixed
training seed, so re-running produces the same fixtures. The frontend test
suite runs entirely against these files, no live backend needed.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

import textcurator as tc
from textcurator.service import EngineState, create_app

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"
SEEDS = ["infect", "epidemic", "inoculate", "contagion", "contaminate", "vaccinate"]


def write(name: str, payload) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / name).write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {name}")


def main() -> None:
    corpus = tc.ingest_corpus(tc.mini_corpus_dir())
    model = tc.train_cbow(
        corpus, tc.TrainingConfig(dimension=40, window=5, min_count=2,
                                  epochs=3, seed=7),
    )
    with tempfile.TemporaryDirectory() as state_dir:
        state = EngineState(
            corpus=corpus,
            model=model,
            index=tc.build_index(corpus),
            lexicons=tc.LexiconStore(state_dir),
            subcorpora=tc.SubCorpusStore(state_dir),
            model_ref="model.txt",
        )
        client = TestClient(create_app(state))

        write("config.json", client.get("/api/config").json())
        write("search_fever.json", client.get(
            "/api/search", params={"q": "fever plague", "limit": 10},
        ).json())
        write("ngrams_fever.json", client.get(
            "/api/ngrams", params={"term": "fever", "year_from": 1840,
                                   "year_to": 1900},
        ).json())
        write("ngrams_scarlet_fever.json", client.get(
            "/api/ngrams", params={"term": "scarlet fever", "year_from": 1840,
                                   "year_to": 1900},
        ).json())
        write("ngrams_absent.json", client.get(
            "/api/ngrams", params={"term": "zzzz-absent", "year_from": 1840,
                                   "year_to": 1900},
        ).json())

        created = client.post("/api/lexicons", json={
            "name": "contagion", "seeds": SEEDS,
        }).json()
        write("lexicon_created.json", created)

        recommended = client.post(
            "/api/lexicons/contagion/recommend", json={"k": 20},
        ).json()
        write("recommend.json", recommended)

        offered = [c["term"] for c in recommended["candidates"]]
        decided = client.post("/api/lexicons/contagion/decisions", json={
            "version": recommended["version"],
            "accept": offered[:2],
            "reject": offered[2:3],
        }).json()
        write("lexicon_after_decisions.json", decided)

        stale = client.post("/api/lexicons/contagion/decisions", json={
            "version": 1, "accept": [], "reject": [],
        })
        write("error_version_conflict.json", {
            "status": stale.status_code, "body": stale.json(),
        })

        ranked = client.post("/api/lexicons/contagion/rank",
                             json={"limit": 10}).json()
        write("rank.json", ranked)

        subcorpus = client.post("/api/subcorpora", json={
            "name": "contagion-docs", "lexicon_name": "contagion", "limit": 10,
        }).json()
        write("subcorpus.json", subcorpus)

        excluded = client.post("/api/subcorpora/contagion-docs/exclude", json={
            "version": subcorpus["version"],
            "doc_id": subcorpus["members"][1]["doc_id"],
        }).json()
        write("subcorpus_after_exclude.json", excluded)

        top_doc = ranked["results"][0]["doc_id"]
        write("document_top_ranked.json", client.get(
            f"/api/documents/{top_doc}", params={"page_size": 5000},
        ).json())

        write("lexicons_list.json", client.get("/api/lexicons").json())


if __name__ == "__main__":
    main()
