import io
import zipfile

import pytest
from fastapi.testclient import TestClient

import textcurator as tc
from textcurator.service import EngineState, create_app
from conftest import SEED_FIXTURES


@pytest.fixture()
def state(mini_corpus, mini_model, mini_index, tmp_path):
    return EngineState(
        corpus=mini_corpus,
        model=mini_model,
        index=mini_index,
        lexicons=tc.LexiconStore(tmp_path),
        subcorpora=tc.SubCorpusStore(tmp_path),
        model_ref="model.txt",
    )


@pytest.fixture()
def client(state):
    return TestClient(create_app(state), raise_server_exceptions=False)


def make_lexicon(client, name="contagion", seeds=None):
    response = client.post("/api/lexicons", json={
        "name": name, "seeds": seeds or SEED_FIXTURES["contagion"],
    })
    assert response.status_code == 201, response.text
    return response.json()


def assert_error_shape(response, code):
    body = response.json()
    assert set(body) == {"code", "message", "details"}
    assert body["code"] == code


class TestHealth:
    def test_ready(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ready"}

    def test_not_ready_reports_components(self, mini_corpus, tmp_path):
        partial = EngineState(corpus=mini_corpus, lexicons=tc.LexiconStore(tmp_path),
                              subcorpora=tc.SubCorpusStore(tmp_path))
        client = TestClient(create_app(partial), raise_server_exceptions=False)
        response = client.get("/api/health")
        assert response.status_code == 503
        assert_error_shape(response, "NOT_READY")
        components = response.json()["details"]["components"]
        assert components["corpus"] is True
        assert components["model"] is False
        assert components["index"] is False

    def test_endpoints_refuse_until_ready(self, mini_corpus, tmp_path):
        partial = EngineState(corpus=mini_corpus)
        client = TestClient(create_app(partial), raise_server_exceptions=False)
        response = client.get("/api/search", params={"q": "fever"})
        assert response.status_code == 503

    def test_unknown_route_is_single_error_object(self, client):
        response = client.get("/api/definitely-not-a-route")
        assert response.status_code == 404
        assert_error_shape(response, "NOT_FOUND")


class TestSearch:
    def test_contract_matches_engine(self, client, state):
        response = client.get("/api/search", params={
            "q": "Fever, plague!", "year_from": 1850, "year_to": 1890,
            "limit": 5,
        })
        assert response.status_code == 200
        body = response.json()
        tokens = tc.tokenize("Fever, plague!")
        hits = tc.keyword_search(
            state.index, tokens,
            tc.MetadataFilter(year_from=1850, year_to=1890), limit=5,
        )
        assert body["query_tokens"] == tokens
        assert [r["doc_id"] for r in body["results"]] == [h.doc_id for h in hits]
        for record, hit in zip(body["results"], hits):
            assert record["score"] == hit.score
            expected = tc.snippet(state.corpus.documents[hit.doc_id], tokens)
            assert record["snippet"] == expected
            meta = state.index.doc_meta[hit.doc_id]
            assert record["title"] == meta.title
            assert record["author"] == meta.author
            assert record["year"] == meta.year

    def test_empty_query_rejected(self, client):
        response = client.get("/api/search", params={"q": "!!!"})
        assert response.status_code == 400
        assert_error_shape(response, "VALIDATION")


class TestNgrams:
    def test_contract_matches_engine(self, client, state):
        response = client.get("/api/ngrams", params={
            "term": "fever", "year_from": 1840, "year_to": 1900,
        })
        assert response.status_code == 200
        series = tc.ngram_series(state.index, "fever", 1840, 1900)
        assert response.json() == {
            "term": "fever",
            "points": [
                {"year": p.year, "count": p.count,
                 "relative_frequency": p.relative_frequency}
                for p in series.points
            ],
        }

    def test_bigram_term(self, client, state):
        response = client.get("/api/ngrams", params={
            "term": "scarlet fever", "year_from": 1840, "year_to": 1900,
        })
        assert response.status_code == 200
        assert sum(p["count"] for p in response.json()["points"]) > 0

    def test_inverted_range_rejected(self, client):
        response = client.get("/api/ngrams", params={
            "term": "fever", "year_from": 1900, "year_to": 1800,
        })
        assert response.status_code == 400


class TestDocuments:
    def test_pagination(self, client, state):
        doc = state.corpus.documents["m01"]
        response = client.get("/api/documents/m01", params={"page_size": 50})
        body = response.json()
        assert body["length"] == doc.length
        assert body["tokens"] == list(doc.tokens[:50])
        last = client.get("/api/documents/m01", params={
            "page": body["total_pages"], "page_size": 50,
        }).json()
        assert last["tokens"] == list(doc.tokens[(body["total_pages"] - 1) * 50:])

    def test_unknown_document(self, client):
        response = client.get("/api/documents/ghost")
        assert response.status_code == 404
        assert_error_shape(response, "NOT_FOUND")

    def test_bad_page(self, client):
        response = client.get("/api/documents/m01", params={"page": 0})
        assert response.status_code == 400


class TestLexiconEndpoints:
    def test_fresh_state_lists_empty(self, client):
        response = client.get("/api/lexicons")
        assert response.status_code == 200
        assert response.json() == []

    def test_create_and_get(self, client):
        created = make_lexicon(client)
        assert created["accepted"] == sorted(SEED_FIXTURES["contagion"])
        assert created["version"] == 1
        fetched = client.get("/api/lexicons/contagion").json()
        assert fetched == created
        summaries = client.get("/api/lexicons").json()
        assert [s["name"] for s in summaries] == ["contagion"]

    def test_duplicate_conflicts(self, client):
        make_lexicon(client)
        response = client.post("/api/lexicons", json={
            "name": "contagion", "seeds": ["fever"],
        })
        assert response.status_code == 409
        assert_error_shape(response, "CONFLICT")

    def test_empty_seeds_rejected(self, client):
        response = client.post("/api/lexicons", json={"name": "x", "seeds": []})
        assert response.status_code == 400
        assert_error_shape(response, "VALIDATION")

    def test_recommend_round_and_decisions(self, client, state):
        make_lexicon(client)
        response = client.post("/api/lexicons/contagion/recommend", json={"k": 8})
        assert response.status_code == 200
        body = response.json()
        scores = [c["score"] for c in body["candidates"]]
        assert scores == sorted(scores, reverse=True)
        assert len(body["candidates"]) <= 8
        assert body["version"] == 2

        offered = [c["term"] for c in body["candidates"]]
        response = client.post("/api/lexicons/contagion/decisions", json={
            "version": 2, "accept": offered[:1], "reject": offered[1:2],
        })
        assert response.status_code == 200
        updated = response.json()
        assert offered[0] in updated["accepted"]
        assert offered[1] in updated["rejected"]
        assert updated["version"] == 3
        assert len(updated["rounds"]) == 1

    def test_stale_version_conflicts(self, client):
        make_lexicon(client)
        client.post("/api/lexicons/contagion/recommend", json={"k": 5})
        response = client.post("/api/lexicons/contagion/decisions", json={
            "version": 1, "accept": [], "reject": [],
        })
        assert response.status_code == 409
        assert_error_shape(response, "VERSION_CONFLICT")
        assert response.json()["details"]["current_version"] == 2

    def test_oov_seeds_reported(self, client):
        make_lexicon(client, name="weird", seeds=["zzzz-absent"])
        response = client.post("/api/lexicons/weird/recommend", json={})
        assert response.status_code == 400
        assert_error_shape(response, "OOV_TERM")

    def test_unoffered_decision_rejected(self, client):
        make_lexicon(client)
        version = client.post(
            "/api/lexicons/contagion/recommend", json={"k": 3}
        ).json()["version"]
        response = client.post("/api/lexicons/contagion/decisions", json={
            "version": version, "accept": ["never-offered"], "reject": [],
        })
        assert response.status_code == 400

    def test_rank_contract(self, client, state):
        make_lexicon(client)
        response = client.post("/api/lexicons/contagion/rank", json={
            "filters": {"year_from": 1850}, "limit": 5,
        })
        assert response.status_code == 200
        lexicon = state.lexicons.get("contagion")
        expected = tc.rank_by_lexicon(
            state.index, lexicon, tc.MetadataFilter(year_from=1850), limit=5
        )
        body = response.json()["results"]
        assert [r["doc_id"] for r in body] == [r.doc_id for r in expected]
        for record, result in zip(body, expected):
            assert record["score"] == result.score
            assert record["matched_terms"] == result.matched_terms


class TestSubCorpusEndpoints:
    def create_subcorpus(self, client, name="contagion-docs"):
        make_lexicon(client)
        response = client.post("/api/subcorpora", json={
            "name": name, "lexicon_name": "contagion", "limit": 10,
        })
        assert response.status_code == 201, response.text
        return response.json()

    def test_create_and_get(self, client, state):
        view = self.create_subcorpus(client)
        assert view["version"] == 1
        assert view["excluded"] == []
        lexicon = state.lexicons.get("contagion")
        expected = tc.rank_by_lexicon(state.index, lexicon, None, limit=10)
        assert [m["doc_id"] for m in view["members"]] == [r.doc_id for r in expected]
        assert client.get("/api/subcorpora/contagion-docs").json() == view

    def test_unknown_lexicon_404(self, client):
        response = client.post("/api/subcorpora", json={
            "name": "x", "lexicon_name": "ghost",
        })
        assert response.status_code == 404

    def test_exclude_include_flow(self, client):
        view = self.create_subcorpus(client)
        top = view["members"][0]["doc_id"]
        response = client.post("/api/subcorpora/contagion-docs/exclude", json={
            "version": 1, "doc_id": top,
        })
        assert response.status_code == 200
        updated = response.json()
        assert top in updated["excluded"]
        assert top not in [m["doc_id"] for m in updated["members"]]
        assert updated["version"] == 2

        stale = client.post("/api/subcorpora/contagion-docs/include", json={
            "version": 1, "doc_id": top,
        })
        assert stale.status_code == 409
        assert_error_shape(stale, "VERSION_CONFLICT")

        back = client.post("/api/subcorpora/contagion-docs/include", json={
            "version": 2, "doc_id": top,
        })
        assert back.status_code == 200
        assert back.json()["excluded"] == []

    def test_export_zip_round_trip(self, client, state, tmp_path):
        view = self.create_subcorpus(client)
        excluded = view["members"][1]["doc_id"]
        client.post("/api/subcorpora/contagion-docs/exclude", json={
            "version": 1, "doc_id": excluded,
        })
        response = client.get("/api/subcorpora/contagion-docs/export")
        assert response.status_code == 200
        assert response.headers["content-type"] == "application/zip"

        archive = zipfile.ZipFile(io.BytesIO(response.content))
        names = set(archive.namelist())
        assert "metadata.csv" in names and "manifest.csv" in names
        out = tmp_path / "unzipped"
        archive.extractall(out)
        again = tc.ingest_corpus(out)
        member_ids = {m["doc_id"] for m in view["members"]} - {excluded}
        assert set(again.documents) == member_ids


class TestConfigEndpoint:
    def test_exposes_training_and_tokenizer(self, client, state):
        body = client.get("/api/config").json()
        cfg = state.model.config
        assert body["training"]["dimension"] == cfg.dimension
        assert body["training"]["seed"] == cfg.seed
        assert body["training"]["window"] == cfg.window
        assert len(body["tokenizer"]["rules"]) == 4
        assert body["model_ref"] == "model.txt"


class TestAdminReload:
    def test_disabled_by_default(self, client):
        response = client.post("/api/admin/reload")
        assert response.status_code == 404
        assert_error_shape(response, "NOT_FOUND")

    def test_reload_swaps_state_atomically(self, state, mini_corpus, mini_model,
                                           mini_index, tmp_path):
        from textcurator.service import StateHolder, create_app

        replacement = EngineState(
            corpus=mini_corpus, model=mini_model, index=mini_index,
            lexicons=tc.LexiconStore(tmp_path / "new"),
            subcorpora=tc.SubCorpusStore(tmp_path / "new"),
            model_ref="retrained.txt",
        )
        holder = StateHolder(state)
        app = create_app(holder, reload_state=lambda: replacement)
        client = TestClient(app, raise_server_exceptions=False)
        assert client.get("/api/config").json()["model_ref"] == "model.txt"
        response = client.post("/api/admin/reload")
        assert response.status_code == 200
        assert response.json()["status"] == "reloaded"
        assert holder.current is replacement
        assert client.get("/api/config").json()["model_ref"] == "retrained.txt"


class TestStartup:
    def test_missing_model_without_train_flag_fails(self, mini_dir, tmp_path):
        from textcurator.service import ServiceConfig, load_state

        config = ServiceConfig(
            corpus_dir=mini_dir,
            model_path=tmp_path / "absent.txt",
            state_dir=tmp_path / "state",
        )
        with pytest.raises(FileNotFoundError):
            load_state(config)

    def test_train_flag_builds_and_saves_model(self, mini_dir, tmp_path):
        from textcurator.service import ServiceConfig, load_state

        model_path = tmp_path / "model.txt"
        config = ServiceConfig(
            corpus_dir=mini_dir,
            model_path=model_path,
            state_dir=tmp_path / "state",
            train_if_missing=True,
            train_config=tc.TrainingConfig(dimension=12, min_count=3,
                                           epochs=1, seed=4),
        )
        state = load_state(config)
        assert state.ready()
        assert model_path.is_file()
        # a second startup reuses the saved model
        reloaded = load_state(config)
        assert reloaded.model.config == state.model.config
