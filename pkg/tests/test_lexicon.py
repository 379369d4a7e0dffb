import json
import random

import pytest

import textcurator as tc
from textcurator.errors import (
    ConflictError,
    NotFoundError,
    OutOfVocabularyError,
    ParseError,
    ValidationError,
    VersionConflictError,
)
from conftest import SEED_FIXTURES, make_random_model
from oracles import PLANTED_TWINS


class TestCreate:
    def test_disease_seeds(self):
        lex = tc.create_lexicon("disease", SEED_FIXTURES["disease"], "model-1")
        assert lex.accepted == set(SEED_FIXTURES["disease"])
        assert len(lex.accepted) == 5
        assert lex.rejected == set()
        assert lex.rounds == []

    def test_contagion_seeds(self):
        lex = tc.create_lexicon("contagion", SEED_FIXTURES["contagion"], "model-1")
        assert len(lex.accepted) == 6

    def test_empty_seeds_rejected(self):
        with pytest.raises(ValidationError):
            tc.create_lexicon("empty", [], "model-1")

    def test_seeds_normalized_to_tokens(self):
        lex = tc.create_lexicon("x", ["Scarlet Fever!", "PLAGUE"], "m")
        assert lex.seeds == ("scarlet fever", "plague")

    def test_three_token_seed_rejected(self):
        with pytest.raises(ValidationError):
            tc.create_lexicon("x", ["one two three"], "m")

    def test_bad_name_rejected(self):
        with pytest.raises(ValidationError):
            tc.create_lexicon("../evil", ["fever"], "m")


class TestRecommend:
    def test_duplicate_vector_tops_candidates(self):
        model = make_random_model(1, 4, seed=1)  # replaced below
        import numpy as np
        terms = ("a", "b", "c")
        vocab = tc.Vocabulary(terms, {t: i for i, t in enumerate(terms)},
                              (1, 1, 1), 1)
        vectors = np.array([[1.0, 2.0], [1.0, 2.0], [-1.0, 0.0]])
        model = tc.EmbeddingModel(
            vocab, vectors, tc.TrainingConfig(dimension=2, min_count=1)
        )
        lex = tc.create_lexicon("t", ["a"], "m")
        candidates = tc.recommend(lex, model, k=2)
        assert candidates[0].term == "b"

        rejected = tc.create_lexicon("t2", ["a"], "m")
        rejected.rejected.add("b")
        candidates = tc.recommend(rejected, model, k=2)
        assert all(c.term != "b" for c in candidates)

    def test_planted_twin_recommended(self, planted_model):
        a, b = PLANTED_TWINS
        lex = tc.create_lexicon("planted", [a], "planted-model")
        candidates = tc.recommend(lex, planted_model, k=5)
        assert b in [c.term for c in candidates]

    def test_no_vocabulary_overlap_is_oov(self, random_model):
        lex = tc.create_lexicon("x", ["nothere"], "m")
        with pytest.raises(OutOfVocabularyError):
            tc.recommend(lex, random_model)

    def test_bigram_terms_do_not_join_query(self, planted_model):
        a, b = PLANTED_TWINS
        lex = tc.create_lexicon("x", [a, "scarlet fever"], "m")
        tc.recommend(lex, planted_model, k=3)
        assert lex.pending.query_terms == (a,)

    def test_recommend_never_returns_decided_terms(self, planted_model):
        a, _ = PLANTED_TWINS
        lex = tc.create_lexicon("x", [a], "m")
        for _ in range(3):
            candidates = tc.recommend(lex, planted_model, k=10)
            offered = [c.term for c in candidates]
            assert not set(offered) & (lex.accepted | lex.rejected)
            tc.record_decisions(lex, offered[:2], offered[2:4])


class TestDecisions:
    def setup_lexicon(self, model):
        lex = tc.create_lexicon("w", [model.vocabulary.terms[0]], "m")
        candidates = tc.recommend(lex, model, k=10)
        return lex, [c.term for c in candidates]

    def test_partial_decisions_leave_rest_undecided(self, random_model):
        lex, offered = self.setup_lexicon(random_model)
        x, y, z = offered[0], offered[1], offered[2]
        tc.record_decisions(lex, [x], [y])
        assert x in lex.accepted
        assert y in lex.rejected
        assert z not in lex.accepted | lex.rejected
        later = tc.recommend(lex, random_model, k=len(random_model.vocabulary))
        assert z in [c.term for c in later]  # undecided stays eligible

    def test_unoffered_term_rejected(self, random_model):
        lex, _ = self.setup_lexicon(random_model)
        with pytest.raises(ValidationError, match="not offered"):
            tc.record_decisions(lex, ["never-offered"], [])

    def test_overlapping_decisions_rejected(self, random_model):
        lex, offered = self.setup_lexicon(random_model)
        with pytest.raises(ValidationError, match="both"):
            tc.record_decisions(lex, [offered[0]], [offered[0]])

    def test_no_open_round_rejected(self, random_model):
        lex = tc.create_lexicon("w", [random_model.vocabulary.terms[0]], "m")
        with pytest.raises(ValidationError, match="no open"):
            tc.record_decisions(lex, [], [])

    def test_two_rounds_accumulate(self, random_model):
        lex, offered = self.setup_lexicon(random_model)
        tc.record_decisions(lex, [offered[0]], [])
        candidates = tc.recommend(lex, random_model, k=10)
        second = candidates[0].term
        tc.record_decisions(lex, [second], [])
        assert len(lex.rounds) == 2
        assert {offered[0], second} <= lex.accepted

    def test_version_bumps_on_each_mutation(self, random_model):
        lex, offered = self.setup_lexicon(random_model)
        assert lex.version == 2  # create=1, recommend bumped
        tc.record_decisions(lex, [offered[0]], [])
        assert lex.version == 3


class TestReplay:
    def test_replay_reproduces_sets(self, random_model):
        lex = tc.create_lexicon("r", [random_model.vocabulary.terms[0]], "m")
        rng = random.Random(5)
        for _ in range(5):
            candidates = tc.recommend(lex, random_model, k=15)
            offered = [c.term for c in candidates]
            rng.shuffle(offered)
            n_accept = rng.randint(0, len(offered) // 2)
            n_reject = rng.randint(0, len(offered) - n_accept)
            tc.record_decisions(
                lex, offered[:n_accept], offered[n_accept:n_accept + n_reject]
            )
        accepted, rejected = tc.replay_rounds(lex.seeds, lex.rounds)
        assert accepted == lex.accepted
        assert rejected == lex.rejected

    def test_invariants_hold_under_fuzzing(self, random_model):
        rng = random.Random(99)
        terms = random_model.vocabulary.terms
        for _ in range(200):
            lex = tc.create_lexicon("f", [rng.choice(terms)], "m")
            for _ in range(rng.randint(1, 4)):
                candidates = tc.recommend(lex, random_model, k=rng.randint(1, 12))
                offered = [c.term for c in candidates]
                picked = rng.sample(offered, min(len(offered), rng.randint(0, 6)))
                cut = rng.randint(0, len(picked))
                tc.record_decisions(lex, picked[:cut], picked[cut:])
                assert not lex.accepted & lex.rejected
                assert set(lex.seeds) <= lex.accepted


class TestLexiconIO:
    def build_three_round_lexicon(self, model):
        lex = tc.create_lexicon("io", [model.vocabulary.terms[0]], "m")
        for i in range(3):
            candidates = tc.recommend(lex, model, k=8)
            offered = [c.term for c in candidates]
            tc.record_decisions(lex, offered[:1], offered[1:2])
        return lex

    def test_round_trip_field_by_field(self, tmp_path, random_model):
        lex = self.build_three_round_lexicon(random_model)
        path = tmp_path / "lex.json"
        tc.save_lexicon(lex, path)
        assert tc.load_lexicon(path) == lex

    def test_pending_round_survives_round_trip(self, tmp_path, random_model):
        lex = tc.create_lexicon("p", [random_model.vocabulary.terms[0]], "m")
        tc.recommend(lex, random_model, k=5)
        path = tmp_path / "lex.json"
        tc.save_lexicon(lex, path)
        assert tc.load_lexicon(path) == lex

    def test_overlap_fails_on_load(self, tmp_path, random_model):
        lex = self.build_three_round_lexicon(random_model)
        path = tmp_path / "lex.json"
        tc.save_lexicon(lex, path)
        payload = json.loads(path.read_text())
        payload["rejected"] = payload["accepted"][:1] + payload["rejected"]
        path.write_text(json.dumps(payload))
        with pytest.raises(ValidationError, match="overlap"):
            tc.load_lexicon(path)

    def test_ethnic_identity_seeds_preserved(self, tmp_path):
        lex = tc.create_lexicon(
            "ethnic_identity", SEED_FIXTURES["ethnic_identity"], "model-1"
        )
        path = tmp_path / "lex.json"
        tc.save_lexicon(lex, path)
        assert tc.load_lexicon(path).seeds == tuple(SEED_FIXTURES["ethnic_identity"])

    def test_garbage_rejected(self, tmp_path):
        path = tmp_path / "lex.json"
        path.write_text("{oops")
        with pytest.raises(ParseError):
            tc.load_lexicon(path)


class TestLexiconStore:
    def test_create_get_list(self, tmp_path):
        store = tc.LexiconStore(tmp_path)
        assert store.names() == []
        lex = tc.create_lexicon("disease", SEED_FIXTURES["disease"], "m")
        store.create(lex)
        assert store.names() == ["disease"]
        assert store.get("disease") == lex

    def test_duplicate_name_conflicts(self, tmp_path):
        store = tc.LexiconStore(tmp_path)
        store.create(tc.create_lexicon("dup", ["fever"], "m"))
        with pytest.raises(ConflictError):
            store.create(tc.create_lexicon("dup", ["plague"], "m"))

    def test_missing_name_not_found(self, tmp_path):
        with pytest.raises(NotFoundError):
            tc.LexiconStore(tmp_path).get("ghost")

    def test_stale_version_conflicts(self, tmp_path, random_model):
        store = tc.LexiconStore(tmp_path)
        lex = tc.create_lexicon("v", [random_model.vocabulary.terms[0]], "m")
        store.create(lex)
        store.update("v", 1, lambda l: tc.recommend(l, random_model, k=3))
        with pytest.raises(VersionConflictError) as exc:
            store.update("v", 1, lambda l: tc.recommend(l, random_model, k=3))
        assert exc.value.current_version == 2
