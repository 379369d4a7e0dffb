"""Thematic lexicons grown from seed terms through iterative embedding
recommendations with explicit accept/reject decisions.

A lexicon keeps a full audit trail: every recommendation round records the
query terms used, the candidates offered, and the decisions taken, so the
final term set can be replayed and reviewed. Terms left undecided may be
offered again; only explicit rejection suppresses a term for good.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .corpus import tokenize
from .embedding import EmbeddingModel, SimilarityResult, most_similar
from .errors import OutOfVocabularyError, ParseError, ValidationError

DEFAULT_RECOMMEND_K = 20

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class ExpansionRound:
    """One completed recommend/decide iteration."""

    query_terms: tuple[str, ...]
    candidates: tuple[SimilarityResult, ...]
    accepted_now: tuple[str, ...]
    rejected_now: tuple[str, ...]
    timestamp: str


@dataclass(frozen=True)
class PendingRound:
    """Candidates offered but not yet decided on."""

    query_terms: tuple[str, ...]
    candidates: tuple[SimilarityResult, ...]
    opened_at: str


@dataclass
class Lexicon:
    name: str
    model_ref: str
    seeds: tuple[str, ...]
    accepted: set[str]
    rejected: set[str]
    rounds: list[ExpansionRound] = field(default_factory=list)
    pending: PendingRound | None = None
    version: int = 1

    def check_invariants(self) -> None:
        overlap = self.accepted & self.rejected
        if overlap:
            raise ValidationError(
                "accepted and rejected overlap: " + ", ".join(sorted(overlap))
            )
        missing_seeds = set(self.seeds) - self.accepted
        if missing_seeds:
            raise ValidationError(
                "seeds missing from accepted: " + ", ".join(sorted(missing_seeds))
            )


def normalize_term(raw: str) -> str:
    """Normalize a user-supplied term to one or two corpus tokens."""
    tokens = tokenize(raw)
    if not 1 <= len(tokens) <= 2:
        raise ValidationError(
            f"term {raw!r} must normalize to one or two tokens, got {len(tokens)}"
        )
    return " ".join(tokens)


def create_lexicon(name: str, seeds: list[str], model_ref: str) -> Lexicon:
    """Start a lexicon whose accepted set is exactly the (normalized) seeds."""
    if not _NAME_RE.match(name or ""):
        raise ValidationError(
            f"lexicon name {name!r} must be alphanumeric with - or _"
        )
    if not seeds:
        raise ValidationError("seeds must be non-empty")
    normalized: list[str] = []
    for seed in seeds:
        term = normalize_term(seed)
        if term not in normalized:
            normalized.append(term)
    return Lexicon(
        name=name,
        model_ref=model_ref,
        seeds=tuple(normalized),
        accepted=set(normalized),
        rejected=set(),
    )


def recommend(
    lexicon: Lexicon,
    model: EmbeddingModel,
    k: int = DEFAULT_RECOMMEND_K,
) -> list[SimilarityResult]:
    """Open a recommendation round: the k terms most similar to the mean of
    all in-vocabulary accepted unigrams, excluding everything already
    accepted or rejected. The candidates are remembered on the lexicon until
    decided on."""
    query_terms = sorted(
        term for term in lexicon.accepted
        if " " not in term and term in model
    )
    if not query_terms:
        raise OutOfVocabularyError(sorted(lexicon.accepted))
    candidates = most_similar(
        model, query_terms, k=k, exclude=lexicon.accepted | lexicon.rejected
    )
    lexicon.pending = PendingRound(
        query_terms=tuple(query_terms),
        candidates=tuple(candidates),
        opened_at=_now(),
    )
    lexicon.version += 1
    return candidates


def record_decisions(
    lexicon: Lexicon,
    accepted_now: list[str],
    rejected_now: list[str],
) -> Lexicon:
    """Apply decisions for the open round; undecided candidates stay
    eligible for future rounds."""
    if lexicon.pending is None:
        raise ValidationError("no open recommendation round to decide on")
    accept = list(dict.fromkeys(accepted_now))
    reject = list(dict.fromkeys(rejected_now))
    overlap = set(accept) & set(reject)
    if overlap:
        raise ValidationError(
            "terms both accepted and rejected: " + ", ".join(sorted(overlap))
        )
    offered = {c.term for c in lexicon.pending.candidates}
    unknown = [t for t in accept + reject if t not in offered]
    if unknown:
        raise ValidationError(
            "terms were not offered this round: " + ", ".join(sorted(unknown))
        )
    lexicon.rounds.append(ExpansionRound(
        query_terms=lexicon.pending.query_terms,
        candidates=lexicon.pending.candidates,
        accepted_now=tuple(accept),
        rejected_now=tuple(reject),
        timestamp=_now(),
    ))
    lexicon.accepted.update(accept)
    lexicon.rejected.update(reject)
    lexicon.pending = None
    lexicon.version += 1
    lexicon.check_invariants()
    return lexicon


def replay_rounds(
    seeds: tuple[str, ...], rounds: list[ExpansionRound]
) -> tuple[set[str], set[str]]:
    """Recompute the accepted/rejected sets implied by a round history."""
    accepted = set(seeds)
    rejected: set[str] = set()
    for rnd in rounds:
        accepted.update(rnd.accepted_now)
        rejected.update(rnd.rejected_now)
    return accepted, rejected


# ---------------------------------------------------------------------------
# JSON round trip. Schema documented in docs/formats.md.
# ---------------------------------------------------------------------------

def lexicon_to_dict(lexicon: Lexicon) -> dict:
    return {
        "format_version": 1,
        "name": lexicon.name,
        "model_ref": lexicon.model_ref,
        "seeds": list(lexicon.seeds),
        "accepted": sorted(lexicon.accepted),
        "rejected": sorted(lexicon.rejected),
        "rounds": [
            {
                "query_terms": list(r.query_terms),
                "candidates": [{"term": c.term, "score": c.score}
                               for c in r.candidates],
                "accepted_now": list(r.accepted_now),
                "rejected_now": list(r.rejected_now),
                "timestamp": r.timestamp,
            }
            for r in lexicon.rounds
        ],
        "pending": None if lexicon.pending is None else {
            "query_terms": list(lexicon.pending.query_terms),
            "candidates": [{"term": c.term, "score": c.score}
                           for c in lexicon.pending.candidates],
            "opened_at": lexicon.pending.opened_at,
        },
        "version": lexicon.version,
    }


def lexicon_from_dict(payload: dict) -> Lexicon:
    try:
        rounds = [
            ExpansionRound(
                query_terms=tuple(r["query_terms"]),
                candidates=tuple(SimilarityResult(c["term"], c["score"])
                                 for c in r["candidates"]),
                accepted_now=tuple(r["accepted_now"]),
                rejected_now=tuple(r["rejected_now"]),
                timestamp=r["timestamp"],
            )
            for r in payload["rounds"]
        ]
        raw_pending = payload.get("pending")
        pending = None if raw_pending is None else PendingRound(
            query_terms=tuple(raw_pending["query_terms"]),
            candidates=tuple(SimilarityResult(c["term"], c["score"])
                             for c in raw_pending["candidates"]),
            opened_at=raw_pending["opened_at"],
        )
        lexicon = Lexicon(
            name=payload["name"],
            model_ref=payload["model_ref"],
            seeds=tuple(payload["seeds"]),
            accepted=set(payload["accepted"]),
            rejected=set(payload["rejected"]),
            rounds=rounds,
            pending=pending,
            version=int(payload["version"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad lexicon structure: {exc!r}") from None
    lexicon.check_invariants()
    return lexicon


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(lexicon_to_dict(lexicon), indent=2, sort_keys=True,
                   ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def load_lexicon(path: str | Path) -> Lexicon:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad lexicon file: {exc}", line=exc.lineno) from None
    if not isinstance(payload, dict):
        raise ParseError("lexicon file must be a JSON object")
    return lexicon_from_dict(payload)
