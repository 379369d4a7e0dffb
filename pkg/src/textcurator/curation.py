"""Document ranking against a lexicon, saved sub-corpora with user
exclusions, and re-ingestable exports.

A document's score is the total occurrence count of the lexicon's accepted
terms divided by the document's token count: raw frequency relative to
length, no damping and no document-frequency weighting.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from .corpus import METADATA_HEADER, Corpus
from .errors import ValidationError
from .index import InvertedIndex, MetadataFilter, _postings_for
from .lexicon import Lexicon

DEFAULT_RANK_LIMIT = 100
MANIFEST_HEADER = ["doc_id", "rank", "score", "matched_term_count"]


@dataclass(frozen=True)
class RankedResult:
    doc_id: str
    score: float
    matched_terms: dict[str, int]


@dataclass(frozen=True)
class SubCorpus:
    """A saved ranking snapshot; later index rebuilds never mutate it."""

    name: str
    lexicon_name: str
    ranking: tuple[RankedResult, ...]
    excluded: frozenset[str] = frozenset()
    created_at: str = ""
    filters: MetadataFilter = MetadataFilter()
    version: int = 1

    def effective_members(self) -> list[tuple[int, RankedResult]]:
        """(original 1-based rank, result) pairs minus exclusions, in rank
        order."""
        return [
            (rank, result)
            for rank, result in enumerate(self.ranking, start=1)
            if result.doc_id not in self.excluded
        ]


def rank_by_lexicon(
    index: InvertedIndex,
    lexicon: Lexicon,
    filters: MetadataFilter | None = None,
    limit: int = DEFAULT_RANK_LIMIT,
) -> list[RankedResult]:
    """Rank filter-passing documents by accepted-term frequency relative to
    document length. Two-token terms count via adjacent-pair occurrences.
    Zero-score documents are omitted; ties break by ascending doc_id."""
    if not lexicon.accepted:
        raise ValidationError(f"lexicon {lexicon.name!r} has no accepted terms")
    if limit < 1:
        raise ValidationError(f"limit must be >= 1, got {limit}")
    filters = filters or MetadataFilter()

    matched: dict[str, dict[str, int]] = {}
    for term in sorted(lexicon.accepted):
        for posting in _postings_for(index, term):
            matched.setdefault(posting.doc_id, {})[term] = posting.count

    results = [
        RankedResult(
            doc_id=doc_id,
            score=sum(counts.values()) / index.doc_lengths[doc_id],
            matched_terms=counts,
        )
        for doc_id, counts in matched.items()
        if filters.matches(index.doc_meta[doc_id])
    ]
    results.sort(key=lambda r: (-r.score, r.doc_id))
    return results[:limit]


def save_subcorpus(
    name: str,
    lexicon_name: str,
    ranking: list[RankedResult],
    filters: MetadataFilter | None = None,
) -> SubCorpus:
    """Snapshot a ranking as a named sub-corpus (uniqueness of the name is
    enforced by the store that persists it)."""
    if not ranking:
        raise ValidationError("cannot save an empty ranking")
    return SubCorpus(
        name=name,
        lexicon_name=lexicon_name,
        ranking=tuple(ranking),
        excluded=frozenset(),
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        filters=filters or MetadataFilter(),
    )


def _require_member(subcorpus: SubCorpus, doc_id: str) -> None:
    if all(r.doc_id != doc_id for r in subcorpus.ranking):
        raise ValidationError(
            f"document {doc_id!r} is not in sub-corpus {subcorpus.name!r}"
        )


def exclude_document(subcorpus: SubCorpus, doc_id: str) -> SubCorpus:
    """Mark a ranked document as excluded; reversible via include_document."""
    _require_member(subcorpus, doc_id)
    if doc_id in subcorpus.excluded:
        return subcorpus
    return replace(
        subcorpus,
        excluded=subcorpus.excluded | {doc_id},
        version=subcorpus.version + 1,
    )


def include_document(subcorpus: SubCorpus, doc_id: str) -> SubCorpus:
    _require_member(subcorpus, doc_id)
    if doc_id not in subcorpus.excluded:
        return subcorpus
    return replace(
        subcorpus,
        excluded=subcorpus.excluded - {doc_id},
        version=subcorpus.version + 1,
    )


@dataclass(frozen=True)
class ManifestRow:
    doc_id: str
    rank: int
    score: float
    matched_term_count: int
    error: str | None = None


@dataclass(frozen=True)
class ExportManifest:
    subcorpus_name: str
    dest_dir: Path
    rows: tuple[ManifestRow, ...]

    @property
    def errors(self) -> list[ManifestRow]:
        return [row for row in self.rows if row.error is not None]


def export_subcorpus(
    subcorpus: SubCorpus,
    corpus: Corpus,
    dest_dir: str | Path,
) -> ExportManifest:
    """Write the sub-corpus's effective members as a re-ingestable corpus
    directory plus a manifest.csv of ranks and scores.

    Members whose source text is unavailable get their error recorded on the
    returned manifest (and keep their manifest.csv row) but are left out of
    metadata.csv and texts/ so the export stays cleanly re-ingestable.
    """
    dest_dir = Path(dest_dir)
    texts_dir = dest_dir / "texts"
    texts_dir.mkdir(parents=True, exist_ok=True)

    rows: list[ManifestRow] = []
    metadata_rows: list[list[str]] = []
    for rank, result in subcorpus.effective_members():
        doc = corpus.documents.get(result.doc_id)
        error = None
        if doc is None:
            error = "document not in corpus"
        elif doc.text is None:
            error = "source text unavailable"
        else:
            (texts_dir / f"{result.doc_id}.txt").write_text(doc.text, encoding="utf-8")
            meta = doc.meta
            metadata_rows.append([
                meta.doc_id, meta.title, meta.author,
                "" if meta.year is None else str(meta.year), meta.category,
            ])
        rows.append(ManifestRow(
            doc_id=result.doc_id,
            rank=rank,
            score=result.score,
            matched_term_count=len(result.matched_terms),
            error=error,
        ))

    with open(dest_dir / "metadata.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(METADATA_HEADER)
        writer.writerows(metadata_rows)

    with open(dest_dir / "manifest.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_HEADER)
        for row in rows:
            writer.writerow([
                row.doc_id, row.rank, f"{row.score:.6f}", row.matched_term_count,
            ])

    return ExportManifest(
        subcorpus_name=subcorpus.name, dest_dir=dest_dir, rows=tuple(rows)
    )


# ---------------------------------------------------------------------------
# JSON round trip for persistence by the sub-corpus store.
# ---------------------------------------------------------------------------

def subcorpus_to_dict(subcorpus: SubCorpus) -> dict:
    return {
        "format_version": 1,
        "name": subcorpus.name,
        "lexicon_name": subcorpus.lexicon_name,
        "ranking": [
            {"doc_id": r.doc_id, "score": r.score, "matched_terms": r.matched_terms}
            for r in subcorpus.ranking
        ],
        "excluded": sorted(subcorpus.excluded),
        "created_at": subcorpus.created_at,
        "filters": {
            "year_from": subcorpus.filters.year_from,
            "year_to": subcorpus.filters.year_to,
            "category": subcorpus.filters.category,
            "author": subcorpus.filters.author,
        },
        "version": subcorpus.version,
    }


def subcorpus_from_dict(payload: dict) -> SubCorpus:
    from .errors import ParseError

    try:
        filters = payload["filters"]
        return SubCorpus(
            name=payload["name"],
            lexicon_name=payload["lexicon_name"],
            ranking=tuple(
                RankedResult(
                    doc_id=r["doc_id"],
                    score=float(r["score"]),
                    matched_terms={t: int(c) for t, c in r["matched_terms"].items()},
                )
                for r in payload["ranking"]
            ),
            excluded=frozenset(payload["excluded"]),
            created_at=payload["created_at"],
            filters=MetadataFilter(
                year_from=filters["year_from"],
                year_to=filters["year_to"],
                category=filters["category"],
                author=filters["author"],
            ),
            version=int(payload["version"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad sub-corpus structure: {exc!r}") from None
