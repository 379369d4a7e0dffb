"""Inverted index over a corpus: keyword search with metadata filters,
per-document term counts (unigram and bigram), n-gram year series, and
snippet extraction for close reading.

The index is immutable once built and safe for unlimited concurrent readers.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .corpus import Corpus, Document, DocumentMeta
from .errors import ParseError, ValidationError

SNAPSHOT_FORMAT_VERSION = 1
SNIPPET_RADIUS = 40


class Posting(NamedTuple):
    doc_id: str
    count: int


class SearchHit(NamedTuple):
    doc_id: str
    score: float


class NgramPoint(NamedTuple):
    year: int
    count: int
    relative_frequency: float


@dataclass(frozen=True)
class NgramSeries:
    term: str
    points: tuple[NgramPoint, ...]


@dataclass(frozen=True)
class MetadataFilter:
    """Optional constraints on document metadata.

    Year bounds are inclusive; category matches exactly; author matches as a
    case-insensitive substring. A document without a year fails any year
    bound but passes when no year bound is set.
    """

    year_from: int | None = None
    year_to: int | None = None
    category: str | None = None
    author: str | None = None

    def matches(self, meta: DocumentMeta) -> bool:
        if self.year_from is not None and (meta.year is None or meta.year < self.year_from):
            return False
        if self.year_to is not None and (meta.year is None or meta.year > self.year_to):
            return False
        if self.category is not None and meta.category != self.category:
            return False
        if self.author is not None and self.author.lower() not in meta.author.lower():
            return False
        return True

    def is_empty(self) -> bool:
        return (self.year_from is None and self.year_to is None
                and self.category is None and self.author is None)


@dataclass(frozen=True)
class InvertedIndex:
    postings: dict[str, tuple[Posting, ...]]
    bigram_postings: dict[str, tuple[Posting, ...]]
    doc_lengths: dict[str, int]
    year_totals: dict[int, int]
    doc_meta: dict[str, DocumentMeta]


def build_index(corpus: Corpus) -> InvertedIndex:
    """Index every unigram and every adjacent token pair of the corpus."""
    postings: dict[str, list[Posting]] = {}
    bigram_postings: dict[str, list[Posting]] = {}
    doc_lengths: dict[str, int] = {}
    doc_meta: dict[str, DocumentMeta] = {}

    for doc_id in sorted(corpus.documents):
        doc = corpus.documents[doc_id]
        doc_lengths[doc_id] = doc.length
        doc_meta[doc_id] = doc.meta
        for term, count in sorted(Counter(doc.tokens).items()):
            postings.setdefault(term, []).append(Posting(doc_id, count))
        pairs = Counter(
            a + " " + b for a, b in zip(doc.tokens, doc.tokens[1:])
        )
        for term, count in sorted(pairs.items()):
            bigram_postings.setdefault(term, []).append(Posting(doc_id, count))

    return InvertedIndex(
        postings={t: tuple(p) for t, p in postings.items()},
        bigram_postings={t: tuple(p) for t, p in bigram_postings.items()},
        doc_lengths=dict(doc_lengths),
        year_totals=dict(corpus.total_tokens_by_year),
        doc_meta=doc_meta,
    )


def _postings_for(index: InvertedIndex, term: str) -> tuple[Posting, ...]:
    parts = term.split(" ")
    if len(parts) == 1:
        return index.postings.get(term, ())
    if len(parts) == 2:
        return index.bigram_postings.get(term, ())
    return ()


def term_count(index: InvertedIndex, term: str, doc_id: str) -> int:
    """Occurrences of a unigram or two-token phrase in one document;
    unknown term or document yields 0."""
    plist = _postings_for(index, term)
    i = bisect_left(plist, doc_id, key=lambda p: p.doc_id)
    if i < len(plist) and plist[i].doc_id == doc_id:
        return plist[i].count
    return 0


def keyword_search(
    index: InvertedIndex,
    query_tokens: list[str],
    filters: MetadataFilter | None = None,
    limit: int | None = None,
) -> list[SearchHit]:
    """Documents containing at least one query token and passing all filters,
    scored by the query tokens' total frequency relative to document length.

    Repeated query tokens count once. Descending score, ties by doc_id.
    """
    if not query_tokens:
        raise ValidationError("query is empty after tokenization")
    filters = filters or MetadataFilter()
    distinct: list[str] = []
    for token in query_tokens:
        if token not in distinct:
            distinct.append(token)

    totals: dict[str, int] = {}
    for token in distinct:
        for posting in index.postings.get(token, ()):
            totals[posting.doc_id] = totals.get(posting.doc_id, 0) + posting.count

    hits = [
        SearchHit(doc_id, total / index.doc_lengths[doc_id])
        for doc_id, total in totals.items()
        if filters.matches(index.doc_meta[doc_id])
    ]
    hits.sort(key=lambda h: (-h.score, h.doc_id))
    if limit is not None:
        hits = hits[:limit]
    return hits


def ngram_series(
    index: InvertedIndex,
    term: str,
    year_from: int,
    year_to: int,
) -> NgramSeries:
    """Per-year counts and relative frequencies of a unigram or bigram over
    the inclusive year range. Years with no corpus tokens are omitted; years
    where the term is absent get zero points."""
    if year_from > year_to:
        raise ValidationError(f"year range {year_from}..{year_to} is inverted")

    counts_by_year: dict[int, int] = {}
    for posting in _postings_for(index, term):
        year = index.doc_meta[posting.doc_id].year
        if year is not None:
            counts_by_year[year] = counts_by_year.get(year, 0) + posting.count

    points = []
    for year in sorted(index.year_totals):
        if year_from <= year <= year_to:
            count = counts_by_year.get(year, 0)
            points.append(NgramPoint(year, count, count / index.year_totals[year]))
    return NgramSeries(term=term, points=tuple(points))


def snippet(document: Document, query_tokens: list[str], radius: int = SNIPPET_RADIUS) -> str:
    """A window of tokens around the first query-token match, for result
    previews; falls back to the document opening when nothing matches."""
    wanted = set(query_tokens)
    position = next(
        (i for i, token in enumerate(document.tokens) if token in wanted), None
    )
    if position is None:
        return " ".join(document.tokens[:2 * radius + 1])
    lo = max(0, position - radius)
    hi = min(len(document.tokens), position + radius + 1)
    return " ".join(document.tokens[lo:hi])


# ---------------------------------------------------------------------------
# Snapshot: a single JSON file with a format-version field; round-trips the
# index exactly and deterministically (sorted keys, no floats).
# ---------------------------------------------------------------------------

def save_index(index: InvertedIndex, path: str | Path) -> None:
    payload = {
        "format_version": SNAPSHOT_FORMAT_VERSION,
        "postings": {t: [[p.doc_id, p.count] for p in ps]
                     for t, ps in index.postings.items()},
        "bigram_postings": {t: [[p.doc_id, p.count] for p in ps]
                            for t, ps in index.bigram_postings.items()},
        "doc_lengths": index.doc_lengths,
        "year_totals": {str(y): n for y, n in index.year_totals.items()},
        "doc_meta": {
            doc_id: {
                "title": m.title, "author": m.author,
                "year": m.year, "category": m.category,
            }
            for doc_id, m in index.doc_meta.items()
        },
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        + "\n",
        encoding="utf-8",
    )


def load_index(path: str | Path) -> InvertedIndex:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad index snapshot: {exc}", line=exc.lineno) from None
    if not isinstance(payload, dict):
        raise ParseError("index snapshot must be a JSON object")
    version = payload.get("format_version")
    if version != SNAPSHOT_FORMAT_VERSION:
        raise ParseError(
            f"unsupported snapshot format_version {version!r}; "
            f"expected {SNAPSHOT_FORMAT_VERSION}"
        )
    try:
        return InvertedIndex(
            postings={t: tuple(Posting(d, c) for d, c in ps)
                      for t, ps in payload["postings"].items()},
            bigram_postings={t: tuple(Posting(d, c) for d, c in ps)
                             for t, ps in payload["bigram_postings"].items()},
            doc_lengths=dict(payload["doc_lengths"]),
            year_totals={int(y): n for y, n in payload["year_totals"].items()},
            doc_meta={
                doc_id: DocumentMeta(
                    doc_id=doc_id, title=m["title"], author=m["author"],
                    year=m["year"], category=m["category"],
                )
                for doc_id, m in payload["doc_meta"].items()
            },
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad index snapshot structure: {exc!r}") from None
