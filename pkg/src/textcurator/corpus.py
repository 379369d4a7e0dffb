"""Corpus ingestion: tokenization, metadata validation, document loading.

A corpus directory holds ``metadata.csv`` (header exactly
``doc_id,title,author,year,category``) and a ``texts/`` directory of UTF-8
plain-text files named ``<doc_id>.txt``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from itertools import groupby
from pathlib import Path

from .errors import IngestError

METADATA_HEADER = ["doc_id", "title", "author", "year", "category"]
YEAR_MIN = 1000
YEAR_MAX = 2100

# Exposed verbatim through the config/transparency endpoint.
TOKENIZER_RULES = (
    "lowercase the input using Unicode case mapping",
    "split on any character that is not a letter, digit, apostrophe, or hyphen",
    "strip leading and trailing apostrophes and hyphens from each piece",
    "drop pieces that become empty; purely numeric tokens are kept",
)


def _is_token_char(ch: str) -> bool:
    return ch == "'" or ch == "-" or ch.isalpha() or ch.isdigit()


def tokenize(raw_text: str) -> list[str]:
    """Split text into normalized tokens.

    Deterministic and order-preserving; see TOKENIZER_RULES for the exact
    rules. Empty input yields an empty list.
    """
    tokens = []
    for keep, run in groupby(raw_text.lower(), key=_is_token_char):
        if not keep:
            continue
        token = "".join(run).strip("'-")
        if token:
            tokens.append(token)
    return tokens


@dataclass(frozen=True)
class DocumentMeta:
    """Metadata row for one corpus text. ``year`` is None when unknown."""

    doc_id: str
    title: str
    author: str
    year: int | None
    category: str


@dataclass(frozen=True)
class Document:
    meta: DocumentMeta
    tokens: tuple[str, ...]
    text: str | None = None

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class IngestIssue:
    """A non-fatal problem encountered while ingesting one metadata row."""

    kind: str  # "missing_text" or "bad_row"
    line: int
    doc_id: str | None
    message: str


@dataclass(frozen=True)
class Corpus:
    documents: dict[str, Document]
    total_tokens_by_year: dict[int, int]
    issues: tuple[IngestIssue, ...] = ()

    @classmethod
    def from_documents(cls, documents: list[Document]) -> "Corpus":
        """Build a corpus (and its per-year token totals) from documents."""
        by_id: dict[str, Document] = {}
        for doc in documents:
            if doc.meta.doc_id in by_id:
                raise IngestError(f"duplicate doc_id {doc.meta.doc_id!r}")
            by_id[doc.meta.doc_id] = doc
        totals: dict[int, int] = {}
        for doc in by_id.values():
            if doc.meta.year is not None:
                totals[doc.meta.year] = totals.get(doc.meta.year, 0) + doc.length
        return cls(documents=by_id, total_tokens_by_year=totals)

    def __len__(self) -> int:
        return len(self.documents)


def _parse_year(raw: str) -> int | None:
    raw = raw.strip()
    if not raw:
        return None
    year = int(raw)  # ValueError propagates to the row handler
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise ValueError(f"year {year} outside {YEAR_MIN}..{YEAR_MAX}")
    return year


def ingest_corpus(corpus_dir: str | Path) -> Corpus:
    """Load a corpus directory into tokenized documents.

    Malformed rows and rows whose text file is missing are skipped and
    reported on the returned corpus's ``issues``; a missing metadata.csv or
    a duplicate doc_id aborts the ingest.
    """
    corpus_dir = Path(corpus_dir)
    metadata_path = corpus_dir / "metadata.csv"
    if not metadata_path.is_file():
        raise IngestError(f"no metadata.csv in {corpus_dir}")

    documents: list[Document] = []
    seen: set[str] = set()
    issues: list[IngestIssue] = []

    with open(metadata_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{metadata_path} is empty") from None
        if header != METADATA_HEADER:
            raise IngestError(
                f"bad metadata header {header!r}; expected {METADATA_HEADER!r}"
            )
        for row in reader:
            line = reader.line_num
            if len(row) != len(METADATA_HEADER):
                issues.append(IngestIssue(
                    "bad_row", line, None,
                    f"expected {len(METADATA_HEADER)} fields, got {len(row)}",
                ))
                continue
            doc_id, title, author, raw_year, category = row
            if not doc_id:
                issues.append(IngestIssue("bad_row", line, None, "empty doc_id"))
                continue
            if doc_id in seen:
                raise IngestError(f"duplicate doc_id {doc_id!r} at line {line}")
            seen.add(doc_id)
            try:
                year = _parse_year(raw_year)
            except ValueError as exc:
                issues.append(IngestIssue("bad_row", line, doc_id, str(exc)))
                continue
            text_path = corpus_dir / "texts" / f"{doc_id}.txt"
            if not text_path.is_file():
                issues.append(IngestIssue(
                    "missing_text", line, doc_id, f"no text file {text_path.name}",
                ))
                continue
            text = text_path.read_text(encoding="utf-8")
            documents.append(Document(
                meta=DocumentMeta(doc_id, title, author, year, category),
                tokens=tuple(tokenize(text)),
                text=text,
            ))

    corpus = Corpus.from_documents(documents)
    return Corpus(
        documents=corpus.documents,
        total_tokens_by_year=corpus.total_tokens_by_year,
        issues=tuple(issues),
    )


def mini_corpus_dir() -> Path:
    """Path of the bundled 12-document demonstration corpus."""
    return Path(str(resources.files("textcurator") / "data" / "mini_corpus"))
