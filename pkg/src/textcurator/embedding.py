"""Word embeddings: vocabulary, CBOW training with negative sampling, and
top-k cosine similarity queries.

Training is single-threaded and fully deterministic for a fixed (corpus,
config, seed) triple; the saved model file records the full configuration so
anyone can see exactly which parameters produced the vectors.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .corpus import Corpus
from .errors import (
    EmptyVocabularyError,
    EngineError,
    OutOfVocabularyError,
    ParseError,
    ValidationError,
)

NOISE_POWER = 0.75           # unigram distribution exponent for negative sampling
FINAL_LR_DIVISOR = 10_000.0  # learning rate decays linearly to initial/10^4


@dataclass(frozen=True)
class Vocabulary:
    """Dense-id vocabulary over all tokens meeting the frequency threshold."""

    terms: tuple[str, ...]
    term_to_id: dict[str, int]
    counts: tuple[int, ...]
    min_count: int

    def __contains__(self, term: str) -> bool:
        return term in self.term_to_id

    def __len__(self) -> int:
        return len(self.terms)


def build_vocabulary(corpus: Corpus, min_count: int) -> Vocabulary:
    """Count every token in the corpus and keep those occurring at least
    min_count times, ordered by descending frequency then term."""
    if min_count < 1:
        raise ValidationError(f"min_count must be >= 1, got {min_count}")
    if not corpus.documents:
        raise ValidationError("corpus has no documents")
    counter: Counter[str] = Counter()
    for doc in corpus.documents.values():
        counter.update(doc.tokens)
    kept = [(term, n) for term, n in counter.items() if n >= min_count]
    if not kept:
        raise EmptyVocabularyError(
            f"no token occurs at least {min_count} times in the corpus"
        )
    kept.sort(key=lambda pair: (-pair[1], pair[0]))
    terms = tuple(term for term, _ in kept)
    return Vocabulary(
        terms=terms,
        term_to_id={term: i for i, term in enumerate(terms)},
        counts=tuple(n for _, n in kept),
        min_count=min_count,
    )


@dataclass(frozen=True)
class TrainingConfig:
    """All knobs that shape training, persisted alongside the vectors."""

    dimension: int = 100
    window: int = 5
    min_count: int = 5
    negative_samples: int = 5
    epochs: int = 5
    initial_learning_rate: float = 0.025
    seed: int = 1
    subsample: float = 0.0  # frequent-word subsampling threshold; 0 disables

    def __post_init__(self):
        if self.dimension < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dimension}")
        if self.window < 1:
            raise ValidationError(f"window must be >= 1, got {self.window}")
        if self.min_count < 1:
            raise ValidationError(f"min_count must be >= 1, got {self.min_count}")
        if self.negative_samples < 0:
            raise ValidationError("negative_samples must be >= 0")
        if self.epochs < 1:
            raise ValidationError(f"epochs must be >= 1, got {self.epochs}")
        if self.initial_learning_rate <= 0:
            raise ValidationError("initial_learning_rate must be > 0")
        if self.subsample < 0:
            raise ValidationError("subsample must be >= 0")


class SimilarityResult(NamedTuple):
    term: str
    score: float


class EmbeddingModel:
    """A trained vocabulary-to-vector mapping supporting similarity queries.

    Immutable after construction; safe for concurrent readers.
    """

    def __init__(self, vocabulary: Vocabulary, vectors: np.ndarray,
                 config: TrainingConfig):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.shape != (len(vocabulary), config.dimension):
            raise ValidationError(
                f"vector matrix shape {vectors.shape} does not match "
                f"{len(vocabulary)} terms x {config.dimension} dimensions"
            )
        if not np.isfinite(vectors).all():
            raise ValidationError("vectors contain non-finite components")
        self.vocabulary = vocabulary
        self.vectors = vectors
        self.config = config
        # Norms via per-row dots: keeps similarity scores bit-identical to a
        # scalar rescan (BLAS matrix reductions round differently).
        self._norms = np.array(
            [math.sqrt(np.dot(row, row)) for row in vectors], dtype=np.float64
        )

    def __contains__(self, term: str) -> bool:
        return term in self.vocabulary

    def vector(self, term: str) -> np.ndarray:
        try:
            return self.vectors[self.vocabulary.term_to_id[term]]
        except KeyError:
            raise OutOfVocabularyError([term]) from None


def cosine_similarity(u, v) -> float:
    """Cosine of the angle between two equal-dimension, non-zero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape:
        raise ValidationError(
            f"vectors must share one dimension, got shapes {u.shape} and {v.shape}"
        )
    norm_u = math.sqrt(np.dot(u, u))
    norm_v = math.sqrt(np.dot(v, v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise ValidationError("cosine similarity is undefined for zero-norm vectors")
    return float(np.dot(u, v)) / (norm_u * norm_v)


def most_similar(
    model: EmbeddingModel,
    query_terms: list[str],
    k: int = 20,
    exclude: Iterable[str] = (),
) -> list[SimilarityResult]:
    """The k vocabulary terms most cosine-similar to the mean vector of the
    in-vocabulary query terms.

    Query terms and the exclude set never appear in the result; ties break by
    ascending term. Vocabulary entries with a zero-norm vector are skipped.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if not query_terms:
        raise ValidationError("query_terms is empty")
    ids = [model.vocabulary.term_to_id[t] for t in query_terms if t in model.vocabulary]
    if not ids:
        raise OutOfVocabularyError([t for t in query_terms if t not in model.vocabulary])
    query = model.vectors[ids].mean(axis=0)
    query_norm = math.sqrt(np.dot(query, query))
    if query_norm == 0.0:
        raise ValidationError("query terms average to a zero vector")

    skip = set(query_terms) | set(exclude)
    scored: list[tuple[float, str]] = []
    for i, term in enumerate(model.vocabulary.terms):
        if term in skip or model._norms[i] == 0.0:
            continue
        score = float(np.dot(model.vectors[i], query)) / (float(model._norms[i]) * query_norm)
        scored.append((score, term))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [SimilarityResult(term, score) for score, term in scored[:k]]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def train_cbow(corpus: Corpus, config: TrainingConfig) -> EmbeddingModel:
    """Train CBOW vectors with negative sampling.

    For every token position whose word is in the vocabulary, the mean of the
    in-vocabulary context vectors (config.window positions each side) is
    pushed to score the center word above noise words drawn from the unigram
    distribution raised to the 3/4 power. The learning rate decays linearly
    from the configured initial value to initial/10^4 over all epochs.
    Deterministic for fixed corpus, config, and seed.
    """
    vocab = build_vocabulary(corpus, config.min_count)
    n, dim = len(vocab), config.dimension
    rng = np.random.default_rng(config.seed)
    syn0 = (rng.random((n, dim)) - 0.5) / dim
    syn1 = np.zeros((n, dim))

    counts = np.asarray(vocab.counts, dtype=np.float64)
    noise_cdf = np.cumsum(counts ** NOISE_POWER)
    noise_total = float(noise_cdf[-1])

    if config.subsample > 0:
        threshold = config.subsample * float(counts.sum())
        keep_prob = np.minimum(
            1.0, (np.sqrt(counts / threshold) + 1.0) * threshold / counts
        )
    else:
        keep_prob = None

    encoded = []
    for doc_id in sorted(corpus.documents):
        tokens = corpus.documents[doc_id].tokens
        if tokens:
            encoded.append(np.array(
                [vocab.term_to_id.get(t, -1) for t in tokens], dtype=np.int64
            ))

    window = config.window
    total_centers = 0
    for ids in encoded:
        in_vocab = ids >= 0
        prefix = np.concatenate(([0], np.cumsum(in_vocab)))
        for p in np.nonzero(in_vocab)[0]:
            lo, hi = max(0, p - window), min(len(ids), p + window + 1)
            if prefix[hi] - prefix[lo] - 1 > 0:
                total_centers += 1

    lr_start = config.initial_learning_rate
    lr_end = lr_start / FINAL_LR_DIVISOR
    total_updates = config.epochs * total_centers
    negatives = config.negative_samples if n > 1 else 0
    labels = np.zeros(negatives + 1)
    labels[0] = 1.0

    done = 0
    for _ in range(config.epochs):
        for ids in encoded:
            if keep_prob is None:
                effective = ids
            else:
                effective = ids.copy()
                in_vocab = effective >= 0
                drops = rng.random(len(effective))
                effective[in_vocab & (drops >= keep_prob[np.maximum(effective, 0)])] = -1
            for p in range(len(effective)):
                center = effective[p]
                if center < 0:
                    continue
                lo, hi = max(0, p - window), min(len(effective), p + window + 1)
                left = effective[lo:p]
                right = effective[p + 1:hi]
                ctx = np.concatenate((left[left >= 0], right[right >= 0]))
                if len(ctx) == 0:
                    continue
                if total_updates > 1:
                    alpha = lr_start + (lr_end - lr_start) * (done / (total_updates - 1))
                else:
                    alpha = lr_start
                done += 1

                neg = np.searchsorted(
                    noise_cdf, rng.random(negatives) * noise_total, side="right"
                )
                while True:
                    collisions = neg == center
                    hits = int(collisions.sum())
                    if hits == 0:
                        break
                    neg[collisions] = np.searchsorted(
                        noise_cdf, rng.random(hits) * noise_total, side="right"
                    )

                targets = np.concatenate(([center], neg))
                hidden = syn0[ctx].mean(axis=0)
                out = syn1[targets]
                grad = (labels - _sigmoid(out @ hidden)) * alpha
                error = grad @ out
                np.add.at(syn1, targets, grad[:, None] * hidden[None, :])
                np.add.at(syn0, ctx, error)
        if not np.isfinite(syn0).all() or not np.isfinite(syn1).all():
            raise EngineError("training diverged: non-finite vector components")

    return EmbeddingModel(vocab, syn0, config)


# ---------------------------------------------------------------------------
# Model file round trip. Text format: header "<vocab_size> <dimension>", one
# "<term> <v1> ... <vd>" line per term (shortest round-trip float formatting),
# then "# key=value" lines for the config and per-term corpus counts.
# ---------------------------------------------------------------------------

_CONFIG_KEYS = [f.name for f in fields(TrainingConfig)]


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    path = Path(path)
    lines = [f"{len(model.vocabulary)} {model.config.dimension}"]
    for term, row in zip(model.vocabulary.terms, model.vectors):
        lines.append(term + " " + " ".join(repr(float(x)) for x in row))
    for key in _CONFIG_KEYS:
        lines.append(f"# {key}={getattr(model.config, key)!r}")
    lines.append(f"# vocab_min_count={model.vocabulary.min_count!r}")
    for term, count in zip(model.vocabulary.terms, model.vocabulary.counts):
        lines.append(f"# count.{term}={count}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> EmbeddingModel:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise ParseError("header must be '<vocab_size> <dimension>'", line=1)
        try:
            n, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad header {header.strip()!r}", line=1) from None
        if n < 1 or dim < 1:
            raise ParseError(f"bad header sizes {n} x {dim}", line=1)

        terms: list[str] = []
        vectors = np.empty((n, dim))
        for row in range(n):
            line = fh.readline()
            if not line:
                raise ParseError(f"missing term row {row + 1} of {n}", line=row + 2)
            parts = line.split()
            if len(parts) != dim + 1:
                raise ParseError(
                    f"term row {row + 1}: expected {dim} components, "
                    f"got {len(parts) - 1}",
                    line=row + 2,
                )
            terms.append(parts[0])
            try:
                vectors[row] = [float(x) for x in parts[1:]]
            except ValueError:
                raise ParseError(f"term row {row + 1}: bad float", line=row + 2) from None
        if not np.isfinite(vectors).all():
            raise ParseError("vector components must be finite")

        raw_config: dict[str, str] = {}
        raw_counts: dict[str, str] = {}
        for offset, line in enumerate(fh):
            lineno = n + 2 + offset
            if not line.strip():
                continue
            if not line.startswith("#"):
                raise ParseError("unexpected content after vector rows", line=lineno)
            body = line[1:].strip()
            if "=" not in body:
                raise ParseError(f"bad comment entry {body!r}", line=lineno)
            key, value = body.split("=", 1)
            key = key.strip()
            if key.startswith("count."):
                raw_counts[key[len("count."):]] = value.strip()
            else:
                raw_config[key] = value.strip()

    seen: set[str] = set()
    for term in terms:
        if term in seen:
            raise ParseError(f"duplicate term {term!r}")
        seen.add(term)

    kwargs: dict = {"dimension": dim}
    casts = {
        "dimension": int, "window": int, "min_count": int,
        "negative_samples": int, "epochs": int, "seed": int,
        "initial_learning_rate": float, "subsample": float,
    }
    for key, value in raw_config.items():
        if key in casts:
            try:
                kwargs[key] = casts[key](value)
            except ValueError:
                raise ParseError(f"bad config value {key}={value!r}") from None
    try:
        config = TrainingConfig(**kwargs)
    except ValidationError as exc:
        raise ParseError(f"bad config: {exc}") from None
    if config.dimension != dim:
        raise ParseError(
            f"config dimension {config.dimension} does not match header {dim}"
        )

    try:
        counts = tuple(int(raw_counts.get(term, 0)) for term in terms)
    except ValueError:
        raise ParseError("bad count entry") from None
    try:
        min_count = int(raw_config.get("vocab_min_count", config.min_count))
    except ValueError:
        raise ParseError("bad vocab_min_count entry") from None

    vocab = Vocabulary(
        terms=tuple(terms),
        term_to_id={t: i for i, t in enumerate(terms)},
        counts=counts,
        min_count=min_count,
    )
    return EmbeddingModel(vocab, vectors, config)
