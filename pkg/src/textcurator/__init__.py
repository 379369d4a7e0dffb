"""Corpus curation engine: train word embeddings on a text corpus, grow
thematic lexicons from embedding recommendations with a human deciding every
round, rank and curate sub-corpora, and search or chart the corpus alongside.
"""

from .corpus import (
    Corpus,
    Document,
    DocumentMeta,
    ingest_corpus,
    mini_corpus_dir,
    tokenize,
)
from .curation import (
    RankedResult,
    SubCorpus,
    exclude_document,
    export_subcorpus,
    include_document,
    rank_by_lexicon,
    save_subcorpus,
)
from .embedding import (
    EmbeddingModel,
    SimilarityResult,
    TrainingConfig,
    Vocabulary,
    build_vocabulary,
    cosine_similarity,
    load_model,
    most_similar,
    save_model,
    train_cbow,
)
from .index import (
    InvertedIndex,
    MetadataFilter,
    NgramSeries,
    build_index,
    keyword_search,
    load_index,
    ngram_series,
    save_index,
    snippet,
    term_count,
)
from .lexicon import (
    Lexicon,
    create_lexicon,
    load_lexicon,
    recommend,
    record_decisions,
    replay_rounds,
    save_lexicon,
)
from .store import LexiconStore, SubCorpusStore

__version__ = "0.1.0"
