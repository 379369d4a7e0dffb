"""Command-line interface running the whole pipeline headlessly.

All subcommands drive the same engine operations as the HTTP service.
Output records are tab-separated, one per line. Errors go to stderr as a
single machine-parseable ``CODE: message`` line; exit codes are 0 (success),
1 (validation), 2 (I/O).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import curation as curation_mod
from . import embedding as embedding_mod
from . import index as index_mod
from . import lexicon as lexicon_mod
from .errors import EngineError
from .index import MetadataFilter
from .store import LexiconStore, SubCorpusStore

_IO_CODES = {"INGEST", "PARSE", "IO"}


def _echo_rows(rows) -> None:
    for row in rows:
        click.echo("\t".join(str(col) for col in row))


def _split_terms(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def _filters(year_from, year_to, category, author) -> MetadataFilter:
    return MetadataFilter(year_from=year_from, year_to=year_to,
                          category=category, author=author)


@click.group()
def cli():
    """Corpus curation engine."""


@cli.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
def ingest(corpus_dir):
    """Ingest a corpus directory and report document/token counts."""
    corpus = corpus_mod.ingest_corpus(corpus_dir)
    for issue in corpus.issues:
        click.echo(
            f"skip\t{issue.doc_id or '-'}\tline {issue.line}: {issue.message}",
            err=True,
        )
    total_tokens = sum(d.length for d in corpus.documents.values())
    _echo_rows([("ingested", len(corpus), total_tokens)])


@cli.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--output", "output", required=True, type=click.Path())
@click.option("--dim", default=100, show_default=True)
@click.option("--window", default=5, show_default=True)
@click.option("--min-count", default=5, show_default=True)
@click.option("--negative", default=5, show_default=True)
@click.option("--epochs", default=5, show_default=True)
@click.option("--lr", default=0.025, show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--subsample", default=0.0, show_default=True)
def train(corpus_dir, output, dim, window, min_count, negative, epochs, lr,
          seed, subsample):
    """Train CBOW embeddings on a corpus and write the model file."""
    config = embedding_mod.TrainingConfig(
        dimension=dim, window=window, min_count=min_count,
        negative_samples=negative, epochs=epochs, initial_learning_rate=lr,
        seed=seed, subsample=subsample,
    )
    corpus = corpus_mod.ingest_corpus(corpus_dir)
    model = embedding_mod.train_cbow(corpus, config)
    embedding_mod.save_model(model, output)
    _echo_rows([("model", output, len(model.vocabulary), config.dimension)])


@cli.command(name="index")
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--output", "output", required=True, type=click.Path())
def index_cmd(corpus_dir, output):
    """Build the inverted index and write a snapshot file."""
    corpus = corpus_mod.ingest_corpus(corpus_dir)
    index = index_mod.build_index(corpus)
    index_mod.save_index(index, output)
    _echo_rows([("index", output, len(index.postings), len(index.doc_lengths))])


@cli.command()
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("terms", nargs=-1, required=True)
@click.option("-k", default=20, show_default=True)
def similar(model_path, terms, k):
    """Print the k terms most similar to TERMS, one 'term<TAB>score' line
    each."""
    model = embedding_mod.load_model(model_path)
    results = embedding_mod.most_similar(model, list(terms), k=k)
    _echo_rows((r.term, f"{r.score:.6f}") for r in results)


@cli.group()
def lexicon():
    """Create and grow thematic lexicons."""


@lexicon.command(name="create")
@click.argument("name")
@click.option("--seeds", required=True, help="Comma-separated seed terms.")
@click.option("--model-ref", default="", help="Identifier of the model used.")
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def lexicon_create(name, seeds, model_ref, state_dir):
    lex = lexicon_mod.create_lexicon(name, _split_terms(seeds), model_ref)
    LexiconStore(state_dir).create(lex)
    _echo_rows([("lexicon", name, len(lex.accepted))])


@lexicon.command(name="recommend")
@click.argument("name")
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-k", default=20, show_default=True)
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def lexicon_recommend(name, model_path, k, state_dir):
    """Open a recommendation round and print the candidates."""
    model = embedding_mod.load_model(model_path)
    holder = {}

    def mutate(lex):
        holder["candidates"] = lexicon_mod.recommend(lex, model, k=k)

    LexiconStore(state_dir).update(name, None, mutate)
    _echo_rows((c.term, f"{c.score:.6f}") for c in holder["candidates"])


@lexicon.command(name="decide")
@click.argument("name")
@click.option("--accept", default="", help="Comma-separated terms to accept.")
@click.option("--reject", default="", help="Comma-separated terms to reject.")
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def lexicon_decide(name, accept, reject, state_dir):
    """Record decisions for the open round."""
    updated = LexiconStore(state_dir).update(
        name, None,
        lambda lex: lexicon_mod.record_decisions(
            lex, _split_terms(accept), _split_terms(reject)
        ),
    )
    _echo_rows([("decided", name, len(updated.accepted), len(updated.rejected))])


@lexicon.command(name="show")
@click.argument("name")
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def lexicon_show(name, state_dir):
    lex = LexiconStore(state_dir).get(name)
    rows = [
        ("name", lex.name),
        ("model_ref", lex.model_ref or "-"),
        ("version", lex.version),
        ("seeds", ",".join(lex.seeds)),
        ("accepted", ",".join(sorted(lex.accepted))),
        ("rejected", ",".join(sorted(lex.rejected)) or "-"),
    ]
    for i, rnd in enumerate(lex.rounds, start=1):
        rows.append((
            f"round{i}",
            f"offered={len(rnd.candidates)}",
            f"accepted={','.join(rnd.accepted_now) or '-'}",
            f"rejected={','.join(rnd.rejected_now) or '-'}",
        ))
    _echo_rows(rows)


@cli.command()
@click.argument("lexicon_name")
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--year-from", type=int, default=None)
@click.option("--year-to", type=int, default=None)
@click.option("--category", default=None)
@click.option("--author", default=None)
@click.option("--limit", default=10, show_default=True)
@click.option("--save", "save_as", default=None,
              help="Also save the ranking as a named sub-corpus.")
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def rank(lexicon_name, corpus_dir, year_from, year_to, category, author,
         limit, save_as, state_dir):
    """Rank corpus documents against a lexicon's accepted terms."""
    lex = LexiconStore(state_dir).get(lexicon_name)
    corpus = corpus_mod.ingest_corpus(corpus_dir)
    index = index_mod.build_index(corpus)
    filters = _filters(year_from, year_to, category, author)
    results = curation_mod.rank_by_lexicon(index, lex, filters, limit=limit)
    if save_as is not None:
        sub = curation_mod.save_subcorpus(save_as, lexicon_name, results, filters)
        SubCorpusStore(state_dir).create(sub)
    _echo_rows(
        (rank_no, r.doc_id, f"{r.score:.6f}",
         index.doc_meta[r.doc_id].title, index.doc_meta[r.doc_id].author,
         index.doc_meta[r.doc_id].year if index.doc_meta[r.doc_id].year is not None else "-")
        for rank_no, r in enumerate(results, start=1)
    )


@cli.command()
@click.argument("term")
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--from", "year_from", type=int, default=1000)
@click.option("--to", "year_to", type=int, default=2100)
def ngram(term, corpus_dir, year_from, year_to):
    """Print the per-year frequency series of a unigram or bigram."""
    corpus = corpus_mod.ingest_corpus(corpus_dir)
    index = index_mod.build_index(corpus)
    series = index_mod.ngram_series(index, term.strip().lower(), year_from, year_to)
    _echo_rows(
        (p.year, p.count, repr(p.relative_frequency)) for p in series.points
    )


@cli.group()
def subcorpus():
    """Inspect and amend saved sub-corpora."""


@subcorpus.command(name="show")
@click.argument("name")
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def subcorpus_show(name, state_dir):
    sub = SubCorpusStore(state_dir).get(name)
    rows = [
        ("name", sub.name),
        ("lexicon", sub.lexicon_name),
        ("version", sub.version),
        ("excluded", ",".join(sorted(sub.excluded)) or "-"),
    ]
    rows.extend(
        (rank_no, r.doc_id, f"{r.score:.6f}")
        for rank_no, r in sub.effective_members()
    )
    _echo_rows(rows)


@subcorpus.command(name="exclude")
@click.argument("name")
@click.argument("doc_id")
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def subcorpus_exclude(name, doc_id, state_dir):
    updated = SubCorpusStore(state_dir).update(
        name, None, lambda sub: curation_mod.exclude_document(sub, doc_id)
    )
    _echo_rows([("excluded", name, doc_id, len(updated.effective_members()))])


@subcorpus.command(name="include")
@click.argument("name")
@click.argument("doc_id")
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def subcorpus_include(name, doc_id, state_dir):
    updated = SubCorpusStore(state_dir).update(
        name, None, lambda sub: curation_mod.include_document(sub, doc_id)
    )
    _echo_rows([("included", name, doc_id, len(updated.effective_members()))])


@cli.command()
@click.argument("subcorpus_name")
@click.argument("dest", type=click.Path())
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
def export(subcorpus_name, dest, corpus_dir, state_dir):
    """Export a sub-corpus as a re-ingestable directory with a manifest."""
    sub = SubCorpusStore(state_dir).get(subcorpus_name)
    corpus = corpus_mod.ingest_corpus(corpus_dir)
    manifest = curation_mod.export_subcorpus(sub, corpus, dest)
    for row in manifest.errors:
        click.echo(f"export-error\t{row.doc_id}\t{row.error}", err=True)
    ok = len(manifest.rows) - len(manifest.errors)
    _echo_rows([("exported", dest, ok, len(manifest.errors))])


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--state-dir", default="state", show_default=True, type=click.Path())
@click.option("--train/--no-train", "train_if_missing", default=False,
              help="Train and save the model when the file is missing.")
@click.option("--seed", default=1, show_default=True,
              help="Training seed used with --train.")
@click.option("--ui", "ui_dir", default=None, type=click.Path(file_okay=False),
              help="Directory of static UI files to serve at /.")
@click.option("--admin/--no-admin", "enable_admin", default=False,
              help="Enable POST /api/admin/reload (re-ingest and reload).")
def serve(host, port, corpus_dir, model_path, state_dir, train_if_missing,
          seed, ui_dir, enable_admin):
    """Run the HTTP service."""
    from .service import ServiceConfig
    from .service import serve as run_service

    run_service(ServiceConfig(
        corpus_dir=Path(corpus_dir),
        model_path=Path(model_path),
        state_dir=Path(state_dir),
        host=host,
        port=port,
        train_if_missing=train_if_missing,
        train_config=embedding_mod.TrainingConfig(seed=seed),
        ui_dir=Path(ui_dir) if ui_dir else None,
        enable_admin=enable_admin,
    ))


def main(argv: list[str] | None = None) -> int:
    """Entry point mapping failures onto the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("VALIDATION: aborted", err=True)
        return 1
    except click.UsageError as exc:
        click.echo(f"VALIDATION: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        click.echo(f"VALIDATION: {exc.format_message()}", err=True)
        return 1
    except EngineError as exc:
        click.echo(f"{exc.code}: {exc.message}", err=True)
        return 2 if exc.code in _IO_CODES else 1
    except OSError as exc:
        click.echo(f"IO: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
