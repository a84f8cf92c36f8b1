"""Command line entry point: corpus in, artifacts out."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import corpus as corpus_io
from . import dataset as dataset_mod
from . import evalstats
from .decompose import decompose, decompose_with_dictionary
from .dictionary import Dictionary, build_dictionary
from .generate import (
    generate,
    lead_answerer,
    oracle_answerer,
    remote_answerer,
)
from .segment import segment

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REMOTE_IO = 3

# click defaults UsageError to 2; usage errors must exit 1 here.
click.UsageError.exit_code = EXIT_USAGE


class DataError(click.ClickException):
    exit_code = EXIT_DATA


class RemoteIOError(click.ClickException):
    exit_code = EXIT_REMOTE_IO


def _load_config(ctx, _param, value):
    """--config supplies defaults; explicit flags win."""
    if value is None:
        return None
    with open(value, encoding="utf-8") as f:
        ctx.default_map = json.load(f)
    return value


_config_option = click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_config,
    expose_value=False,
    is_eager=True,
    help="JSON config file with the same fields as the flags.",
)


def _load_dictionary(path: str | None) -> Dictionary | None:
    if path is None:
        return None
    try:
        return Dictionary.load_tsv(path)
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot load dictionary {path}: {exc}")


def _read_corpus(path: str, stats: corpus_io.CorpusReadStats):
    try:
        yield from corpus_io.iter_documents(path, stats)
    except OSError as exc:
        raise RemoteIOError(f"cannot read corpus {path}: {exc}")


@click.group()
def main():
    """Extractive headline toolchain: decomposition, datasets, generation,
    evaluation statistics, and the blind evaluation service."""


@main.command("decompose")
@_config_option
@click.option("--corpus", "corpus_path", required=True, type=click.Path(dir_okay=False))
@click.option("--dict", "dict_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), required=True)
def cmd_decompose(corpus_path, dict_path, output):
    """Decompose every title; write per-document span lists and a summary."""
    dictionary = _load_dictionary(dict_path)
    read_stats = corpus_io.CorpusReadStats()
    total = 0
    decomposable = 0
    with open(output, "w", encoding="utf-8") as out:
        for doc in _read_corpus(corpus_path, read_stats):
            total += 1
            title = segment(doc.title)
            text = segment(doc.text)
            decomp = (
                decompose(title, text)
                if dictionary is None
                else decompose_with_dictionary(title, text, dictionary)
            )
            record = {"doc_id": doc.doc_id, "decomposable": decomp is not None}
            if decomp is not None:
                decomposable += 1
                record["spans"] = [
                    {
                        "text": s.matched_text,
                        "origin": s.origin.value,
                        "char_range": list(s.text_char_range),
                    }
                    for s in decomp.spans
                ]
            out.write(json.dumps(record, ensure_ascii=False) + "\n")
    if total == 0:
        raise DataError(f"corpus {corpus_path} contains no valid documents")
    summary = {
        "documents": total,
        "decomposable": decomposable,
        "decomposability_rate": decomposable / total,
        "malformed_lines": read_stats.malformed_lines,
    }
    click.echo(json.dumps(summary, ensure_ascii=False))


@main.command("build-dataset")
@_config_option
@click.option("--corpus", "corpus_path", required=True, type=click.Path(dir_okay=False))
@click.option("--dict", "dict_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), required=True)
@click.option("--format", "fmt", type=click.Choice(["jsonl", "squad"]), default="jsonl")
@click.option("--stats-output", type=click.Path(dir_okay=False))
def cmd_build_dataset(corpus_path, dict_path, output, fmt, stats_output):
    """Build question-answer training samples from decomposable titles."""
    dictionary = _load_dictionary(dict_path)
    read_stats = corpus_io.CorpusReadStats()
    documents = _read_corpus(corpus_path, read_stats)
    if fmt == "jsonl":
        with open(output, "w", encoding="utf-8") as out:
            stats = dataset_mod.build_corpus_dataset(
                documents,
                dictionary,
                lambda s: out.write(json.dumps(s.to_record(), ensure_ascii=False) + "\n"),
            )
    else:
        samples = []
        stats = dataset_mod.build_corpus_dataset(documents, dictionary, samples.append)
        with open(output, "w", encoding="utf-8") as out:
            try:
                dataset_mod.export_squad_format(samples, out)
            except ValueError as exc:
                raise DataError(str(exc))
    stats.malformed_documents = read_stats.malformed_lines
    stats_json = json.dumps(stats.to_record(), ensure_ascii=False)
    if stats_output:
        Path(stats_output).write_text(stats_json + "\n", encoding="utf-8")
    click.echo(stats_json)


@main.command("build-dict")
@_config_option
@click.option("--corpus", "corpus_path", required=True, type=click.Path(dir_okay=False))
@click.option("--min-lowercase-count", default=100, show_default=True)
@click.option("--top-n", required=True, type=int)
@click.option("--output", type=click.Path(dir_okay=False), required=True)
def cmd_build_dict(corpus_path, min_lowercase_count, top_n, output):
    """Build the in-title-not-in-text dictionary as a TSV."""
    if top_n < 1:
        raise click.UsageError("--top-n must be >= 1")
    read_stats = corpus_io.CorpusReadStats()
    try:
        dictionary = build_dictionary(
            _read_corpus(corpus_path, read_stats),
            min_lowercase_count=min_lowercase_count,
            top_n=top_n,
        )
    except ValueError as exc:
        raise DataError(str(exc))
    dictionary.save_tsv(output)
    click.echo(
        json.dumps({"entries": len(dictionary), "malformed_lines": read_stats.malformed_lines})
    )


@main.command("generate")
@_config_option
@click.option("--corpus", "corpus_path", required=True, type=click.Path(dir_okay=False))
@click.option(
    "--answerer",
    type=click.Choice(["oracle", "lead", "remote"]),
    default="oracle",
    show_default=True,
)
@click.option("--endpoint", help="Answerer URL (remote answerer only).")
@click.option("--timeout-ms", default=10000, show_default=True)
@click.option("--max-steps", default=32, show_default=True)
@click.option("--max-answer-tokens", default=12, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), required=True)
def cmd_generate(corpus_path, answerer, endpoint, timeout_ms, max_steps, max_answer_tokens, output):
    """Generate headlines for a corpus; write one trace per document."""
    if answerer == "remote" and not endpoint:
        raise click.UsageError("--endpoint is required with --answerer remote")
    remote = remote_answerer(endpoint, timeout_ms) if answerer == "remote" else None
    read_stats = corpus_io.CorpusReadStats()
    failures = 0
    written = 0
    with open(output, "w", encoding="utf-8") as out:
        for doc in _read_corpus(corpus_path, read_stats):
            if answerer == "oracle":
                decomp = decompose(segment(doc.title), segment(doc.text))
                if decomp is None:
                    continue
                driver = oracle_answerer(decomp)
            elif answerer == "lead":
                driver = lead_answerer(max_answer_tokens)
            else:
                driver = remote
            trace = generate(doc, driver, max_steps=max_steps)
            if trace.error is not None:
                failures += 1
            out.write(json.dumps(trace.to_record(), ensure_ascii=False) + "\n")
            written += 1
    if remote is not None:
        remote.close()
    click.echo(json.dumps({"traces": written, "failed": failures}))
    if failures and answerer == "remote":
        raise RemoteIOError(f"{failures} traces aborted on answerer errors")


@main.command("stats")
@_config_option
@click.option("--scores", "scores_path", required=True, type=click.Path(dir_okay=False))
@click.option("--n-resamples", default=100000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--workers", default=1, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False))
@click.option("--plot-csv", type=click.Path(dir_okay=False))
def cmd_stats(scores_path, n_resamples, seed, workers, output, plot_csv):
    """Bootstrap summary plus Krippendorff alphas for a score file."""
    try:
        with open(scores_path, encoding="utf-8") as f:
            records = evalstats.read_scores_jsonl(f)
    except OSError as exc:
        raise RemoteIOError(f"cannot read scores {scores_path}: {exc}")
    except (ValueError, KeyError) as exc:
        raise DataError(f"bad score record: {exc}")
    try:
        matrix = evalstats.ScoreMatrix(records)
        summary = evalstats.bootstrap(matrix, n_resamples, seed, n_workers=workers)
    except ValueError as exc:
        raise DataError(str(exc))

    def _alpha(triples):
        try:
            return evalstats.krippendorff_alpha(triples)
        except ValueError:
            return None

    result = summary.to_record()
    result["krippendorff_alpha"] = {
        "overall": _alpha(evalstats.matrix_alpha_inputs(matrix)),
        "real": _alpha(evalstats.matrix_alpha_inputs(matrix, evalstats.TitleKind.REAL)),
        "generated": _alpha(
            evalstats.matrix_alpha_inputs(matrix, evalstats.TitleKind.GENERATED)
        ),
        "comparison": _alpha(evalstats.comparison_alpha_inputs(matrix)),
    }
    rendered = json.dumps(result, ensure_ascii=False, sort_keys=True)
    if output:
        Path(output).write_text(rendered + "\n", encoding="utf-8")
    click.echo(rendered)
    if plot_csv:
        with open(plot_csv, "w", encoding="utf-8") as f:
            f.write("tier,kind,median,lo,hi\n")
            for kind in ("real", "generated"):
                for tier, est in enumerate(summary.scores[kind]):
                    f.write(f"{tier},{kind},{est.median},{est.lo},{est.hi}\n")


@main.command("serve")
@_config_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8400, show_default=True)
@click.option("--store", "store_path", default="eval_store.sqlite", show_default=True)
def cmd_serve(host, port, store_path):
    """Run the blind evaluation service."""
    import uvicorn

    from .service import create_app
    from .store import EvalStore

    uvicorn.run(create_app(EvalStore(store_path)), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
