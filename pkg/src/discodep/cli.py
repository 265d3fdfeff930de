"""Command-line interface.

Exit codes: 0 on success, 1 on data errors (bad corpora, malformed
files), 2 on usage errors.  Report commands print a table and, with
--out, write TSV + JSON and render a PNG figure next to them.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from discodep import __version__
from discodep.corpus import (
    Corpus,
    SPLITS,
    build_vocab,
    documents_tsv,
    dump_documents,
    load_split,
)
from discodep.decode import ScoreSet, assign_labels, cle_decode, eisner_decode
from discodep.errors import DiscodepError
from discodep.evaluate import attachment_scores, structure_metrics
from discodep.linear import LinearModel, TrainConfig, train_linear
from discodep import reports
from discodep.scorefile import iter_scores, read_trees, write_scores, write_trees
from discodep.trees import ComplexityReport, DepTree, complexity_census


class _Fail(click.ClickException):
    exit_code = 1


def _load_splits(corpus_dir: str, splits: tuple[str, ...]) -> list[Corpus]:
    try:
        return [load_split(corpus_dir, split) for split in splits]
    except DiscodepError as e:
        raise _Fail(str(e)) from e


def _parse_splits(value: str) -> tuple[str, ...]:
    splits = tuple(s.strip() for s in value.split(",") if s.strip())
    for split in splits:
        if split not in SPLITS:
            raise click.UsageError(f"unknown split {split!r}; expected subset of {','.join(SPLITS)}")
    if not splits:
        raise click.UsageError("no splits given")
    return splits


def _write_report(
    out_dir: str | None,
    stem: str,
    rows: list[tuple],
    headers: tuple[str, ...],
    payload: dict,
    render,
) -> None:
    if out_dir is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.tsv").write_text(reports.tsv(rows, headers), encoding="utf-8")
    (out / f"{stem}.json").write_text(json.dumps(payload, indent=2), encoding="utf-8")
    render(out / f"{stem}.png")
    click.echo(f"wrote {out / (stem + '.tsv')}, .json, .png")


@click.group()
@click.version_option(version=__version__, prog_name="discodep")
def cli() -> None:
    """Discourse dependency parsing toolkit."""


@cli.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--splits", default="train,dev,test", show_default=True, help="Comma-separated splits to pool.")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for TSV/JSON/PNG output.")
def complexity(corpus_dir: str, splits: str, out: str | None) -> None:
    """Count gap degrees, edge degrees, and projectivity of gold trees."""
    corpora = _load_splits(corpus_dir, _parse_splits(splits))
    try:
        report = complexity_census(corpora)
    except DiscodepError as e:
        raise _Fail(str(e)) from e
    rows = reports.census_rows(report)
    click.echo(reports.format_table(rows, reports.CENSUS_HEADERS))
    _write_report(
        out,
        "census",
        rows,
        reports.CENSUS_HEADERS,
        report.to_dict(),
        lambda p: reports.render_census_figure(report, p),
    )


@cli.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--splits", default="dev,test", show_default=True)
@click.option(
    "--trees",
    "tree_files",
    multiple=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Predicted-trees NDJSON to summarize alongside gold (repeatable; applies to a single --splits value).",
)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def stats(corpus_dir: str, splits: str, tree_files: tuple[str, ...], out: str | None) -> None:
    """Average longest-ROOT-path length and leaf proportion per split."""
    names = _parse_splits(splits)
    if tree_files and len(names) != 1:
        raise click.UsageError("--trees requires exactly one split in --splits")
    corpora = _load_splits(corpus_dir, names)
    summaries: dict[str, dict] = {}
    try:
        for corpus in corpora:
            summaries[f"gold/{corpus.split}"] = structure_metrics(
                [doc.gold_tree() for doc in corpus.documents]
            )
        for tree_file in tree_files:
            entries = read_trees(tree_file)
            trees = [
                DepTree(heads=tuple(heads), labels=tuple(labels) if labels else None)
                for _, heads, labels in entries
            ]
            summaries[Path(tree_file).stem] = structure_metrics(trees)
    except DiscodepError as e:
        raise _Fail(str(e)) from e
    rows = reports.stats_rows(summaries)
    click.echo(reports.format_table(rows, reports.STATS_HEADERS))
    _write_report(
        out,
        "stats",
        rows,
        reports.STATS_HEADERS,
        summaries,
        lambda p: reports.render_stats_figure(summaries, p),
    )


@cli.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--split", default="train", show_default=True, type=click.Choice(SPLITS))
@click.option("--docs", type=click.Path(dir_okay=False), default=None, help="Write canonical document dump (JSON).")
@click.option("--tokens/--no-tokens", default=False, show_default=True, help="Include token lists in --docs output.")
@click.option("--vocab", type=click.Path(dir_okay=False), default=None, help="Write word/char/relation vocab (JSON).")
@click.option("--tsv", type=click.Path(dir_okay=False), default=None, help="Write flat EDU table (TSV).")
def dump(
    corpus_dir: str,
    split: str,
    docs: str | None,
    tokens: bool,
    vocab: str | None,
    tsv: str | None,
) -> None:
    """Export a split as canonical JSON, a vocabulary, or a TSV table."""
    if docs is None and vocab is None and tsv is None:
        raise click.UsageError("nothing to do: pass --docs, --vocab, or --tsv")
    (corpus,) = _load_splits(corpus_dir, (split,))
    try:
        if docs is not None:
            dump_documents(corpus, docs, tokens=tokens)
            click.echo(f"wrote {len(corpus)} documents to {docs}")
        if vocab is not None:
            built = build_vocab(corpus)
            built.save(vocab)
            click.echo(
                f"wrote vocab to {vocab} "
                f"(words={built.word_size}, chars={built.char_size}, relations={built.relation_size})"
            )
        if tsv is not None:
            Path(tsv).write_text(documents_tsv(corpus.documents), encoding="utf-8")
            click.echo(f"wrote EDU table to {tsv}")
    except (DiscodepError, OSError) as e:
        raise _Fail(str(e)) from e


@cli.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--model", required=True, type=click.Path(dir_okay=False), help="Where to save the best model (.npz).")
@click.option("--update", default="perceptron", show_default=True, type=click.Choice(["perceptron", "mira"]))
@click.option("--algo", default="eisner", show_default=True, type=click.Choice(["eisner", "cle"]))
@click.option("--epochs", default=10, show_default=True, type=click.IntRange(min=1))
@click.option("--mira-c", default=0.1, show_default=True, type=float)
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--shuffle/--no-shuffle", default=True, show_default=True)
@click.option("--history", "history_path", type=click.Path(dir_okay=False), default=None, help="Write per-epoch history JSON.")
def train(
    corpus_dir: str,
    model: str,
    update: str,
    algo: str,
    epochs: int,
    mira_c: float,
    seed: int,
    shuffle: bool,
    history_path: str | None,
) -> None:
    """Train the linear scorer on the train split, selecting by dev UAS."""
    train_corpus, dev_corpus = _load_splits(corpus_dir, ("train", "dev"))
    cfg = TrainConfig(
        epochs=epochs, update=update, mira_c=mira_c, algo=algo, seed=seed, shuffle=shuffle
    )
    try:
        best, history = train_linear(train_corpus, dev_corpus, cfg)
    except DiscodepError as e:
        raise _Fail(str(e)) from e
    for entry in history:
        line = f"epoch {entry['epoch']:>3}: arc_updates={entry['arc_updates']} label_updates={entry['label_updates']}"
        if "dev_uas" in entry:
            line += f" dev_uas={entry['dev_uas']:.4f} dev_las={entry['dev_las']:.4f}"
        click.echo(line)
    best.save(model)
    best_uas = max((e.get("dev_uas", 0.0) for e in history), default=0.0)
    click.echo(f"saved best model (dev UAS {best_uas:.4f}) to {model}")
    if history_path is not None:
        Path(history_path).write_text(json.dumps(history, indent=2), encoding="utf-8")


@cli.command()
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--split", default="dev", show_default=True, type=click.Choice(SPLITS))
@click.option("--model", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--algo", default="eisner", show_default=True, type=click.Choice(["eisner", "cle"]))
@click.option("--single-root", is_flag=True, default=False, help="Force exactly one ROOT dependent.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write predicted trees NDJSON.")
@click.option("--scores", "scores_path", type=click.Path(dir_okay=False), default=None, help="Write score matrices NDJSON.")
@click.option("--unlabeled", is_flag=True, default=False, help="Skip relation scoring.")
def parse(
    corpus_dir: str,
    split: str,
    model: str,
    algo: str,
    single_root: bool,
    out: str | None,
    scores_path: str | None,
    unlabeled: bool,
) -> None:
    """Parse a split with a trained linear model."""
    if out is None and scores_path is None:
        raise click.UsageError("nothing to do: pass --out and/or --scores")
    (corpus,) = _load_splits(corpus_dir, (split,))
    try:
        linear = LinearModel.load(model)
        score_sets = [linear.score_set(doc, labeled=not unlabeled) for doc in corpus.documents]
        if scores_path is not None:
            write_scores(scores_path, score_sets)
            click.echo(f"wrote {len(score_sets)} score matrices to {scores_path}")
        if out is not None:
            entries = []
            for scores in score_sets:
                heads = _decode_one(scores, algo, single_root)
                labels = None if unlabeled else assign_labels(scores, heads)
                entries.append((scores.doc_id, heads, labels))
            write_trees(out, entries)
            click.echo(f"wrote {len(entries)} trees to {out}")
    except DiscodepError as e:
        raise _Fail(str(e)) from e


def _decode_one(scores: ScoreSet, algo: str, single_root: bool) -> tuple[int, ...]:
    if algo == "eisner":
        return eisner_decode(scores, single_root=single_root)
    return cle_decode(scores, single_root=single_root)


@cli.command()
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--algo", default="cle", show_default=True, type=click.Choice(["eisner", "cle"]))
@click.option("--single-root", is_flag=True, default=False)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Write predicted trees NDJSON.")
def decode(scores_path: str, algo: str, single_root: bool, out: str) -> None:
    """Decode score matrices from a score file into trees."""
    try:
        entries = []
        for scores in iter_scores(scores_path):
            heads = _decode_one(scores, algo, single_root)
            labels = assign_labels(scores, heads) if scores.label_scores is not None else None
            entries.append((scores.doc_id, heads, labels))
        count = write_trees(out, entries)
    except DiscodepError as e:
        raise _Fail(str(e)) from e
    click.echo(f"decoded {count} documents to {out}")


@cli.command("eval")
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--split", default="dev", show_default=True, type=click.Choice(SPLITS))
@click.option("--pred", required=True, type=click.Path(exists=True, dir_okay=False), help="Predicted trees NDJSON.")
@click.option("--out", type=click.Path(file_okay=False), default=None)
def eval_cmd(corpus_dir: str, split: str, pred: str, out: str | None) -> None:
    """Score predicted trees against a split's gold trees."""
    (corpus,) = _load_splits(corpus_dir, (split,))
    try:
        entries = read_trees(pred)
        by_id = {doc_id: (heads, labels) for doc_id, heads, labels in entries}
        if len(by_id) != len(entries):
            raise _Fail(f"{pred}: duplicate doc_id entries")
        gold, predicted = [], []
        for doc in corpus.documents:
            if doc.doc_id not in by_id:
                raise _Fail(f"{pred}: no prediction for document {doc.doc_id!r}")
            heads, labels = by_id[doc.doc_id]
            gold.append(doc.gold_tree())
            predicted.append(
                DepTree(heads=tuple(heads), labels=tuple(labels) if labels else None)
            )
        report = attachment_scores(gold, predicted)
    except DiscodepError as e:
        raise _Fail(str(e)) from e
    rows = reports.eval_rows(report)
    click.echo(reports.format_table(rows, reports.EVAL_HEADERS))
    _write_report(
        out,
        "eval",
        rows,
        reports.EVAL_HEADERS,
        report.to_dict(),
        lambda p: reports.render_eval_figure(report, p),
    )


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
