"""Command line interface for training and exporting arc scores."""

from __future__ import annotations

import json
from pathlib import Path

import click

from biaffine_scorer.config import Config
from biaffine_scorer.errors import BiaffineError
from biaffine_scorer.formats import read_docs, read_vocab
from biaffine_scorer.train import export_scores, load_checkpoint, save_checkpoint, train


class _Fail(click.ClickException):
    exit_code = 1


@click.group()
def cli() -> None:
    """Neural arc and relation scorer over dumped discourse documents.

    Consumes canonical document dumps and vocabulary files, trains a
    biaffine scorer, and writes score files that the decoder CLI turns
    into trees.
    """


@cli.command("train")
@click.argument("train_docs", type=click.Path(exists=True, dir_okay=False))
@click.option("--vocab", "vocab_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dev", "dev_path", default=None, type=click.Path(exists=True, dir_okay=False), help="Dev dump for best-epoch selection.")
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False), help="JSON config file.")
@click.option("--epochs", type=int, default=None, help="Override config epochs.")
@click.option("--seed", type=int, default=None, help="Override config seed.")
@click.option("--history", "history_path", default=None, type=click.Path(dir_okay=False), help="Write per-epoch JSON history.")
@click.option("--command", default="discodep", show_default=True, help="Decoder CLI used for dev selection.")
def train_cmd(
    train_docs: str,
    vocab_path: str,
    dev_path: str | None,
    model_path: str,
    config_path: str | None,
    epochs: int | None,
    seed: int | None,
    history_path: str | None,
    command: str,
) -> None:
    """Train a scorer on a document dump and save a checkpoint."""
    try:
        cfg = Config.from_json(config_path) if config_path else Config()
    except ValueError as e:
        raise _Fail(str(e)) from e
    if epochs is not None:
        cfg.epochs = epochs
    if seed is not None:
        cfg.seed = seed
    try:
        docs = read_docs(train_docs)
        dev = read_docs(dev_path) if dev_path else None
        vocab = read_vocab(vocab_path)
        model, history = train(docs, dev, vocab, cfg, command=command, log=click.echo)
        save_checkpoint(model_path, model, vocab, cfg)
    except BiaffineError as e:
        raise _Fail(str(e)) from e
    if history_path:
        payload = [result.to_dict() for result in history]
        Path(history_path).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    best = max((r.dev_uas for r in history if r.dev_uas is not None), default=None)
    tail = f" (best dev UAS {best:.4f})" if best is not None else ""
    click.echo(f"saved checkpoint to {model_path}{tail}")


@cli.command("score")
@click.argument("docs_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Write score matrices NDJSON.")
@click.option("--unlabeled", is_flag=True, default=False, help="Skip relation score tensors.")
def score_cmd(docs_path: str, model_path: str, out: str, unlabeled: bool) -> None:
    """Score a document dump with a trained checkpoint."""
    try:
        model, vocab, cfg = load_checkpoint(model_path)
        docs = read_docs(docs_path)
        count = export_scores(model, docs, vocab, cfg, out, labeled=not unlabeled)
    except BiaffineError as e:
        raise _Fail(str(e)) from e
    click.echo(f"scored {count} documents to {out}")


def main() -> None:
    cli(prog_name="biaffine-scorer")


if __name__ == "__main__":
    main()
