"""Training loop, dev selection through the decoder CLI, checkpoints."""

from __future__ import annotations

import random
import shutil
import subprocess
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch

from biaffine_scorer.config import Config
from biaffine_scorer.data import batches, tensorize
from biaffine_scorer.errors import BiaffineError, DataError
from biaffine_scorer.formats import (
    DumpDocument,
    Vocabulary,
    read_trees,
    write_scores,
)
from biaffine_scorer.model import BiaffineScorer

CHECKPOINT_VERSION = "biaffine-scorer/1"
NEG_INF = float("-inf")


def set_seed(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)


def score_documents(
    model: BiaffineScorer,
    docs: list[DumpDocument],
    vocab: Vocabulary,
    cfg: Config,
    labeled: bool = True,
) -> list[tuple]:
    """Score docs in input order as (doc_id, arcs, labels, label_scores).

    Arc matrices carry -inf sentinels on column 0 and the diagonal, so
    the entries can be written to a score file as is.
    """
    model.eval()
    tdocs = tensorize(docs, vocab, cfg)
    entries = []
    with torch.no_grad():
        for batch in batches(tdocs, cfg.batch_size):
            out = model(batch)
            for b, doc_id in enumerate(batch.doc_ids):
                n = batch.ns[b]
                arc = out.arc_scores[b, : n + 1, : n + 1].numpy().astype(float)
                arc[:, 0] = NEG_INF
                np.fill_diagonal(arc, NEG_INF)
                if labeled:
                    rel = (
                        model.rel_biaffine.full(
                            out.rel_head[b, : n + 1], out.rel_dep[b, : n + 1]
                        )
                        .numpy()
                        .astype(float)
                    )
                    entries.append((doc_id, arc, list(vocab.relations), rel))
                else:
                    entries.append((doc_id, arc, None, None))
    return entries


def export_scores(
    model: BiaffineScorer,
    docs: list[DumpDocument],
    vocab: Vocabulary,
    cfg: Config,
    path: str | Path,
    labeled: bool = True,
) -> int:
    return write_scores(path, score_documents(model, docs, vocab, cfg, labeled=labeled))


def decode_with_cli(
    scores_path: str | Path,
    trees_path: str | Path,
    algo: str = "cle",
    single_root: bool = False,
    command: str = "discodep",
) -> list[tuple[str, list[int]]]:
    """Run the decoder CLI on a score file and read back the trees."""
    exe = shutil.which(command)
    if exe is None:
        raise BiaffineError(f"decoder command not found on PATH: {command}")
    args = [exe, "decode", "--scores", str(scores_path), "--algo", algo, "--out", str(trees_path)]
    if single_root:
        args.append("--single-root")
    proc = subprocess.run(args, capture_output=True, text=True)
    if proc.returncode != 0:
        detail = proc.stderr.strip() or proc.stdout.strip()
        raise BiaffineError(f"decoder command failed ({proc.returncode}): {detail}")
    return read_trees(trees_path)


def unlabeled_accuracy(
    docs: list[DumpDocument], trees: list[tuple[str, list[int]]]
) -> float:
    """Micro-averaged head accuracy over non-root EDUs."""
    by_id = dict(trees)
    if len(by_id) != len(trees):
        raise DataError("duplicate doc_id entries in decoded trees")
    total = 0
    correct = 0
    for doc in docs:
        pred = by_id.get(doc.doc_id)
        if pred is None:
            raise DataError(f"decoded trees are missing {doc.doc_id}")
        gold = doc.heads
        if len(pred) != len(gold):
            raise DataError(f"{doc.doc_id}: tree length {len(pred)} != {len(gold)}")
        total += len(gold)
        correct += sum(1 for g, p in zip(gold, pred) if g == p)
    if total == 0:
        raise DataError("no EDUs to evaluate")
    return correct / total


def _dev_uas(
    model: BiaffineScorer,
    docs: list[DumpDocument],
    vocab: Vocabulary,
    cfg: Config,
    command: str,
) -> float:
    entries = score_documents(model, docs, vocab, cfg, labeled=False)
    with tempfile.TemporaryDirectory() as tmp:
        scores_path = Path(tmp) / "dev.scores"
        trees_path = Path(tmp) / "dev.trees"
        write_scores(scores_path, entries)
        trees = decode_with_cli(scores_path, trees_path, algo=cfg.decoder, command=command)
    return unlabeled_accuracy(docs, trees)


def save_checkpoint(
    path: str | Path, model: BiaffineScorer, vocab: Vocabulary, cfg: Config
) -> None:
    payload = {
        "format_version": CHECKPOINT_VERSION,
        "config": cfg.to_dict(),
        "word_to_id": dict(vocab.word_to_id),
        "char_to_id": dict(vocab.char_to_id),
        "relation_to_id": dict(vocab.relation_to_id),
        "state_dict": model.state_dict(),
    }
    torch.save(payload, str(path))


def load_checkpoint(path: str | Path) -> tuple[BiaffineScorer, Vocabulary, Config]:
    try:
        payload = torch.load(str(path), map_location="cpu", weights_only=True)
    except Exception as e:
        raise DataError(f"{path}: not a readable checkpoint: {e}") from e
    if not isinstance(payload, dict) or payload.get("format_version") != CHECKPOINT_VERSION:
        raise DataError(f"{path}: expected a {CHECKPOINT_VERSION} checkpoint")
    cfg = Config.from_dict(payload["config"])
    vocab = Vocabulary(
        word_to_id=payload["word_to_id"],
        char_to_id=payload["char_to_id"],
        relation_to_id=payload["relation_to_id"],
    )
    model = BiaffineScorer(cfg, vocab.word_size, vocab.char_size, len(vocab.relations))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, vocab, cfg


@dataclass(frozen=True)
class EpochResult:
    epoch: int
    loss: float
    arc_loss: float
    rel_loss: float
    dev_uas: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def train(
    train_docs: list[DumpDocument],
    dev_docs: list[DumpDocument] | None,
    vocab: Vocabulary,
    cfg: Config,
    command: str = "discodep",
    log=None,
) -> tuple[BiaffineScorer, list[EpochResult]]:
    """Train a scorer; with dev docs the best epoch by dev UAS is kept."""
    set_seed(cfg.seed)
    model = BiaffineScorer(cfg, vocab.word_size, vocab.char_size, len(vocab.relations))
    if cfg.pretrained_embeddings:
        model.load_pretrained(cfg.pretrained_embeddings, vocab.word_to_id)
    optimizer = torch.optim.Adam(
        model.parameters(),
        lr=cfg.lr,
        betas=cfg.betas,
        weight_decay=cfg.weight_decay,
    )
    tdocs = tensorize(train_docs, vocab, cfg)
    if not tdocs:
        raise DataError("no training documents")
    rng = random.Random(cfg.seed)
    history: list[EpochResult] = []
    best_uas = -1.0
    best_state = None
    for epoch in range(1, cfg.epochs + 1):
        model.train()
        loss_sum = arc_sum = rel_sum = 0.0
        count = 0
        for batch in batches(tdocs, cfg.batch_size, shuffle=True, rng=rng):
            optimizer.zero_grad()
            loss, stats = model.loss(batch)
            loss.backward()
            optimizer.step()
            loss_sum += float(loss.detach())
            arc_sum += stats["arc_loss"]
            rel_sum += stats["rel_loss"]
            count += 1
        dev_uas = None
        if dev_docs:
            dev_uas = _dev_uas(model, dev_docs, vocab, cfg, command)
            if dev_uas > best_uas:
                best_uas = dev_uas
                best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}
        result = EpochResult(
            epoch=epoch,
            loss=loss_sum / count,
            arc_loss=arc_sum / count,
            rel_loss=rel_sum / count,
            dev_uas=dev_uas,
        )
        history.append(result)
        if log is not None:
            line = f"epoch {epoch}: loss {result.loss:.4f}"
            if dev_uas is not None:
                line += f" dev_uas {dev_uas:.4f}"
            log(line)
    if best_state is not None:
        model.load_state_dict(best_state)
    model.eval()
    return model, history
