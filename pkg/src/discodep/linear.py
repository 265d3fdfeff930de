"""Sparse linear arc scorer with averaged perceptron / MIRA training.

Every candidate arc (h, d) fires a fixed set of string feature templates
over the head and dependent EDU tokens (first/last/first-two words,
length buckets, signed distance bucket, direction, a lexical
conjunction, and a ROOT indicator).  Arc scores are sums of per-feature
weights; relation scores add one weight row per feature.  Training is
online: decode the document, compare to gold heads, and update toward
the gold arcs, either by a fixed step (perceptron) or by a margin-scaled
step capped at C (MIRA).  Reported models use averaged weights.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from discodep.corpus import Corpus, Document, edu_words
from discodep.decode import ScoreSet, cle_decode, eisner_decode
from discodep.errors import ModelError
from discodep.evaluate import attachment_scores
from discodep.trees import DepTree

MODEL_VERSION = "disco-linear/1"

_ROOT_WORDS = ("<root>",)
_EMPTY_WORDS = ("<empty>",)
NUM_TEMPLATES = 12


def distance_bucket(h: int, d: int) -> str:
    """Signed bucket of d - h: exact through +-3, then +-4..6 and +-7+."""
    delta = d - h
    sign = "+" if delta > 0 else "-"
    a = abs(delta)
    if a <= 3:
        return f"{sign}{a}"
    if a <= 6:
        return sign + "4..6"
    return sign + "7+"


def length_bucket(k: int) -> str:
    if k <= 3:
        return str(k)
    if k <= 6:
        return "4..6"
    if k <= 10:
        return "7..10"
    return "11+"


def left_chain_heads(n: int) -> tuple[int, ...]:
    """Baseline attaching every EDU to its left neighbor."""
    return tuple(range(n))


def doc_words(doc: Document) -> list[tuple[str, ...]]:
    """Per-position token tuples; ROOT and empty EDUs get placeholders."""
    out: list[tuple[str, ...]] = [_ROOT_WORDS]
    for edu in doc.edus[1:]:
        out.append(edu_words(edu.text) or _EMPTY_WORDS)
    return out


def arc_features(words: Sequence[tuple[str, ...]], h: int, d: int) -> tuple[str, ...]:
    hw, dw = words[h], words[d]
    hf, hl = hw[0].lower(), hw[-1].lower()
    df, dl = dw[0].lower(), dw[-1].lower()
    h2 = hw[1].lower() if len(hw) > 1 else "<none>"
    d2 = dw[1].lower() if len(dw) > 1 else "<none>"
    return (
        "hf=" + hf,
        "hl=" + hl,
        "h2=" + hf + "_" + h2,
        "df=" + df,
        "dl=" + dl,
        "d2=" + df + "_" + d2,
        "hn=" + length_bucket(len(hw)),
        "dn=" + length_bucket(len(dw)),
        "dist=" + distance_bucket(h, d),
        "dir=" + ("root" if h == 0 else ("left" if h < d else "right")),
        "ff=" + hf + "|" + df,
        "root=" + ("1" if h == 0 else "0"),
    )


def _feature_grid(
    words: Sequence[tuple[str, ...]],
    table: dict[str, int],
    grow: bool,
    pad: int,
) -> np.ndarray:
    """Feature ids for every (h, d) arc; unseen features map to pad."""
    n = len(words) - 1
    grid = np.full((n + 1, n + 1, NUM_TEMPLATES), pad, dtype=np.int64)
    for h in range(n + 1):
        for d in range(1, n + 1):
            if h == d:
                continue
            for t, feat in enumerate(arc_features(words, h, d)):
                fid = table.get(feat)
                if fid is None:
                    if not grow:
                        continue
                    fid = len(table)
                    table[feat] = fid
                grid[h, d, t] = fid
    return grid


class LinearModel:
    """Feature table plus arc and relation weight arrays.

    ``arc_weights`` has one extra padding slot (id = len(features)) that
    stays zero so unseen features score nothing at parse time;
    ``label_weights`` has shape (len(features) + 1, R).
    """

    def __init__(
        self,
        features: dict[str, int],
        labels: tuple[str, ...],
        arc_weights: np.ndarray,
        label_weights: np.ndarray,
    ) -> None:
        self.features = features
        self.labels = tuple(labels)
        self.arc_weights = np.asarray(arc_weights, dtype=np.float64)
        self.label_weights = np.asarray(label_weights, dtype=np.float64)
        pad = len(features)
        if self.arc_weights.shape != (pad + 1,):
            raise ModelError(f"arc weights must have shape ({pad + 1},)")
        if self.label_weights.shape != (pad + 1, len(self.labels)):
            raise ModelError(f"label weights must have shape ({pad + 1}, {len(self.labels)})")

    @property
    def pad_id(self) -> int:
        return len(self.features)

    def _grid(self, doc: Document) -> np.ndarray:
        return _feature_grid(doc_words(doc), self.features, grow=False, pad=self.pad_id)

    def score_set(self, doc: Document, labeled: bool = True) -> ScoreSet:
        """Arc (and optionally relation) score matrices for one document."""
        grid = self._grid(doc)
        arc = self.arc_weights[grid].sum(axis=-1)
        if not labeled:
            return ScoreSet(arc_scores=arc, doc_id=doc.doc_id)
        label = self.label_weights[grid].sum(axis=-2)
        return ScoreSet(arc_scores=arc, label_scores=label, labels=self.labels, doc_id=doc.doc_id)

    def parse(self, doc: Document, algo: str = "eisner", labeled: bool = True) -> DepTree:
        scores = self.score_set(doc, labeled=labeled)
        heads = _decode(scores, algo)
        if not labeled:
            return DepTree(heads=heads)
        from discodep.decode import assign_labels

        return DepTree(heads=heads, labels=assign_labels(scores, heads))

    def save(self, path: Path | str) -> None:
        inverse = [""] * len(self.features)
        for feat, fid in self.features.items():
            inverse[fid] = feat
        meta = {"format_version": MODEL_VERSION, "labels": list(self.labels), "features": inverse}
        np.savez_compressed(
            path,
            meta=np.array(json.dumps(meta, ensure_ascii=False)),
            arc=self.arc_weights,
            label=self.label_weights,
        )

    @classmethod
    def load(cls, path: Path | str) -> "LinearModel":
        try:
            with np.load(path, allow_pickle=False) as data:
                meta = json.loads(str(data["meta"]))
                arc = data["arc"]
                label = data["label"]
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as e:
            raise ModelError(f"cannot load model from {path}: {e}") from e
        if meta.get("format_version") != MODEL_VERSION:
            raise ModelError(
                f"model version {meta.get('format_version')!r} != {MODEL_VERSION!r}"
            )
        features = {feat: fid for fid, feat in enumerate(meta["features"])}
        return cls(
            features=features,
            labels=tuple(meta["labels"]),
            arc_weights=arc,
            label_weights=label,
        )


def _decode(scores: ScoreSet, algo: str) -> tuple[int, ...]:
    if algo == "eisner":
        return eisner_decode(scores)
    if algo == "cle":
        return cle_decode(scores)
    raise ModelError(f"unknown decoding algorithm {algo!r}; expected 'eisner' or 'cle'")


@dataclass
class TrainConfig:
    epochs: int = 10
    update: str = "perceptron"  # or "mira"
    mira_c: float = 0.1
    algo: str = "eisner"
    seed: int = 42
    shuffle: bool = True


@dataclass
class _DocCache:
    grid: np.ndarray
    gold_heads: np.ndarray
    gold_label_ids: np.ndarray


def train_linear(
    train: Corpus,
    dev: Corpus | None = None,
    config: TrainConfig | None = None,
) -> tuple[LinearModel, list[dict]]:
    """Train on gold trees; returns the best averaged model and history.

    The best epoch is chosen by dev UAS of the averaged weights (final
    epoch when no dev split is given).  History holds one dict per epoch
    with update counts and dev scores.
    """
    cfg = config or TrainConfig()
    if cfg.update not in ("perceptron", "mira"):
        raise ModelError(f"unknown update rule {cfg.update!r}; expected 'perceptron' or 'mira'")
    if not train.documents:
        raise ModelError("cannot train on an empty corpus")

    features: dict[str, int] = {}
    labels: list[str] = []
    label_ids: dict[str, int] = {}
    for doc in train.documents:
        for edu in doc.edus[1:]:
            if edu.gold_relation not in label_ids:
                label_ids[edu.gold_relation] = len(labels)
                labels.append(edu.gold_relation)

    # Interning pass: the feature space is every template instance seen
    # on any candidate arc of the training split.
    caches: list[_DocCache] = []
    for doc in train.documents:
        grid = _feature_grid(doc_words(doc), features, grow=True, pad=-1)
        gold = doc.gold_tree()
        caches.append(
            _DocCache(
                grid=grid,
                gold_heads=np.asarray((0,) + gold.heads, dtype=np.int64),
                gold_label_ids=np.asarray(
                    [label_ids[lab] for lab in gold.labels], dtype=np.int64
                ),
            )
        )
    pad = len(features)
    num_labels = len(labels)
    for cache in caches:
        # Inert cells (diagonal, ROOT column) were marked -1 during
        # interning; point them at the zero padding slot.
        cache.grid[cache.grid < 0] = pad

    w = np.zeros(pad + 1, dtype=np.float64)
    wa = np.zeros(pad + 1, dtype=np.float64)
    lw = np.zeros((pad + 1, num_labels), dtype=np.float64)
    lwa = np.zeros((pad + 1, num_labels), dtype=np.float64)
    step = 1

    def averaged() -> LinearModel:
        avg_w = w - wa / step
        avg_lw = lw - lwa / step
        avg_w[pad] = 0.0
        avg_lw[pad, :] = 0.0
        return LinearModel(
            features=features, labels=tuple(labels), arc_weights=avg_w, label_weights=avg_lw
        )

    gold_dev = [d.gold_tree() for d in dev.documents] if dev is not None else None

    rng = random.Random(cfg.seed)
    order = list(range(len(caches)))
    history: list[dict] = []
    best_model: LinearModel | None = None
    best_uas = float("-inf")

    for epoch in range(1, cfg.epochs + 1):
        if cfg.shuffle:
            rng.shuffle(order)
        arc_updates = 0
        label_updates = 0
        for at in order:
            cache = caches[at]
            n = cache.grid.shape[0] - 1
            scores = ScoreSet(arc_scores=w[cache.grid].sum(axis=-1))
            pred = np.asarray((0,) + _decode(scores, cfg.algo), dtype=np.int64)
            wrong = np.flatnonzero(pred[1:] != cache.gold_heads[1:]) + 1
            if wrong.size:
                arc_updates += 1
                gold_ids = cache.grid[cache.gold_heads[wrong], wrong].ravel()
                pred_ids = cache.grid[pred[wrong], wrong].ravel()
                ids = np.concatenate([gold_ids, pred_ids])
                signs = np.concatenate(
                    [np.ones(gold_ids.size), -np.ones(pred_ids.size)]
                )
                uniq, inverse = np.unique(ids, return_inverse=True)
                delta = np.zeros(uniq.size)
                np.add.at(delta, inverse, signs)
                if cfg.update == "mira":
                    sqnorm = float((delta**2).sum())
                    if sqnorm > 0.0:
                        margin = float(
                            w[gold_ids].sum() - w[pred_ids].sum()
                        )
                        tau = min(cfg.mira_c, max(0.0, wrong.size - margin) / sqnorm)
                    else:
                        tau = 0.0
                else:
                    tau = 1.0
                if tau > 0.0:
                    w[uniq] += tau * delta
                    wa[uniq] += step * tau * delta

            # Relation classifier: multiclass perceptron at the gold arcs.
            for d in range(1, n + 1):
                row = cache.grid[cache.gold_heads[d], d]
                gold_r = int(cache.gold_label_ids[d - 1])
                pred_r = int(np.argmax(lw[row].sum(axis=0)))
                if pred_r != gold_r:
                    label_updates += 1
                    lw[row, gold_r] += 1.0
                    lwa[row, gold_r] += float(step)
                    lw[row, pred_r] -= 1.0
                    lwa[row, pred_r] -= float(step)
            step += 1

        entry = {"epoch": epoch, "arc_updates": arc_updates, "label_updates": label_updates}
        snapshot = averaged()
        if dev is not None and gold_dev is not None:
            pred_dev = [snapshot.parse(doc, algo=cfg.algo) for doc in dev.documents]
            report = attachment_scores(gold_dev, pred_dev)
            entry["dev_uas"] = report.uas
            entry["dev_las"] = report.las
            if report.uas > best_uas:
                best_uas = report.uas
                best_model = snapshot
        history.append(entry)

    if best_model is None:
        best_model = averaged()
    return best_model, history
