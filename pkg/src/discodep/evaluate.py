"""Attachment accuracy and tree-shape statistics.

UAS/LAS are micro-averaged over all non-root EDUs in the collection;
shape statistics (longest ROOT path, leaf proportion) are macro-averaged
per document.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from discodep.errors import EvalError
from discodep.trees import DepTree, leaf_proportion, max_path_length


@dataclass(frozen=True)
class EvalReport:
    """Micro-averaged attachment scores.

    ``las`` counts an EDU only when head and relation are both right;
    ``label_accuracy_given_head`` is restricted to correctly attached
    EDUs (0.0 when none are).  Label fields are None for unlabeled
    predictions.
    """

    total_edus: int
    correct_heads: int
    correct_labeled: int | None
    uas: float
    las: float | None
    label_accuracy_given_head: float | None

    def to_dict(self) -> dict:
        return {
            "total_edus": self.total_edus,
            "correct_heads": self.correct_heads,
            "correct_labeled": self.correct_labeled,
            "uas": self.uas,
            "las": self.las,
            "label_accuracy_given_head": self.label_accuracy_given_head,
        }


def attachment_scores(gold: Sequence[DepTree], pred: Sequence[DepTree]) -> EvalReport:
    if len(gold) != len(pred):
        raise EvalError(f"gold has {len(gold)} documents, predictions have {len(pred)}")
    if not gold:
        raise EvalError("cannot evaluate an empty collection")
    labeled = all(p.labels is not None for p in pred)
    total = heads_ok = both_ok = 0
    for at, (g, p) in enumerate(zip(gold, pred)):
        if g.n != p.n:
            raise EvalError(f"document {at}: gold has {g.n} EDUs, prediction has {p.n}")
        if g.labels is None:
            raise EvalError(f"document {at}: gold tree is unlabeled")
        total += g.n
        for d in range(1, g.n + 1):
            if g.head_of(d) != p.head_of(d):
                continue
            heads_ok += 1
            if labeled and g.label_of(d) == p.label_of(d):
                both_ok += 1
    return EvalReport(
        total_edus=total,
        correct_heads=heads_ok,
        correct_labeled=both_ok if labeled else None,
        uas=heads_ok / total,
        las=both_ok / total if labeled else None,
        label_accuracy_given_head=(both_ok / heads_ok if heads_ok else 0.0) if labeled else None,
    )


def structure_metrics(trees: Sequence[DepTree]) -> dict:
    """Macro-averaged longest-ROOT-path length and leaf proportion."""
    if not trees:
        raise EvalError("cannot summarize an empty collection")
    k = len(trees)
    return {
        "documents": k,
        "avg_max_path_length": sum(max_path_length(t) for t in trees) / k,
        "avg_leaf_proportion": sum(leaf_proportion(t) for t in trees) / k,
    }
