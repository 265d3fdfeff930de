"""Hyperparameters.

Defaults follow the standard recipe for this scorer: 100-dim word
embeddings plus a 50-dim character BiLSTM summary per token (150 per
token), a word-level BiLSTM squeezing each EDU to 150 dims, a 3-layer
document BiLSTM with 400 hidden units per direction, 500/100-dim MLPs
feeding the arc and relation biaffines, 0.33 dropout throughout, and
Adam at lr 0.005 with betas (0.9, 0.9) and weight decay 1e-5.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path


@dataclass
class Config:
    word_dim: int = 100
    char_emb_dim: int = 50
    char_hidden: int = 25        # per direction; token char summary = 2x
    edu_hidden: int = 75         # per direction; EDU vector = 2x
    doc_hidden: int = 400        # per direction
    doc_layers: int = 3
    arc_mlp: int = 500
    rel_mlp: int = 100
    dropout: float = 0.33
    lr: float = 0.005
    betas: tuple[float, float] = (0.9, 0.9)
    weight_decay: float = 1e-5
    batch_size: int = 15
    epochs: int = 20
    seed: int = 42
    max_edus: int = 52
    max_words: int = 46
    max_chars: int = 45
    init_scale: float = 0.01     # uniform range for embeddings
    decoder: str = "cle"         # dev-selection decoder: cle or eisner
    pretrained_embeddings: str | None = None

    def __post_init__(self) -> None:
        self.betas = tuple(self.betas)
        if self.decoder not in ("cle", "eisner"):
            raise ValueError(f"decoder must be 'cle' or 'eisner', got {self.decoder!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: Path | str) -> "Config":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: Path | str) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
