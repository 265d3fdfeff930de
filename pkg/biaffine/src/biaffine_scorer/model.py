"""Neural arc and relation scorer.

Token vectors concatenate a word embedding with the final states of a
character BiLSTM.  A word-level BiLSTM summarizes each EDU into its
final states, a deep document BiLSTM contextualizes the EDU sequence,
and biaffine attention over MLP-projected head and dependent vectors
produces arc scores plus relation scores at chosen heads.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn.functional as F
from torch import nn

from biaffine_scorer.config import Config
from biaffine_scorer.data import Batch
from biaffine_scorer.errors import DataError


class ArcBiaffine(nn.Module):
    """Bilinear head/dependent compatibility with a head-only bias."""

    def __init__(self, dim: int):
        super().__init__()
        self.weight = nn.Parameter(torch.zeros(dim, dim))
        self.bias = nn.Parameter(torch.zeros(dim))

    def forward(self, head: torch.Tensor, dep: torch.Tensor) -> torch.Tensor:
        # head, dep (D, E, x) -> scores (D, E, E) with rows heads, cols dependents
        pair = torch.einsum("bhx,xy,bdy->bhd", head, self.weight, dep)
        return pair + (head @ self.bias).unsqueeze(2)


class RelBiaffine(nn.Module):
    """Per-relation bilinear form over ones-augmented vectors.

    The appended constant coordinate folds linear head, linear
    dependent, and bias terms into one (R, x+1, x+1) tensor.
    """

    def __init__(self, dim: int, num_relations: int):
        super().__init__()
        self.weight = nn.Parameter(torch.zeros(num_relations, dim + 1, dim + 1))

    @staticmethod
    def _augment(x: torch.Tensor) -> torch.Tensor:
        return torch.cat([x, torch.ones_like(x[..., :1])], dim=-1)

    def pairs(self, head: torch.Tensor, dep: torch.Tensor) -> torch.Tensor:
        # aligned head/dep vectors (..., x) -> (..., R)
        h = self._augment(head)
        d = self._augment(dep)
        return torch.einsum("...x,rxy,...y->...r", h, self.weight, d)

    def full(self, head: torch.Tensor, dep: torch.Tensor) -> torch.Tensor:
        # head (E, x), dep (E, x) -> (E, E, R) over all pairs
        h = self._augment(head)
        d = self._augment(dep)
        return torch.einsum("hx,rxy,dy->hdr", h, self.weight, d)


@dataclass
class ScorerOutput:
    arc_scores: torch.Tensor  # (D, E, E) rows heads, cols dependents
    rel_head: torch.Tensor    # (D, E, rel_mlp)
    rel_dep: torch.Tensor     # (D, E, rel_mlp)


def _final_states(lstm: nn.LSTM, emb: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
    # emb (N, L, X) with lengths >= 1; concatenated last-layer final states (N, 2H)
    packed = nn.utils.rnn.pack_padded_sequence(
        emb, lengths.cpu(), batch_first=True, enforce_sorted=False
    )
    _, (h_n, _) = lstm(packed)
    return torch.cat([h_n[-2], h_n[-1]], dim=-1)


def _mlp(in_dim: int, out_dim: int, dropout: float) -> nn.Sequential:
    return nn.Sequential(nn.Linear(in_dim, out_dim), nn.ReLU(), nn.Dropout(dropout))


class BiaffineScorer(nn.Module):
    def __init__(self, cfg: Config, num_words: int, num_chars: int, num_relations: int):
        super().__init__()
        if num_relations < 1:
            raise DataError("vocabulary defines no relation labels")
        self.cfg = cfg
        self.num_words = num_words
        self.num_chars = num_chars
        self.num_relations = num_relations
        self.word_embedding = nn.Embedding(num_words, cfg.word_dim)
        self.char_embedding = nn.Embedding(num_chars, cfg.char_emb_dim)
        self.char_lstm = nn.LSTM(
            cfg.char_emb_dim, cfg.char_hidden, batch_first=True, bidirectional=True
        )
        token_dim = cfg.word_dim + 2 * cfg.char_hidden
        self.edu_lstm = nn.LSTM(
            token_dim, cfg.edu_hidden, batch_first=True, bidirectional=True
        )
        edu_dim = 2 * cfg.edu_hidden
        self.doc_lstm = nn.LSTM(
            edu_dim,
            cfg.doc_hidden,
            num_layers=cfg.doc_layers,
            batch_first=True,
            bidirectional=True,
            dropout=cfg.dropout if cfg.doc_layers > 1 else 0.0,
        )
        ctx_dim = 2 * cfg.doc_hidden
        self.arc_head_mlp = _mlp(ctx_dim, cfg.arc_mlp, cfg.dropout)
        self.arc_dep_mlp = _mlp(ctx_dim, cfg.arc_mlp, cfg.dropout)
        self.rel_head_mlp = _mlp(ctx_dim, cfg.rel_mlp, cfg.dropout)
        self.rel_dep_mlp = _mlp(ctx_dim, cfg.rel_mlp, cfg.dropout)
        self.arc_biaffine = ArcBiaffine(cfg.arc_mlp)
        self.rel_biaffine = RelBiaffine(cfg.rel_mlp, num_relations)
        self.dropout = nn.Dropout(cfg.dropout)
        self._init_weights()

    def _init_weights(self) -> None:
        s = self.cfg.init_scale
        for emb in (self.word_embedding, self.char_embedding):
            nn.init.uniform_(emb.weight, -s, s)
            with torch.no_grad():
                emb.weight[0].zero_()
        for mlp in (self.arc_head_mlp, self.arc_dep_mlp, self.rel_head_mlp, self.rel_dep_mlp):
            nn.init.xavier_uniform_(mlp[0].weight)
            nn.init.zeros_(mlp[0].bias)

    def load_pretrained(self, path: str, word_to_id: dict[str, int]) -> int:
        """Overwrite embedding rows from a whitespace text file; returns hits."""
        hits = 0
        with torch.no_grad():
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    parts = line.rstrip("\n").split(" ")
                    if len(parts) != self.cfg.word_dim + 1:
                        continue
                    idx = word_to_id.get(parts[0])
                    if idx is None:
                        continue
                    vec = torch.tensor([float(v) for v in parts[1:]])
                    self.word_embedding.weight[idx] = vec
                    hits += 1
        return hits

    def encode(self, batch: Batch) -> torch.Tensor:
        D, E, W, _ = batch.chars.shape
        token_mask = batch.char_counts > 0
        flat_chars = batch.chars[token_mask]
        char_emb = self.char_embedding(flat_chars)
        char_vec = _final_states(self.char_lstm, char_emb, batch.char_counts[token_mask])
        char_repr = char_vec.new_zeros(D, E, W, char_vec.size(-1))
        char_repr[token_mask] = char_vec
        word_emb = self.word_embedding(batch.words)
        token = self.dropout(torch.cat([word_emb, char_repr], dim=-1))
        edu_mask = batch.word_counts > 0
        edu_vec = _final_states(self.edu_lstm, token[edu_mask], batch.word_counts[edu_mask])
        edu_repr = edu_vec.new_zeros(D, E, edu_vec.size(-1))
        edu_repr[edu_mask] = edu_vec
        edu_repr = self.dropout(edu_repr)
        packed = nn.utils.rnn.pack_padded_sequence(
            edu_repr, batch.doc_lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        ctx_packed, _ = self.doc_lstm(packed)
        ctx, _ = nn.utils.rnn.pad_packed_sequence(
            ctx_packed, batch_first=True, total_length=E
        )
        return self.dropout(ctx)

    def forward(self, batch: Batch) -> ScorerOutput:
        ctx = self.encode(batch)
        arc_scores = self.arc_biaffine(self.arc_head_mlp(ctx), self.arc_dep_mlp(ctx))
        return ScorerOutput(
            arc_scores=arc_scores,
            rel_head=self.rel_head_mlp(ctx),
            rel_dep=self.rel_dep_mlp(ctx),
        )

    def loss(self, batch: Batch) -> tuple[torch.Tensor, dict]:
        out = self(batch)
        D, E = batch.heads.shape
        valid_head = torch.arange(E).unsqueeze(0) < batch.doc_lengths.unsqueeze(1)
        logits = out.arc_scores.transpose(1, 2)  # (D, E_dep, E_head)
        logits = logits.masked_fill(~valid_head.unsqueeze(1), float("-inf"))
        dep_mask = batch.heads >= 0
        arc_loss = F.cross_entropy(logits[dep_mask], batch.heads[dep_mask])
        gold = batch.heads.clamp(min=0)
        index = gold.unsqueeze(-1).expand(-1, -1, out.rel_head.size(-1))
        head_at_gold = out.rel_head.gather(1, index)
        rel_logits = self.rel_biaffine.pairs(head_at_gold, out.rel_dep)
        rel_mask = batch.rel_ids >= 0
        if rel_mask.any():
            rel_loss = F.cross_entropy(rel_logits[rel_mask], batch.rel_ids[rel_mask])
        else:
            rel_loss = arc_loss.new_zeros(())
        total = arc_loss + rel_loss
        stats = {
            "arc_loss": float(arc_loss.detach()),
            "rel_loss": float(rel_loss.detach()),
            "edus": int(dep_mask.sum()),
        }
        return total, stats
