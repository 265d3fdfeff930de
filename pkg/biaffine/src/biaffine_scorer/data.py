"""Tensorization and dynamic batching.

Each document becomes id tensors over positions 0..n where position 0
is ROOT, represented by the reserved <root> word with a single <root>
pseudo-character.  Words and characters are truncated at the config
caps; batches pad to the longest member and carry explicit lengths so
packed LSTM runs are padding-invariant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import torch

from biaffine_scorer.config import Config
from biaffine_scorer.errors import DataError
from biaffine_scorer.formats import ROOT_ID, DumpDocument, Vocabulary


@dataclass
class TensorDoc:
    doc_id: str
    n: int
    word_ids: list[list[int]]        # per EDU (position 0 = ROOT)
    char_ids: list[list[list[int]]]  # per EDU, per token
    heads: list[int]                 # gold head per EDU 1..n
    rel_ids: list[int]               # gold relation index per EDU 1..n (-1 if unknown)


def tensorize(
    docs: list[DumpDocument], vocab: Vocabulary, cfg: Config
) -> list[TensorDoc]:
    rel_index = {rel: i for i, rel in enumerate(vocab.relations)}
    out = []
    for doc in docs:
        if doc.n + 1 > cfg.max_edus:
            raise DataError(
                f"{doc.doc_id}: {doc.n + 1} positions exceed the {cfg.max_edus}-EDU cap"
            )
        word_ids: list[list[int]] = [[ROOT_ID]]
        char_ids: list[list[list[int]]] = [[[ROOT_ID]]]
        for edu in doc.edus[1:]:
            tokens = list(edu.tokens[: cfg.max_words]) or ["<empty>"]
            word_ids.append([vocab.word_id(t) for t in tokens])
            char_ids.append(
                [[vocab.char_id(c) for c in t[: cfg.max_chars]] or [ROOT_ID] for t in tokens]
            )
        out.append(
            TensorDoc(
                doc_id=doc.doc_id,
                n=doc.n,
                word_ids=word_ids,
                char_ids=char_ids,
                heads=list(doc.heads),
                rel_ids=[rel_index.get(rel, -1) for rel in doc.relations],
            )
        )
    return out


@dataclass
class Batch:
    doc_ids: list[str]
    ns: list[int]
    words: torch.Tensor        # (D, E, W) long
    chars: torch.Tensor        # (D, E, W, C) long
    word_counts: torch.Tensor  # (D, E) tokens per EDU, 0 marks padding EDUs
    char_counts: torch.Tensor  # (D, E, W) chars per token, 0 marks padding tokens
    doc_lengths: torch.Tensor  # (D,) positions incl. ROOT
    heads: torch.Tensor        # (D, E) gold head per position, -1 for ROOT/padding
    rel_ids: torch.Tensor      # (D, E) gold relation index, -1 for ROOT/padding

    @property
    def size(self) -> int:
        return len(self.doc_ids)


def collate(docs: list[TensorDoc]) -> Batch:
    D = len(docs)
    E = max(doc.n + 1 for doc in docs)
    W = max(len(words) for doc in docs for words in doc.word_ids)
    C = max(len(cs) for doc in docs for tok in doc.char_ids for cs in tok)
    words = torch.zeros((D, E, W), dtype=torch.long)
    chars = torch.zeros((D, E, W, C), dtype=torch.long)
    word_counts = torch.zeros((D, E), dtype=torch.long)
    char_counts = torch.zeros((D, E, W), dtype=torch.long)
    heads = torch.full((D, E), -1, dtype=torch.long)
    rel_ids = torch.full((D, E), -1, dtype=torch.long)
    doc_lengths = torch.zeros(D, dtype=torch.long)
    for b, doc in enumerate(docs):
        doc_lengths[b] = doc.n + 1
        for e, token_ids in enumerate(doc.word_ids):
            word_counts[b, e] = len(token_ids)
            words[b, e, : len(token_ids)] = torch.tensor(token_ids, dtype=torch.long)
            for w, cs in enumerate(doc.char_ids[e]):
                char_counts[b, e, w] = len(cs)
                chars[b, e, w, : len(cs)] = torch.tensor(cs, dtype=torch.long)
        heads[b, 1 : doc.n + 1] = torch.tensor(doc.heads, dtype=torch.long)
        rel_ids[b, 1 : doc.n + 1] = torch.tensor(doc.rel_ids, dtype=torch.long)
    return Batch(
        doc_ids=[d.doc_id for d in docs],
        ns=[d.n for d in docs],
        words=words,
        chars=chars,
        word_counts=word_counts,
        char_counts=char_counts,
        doc_lengths=doc_lengths,
        heads=heads,
        rel_ids=rel_ids,
    )


def batches(
    docs: list[TensorDoc],
    batch_size: int,
    shuffle: bool = False,
    rng: random.Random | None = None,
) -> list[Batch]:
    order = list(range(len(docs)))
    if shuffle:
        (rng or random.Random()).shuffle(order)
    return [
        collate([docs[i] for i in order[at : at + batch_size]])
        for at in range(0, len(order), batch_size)
    ]
