"""Shared builders for the scorer tests."""

from __future__ import annotations

import json
import random
import shutil
from pathlib import Path

import pytest

from biaffine_scorer.config import Config
from biaffine_scorer.formats import DumpDocument, DumpEdu, Vocabulary

DECODER = shutil.which("discodep")

needs_decoder = pytest.mark.skipif(
    DECODER is None, reason="decoder CLI (discodep) not on PATH"
)


def tiny_config(**overrides) -> Config:
    """Small dimensions so forward passes stay fast in tests."""
    base = dict(
        word_dim=12,
        char_emb_dim=8,
        char_hidden=5,
        edu_hidden=7,
        doc_hidden=9,
        doc_layers=2,
        arc_mlp=11,
        rel_mlp=6,
        dropout=0.0,
        lr=0.005,
        batch_size=4,
        epochs=2,
        seed=42,
        max_edus=52,
        max_words=46,
        max_chars=45,
    )
    base.update(overrides)
    return Config(**base)


def make_doc(doc_id: str, heads: list[int], relations: list[str] | None = None,
             token_lists: list[tuple[str, ...]] | None = None) -> DumpDocument:
    n = len(heads)
    if relations is None:
        relations = ["root" if h == 0 else "elab" for h in heads]
    if token_lists is None:
        token_lists = [(f"word{i}", "filler", ".") for i in range(1, n + 1)]
    edus = [DumpEdu("ROOT", (), -1, "null")]
    for i in range(n):
        edus.append(DumpEdu(" ".join(token_lists[i]), tuple(token_lists[i]), heads[i], relations[i]))
    return DumpDocument(doc_id=doc_id, edus=tuple(edus))


def build_vocab(docs: list[DumpDocument]) -> Vocabulary:
    """First-occurrence id maps with the reserved symbols in front."""
    words = {"<pad>": 0, "<unk>": 1, "<root>": 2}
    chars = {"<pad>": 0, "<unk>": 1, "<root>": 2}
    relations = {"<pad>": 0, "<unk>": 1, "<root>": 2}
    for doc in docs:
        for edu in doc.edus[1:]:
            relations.setdefault(edu.relation, len(relations))
            for token in edu.tokens:
                words.setdefault(token, len(words))
                for ch in token:
                    chars.setdefault(ch, len(chars))
    return Vocabulary(word_to_id=words, char_to_id=chars, relation_to_id=relations)


def synth_docs(num_docs: int = 10, seed: int = 5) -> list[DumpDocument]:
    """Small memorizable set: distinct token draws per EDU, random trees."""
    rng = random.Random(seed)
    lexicon = [f"tok{i}" for i in range(40)]
    docs = []
    for idx in range(num_docs):
        n = rng.randint(4, 6)
        heads = [0 if i == 1 else rng.randrange(0, i) for i in range(1, n + 1)]
        relations = ["root" if h == 0 else rng.choice(["alpha", "beta"]) for h in heads]
        token_lists = [
            tuple(rng.choice(lexicon) for _ in range(rng.randint(2, 4))) for _ in range(n)
        ]
        docs.append(make_doc(f"synth{idx:02d}", heads, relations, token_lists))
    return docs


def memorize_config(**overrides) -> Config:
    """Capacity and schedule that memorize synth_docs() comfortably."""
    base = dict(
        word_dim=32,
        char_emb_dim=16,
        char_hidden=8,
        edu_hidden=24,
        doc_hidden=48,
        doc_layers=2,
        arc_mlp=64,
        rel_mlp=24,
        dropout=0.0,
        lr=0.01,
        epochs=60,
        batch_size=5,
        seed=3,
    )
    base.update(overrides)
    return Config(**base)


def write_corpus_tree(root: Path, split_docs: dict[str, list[DumpDocument]]) -> Path:
    """Write raw corpus files in the layout the toolkit CLI ingests."""
    for split, docs in split_docs.items():
        split_dir = root / split if split == "train" else root / split / "gold"
        split_dir.mkdir(parents=True, exist_ok=True)
        for doc in docs:
            records = [{"id": 0, "parent": -1, "text": "ROOT", "relation": "null"}]
            for i, edu in enumerate(doc.edus[1:], start=1):
                records.append(
                    {"id": i, "parent": edu.parent, "text": edu.text, "relation": edu.relation}
                )
            path = split_dir / f"{doc.doc_id}.dep"
            path.write_text(json.dumps({"root": records}), encoding="utf-8")
    return root
