"""Shared builders for synthetic documents and on-disk corpora."""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Sequence

from discodep.corpus import Corpus, Document, Edu, ROOT_TEXT


def make_doc(
    heads: Sequence[int],
    labels: Sequence[str] | None = None,
    texts: Sequence[str] | None = None,
    doc_id: str = "doc",
) -> Document:
    n = len(heads)
    labels = tuple(labels) if labels is not None else tuple("rel" for _ in range(n))
    texts = (
        tuple(texts)
        if texts is not None
        else tuple(f"unit {d} text ." for d in range(1, n + 1))
    )
    edus = [Edu(0, ROOT_TEXT, -1, "null")]
    for d in range(1, n + 1):
        edus.append(Edu(d, texts[d - 1], int(heads[d - 1]), labels[d - 1]))
    return Document(doc_id=doc_id, edus=tuple(edus))


def doc_payload(doc: Document) -> dict:
    return {
        "root": [
            {"id": e.index, "parent": e.gold_head, "text": e.text, "relation": e.gold_relation}
            for e in doc.edus
        ]
    }


def write_corpus_dir(root: Path, corpora: dict[str, Corpus], gold_subdir: bool = True) -> Path:
    """Lay out corpora on disk in the one-JSON-per-document format."""
    for split, corpus in corpora.items():
        directory = root / split
        if gold_subdir and split != "train":
            directory = directory / "gold"
        directory.mkdir(parents=True, exist_ok=True)
        for doc in corpus.documents:
            path = directory / f"{doc.doc_id}.dep"
            path.write_text(json.dumps(doc_payload(doc)), encoding="utf-8")
    return root


def learnable_corpus(num_docs: int, seed: int, split: str = "train") -> Corpus:
    """Documents whose structure is recoverable from the words alone.

    One EDU starts with the marker "hub"; it attaches to ROOT and every
    other EDU attaches to it.  Relations are coded by the dependent's
    first word (animal vs plant markers).
    """
    rng = random.Random(seed)
    docs = []
    for i in range(num_docs):
        n = rng.randint(3, 7)
        hub = rng.randint(1, n)
        heads, labels, texts = [], [], []
        for d in range(1, n + 1):
            if d == hub:
                heads.append(0)
                labels.append("root")
                texts.append("hub anchors the discussion .")
            else:
                first = rng.choice(["cat", "dog", "fern", "moss"])
                heads.append(hub)
                labels.append("animal" if first in ("cat", "dog") else "plant")
                texts.append(f"{first} detail number {d} follows .")
        docs.append(
            make_doc(tuple(heads), tuple(labels), tuple(texts), doc_id=f"{split}{i:03d}")
        )
    return Corpus(split=split, documents=tuple(docs))
