"""Readers and writers for the discodep interchange contracts.

These implement the published file formats directly; the toolchain is
consumed at the format/CLI boundary, never through its internals:

- "disco-docs/1": one JSON object with a ``documents`` array; each
  document wraps EDU records (``text``, ``parent``, ``relation``, and
  per-EDU ``tokens`` when dumped with token lists).
- "disco-vocab/1": word/char/relation id maps with reserved ids
  <pad>=0, <unk>=1, <root>=2.
- "disco-scores/1": NDJSON, header line carrying the format version,
  then one record per document with flat row-major ``arc_scores`` of
  (n+1)^2 floats (optionally ``labels`` + ``label_scores``); finite
  floats are JSON numbers, -inf is the string "-inf".
- "disco-trees/1": NDJSON of decoded trees (``doc_id``, ``heads``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from biaffine_scorer.errors import DataError

DOCS_VERSION = "disco-docs/1"
VOCAB_VERSION = "disco-vocab/1"
SCORES_VERSION = "disco-scores/1"
TREES_VERSION = "disco-trees/1"

PAD_ID, UNK_ID, ROOT_ID = 0, 1, 2
NEG_INF = float("-inf")


@dataclass(frozen=True)
class DumpEdu:
    text: str
    tokens: tuple[str, ...]
    parent: int
    relation: str


@dataclass(frozen=True)
class DumpDocument:
    doc_id: str
    edus: tuple[DumpEdu, ...]  # position 0 is ROOT

    @property
    def n(self) -> int:
        return len(self.edus) - 1

    @property
    def heads(self) -> tuple[int, ...]:
        return tuple(e.parent for e in self.edus[1:])

    @property
    def relations(self) -> tuple[str, ...]:
        return tuple(e.relation for e in self.edus[1:])


def read_docs(path: Path | str) -> list[DumpDocument]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: malformed JSON: {e.msg}") from e
    version = payload.get("format_version") if isinstance(payload, dict) else None
    if version != DOCS_VERSION:
        raise DataError(f"{path}: format version {version!r} != {DOCS_VERSION!r}")
    docs = []
    for at, rec in enumerate(payload.get("documents", [])):
        doc_id = str(rec.get("doc_id", f"doc{at}"))
        records = rec.get("root")
        if not isinstance(records, list) or len(records) < 2:
            raise DataError(f"{doc_id}: needs a root array with ROOT plus >= 1 EDU")
        edus = []
        for i, edu in enumerate(records):
            try:
                text = str(edu["text"])
                parent = int(edu["parent"])
                relation = str(edu["relation"])
            except (KeyError, TypeError, ValueError) as e:
                raise DataError(f"{doc_id}: EDU {i} lacks text/parent/relation: {e}") from e
            tokens = edu.get("tokens")
            if tokens is None:
                raise DataError(
                    f"{doc_id}: EDU {i} has no tokens; dump the corpus with token lists"
                )
            edus.append(
                DumpEdu(
                    text=text,
                    tokens=tuple(str(t) for t in tokens),
                    parent=parent,
                    relation=relation,
                )
            )
        if edus[0].parent != -1:
            raise DataError(f"{doc_id}: EDU 0 must be ROOT with parent -1")
        n = len(edus) - 1
        for i, edu in enumerate(edus[1:], start=1):
            if not 0 <= edu.parent <= n or edu.parent == i:
                raise DataError(f"{doc_id}: EDU {i} has invalid head {edu.parent}")
        docs.append(DumpDocument(doc_id=doc_id, edus=tuple(edus)))
    if not docs:
        raise DataError(f"{path}: dump holds no documents")
    return docs


@dataclass(frozen=True)
class Vocabulary:
    word_to_id: dict[str, int]
    char_to_id: dict[str, int]
    relation_to_id: dict[str, int]

    @property
    def relations(self) -> tuple[str, ...]:
        """Non-reserved relation labels in id order."""
        inverse = {i: r for r, i in self.relation_to_id.items()}
        return tuple(inverse[i] for i in range(3, len(inverse)))

    @property
    def word_size(self) -> int:
        """Embedding table size covering every word id."""
        return max(self.word_to_id.values()) + 1

    @property
    def char_size(self) -> int:
        return max(self.char_to_id.values()) + 1

    def word_id(self, token: str) -> int:
        return self.word_to_id.get(token, UNK_ID)

    def char_id(self, ch: str) -> int:
        return self.char_to_id.get(ch, UNK_ID)


def read_vocab(path: Path | str) -> Vocabulary:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: malformed JSON: {e.msg}") from e
    version = payload.get("format_version") if isinstance(payload, dict) else None
    if version != VOCAB_VERSION:
        raise DataError(f"{path}: format version {version!r} != {VOCAB_VERSION!r}")
    vocab = Vocabulary(
        word_to_id=dict(payload["word_to_id"]),
        char_to_id=dict(payload["char_to_id"]),
        relation_to_id=dict(payload["relation_to_id"]),
    )
    for table_name in ("word_to_id", "char_to_id", "relation_to_id"):
        table = getattr(vocab, table_name)
        for sym, want in (("<pad>", PAD_ID), ("<unk>", UNK_ID), ("<root>", ROOT_ID)):
            if table.get(sym) != want:
                raise DataError(f"{path}: {table_name} lacks reserved {sym!r} -> {want}")
    return vocab


def _encode_floats(values: np.ndarray) -> list:
    out: list = []
    for v in values.ravel().tolist():
        if v == NEG_INF:
            out.append("-inf")
        elif math.isfinite(v):
            out.append(v)
        else:
            raise DataError(f"cannot encode non-finite score {v!r}")
    return out


def write_scores(
    path: Path | str,
    entries: Iterable[tuple[str, np.ndarray, tuple[str, ...] | None, np.ndarray | None]],
) -> int:
    """Write (doc_id, arc matrix, labels, label tensor) records.

    Arc matrices are (n+1, n+1) with -inf sentinels already in place;
    label tensors, when given, are (n+1, n+1, R).
    """
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format_version": SCORES_VERSION}) + "\n")
        for doc_id, arc, labels, label_scores in entries:
            arc = np.asarray(arc, dtype=np.float64)
            n = arc.shape[0] - 1
            if arc.shape != (n + 1, n + 1) or n < 1:
                raise DataError(f"{doc_id}: arc matrix must be square with n >= 1")
            record: dict = {"doc_id": doc_id, "n": n, "arc_scores": _encode_floats(arc)}
            if labels is not None or label_scores is not None:
                if labels is None or label_scores is None:
                    raise DataError(f"{doc_id}: labels and label_scores go together")
                label_scores = np.asarray(label_scores, dtype=np.float64)
                if label_scores.shape != (n + 1, n + 1, len(labels)):
                    raise DataError(f"{doc_id}: label tensor shape mismatch")
                record["labels"] = list(labels)
                record["label_scores"] = _encode_floats(label_scores)
            fh.write(json.dumps(record) + "\n")
            count += 1
    return count


def read_trees(path: Path | str) -> list[tuple[str, list[int]]]:
    out: list[tuple[str, list[int]]] = []
    with open(path, "r", encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line) if header_line.strip() else None
        except json.JSONDecodeError as e:
            raise DataError(f"{path}: malformed header: {e.msg}") from e
        version = header.get("format_version") if isinstance(header, dict) else None
        if version != TREES_VERSION:
            raise DataError(f"{path}: format version {version!r} != {TREES_VERSION!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"{path}:{lineno}: malformed JSON: {e.msg}") from e
            doc_id = str(rec.get("doc_id", f"line{lineno}"))
            heads = rec.get("heads")
            if not isinstance(heads, list) or not heads:
                raise DataError(f"{doc_id}: heads must be a non-empty list")
            out.append((doc_id, [int(h) for h in heads]))
    return out
