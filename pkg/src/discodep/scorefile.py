"""NDJSON interchange for per-document score matrices ("disco-scores/1").

Line 1 is a header object carrying ``format_version``; every following
line is one document: ``doc_id``, ``n``, a row-major flat ``arc_scores``
list of (n+1)^2 floats, and optionally ``labels`` plus a flat
``label_scores`` list of (n+1)^2 * R floats.  Finite floats are written
as JSON numbers (repr round-trip, so values survive exactly); -inf is
written as the string "-inf" because JSON has no literal for it.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from discodep.errors import ScoreFileError
from discodep.decode import NEG_INF, ScoreSet

FORMAT_VERSION = "disco-scores/1"


def _encode_floats(values: np.ndarray) -> list:
    out: list = []
    for v in values.ravel().tolist():
        if v == NEG_INF:
            out.append("-inf")
        elif math.isfinite(v):
            out.append(v)
        else:
            raise ScoreFileError(f"cannot encode non-finite score {v!r}")
    return out

def _decode_floats(values: list, count: int, what: str, doc_id: str) -> np.ndarray:
    if not isinstance(values, list) or len(values) != count:
        got = len(values) if isinstance(values, list) else type(values).__name__
        raise ScoreFileError(f"{doc_id}: {what} must be a flat list of {count} floats, got {got}")
    out = np.empty(count, dtype=np.float64)
    for i, v in enumerate(values):
        if v == "-inf":
            out[i] = NEG_INF
        elif isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v):
            out[i] = float(v)
        else:
            raise ScoreFileError(f"{doc_id}: {what}[{i}] is not a finite float or \"-inf\": {v!r}")
    return out


def write_scores(path: Path | str, entries: Iterable[ScoreSet]) -> int:
    """Write ScoreSets to an NDJSON file; returns the document count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format_version": FORMAT_VERSION}) + "\n")
        for scores in entries:
            record: dict = {
                "doc_id": scores.doc_id,
                "n": scores.n,
                "arc_scores": _encode_floats(scores.arc_scores),
            }
            if scores.label_scores is not None:
                record["labels"] = list(scores.labels)
                record["label_scores"] = _encode_floats(scores.label_scores)
            fh.write(json.dumps(record) + "\n")
            count += 1
    return count


def iter_scores(path: Path | str) -> Iterator[ScoreSet]:
    """Stream ScoreSets from an NDJSON file, validating dimensions."""
    with open(path, "r", encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line.strip():
            raise ScoreFileError(f"{path}: empty score file")
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as e:
            raise ScoreFileError(f"{path}: malformed header: {e.msg}") from e
        version = header.get("format_version") if isinstance(header, dict) else None
        if version != FORMAT_VERSION:
            raise ScoreFileError(f"{path}: format version {version!r} != {FORMAT_VERSION!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise ScoreFileError(f"{path}:{lineno}: malformed JSON: {e.msg}") from e
            if not isinstance(rec, dict):
                raise ScoreFileError(f"{path}:{lineno}: document record must be an object")
            doc_id = str(rec.get("doc_id", f"line{lineno}"))
            try:
                n = int(rec["n"])
            except (KeyError, TypeError, ValueError):
                raise ScoreFileError(f"{doc_id}: missing or non-integer n") from None
            if n < 1:
                raise ScoreFileError(f"{doc_id}: n must be >= 1, got {n}")
            size = n + 1
            arc = _decode_floats(rec.get("arc_scores"), size * size, "arc_scores", doc_id)
            arc = arc.reshape(size, size)
            labels = rec.get("labels")
            label_scores = None
            if labels is not None or "label_scores" in rec:
                if not isinstance(labels, list) or not labels:
                    raise ScoreFileError(f"{doc_id}: labels must be a non-empty list")
                labels = tuple(str(lab) for lab in labels)
                flat = _decode_floats(
                    rec.get("label_scores"), size * size * len(labels), "label_scores", doc_id
                )
                label_scores = flat.reshape(size, size, len(labels))
            yield ScoreSet(
                arc_scores=arc, label_scores=label_scores, labels=labels, doc_id=doc_id
            )


def read_scores(path: Path | str) -> list[ScoreSet]:
    return list(iter_scores(path))


TREES_VERSION = "disco-trees/1"


def write_trees(path: Path | str, entries: Iterable[tuple[str, Sequence[int], Sequence[str] | None]]) -> int:
    """Write predicted trees as NDJSON (doc_id, heads, optional labels)."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format_version": TREES_VERSION}) + "\n")
        for doc_id, heads, labels in entries:
            rec: dict = {"doc_id": doc_id, "heads": [int(h) for h in heads]}
            if labels is not None:
                rec["labels"] = [str(lab) for lab in labels]
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            count += 1
    return count


def read_trees(path: Path | str) -> list[tuple[str, list[int], list[str] | None]]:
    """Read a predicted-trees NDJSON file back as (doc_id, heads, labels)."""
    out: list[tuple[str, list[int], list[str] | None]] = []
    with open(path, "r", encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line) if header_line.strip() else None
        except json.JSONDecodeError as e:
            raise ScoreFileError(f"{path}: malformed header: {e.msg}") from e
        version = header.get("format_version") if isinstance(header, dict) else None
        if version != TREES_VERSION:
            raise ScoreFileError(f"{path}: format version {version!r} != {TREES_VERSION!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise ScoreFileError(f"{path}:{lineno}: malformed JSON: {e.msg}") from e
            doc_id = str(rec.get("doc_id", f"line{lineno}"))
            heads = rec.get("heads")
            if not isinstance(heads, list) or not heads:
                raise ScoreFileError(f"{doc_id}: heads must be a non-empty list")
            try:
                heads = [int(h) for h in heads]
            except (TypeError, ValueError):
                raise ScoreFileError(f"{doc_id}: heads must be integers") from None
            labels = rec.get("labels")
            if labels is not None:
                if not isinstance(labels, list) or len(labels) != len(heads):
                    raise ScoreFileError(f"{doc_id}: labels must match heads in length")
                labels = [str(lab) for lab in labels]
            out.append((doc_id, heads, labels))
    return out
