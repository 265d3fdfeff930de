"""Score-file and tree-file interchange: exact round-trips, validation."""

import json

import numpy as np
import pytest

from discodep.decode import NEG_INF, ScoreSet
from discodep.errors import ScoreFileError
from discodep.scorefile import (
    FORMAT_VERSION,
    iter_scores,
    read_scores,
    read_trees,
    write_scores,
    write_trees,
)


def random_score_set(rng: np.random.Generator, n: int, doc_id: str, labeled: bool) -> ScoreSet:
    arc = rng.uniform(-100, 100, size=(n + 1, n + 1))
    if not labeled:
        return ScoreSet(arc_scores=arc, doc_id=doc_id)
    labels = ("elab", "attr", "cause")
    lab = rng.uniform(-10, 10, size=(n + 1, n + 1, len(labels)))
    return ScoreSet(arc_scores=arc, label_scores=lab, labels=labels, doc_id=doc_id)


class TestRoundTrip:
    def test_exact_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        entries = [
            random_score_set(rng, n, f"doc{n}{labeled}", labeled)
            for n in (1, 2, 5, 9)
            for labeled in (False, True)
        ]
        path = tmp_path / "scores.ndjson"
        assert write_scores(path, entries) == len(entries)
        back = read_scores(path)
        assert len(back) == len(entries)
        for a, b in zip(entries, back):
            assert b.doc_id == a.doc_id
            # bit-for-bit equality, including the -inf sentinels
            assert np.array_equal(a.arc_scores, b.arc_scores)
            assert (a.label_scores is None) == (b.label_scores is None)
            if a.label_scores is not None:
                assert np.array_equal(a.label_scores, b.label_scores)
                assert a.labels == b.labels

    def test_double_round_trip_is_stable(self, tmp_path):
        rng = np.random.default_rng(5)
        entries = [random_score_set(rng, 4, "d", True)]
        p1, p2 = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        write_scores(p1, entries)
        write_scores(p2, read_scores(p1))
        assert p1.read_text(encoding="utf-8") == p2.read_text(encoding="utf-8")

    def test_header_written(self, tmp_path):
        path = tmp_path / "scores.ndjson"
        write_scores(path, [])
        header = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
        assert header == {"format_version": FORMAT_VERSION}


class TestValidation:
    def write_lines(self, tmp_path, *lines: str):
        path = tmp_path / "scores.ndjson"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def test_missing_header(self, tmp_path):
        path = self.write_lines(tmp_path, json.dumps({"doc_id": "a"}))
        with pytest.raises(ScoreFileError, match="format version"):
            read_scores(path)

    def test_wrong_version(self, tmp_path):
        path = self.write_lines(tmp_path, json.dumps({"format_version": "disco-scores/9"}))
        with pytest.raises(ScoreFileError, match="format version"):
            read_scores(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "scores.ndjson"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ScoreFileError, match="empty"):
            read_scores(path)

    def test_wrong_arc_count(self, tmp_path):
        path = self.write_lines(
            tmp_path,
            json.dumps({"format_version": FORMAT_VERSION}),
            json.dumps({"doc_id": "a", "n": 2, "arc_scores": [1.0, 2.0]}),
        )
        with pytest.raises(ScoreFileError, match="9 floats"):
            read_scores(path)

    def test_wrong_label_count(self, tmp_path):
        rec = {
            "doc_id": "a",
            "n": 1,
            "arc_scores": [0.0, 0.0, 0.0, 0.0],
            "labels": ["x", "y"],
            "label_scores": [0.0] * 7,
        }
        path = self.write_lines(
            tmp_path, json.dumps({"format_version": FORMAT_VERSION}), json.dumps(rec)
        )
        with pytest.raises(ScoreFileError, match="label_scores"):
            read_scores(path)

    def test_rejects_nan_entry(self, tmp_path):
        rec = {"doc_id": "a", "n": 1, "arc_scores": [0.0, 0.0, "nan", 0.0]}
        path = self.write_lines(
            tmp_path, json.dumps({"format_version": FORMAT_VERSION}), json.dumps(rec)
        )
        with pytest.raises(ScoreFileError, match="finite float"):
            read_scores(path)

    def test_rejects_bad_n(self, tmp_path):
        rec = {"doc_id": "a", "n": 0, "arc_scores": [0.0]}
        path = self.write_lines(
            tmp_path, json.dumps({"format_version": FORMAT_VERSION}), json.dumps(rec)
        )
        with pytest.raises(ScoreFileError, match="n must be"):
            read_scores(path)

    def test_write_rejects_positive_infinity(self, tmp_path):
        scores = ScoreSet(arc_scores=np.zeros((2, 2)))
        scores.arc_scores[0, 1] = float("inf")
        with pytest.raises(ScoreFileError, match="non-finite"):
            write_scores(tmp_path / "x.ndjson", [scores])

    def test_minus_inf_spelled_as_string(self, tmp_path):
        path = tmp_path / "scores.ndjson"
        write_scores(path, [ScoreSet(arc_scores=np.zeros((2, 2)))])
        rec = json.loads(path.read_text(encoding="utf-8").splitlines()[1])
        assert rec["arc_scores"][0] == "-inf"  # column 0 sentinel
        assert "-Infinity" not in path.read_text(encoding="utf-8")

    def test_iter_is_lazy(self, tmp_path):
        path = self.write_lines(
            tmp_path,
            json.dumps({"format_version": FORMAT_VERSION}),
            json.dumps({"doc_id": "a", "n": 1, "arc_scores": [0.0, 0.0, 0.0, 0.0]}),
            "not json",
        )
        it = iter_scores(path)
        first = next(it)
        assert first.doc_id == "a"
        with pytest.raises(ScoreFileError):
            next(it)


class TestTreeFiles:
    def test_round_trip(self, tmp_path):
        entries = [
            ("a", (0, 1, 1), ("root", "elab", "elab")),
            ("b", (0,), None),
        ]
        path = tmp_path / "trees.ndjson"
        assert write_trees(path, entries) == 2
        back = read_trees(path)
        assert back == [("a", [0, 1, 1], ["root", "elab", "elab"]), ("b", [0], None)]

    def test_version_checked(self, tmp_path):
        path = tmp_path / "trees.ndjson"
        path.write_text(json.dumps({"format_version": "nope"}) + "\n", encoding="utf-8")
        with pytest.raises(ScoreFileError, match="format version"):
            read_trees(path)

    def test_label_arity_checked(self, tmp_path):
        path = tmp_path / "trees.ndjson"
        path.write_text(
            json.dumps({"format_version": "disco-trees/1"})
            + "\n"
            + json.dumps({"doc_id": "a", "heads": [0, 1], "labels": ["x"]})
            + "\n",
            encoding="utf-8",
        )
        with pytest.raises(ScoreFileError, match="labels"):
            read_trees(path)
