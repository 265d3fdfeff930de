"""Shared fixtures.

Checks that need the real corpus locate it through the SCIDTB_DIR
environment variable and skip with an explicit reason when it is not
available.
"""

from __future__ import annotations

import os
from pathlib import Path

import pytest

from helpers import learnable_corpus, write_corpus_dir


@pytest.fixture(scope="session")
def scidtb_dir() -> Path:
    path = os.environ.get("SCIDTB_DIR")
    if not path:
        pytest.skip(
            "SCIDTB_DIR is not set; point it at the corpus root "
            "(train/, dev/gold/, test/gold/) to run real-corpus checks"
        )
    root = Path(path)
    if not (root / "train").is_dir():
        pytest.skip(f"SCIDTB_DIR={root} has no train/ subdirectory")
    return root


@pytest.fixture(scope="session")
def toy_corpus_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("toycorpus")
    corpora = {
        "train": learnable_corpus(40, seed=11, split="train"),
        "dev": learnable_corpus(12, seed=22, split="dev"),
        "test": learnable_corpus(12, seed=33, split="test"),
    }
    return write_corpus_dir(root, corpora)
