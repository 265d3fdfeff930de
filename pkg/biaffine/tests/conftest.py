import os
import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bhelpers import DECODER, make_doc, synth_docs, write_corpus_tree


def _dump(corpus_dir: Path, split: str, out_dir: Path, vocab: bool = False) -> None:
    args = [
        DECODER, "dump", str(corpus_dir), "--split", split,
        "--docs", str(out_dir / f"{split}.docs.json"), "--tokens",
    ]
    if vocab:
        args += ["--vocab", str(out_dir / "vocab.json")]
    subprocess.run(args, check=True, capture_output=True)


@pytest.fixture(scope="session")
def toy_dump(tmp_path_factory):
    """Toy corpus dumped through the toolkit CLI: docs and vocab paths."""
    if DECODER is None:
        pytest.skip("decoder CLI (discodep) not on PATH")
    root = tmp_path_factory.mktemp("toy_corpus")
    out = tmp_path_factory.mktemp("toy_dump")
    train = synth_docs(num_docs=8, seed=21)
    dev = [
        make_doc(f"dev{i:02d}", heads)
        for i, heads in enumerate([[0, 1, 2], [0, 3, 0, 1], [0, 1, 1]])
    ]
    test = [make_doc("test00", [0, 1])]
    write_corpus_tree(root, {"train": train, "dev": dev, "test": test})
    _dump(root, "train", out, vocab=True)
    _dump(root, "dev", out)
    return {
        "corpus": root,
        "train_docs": out / "train.docs.json",
        "dev_docs": out / "dev.docs.json",
        "vocab": out / "vocab.json",
    }


@pytest.fixture(scope="session")
def scidtb_dump(tmp_path_factory):
    """Real corpus dumped through the toolkit CLI; skips without SCIDTB_DIR."""
    corpus_dir = os.environ.get("SCIDTB_DIR")
    if not corpus_dir:
        pytest.skip("set SCIDTB_DIR to run corpus-dependent checks")
    if DECODER is None:
        pytest.skip("decoder CLI (discodep) not on PATH")
    out = tmp_path_factory.mktemp("scidtb_dump")
    _dump(Path(corpus_dir), "train", out, vocab=True)
    _dump(Path(corpus_dir), "dev", out)
    _dump(Path(corpus_dir), "test", out)
    return {
        "corpus": Path(corpus_dir),
        "train_docs": out / "train.docs.json",
        "dev_docs": out / "dev.docs.json",
        "test_docs": out / "test.docs.json",
        "vocab": out / "vocab.json",
    }
