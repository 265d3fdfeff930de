"""Neural biaffine arc scorer for discourse dependency documents.

Consumes the discodep toolchain strictly through its file formats and
CLI: documents arrive as a "disco-docs/1" dump (with token lists),
vocabularies as "disco-vocab/1" files, and the trained model emits
"disco-scores/1" score matrices that any compatible decoder can
consume.  Dev-set model selection shells out to ``discodep decode``.
"""

from biaffine_scorer.config import Config
from biaffine_scorer.errors import BiaffineError, DataError
from biaffine_scorer.formats import (
    DumpDocument,
    Vocabulary,
    read_docs,
    read_trees,
    read_vocab,
    write_scores,
)
from biaffine_scorer.model import BiaffineScorer
from biaffine_scorer.train import load_checkpoint, score_documents, train

__version__ = "0.1.0"

__all__ = [
    "BiaffineError",
    "BiaffineScorer",
    "Config",
    "DataError",
    "DumpDocument",
    "Vocabulary",
    "load_checkpoint",
    "read_docs",
    "read_trees",
    "read_vocab",
    "score_documents",
    "train",
    "write_scores",
    "__version__",
]
