"""Discourse dependency parsing toolkit.

Documents are sequences of elementary discourse units (EDUs) attached to
one another (or to the artificial ROOT at position 0) by labeled arcs.
The package loads corpora in the one-JSON-file-per-document format,
scores candidate arcs with a trainable sparse linear model, decodes the
best projective or unrestricted tree, and evaluates attachment accuracy
and tree-shape statistics.  Score matrices travel between tools in an
NDJSON interchange format, so external scorers can plug into the same
decoders and metrics.
"""

from discodep.corpus import (
    Corpus,
    Document,
    Edu,
    Vocab,
    build_vocab,
    load_document,
    load_split,
)
from discodep.decode import (
    ScoreSet,
    assign_labels,
    cle_decode,
    eisner_decode,
    tree_score,
)
from discodep.errors import (
    CorpusError,
    DecodeError,
    DiscodepError,
    EvalError,
    ModelError,
    ScoreFileError,
    TreeError,
)
from discodep.evaluate import EvalReport, attachment_scores, structure_metrics
from discodep.linear import LinearModel, TrainConfig, train_linear
from discodep.scorefile import read_scores, read_trees, write_scores, write_trees
from discodep.trees import (
    ComplexityReport,
    DepTree,
    complexity_census,
    edge_degree,
    gap_degree,
    is_projective,
    leaf_proportion,
    max_path_length,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "Edu",
    "Vocab",
    "build_vocab",
    "load_document",
    "load_split",
    "ScoreSet",
    "assign_labels",
    "cle_decode",
    "eisner_decode",
    "tree_score",
    "CorpusError",
    "DecodeError",
    "DiscodepError",
    "EvalError",
    "ModelError",
    "ScoreFileError",
    "TreeError",
    "EvalReport",
    "attachment_scores",
    "structure_metrics",
    "LinearModel",
    "TrainConfig",
    "train_linear",
    "read_scores",
    "read_trees",
    "write_scores",
    "write_trees",
    "ComplexityReport",
    "DepTree",
    "complexity_census",
    "edge_degree",
    "gap_degree",
    "is_projective",
    "leaf_proportion",
    "max_path_length",
    "__version__",
]
