"""Exception hierarchy shared across the toolkit."""


class DiscodepError(Exception):
    """Base class for all toolkit errors."""


class CorpusError(DiscodepError):
    """Malformed corpus file or invalid document structure."""


class TreeError(DiscodepError):
    """Head array does not encode a valid rooted dependency tree."""


class DecodeError(DiscodepError):
    """Decoder received an unusable score set."""


class ScoreFileError(DiscodepError):
    """Score interchange file is malformed or version-incompatible."""


class ModelError(DiscodepError):
    """Linear model training or serialization failure."""


class EvalError(DiscodepError):
    """Prediction/gold mismatch or empty input to an evaluator."""
