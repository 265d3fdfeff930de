"""Exception hierarchy."""


class BiaffineError(Exception):
    """Base class for all package errors."""


class DataError(BiaffineError):
    """Malformed dump, vocabulary, or interchange file."""
