"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """Input is outside the domain a routine is defined on.

    Raised for malformed spectra (non-increasing, endpoints out of range),
    sequences whose entries escape [0, B], tails that cannot be indexed
    against the integers, and similar structural violations.
    """


class UnsupportedOperationError(RuntimeError):
    """The requested quantity is not computable for this input.

    Distinct from DomainError: the input is well-formed, but the operation
    (e.g. counting entries of a divergent tail inside an interior interval)
    has no finite answer the package can produce.
    """


class TruncationTooSmallError(ValueError):
    """A finite realization was requested at a tail depth that cannot work.

    ``minimal`` carries the smallest depth at which the construction
    succeeds, when a bounded forward search finds one; ``None`` means the
    search was exhausted without success.
    """

    def __init__(self, message: str, minimal: int | None = None):
        super().__init__(message)
        self.minimal = minimal


class SchemaError(ValueError):
    """A JSON document does not match the expected schema.

    ``path`` locates the offending node, e.g. ``"$.zero_tail.ratio"``.
    """

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
