"""Exception types shared across the engine."""


class FactalignError(Exception):
    """Base class for all engine errors."""


class DimensionMismatch(FactalignError):
    """Vector or matrix dimensions do not line up."""


class EmptyText(FactalignError):
    """An operation that needs text received an empty string."""


class ProviderUnavailable(FactalignError):
    """Remote embedding provider unreachable and no cache entry exists."""


class NonFiniteEntry(FactalignError):
    """A similarity matrix contains NaN or infinity."""


class InvalidCounts(FactalignError):
    """Fact/match counts violate 0 <= matches <= min(|A|, |B|)."""


class EmptyGoldSet(FactalignError):
    """Calibration requires at least one gold matching."""


class TooFewAnnotations(FactalignError):
    """An agreement computation needs at least two annotations."""


class DocumentMismatch(FactalignError):
    """An annotation does not belong to the document it was paired with."""


class StorageFailure(FactalignError):
    """The workspace could not be read or written."""


class IntegrityViolation(StorageFailure):
    """A stored record references an unknown id or breaks a type invariant."""


class UnknownRecord(StorageFailure):
    """A requested record id does not resolve to anything stored."""


class UnknownRound(UnknownRecord):
    """A round id does not resolve to a stored round."""
