"""Exception types shared across the package."""


class InquestError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(InquestError):
    """A dataset directory could not be read (missing file, malformed row)."""


class DatasetValidationError(InquestError):
    """A loaded dataset violates one or more invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} violation(s): {lines}")


class MetricError(InquestError):
    """Base class for metric evaluation failures."""


class MissingMetricError(MetricError):
    """A selector referenced a record or optional field that is absent."""


class UndefinedMetricError(MetricError):
    """A metric is mathematically undefined (e.g. density over zero lines)."""


class ExtractionError(InquestError):
    """Source text could not be tokenized or measured."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CatalogError(InquestError):
    """An assumption catalog is empty, malformed, or self-contradictory."""


class RuleApplicationError(InquestError):
    """A selection rule could not be applied to a run."""


class EvaluationError(InquestError):
    """A selection could not be evaluated against test outcomes."""


class StoreError(InquestError):
    """An experience-base operation was rejected (duplicate run, bad input)."""


class StoreCorruptError(StoreError):
    """A persisted experience base failed a consistency check on load."""
