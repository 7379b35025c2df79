"""Exception types shared across the toolkit."""


class DiaralignError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(DiaralignError, ValueError):
    """Input document violates the transcript/request schema.

    ``path`` points at the offending location, e.g. ``utterances[3].speaker``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class BudgetError(DiaralignError, RuntimeError):
    """Scoring matrix would exceed the configured cell budget."""


class MetricUndefinedError(DiaralignError, ValueError):
    """A metric's denominator is empty for the given inputs."""
