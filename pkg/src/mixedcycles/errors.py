"""Exception types shared across the package."""

from __future__ import annotations


class GraphError(ValueError):
    """Malformed graph input; ``pair`` names the offending vertex pair."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class PreconditionError(ValueError):
    """An operation was called outside its stated domain.

    ``details`` holds the measured quantities (for example the measured
    almost-completeness budget, or the worst vertex) so callers can report
    exactly what failed.
    """

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class BudgetExceeded(RuntimeError):
    """A search ran out of its step budget before reaching a verdict.

    Deliberately distinct from a negative answer.
    """

    def __init__(self, message: str, steps: int):
        super().__init__(message)
        self.steps = steps


class CounterexampleFound(RuntimeError):
    """A lemma's conclusion failed on an input satisfying its hypotheses.

    ``artefact`` is a JSON-ready record of the input and the measured values.
    """

    def __init__(self, message: str, artefact: dict):
        super().__init__(message)
        self.artefact = artefact
