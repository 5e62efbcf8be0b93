"""Error taxonomy. Every error carries a stable machine-readable code."""

from __future__ import annotations


class ArenaError(Exception):
    """Base class; `code` is stable and safe to match on over the wire."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class SchemaError(ArenaError):
    code = "schema_error"


class MissingSeries(ArenaError):
    code = "missing_series"


class InvariantViolation(ArenaError):
    code = "invariant_violation"


class BadProfile(ArenaError):
    code = "bad_profile"


class OutOfRange(ArenaError):
    code = "out_of_range"


class ScenarioNotFound(ArenaError):
    code = "scenario_not_found"


class EpisodeOver(ArenaError):
    code = "episode_over"


class SecondAction(ArenaError):
    code = "second_action"


class NoAction(ArenaError):
    code = "no_action"


class BudgetExhausted(ArenaError):
    code = "budget_exhausted"


class BadAssumptions(ArenaError):
    code = "bad_assumptions"


class NonPositiveAmount(ArenaError):
    code = "non_positive_amount"


class SessionNotFound(ArenaError):
    code = "session_not_found"


class ContractViolation(ArenaError):
    code = "contract_violation"
