"""Exception types shared across the tutoring engine."""

from __future__ import annotations


class TutorError(Exception):
    """Base class for all engine errors."""


class ConfigError(TutorError):
    """Session configuration violates an invariant."""


class SessionParseError(TutorError):
    """A serialized session could not be parsed; names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class CycleError(TutorError):
    """An edge insertion would make the learner dependency graph cyclic."""


# -- gateway ---------------------------------------------------------------

class GatewayError(TutorError):
    pass


class BackendUnreachableError(GatewayError):
    pass


class RetryExhaustedError(GatewayError):
    pass


class ScriptedExhaustedError(GatewayError):
    """The scripted backend had no entry matching the request."""


class NoJsonFoundError(GatewayError):
    pass


# -- curriculum ------------------------------------------------------------

class EmptyGoalError(TutorError):
    pass


class DecompositionParseError(TutorError):
    pass


class MissingLevelError(TutorError):
    def __init__(self, level_name: str):
        self.level_name = level_name
        super().__init__(f"decomposition is missing level: {level_name}")


# -- assessment ------------------------------------------------------------

class InvalidPlanError(TutorError):
    pass


class AllMasteredError(TutorError):
    """No unmastered sub-goal remains at the current level (or anywhere)."""


class EmptyMetricsError(TutorError):
    pass


class UnknownSubGoalError(TutorError):
    pass


class AssessmentParseError(TutorError):
    pass


# -- strategy search -------------------------------------------------------

class UnsupportedKindError(TutorError):
    pass


class EmptyCandidatesError(TutorError):
    pass


class GeneratorFailedError(TutorError):
    pass


class CompileParseError(TutorError):
    pass


class ProviderUnreachableError(TutorError):
    pass


# -- teaching --------------------------------------------------------------

class TaskParseError(TutorError):
    pass


class EvaluationParseError(TutorError):
    pass


# -- memory ----------------------------------------------------------------

class DimMismatchError(TutorError):
    pass


class StorageIOError(TutorError):
    pass


# -- learner simulator -----------------------------------------------------

class InvalidChunkParamsError(TutorError):
    pass


class FetchFailedError(TutorError):
    pass


# -- benchmark harness -----------------------------------------------------

class SandboxUnavailableError(TutorError):
    pass


class SuiteParseError(TutorError):
    pass


class EmptyResultsError(TutorError):
    pass


class ScoreParseError(TutorError):
    pass
