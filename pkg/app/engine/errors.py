# app/engine/errors.py


class EngineError(Exception):
    """Base class for every failure raised by the computation engine"""


class ResourceLimitExceeded(EngineError):
    """A configured size cap was hit"""


class GroupTooLarge(ResourceLimitExceeded):
    pass


class OracleOutOfRange(ResourceLimitExceeded):
    pass


class UnitGroupTooLarge(ResourceLimitExceeded):
    pass


class InvalidGenerator(EngineError):
    pass


class ProductNotSubgroup(EngineError):
    pass


class NonabelianSubgroup(EngineError):
    pass


class MismatchedParents(EngineError):
    pass


class NotLieNilpotent(EngineError):
    """The group algebra fails the nilpotency gate (G nilpotent, G' a finite p-group)"""


class InternalConsistencyError(EngineError):
    """A computed value contradicts a theorem the engine relies on"""
