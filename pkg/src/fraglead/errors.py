"""Exception hierarchy for fraglead.

Every domain error derives from :class:`FragleadError` and exposes a stable
``code`` (the class name) so CLI output stays machine-grepable.  Errors that
point at a spot in an input string carry a 0-based character ``position``.
"""

from __future__ import annotations


class FragleadError(Exception):
    """Base class for all fraglead domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- SMILES tokenizing / parsing / encoding -----------------------------

class SmilesError(FragleadError):
    """Base for errors raised while reading or writing SMILES strings."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class UnknownSymbol(SmilesError):
    """A character outside the supported SMILES alphabet."""

    def __init__(self, position: int, character: str):
        super().__init__(
            f"unsupported character {character!r} at position {position}",
            position,
        )
        self.character = character


class UnmatchedRingDigit(SmilesError):
    pass


class UnmatchedParenthesis(SmilesError):
    pass


class DanglingBondSymbol(SmilesError):
    pass


class LeadingStructureToken(SmilesError):
    pass


class RingDigitExhausted(FragleadError):
    """More than 9 ring closures open at once while encoding a graph."""


# --- fragment generation -------------------------------------------------

class LengthOutOfRange(FragleadError):
    pass


class ScheduleExceedsLength(FragleadError):
    pass


# --- corpus index --------------------------------------------------------

class EmptyCorpus(FragleadError):
    pass


class EmptyPattern(FragleadError):
    pass


# --- search harness ------------------------------------------------------

class SearchError(FragleadError):
    """Base for per-query backend failures."""


class NetworkError(SearchError):
    pass


class RateLimited(SearchError):
    pass


class CountFieldMissing(SearchError):
    pass


class BackendUnavailable(SearchError):
    pass


class CacheIo(FragleadError):
    pass


# --- ontology ------------------------------------------------------------

class OntologyError(FragleadError):
    pass


class DuplicateDrug(OntologyError):
    pass


class InvalidSmiles(OntologyError):
    pass


class UnknownDrug(OntologyError):
    pass


class DuplicateSkeleton(OntologyError):
    pass


class MalformedFile(OntologyError):
    """An ontology file that cannot be decoded.

    ``position`` is a 0-based character offset when the underlying decoder
    reports one, otherwise ``None``.
    """

    def __init__(self, reason: str, position: int | None = None):
        at = f" at offset {position}" if position is not None else ""
        super().__init__(f"malformed ontology file{at}: {reason}")
        self.position = position
        self.reason = reason


# --- trend analysis ------------------------------------------------------

class InsufficientPoints(FragleadError):
    pass


class DegenerateAbscissa(FragleadError):
    pass


class NonDecreasingTrend(FragleadError):
    pass


class NoPlottablePoints(FragleadError):
    pass
