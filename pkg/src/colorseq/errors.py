"""Exception types shared across the package."""

from __future__ import annotations


class ColorseqError(Exception):
    """Base class for every error raised by this package."""


class UnknownWord(ColorseqError):
    """An input sequence contains a symbol outside the alphabet."""

    def __init__(self, word: str):
        super().__init__(f"unknown word: {word!r}")
        self.word = word


class NotTranslatable(ColorseqError):
    """No derivation exists for the input under the grammar."""


class CapExceeded(ColorseqError):
    """An input or output sequence exceeds the productivity caps."""


class WrongFunctionCount(ColorseqError):
    """A combination key requires exactly three function rules."""


class AlphabetTooSmall(ColorseqError):
    """The alphabet cannot supply the requested number of rule words."""


class GenerationExhausted(ColorseqError):
    """Episode sampling could not satisfy its constraints within the retry bound."""


class TemplateInapplicable(ColorseqError):
    """The grammar lacks the rule shapes a probe template requires."""


class EpisodeParseError(ColorseqError):
    """An episode or run file is malformed; carries a location when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column


class ConsistencyError(ColorseqError):
    """An episode file's pairs contradict the grammar it carries."""


class QueryMismatch(ColorseqError):
    """A run record does not line up with the episode's query list."""


class BudgetExhausted(ColorseqError):
    """A search hit its budget before the question could be settled."""


class AdapterTimeout(ColorseqError):
    """An external adapter failed to answer within its deadline."""


class ProtocolError(ColorseqError):
    """An external adapter broke the wire protocol; carries the offending payload."""

    def __init__(self, message: str, payload: object = None):
        super().__init__(message)
        self.payload = payload
