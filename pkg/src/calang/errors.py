"""Exception hierarchy shared by every calang module."""

from __future__ import annotations


class CalangError(Exception):
    """Base class for all library errors."""


class AlphabetMismatch(CalangError, ValueError):
    """A symbol is not in the alphabet, or two objects use different alphabets."""


class UndefinedNeighborhood(CalangError, LookupError):
    """A partial rule table was asked for a window it does not define.

    ``window`` holds the offending window as a tuple of tokens.  ``position`` is
    the grid index of the cell whose update needed the window, and ``source``
    and ``step`` are filled in when the failure happened while exploring the
    orbit of a particular initial word.
    """

    def __init__(self, window, position=None, source=None, step=None):
        self.window = tuple(window)
        self.position = position
        self.source = source
        self.step = step
        super().__init__(self._message())

    def _message(self) -> str:
        msg = f"rule undefined on window {' '.join(self.window)!r}"
        if self.position is not None:
            msg += f" at position {self.position}"
        if self.source is not None:
            msg += f" (orbit of {self.source!r}, step {self.step})"
        return msg

    def located(self, source, step) -> "UndefinedNeighborhood":
        """Return a copy annotated with orbit provenance."""
        return UndefinedNeighborhood(self.window, self.position, source, step)


class WidthBudgetExceeded(CalangError):
    """A configuration grew wider than the configured cap."""

    def __init__(self, width: int, limit: int, step: int):
        self.width = width
        self.limit = limit
        self.step = step
        super().__init__(f"width {width} exceeds cap {limit} at step {step}")


class PatternSyntaxError(CalangError, ValueError):
    """Malformed pattern text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class UnknownSymbol(PatternSyntaxError):
    """Pattern text contains something that is neither an operator nor a token."""


class QuiescentInPattern(PatternSyntaxError):
    """The quiescent symbol may not appear inside an initial-word pattern."""


class RuleFormatError(CalangError, ValueError):
    """A ``.rules`` or ``.gliders`` file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class VelocityOutOfRange(CalangError, ValueError):
    """A glider velocity lies outside ``[-r, r]``."""


class PartialRuleWithALL(CalangError, ValueError):
    """Quantifying over every window requires a total rule."""


class CyclicDominance(CalangError, ValueError):
    """The dominance relation of a glider system contains a cycle."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        shown = " > ".join(f"({g.value},{g.velocity})" for g in self.cycle)
        super().__init__(f"dominance cycle: {shown}")


class UnknownConstruction(CalangError, KeyError):
    """No built-in construction has the requested name."""


class EmptyWord(CalangError, ValueError):
    """A construction builder received an empty word."""


class RadiusZero(CalangError, ValueError):
    """Nested counters need a radius of at least one."""


class LengthMismatch(CalangError, ValueError):
    """Word and exponent lists differ in length."""


class EmptySample(CalangError, ValueError):
    """An analysis needs at least one word."""


class TruncatedSample(CalangError):
    """The sample is not known to be complete up to the requested length."""
