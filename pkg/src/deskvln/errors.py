"""
Exception hierarchy for deskvln.

Every error raised by the library derives from DeskVlnError. Errors describing bad
values also derive from ValueError, lookup failures from KeyError or IndexError, so
callers can catch either the domain type or the builtin one.
"""


class DeskVlnError(Exception):
    """Base class for all deskvln errors."""


# world
class ParseError(DeskVlnError, ValueError):
    """Malformed map text (ragged rows, unknown characters, bad header)."""


class ValidationError(DeskVlnError, ValueError):
    """Well-formed input that violates a domain invariant (open border, zero cell size)."""


class OutOfBounds(DeskVlnError, IndexError):
    """A point or cell lies outside the map."""


class BlockedCell(DeskVlnError, ValueError):
    """A point that must be traversable lies inside an Obstacle cell."""


# embodiment / control
class AlreadyFallen(DeskVlnError):
    """The robot has fallen; nothing more can be executed in this episode."""


class TargetInObstacle(DeskVlnError, ValueError):
    """A flash target lies inside an Obstacle cell."""


class EmptyPath(DeskVlnError, ValueError):
    """A path follower was given no waypoints."""


class StopIsTerminal(DeskVlnError, ValueError):
    """Stop has no velocity-command expansion; it ends the episode."""


# plan
class Unreachable(DeskVlnError):
    """Two points are not connected through traversable cells."""


class NoPath(DeskVlnError):
    """A* found no path between start and goal."""


class EmptyCandidates(DeskVlnError, ValueError):
    """Reorientation was asked to choose among zero candidates."""


# semnav
class UnknownLabel(DeskVlnError, KeyError):
    """A label outside the semantic vocabulary."""


class NoFrontiers(DeskVlnError):
    """Exploration is exhausted: no unvisited frontier remains."""


# policy / rdp
class DimensionMismatch(DeskVlnError, ValueError):
    """Vector or matrix dimensions do not agree."""


class ShapeMismatch(DeskVlnError, ValueError):
    """Array shapes do not agree."""


class InvalidRange(DeskVlnError, ValueError):
    """A parameter range is empty or outside its domain."""


# bench / cli
class LengthMismatch(DeskVlnError, ValueError):
    """Traces and episodes do not align one-to-one."""


class InsufficientFreeSpace(DeskVlnError, ValueError):
    """A map has fewer than two mutually reachable free cells."""


class SchemaMismatch(DeskVlnError, ValueError):
    """A results file was written with an incompatible schema version."""
