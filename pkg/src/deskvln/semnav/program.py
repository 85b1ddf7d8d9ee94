"""
Subgoal programs: ordered navigation subgoals written as code-like calls, e.g.

    robot.move_to_object('sofa')
    robot.move_in_between('sofa', 'chair')
    robot.turn(-90)
    robot.stop()

Programs are parsed with the ast module and never evaluated.
"""
import ast
import logging
import math
from dataclasses import astuple, dataclass, fields
from typing import Union

from deskvln.errors import ParseError, UnknownLabel, ValidationError
from deskvln.semnav.affinity import ROOM_NAMES
from deskvln.utils.typehints import Degrees, Meters

logger = logging.getLogger(__name__)

RECEIVERS = ("robot", "self")


@dataclass(frozen=True)
class MoveToObject:
    label: str


@dataclass(frozen=True)
class MoveInBetween:
    first: str
    second: str


@dataclass(frozen=True)
class MoveToRoom:
    room: str


@dataclass(frozen=True)
class MoveForward:
    meters: Meters

    def __post_init__(self):
        if not math.isfinite(self.meters) or self.meters < 0:
            raise ValidationError(f"move_forward distance must be >= 0, got {self.meters}")


@dataclass(frozen=True)
class Turn:
    """Positive degrees turn left."""

    degrees: Degrees

    def __post_init__(self):
        if not math.isfinite(self.degrees) or abs(self.degrees) > 360:
            raise ValidationError(f"turn must be within [-360, 360] degrees, got {self.degrees}")


@dataclass(frozen=True)
class Stop:
    pass


Subgoal = Union[MoveToObject, MoveInBetween, MoveToRoom, MoveForward, Turn, Stop]

CALLS: dict[str, type] = {
    "move_to_object": MoveToObject,
    "move_in_between": MoveInBetween,
    "move_to_room": MoveToRoom,
    "move_forward": MoveForward,
    "turn": Turn,
    "stop": Stop,
}
CALL_NAMES = {cls: name for name, cls in CALLS.items()}


@dataclass(frozen=True)
class SubgoalProgram:
    """An ordered list of subgoals ending with exactly one Stop."""

    subgoals: tuple[Subgoal, ...]

    def __post_init__(self):
        object.__setattr__(self, "subgoals", tuple(self.subgoals))
        if not self.subgoals or not isinstance(self.subgoals[-1], Stop):
            raise ValidationError("a subgoal program must end with stop()")
        if any(isinstance(s, Stop) for s in self.subgoals[:-1]):
            raise ValidationError("stop() may only appear at the end of a program")

    def __iter__(self):
        return iter(self.subgoals)

    def __len__(self):
        return len(self.subgoals)

    def labels(self) -> list[str]:
        """Object labels the program refers to, in order of appearance."""
        out = []
        for s in self.subgoals:
            if isinstance(s, MoveToObject):
                out.append(s.label)
            elif isinstance(s, MoveInBetween):
                out.extend([s.first, s.second])
        return out

    def validate(self, vocabulary, rooms=ROOM_NAMES) -> None:
        """
        Raises:
            UnknownLabel: an object label is outside vocabulary or a room outside rooms
        """
        vocabulary = set(vocabulary)
        for label in self.labels():
            if label not in vocabulary:
                raise UnknownLabel(label)
        for s in self.subgoals:
            if isinstance(s, MoveToRoom) and s.room not in rooms:
                raise UnknownLabel(s.room)


def _call_name(func: ast.expr) -> str | None:
    if isinstance(func, ast.Name):
        return func.id
    if isinstance(func, ast.Attribute) and isinstance(func.value, ast.Name):
        if func.value.id in RECEIVERS:
            return func.attr
    return None


def _literal(node: ast.expr, expected: type, where: str):
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub) and expected is float:
        return -_literal(node.operand, expected, where)
    if not isinstance(node, ast.Constant) or isinstance(node.value, bool):
        raise ParseError(f"{where}: arguments must be literals")
    value = node.value
    if expected is float and isinstance(value, (int, float)):
        return float(value)
    if expected is str and isinstance(value, str):
        return value
    raise ParseError(f"{where}: expected a {expected.__name__}, got {value!r}")


def parse_program(text: str) -> SubgoalProgram:
    """
    Parse subgoal calls, one per line or separated by ';'. A missing final stop() is
    appended.

    Raises:
        ParseError: syntax errors, unknown calls, wrong arity or non-literal arguments
        ValidationError: stop() before the end, bad distances or angles
    """
    try:
        module = ast.parse(text, mode="exec")
    except SyntaxError as e:
        raise ParseError(f"line {e.lineno}: {e.msg}") from None
    subgoals: list[Subgoal] = []
    for stmt in module.body:
        where = f"line {stmt.lineno}"
        if not isinstance(stmt, ast.Expr) or not isinstance(stmt.value, ast.Call):
            raise ParseError(f"{where}: expected a subgoal call")
        call = stmt.value
        name = _call_name(call.func)
        cls = CALLS.get(name)
        if cls is None:
            raise ParseError(f"{where}: unknown subgoal {ast.unparse(call.func)!r}")
        if call.keywords:
            raise ParseError(f"{where}: keyword arguments are not supported")
        params = fields(cls)
        if len(call.args) != len(params):
            raise ParseError(f"{where}: {name}() takes {len(params)} argument(s)")
        args = [
            _literal(arg, str if p.type is str else float, where)
            for arg, p in zip(call.args, params)
        ]
        subgoals.append(cls(*args))
    if not subgoals or not isinstance(subgoals[-1], Stop):
        logger.debug("appending stop() to a program without one")
        subgoals.append(Stop())
    return SubgoalProgram(tuple(subgoals))


def format_program(program: SubgoalProgram) -> str:
    """One call per line; parse_program(format_program(p)) == p."""
    lines = []
    for s in program:
        args = ", ".join(repr(v) for v in astuple(s))
        lines.append(f"{CALL_NAMES[type(s)]}({args})")
    return "\n".join(lines)
