from deskvln.control.commands import ActionKind, ControlLimits, DiscreteAction, VelocityCommand
from deskvln.errors import StopIsTerminal


def _split(total_time: float, dt: float) -> list[float]:
    """Durations of full dt ticks plus a shorter remainder tick."""
    full = int(total_time // dt)
    durations = [dt] * full
    remainder = total_time - full * dt
    if remainder > 1e-12:
        durations.append(remainder)
    return durations


def _drive(distance: float, limits: ControlLimits) -> list[VelocityCommand]:
    v = limits.v_max if distance > 0 else -limits.v_max
    return [VelocityCommand(v, 0.0, d) for d in _split(abs(distance) / limits.v_max, limits.dt)]


def _rotate(angle: float, limits: ControlLimits) -> list[VelocityCommand]:
    omega = limits.omega_max if angle > 0 else -limits.omega_max
    durations = _split(abs(angle) / limits.omega_max, limits.dt)
    return [VelocityCommand(0.0, omega, d) for d in durations]


def discrete_to_commands(
    action: DiscreteAction, limits: ControlLimits = ControlLimits()
) -> list[VelocityCommand]:
    """
    Expand a discrete action into velocity commands at full speed.

    Forward drives at v_max and turns rotate at omega_max; the last command is
    shortened so the commands integrate exactly to the action magnitude.

    Raises:
        StopIsTerminal: action is STOP
    """
    if action.kind is ActionKind.STOP:
        raise StopIsTerminal("stop has no velocity expansion")
    if action.kind is ActionKind.FORWARD:
        return _drive(action.magnitude, limits)
    return _rotate(action.turn_radians, limits)


def rotate_then_translate(
    turn: float, distance: float, limits: ControlLimits = ControlLimits()
) -> list[VelocityCommand]:
    """Commands that rotate in place by turn radians, then drive distance meters."""
    commands = _rotate(turn, limits) if turn else []
    if distance:
        commands += _drive(distance, limits)
    return commands
