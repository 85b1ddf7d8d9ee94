from collections.abc import Iterable

from deskvln.errors import ValidationError
from deskvln.semnav.affinity import OTHERS, ROOM_NAMES, AffinityTable, default_affinity
from deskvln.world.observe import Observation

ROOM_THRESHOLD = 0.3


def classify_room(
    obs: Observation | Iterable[str],
    rooms: Iterable[str] = ROOM_NAMES,
    table: AffinityTable | None = None,
    threshold: float = ROOM_THRESHOLD,
) -> str:
    """
    Room label with the highest mean affinity to the visible object labels.

    Args:
        obs: An observation, or the visible label names directly
        rooms: Candidate room labels; the first of equal scores wins
        table: Affinity table (packaged default when None)
        threshold: Best scores below this fall back to "others"

    Returns:
        The winning room, or "others" when nothing is visible or no room reaches the
        threshold
    """
    rooms = list(rooms)
    if not rooms:
        raise ValidationError("classify_room needs at least one room")
    rooms = [room for room in rooms if room != OTHERS]
    table = table or default_affinity()
    names = obs.visible_names() if isinstance(obs, Observation) else list(obs)
    if not names or not rooms:
        return OTHERS
    scores = [table.mean_affinity(names, room) for room in rooms]
    best = max(range(len(rooms)), key=lambda i: (scores[i], -i))
    return rooms[best] if scores[best] >= threshold else OTHERS
