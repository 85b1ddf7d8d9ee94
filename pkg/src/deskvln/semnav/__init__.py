"""
Map-based navigation: an incremental semantic map, landmark indexing, room
classification through a label affinity table, frontier exploration and the
subgoal program executor.
"""

from deskvln.semnav.semantic_map import (
    DETECTION_THRESHOLD,
    SemanticMap,
    index_landmark,
    integrate_observation,
)
from deskvln.semnav.affinity import (
    OTHERS,
    ROOM_NAMES,
    AffinityTable,
    default_affinity,
    load_affinity_csv,
    parse_affinity_csv,
)
from deskvln.semnav.rooms import ROOM_THRESHOLD, classify_room
from deskvln.semnav.explore import explore_step, frontier_score, peek_labels
from deskvln.semnav.program import (
    MoveForward,
    MoveInBetween,
    MoveToObject,
    MoveToRoom,
    Stop,
    Subgoal,
    SubgoalProgram,
    Turn,
    format_program,
    parse_program,
)
from deskvln.semnav.executor import NavigatorConfig, ProgramExecutor, execute_program
