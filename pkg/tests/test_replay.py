import math

import pytest

from deskvln.bench.results import traces_jsonl
from deskvln.control import ControllerKind, DiscreteAction, Rollout
from deskvln.control.commands import ActionKind
from deskvln.embodiment import PoseState, default_profile
from deskvln.errors import ValidationError
from deskvln.replay import agent_char, cmd_replay, render_frames, render_trace


@pytest.fixture
def trace(room):
    rollout = Rollout(
        room,
        PoseState(1.5, 2.5, 0.0),
        default_profile("flash"),
        ControllerKind.FLASH,
        episode_id="room-0",
    )
    rollout.act(DiscreteAction(ActionKind.FORWARD, 1.0))
    rollout.act(DiscreteAction(ActionKind.TURN_LEFT, 90.0))
    rollout.stop()
    return rollout.trace


@pytest.mark.parametrize(
    "heading, char",
    [(0.0, ">"), (math.pi / 2, "v"), (math.pi, "<"), (-math.pi / 2, "^"), (0.3, ">")],
)
def test_agent_char(heading, char):
    assert agent_char(heading) == char


def test_agent_char_fallen():
    assert agent_char(1.0, fallen=True) == "X"


def test_render_frames(trace, room):
    frames = render_frames(trace, room)
    assert len(frames) == 3
    assert frames[0].splitlines()[0] == "step 0/2  start  (1.50, 2.50) heading 0"
    assert frames[1].splitlines()[0] == "step 1/2  forward  (2.50, 2.50) heading 0"
    last = frames[2].splitlines()
    assert last[0] == "step 2/2  turn_left  STOP  (2.50, 2.50) heading 90"
    assert last[3] == "#*v....t.#"
    assert last[5] == "#...H....#"


def test_render_trace_summary(trace, room):
    text = render_trace(trace, room)
    assert text.startswith("episode room-0\n")
    assert text.rstrip().splitlines()[-1] == "TL 1.000000  steps 2  end stop"


def test_cmd_replay(tmp_path, trace, room_file):
    path = tmp_path / "traces.jsonl"
    path.write_text(traces_jsonl([trace]))
    assert cmd_replay(path, room_file) == cmd_replay(path, room_file, "room-0")
    with pytest.raises(ValidationError):
        cmd_replay(path, room_file, "room-9")
    with pytest.raises(FileNotFoundError):
        cmd_replay(tmp_path / "none.jsonl", room_file)
