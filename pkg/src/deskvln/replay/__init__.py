from deskvln.replay.replay import agent_char, cmd_replay, render_frames, render_trace
