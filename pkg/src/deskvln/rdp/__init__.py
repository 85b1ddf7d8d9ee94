"""
Recurrent diffusion policy: DDPM schedule and sampler, history-conditioned noise
predictor, stop-progress head and gate, loss, and chunk execution.
"""

from deskvln.rdp.schedule import (
    BETA_MAX,
    BETA_MIN,
    DENOISE_STEPS,
    HORIZON,
    NoiseSchedule,
    add_noise,
    denoise_step,
    make_schedule,
    sample_chunk,
)
from deskvln.rdp.model import (
    ACTION_THRESHOLD,
    PROGRESS_THRESHOLD,
    STOP_LOSS_WEIGHT,
    Mlp,
    RdpCondition,
    RdpWeights,
    build_condition,
    predict_noise,
    predict_stop,
    previous_actions,
    rdp_loss,
    rdp_loss_grad,
    relative_coordinates,
    stop_gate,
    stop_progress_at,
    stop_progress_targets,
    timestep_embedding,
    update_history,
)
from deskvln.rdp.policy import (
    EXECUTED_WAYPOINTS,
    RdpConfig,
    RdpPolicy,
    execute_chunk,
    run_chunk,
)
