"""
Benchmark harness: episode datasets and their generation, the episode runner,
metrics and result files.
"""

from deskvln.control.rollout import EpisodeTrace, EventKind, TraceEvent
from deskvln.bench.episode import (
    DATASET_SCHEMA_VERSION,
    Episode,
    Split,
    dump_episodes,
    episode_problems,
    load_episodes,
    parse_episodes,
    save_episodes,
)
from deskvln.bench.instructions import describe_path, goal_landmark, path_legs
from deskvln.bench.sampling import SamplingConfig, reachable_free_cells, sample_episodes
from deskvln.bench.metrics import (
    SUCCESS_RADIUS,
    TABLE_COLUMNS,
    EpisodeMetrics,
    MetricsReport,
    compute_metrics,
    episode_metrics,
)
from deskvln.bench.runner import MAX_STEPS, EvalSettings, evaluate, run_episode
from deskvln.bench.results import (
    RESULTS_SCHEMA_VERSION,
    format_table,
    merge_aggregates,
    read_aggregate,
    read_traces,
    write_results,
)
from deskvln.bench.settings import SimConfig
