"""Trace-driven simulator for persistent-megakernel execution on chiplet GPUs.

The pipeline: a :mod:`~chipletsim.machine` config fixes the topology, a
:mod:`~chipletsim.taskgraph` builder decomposes a transformer decode layer
into tasks and events, the :mod:`~chipletsim.runtime` replays the tasks
through the :mod:`~chipletsim.memsim` memory hierarchy using
:mod:`~chipletsim.traversal` tile schedules, and
:mod:`~chipletsim.analytics` checks the measured locality against the
closed-form models.  :mod:`~chipletsim.scenario` and the ``chipletsim`` CLI
sweep mode/batch grids into metrics files.
"""

from .analytics import (
    RooflinePoint,
    effective_ai,
    model_vs_sim,
    roofline,
    roofline_point,
    weight_budget,
    weight_hit_model,
)
from .machine import (
    ConfigError,
    MachineConfig,
    ModelConfig,
    load_machine,
    load_model,
    model_preset,
    preset,
    validate,
    validate_model,
)
from .memsim import (
    AccessModifier,
    AccessRole,
    MemAccessError,
    MemHierarchy,
    Metrics,
    Outcome,
)
from .runtime import (
    ComparisonReport,
    DeadlockError,
    SimTrace,
    compare,
    simulate,
)
from .scenario import Scenario, run_scenario
from .taskgraph import (
    Event,
    GraphError,
    OpKind,
    Task,
    TaskGraph,
    TaskLevel,
    build_decoder_layer,
    build_gemm_graph,
    cross_chiplet_event_reduction,
    graph_to_dot,
    graph_to_json,
    validate_graph,
)
from .traversal import (
    AccessStream,
    Distribution,
    GemmPartition,
    ScheduleError,
    TileSchedule,
    Traversal,
    lower_to_accesses,
    schedule,
    schedule_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "AccessModifier",
    "AccessRole",
    "AccessStream",
    "ComparisonReport",
    "ConfigError",
    "DeadlockError",
    "Distribution",
    "Event",
    "GemmPartition",
    "GraphError",
    "MachineConfig",
    "MemAccessError",
    "MemHierarchy",
    "Metrics",
    "ModelConfig",
    "OpKind",
    "Outcome",
    "RooflinePoint",
    "Scenario",
    "ScheduleError",
    "SimTrace",
    "Task",
    "TaskGraph",
    "TaskLevel",
    "TileSchedule",
    "Traversal",
    "build_decoder_layer",
    "build_gemm_graph",
    "compare",
    "cross_chiplet_event_reduction",
    "effective_ai",
    "graph_to_dot",
    "graph_to_json",
    "load_machine",
    "load_model",
    "lower_to_accesses",
    "model_preset",
    "model_vs_sim",
    "preset",
    "roofline",
    "roofline_point",
    "run_scenario",
    "schedule",
    "schedule_to_json",
    "simulate",
    "validate",
    "validate_graph",
    "validate_model",
    "weight_budget",
    "weight_hit_model",
]
