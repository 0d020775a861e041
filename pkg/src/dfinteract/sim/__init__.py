"""2D toy world: agent, objects, penalty contacts, tasks, and observations."""

from .depth import DepthObservation, observe_depth_scan, push_depth
from .observe import (build_observation, build_vision_observation,
                      command_block, jittered_command, obs_dim, observe_prop,
                      vision_obs_dim)
from .randomize import (geometry_for_task, nominal_geometry,
                        randomize_geometry, sample_physics)
from .tasks import (CARRY, DEVIATION_LIMIT, FAILURE, PICKUP, PUSH, RUNNING,
                    SITSTAND, SUCCESS, TASK_KINDS, TRACK, PiecewisePath,
                    TaskSpec, TaskTracker, make_task, make_track_task,
                    nominal_shape, object_bottom, object_command,
                    root_command, task_status)
from .trace import TraceWriter, read_trace, step_record
from .world import (ACTION_DIM, AgentState, EnvState, ObjectState, StepEvents,
                    detach_active, reset, spawn_task_object, step)

__all__ = [
    "ACTION_DIM", "AgentState", "CARRY", "DEVIATION_LIMIT", "DepthObservation",
    "EnvState", "FAILURE", "ObjectState", "PICKUP", "PUSH", "PiecewisePath",
    "RUNNING", "SITSTAND", "SUCCESS", "StepEvents", "TASK_KINDS", "TRACK",
    "TaskSpec", "TaskTracker", "build_observation",
    "build_vision_observation", "command_block", "detach_active",
    "geometry_for_task", "jittered_command", "make_task", "make_track_task",
    "nominal_geometry", "nominal_shape", "obs_dim", "object_bottom",
    "object_command", "observe_depth_scan", "observe_prop", "push_depth",
    "randomize_geometry", "read_trace", "reset", "root_command",
    "sample_physics", "spawn_task_object", "step", "step_record",
    "task_status", "vision_obs_dim", "TraceWriter",
]
