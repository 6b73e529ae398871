from .categories import ObjectCategory, default_categories
from .scene import (
    ObjectInstance,
    Pose,
    Scene,
    SceneConfig,
    SceneGenerationError,
    generate_scene,
    load_scene,
    randomize_poses,
    save_scene,
)
from .camera import (
    FLOOR_ID,
    NO_HIT_ID,
    WALL_ID,
    CameraConfig,
    CameraPose,
    Frame,
    backproject,
    distance_image,
    render,
)
from .actions import (
    ACTION_NAMES,
    N_ACTIONS,
    N_ACTIONS_INFERRED,
    ActionConfig,
    AgentState,
    ResolvedTargets,
    StepResult,
    decode_action,
    sample_spawn,
    step,
)

__all__ = [
    "ACTION_NAMES",
    "ActionConfig",
    "AgentState",
    "CameraConfig",
    "CameraPose",
    "FLOOR_ID",
    "Frame",
    "N_ACTIONS",
    "N_ACTIONS_INFERRED",
    "NO_HIT_ID",
    "ObjectCategory",
    "ObjectInstance",
    "Pose",
    "ResolvedTargets",
    "Scene",
    "SceneConfig",
    "SceneGenerationError",
    "StepResult",
    "WALL_ID",
    "backproject",
    "decode_action",
    "default_categories",
    "distance_image",
    "generate_scene",
    "load_scene",
    "randomize_poses",
    "render",
    "sample_spawn",
    "save_scene",
    "step",
]
