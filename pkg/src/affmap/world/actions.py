"""Discrete agent actions and interaction physics.

Action indices (explicit mode, 30 actions):
  0..4   navigation: forward 0.25 m, rotate right/left 30 deg, look up/down 15 deg
  5      drop
  6..11  move held object 0.1 m along +x,-x,+y,-y,+z,-z
  12..20 pick up, target grid cell 0..8
  21..29 push, target grid cell 0..8

Inferred mode (21 actions) folds pickup/push into 9 "interact" cells whose
affordance is chosen upstream from the prediction maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolation
from .camera import (
    CameraConfig,
    Frame,
    PITCH_IDX_RANGE,
    YAW_BINS,
    render,
)
from .scene import Pose, Scene, interior_wall_boxes


@dataclass
class ActionConfig:
    # Reach / push / drop magnitudes are placeholders: the reference system
    # never quantifies them. Reach is measured from the arm base to the
    # closest point of the target's bounding box.
    forward_step: float = 0.25
    reach_radius: float = 1.5
    push_distance: float = 0.25
    drop_radius: float = 0.5
    move_held_step: float = 0.1
    agent_radius: float = 0.2
    carry_forward: float = 0.5
    carry_drop: float = 0.25  # held object center sits this far below the camera


@dataclass
class AgentState:
    position: tuple[float, float]
    yaw_idx: int = 0
    pitch_idx: int = 0
    inventory: int | None = None

    @property
    def yaw(self) -> float:
        return self.yaw_idx * (2.0 * math.pi / YAW_BINS)

    def forward_xy(self) -> np.ndarray:
        return np.array([math.cos(self.yaw), math.sin(self.yaw)])


_NAV = ["forward", "rotate_right", "rotate_left", "look_up", "look_down"]
_MOVE_AXES = [(0, +1), (0, -1), (1, +1), (1, -1), (2, +1), (2, -1)]

ACTION_NAMES = (
    _NAV
    + ["drop"]
    + [f"move_held_{'+-'[s < 0]}{'xyz'[a]}" for a, s in _MOVE_AXES]
    + [f"pickup_{c}" for c in range(9)]
    + [f"push_{c}" for c in range(9)]
)
N_ACTIONS = 30
N_ACTIONS_INFERRED = 21


def decode_action(index: int, inferred: bool = False) -> tuple[str, int | tuple[int, int] | None]:
    """Map an action index to (kind, arg). Raises ContractViolation when malformed."""
    limit = N_ACTIONS_INFERRED if inferred else N_ACTIONS
    if not isinstance(index, (int, np.integer)) or not (0 <= int(index) < limit):
        raise ContractViolation(f"action index {index!r} outside 0..{limit - 1}")
    i = int(index)
    if i < 5:
        return _NAV[i], None
    if i == 5:
        return "drop", None
    if i < 12:
        return "move_held", _MOVE_AXES[i - 6]
    if inferred:
        return "interact", i - 12
    if i < 21:
        return "pickup", i - 12
    return "push", i - 21


@dataclass
class ResolvedTargets:
    """Per-cell interaction targets, resolved upstream from the current frame."""

    pickup: dict[int, int] = field(default_factory=dict)
    push: dict[int, int] = field(default_factory=dict)
    interact: dict[int, tuple[int, str]] = field(default_factory=dict)

    def lookup(self, kind: str, cell: int) -> tuple[int, str] | None:
        if kind == "pickup":
            iid = self.pickup.get(cell)
            return None if iid is None else (iid, "pickup")
        if kind == "push":
            iid = self.push.get(cell)
            return None if iid is None else (iid, "push")
        return self.interact.get(cell)


@dataclass
class StepResult:
    action: int
    success: bool
    frame: Frame
    moved_instances: list[tuple[int, Pose, Pose]]
    attempt: tuple[int, str] | None = None  # (instance id, affordance) when interaction attempted
    reward_components: tuple[float, float, float] | None = None  # filled by the policy


def _point_in_room(scene: Scene, x: float, y: float, radius: float) -> bool:
    w, d = scene.room_size
    return radius <= x <= w - radius and radius <= y <= d - radius


def _disc_hits_aabb2d(x, y, radius, amin, amax) -> bool:
    cx = min(max(x, amin[0]), amax[0])
    cy = min(max(y, amin[1]), amax[1])
    return (cx - x) ** 2 + (cy - y) ** 2 < radius * radius


def position_free(scene: Scene, cfg: ActionConfig, x: float, y: float, ignore: int | None = None) -> bool:
    if not _point_in_room(scene, x, y, cfg.agent_radius):
        return False
    for wmin, wmax in interior_wall_boxes(scene.config):
        if _disc_hits_aabb2d(x, y, cfg.agent_radius, wmin, wmax):
            return False
    for obj in scene.instances.values():
        if obj.id == ignore or obj.held:
            continue
        amin, amax = obj.aabb()
        if _disc_hits_aabb2d(x, y, cfg.agent_radius, amin, amax):
            return False
    return True


def lattice_positions(scene: Scene, cfg: ActionConfig) -> list[tuple[float, float]]:
    w, d = scene.room_size
    xs = np.arange(cfg.forward_step / 2.0, w, cfg.forward_step)
    ys = np.arange(cfg.forward_step / 2.0, d, cfg.forward_step)
    return [(float(x), float(y)) for x in xs for y in ys]


def sample_spawn(scene: Scene, rng: np.random.Generator, cfg: ActionConfig) -> AgentState:
    cells = lattice_positions(scene, cfg)
    order = rng.permutation(len(cells))
    for k in order:
        x, y = cells[int(k)]
        if position_free(scene, cfg, x, y):
            return AgentState(
                position=(x, y),
                yaw_idx=int(rng.integers(YAW_BINS)),
                pitch_idx=int(rng.integers(-2, 2)),
            )
    raise ContractViolation("no free spawn position in scene")


def _aabb_free(scene: Scene, iid: int, amin, amax, gap: float = 1e-6) -> bool:
    w, d = scene.room_size
    if amin[0] < 0 or amin[1] < 0 or amax[0] > w or amax[1] > d:
        return False
    if amin[2] < -1e-9 or amax[2] > scene.room_height:
        return False
    for wmin, wmax in interior_wall_boxes(scene.config):
        if np.all(amin - gap < wmax) and np.all(wmin - gap < amax):
            return False
    for other in scene.instances.values():
        if other.id == iid:
            continue
        omin, omax = other.aabb()
        if np.all(amin - gap < omax) and np.all(omin - gap < amax):
            return False
    return True


def _moved_aabb(obj, new_pos):
    ex, ey = obj.horizontal_half_extents()
    hz = obj.extent[2] / 2.0
    amin = np.array([new_pos[0] - ex, new_pos[1] - ey, new_pos[2] - hz])
    amax = np.array([new_pos[0] + ex, new_pos[1] + ey, new_pos[2] + hz])
    return amin, amax


def _reach_distance(scene: Scene, camera: CameraConfig, agent: AgentState, iid: int) -> float:
    """Distance from the arm base to the closest point of the target's AABB."""
    base = np.array([agent.position[0], agent.position[1], camera.height - camera.arm_drop])
    obj = scene.instances[iid]
    amin, amax = obj.aabb()
    closest = np.minimum(np.maximum(base, amin), amax)
    return float(np.linalg.norm(closest - base))


def _held_pose(scene: Scene, cfg: ActionConfig, camera: CameraConfig, agent: AgentState, obj) -> Pose:
    fwd = agent.forward_xy()
    x = agent.position[0] + fwd[0] * cfg.carry_forward
    y = agent.position[1] + fwd[1] * cfg.carry_forward
    z = camera.height - cfg.carry_drop
    # clamp inside the room so a successful pickup never embeds the object in a wall
    ex, ey = obj.horizontal_half_extents()
    hz = obj.extent[2] / 2.0
    w, d = scene.room_size
    x = min(max(x, ex), w - ex)
    y = min(max(y, ey), d - ey)
    z = min(max(z, hz), scene.room_height - hz)
    return Pose((float(x), float(y), float(z)), obj.pose.yaw)


def _try_drop(scene: Scene, cfg: ActionConfig, agent: AgentState, obj) -> Pose | None:
    fwd = agent.forward_xy()
    for dist in np.linspace(cfg.drop_radius, 0.15, 8):
        x = agent.position[0] + fwd[0] * float(dist)
        y = agent.position[1] + fwd[1] * float(dist)
        support_z = 0.0
        ex, ey = obj.horizontal_half_extents()
        for other in scene.instances.values():
            if other.id == obj.id:
                continue
            omin, omax = other.aabb()
            if x - ex < omax[0] and omin[0] < x + ex and y - ey < omax[1] and omin[1] < y + ey:
                support_z = max(support_z, float(omax[2]))
        z = support_z + obj.extent[2] / 2.0
        amin, amax = _moved_aabb(obj, (x, y, z))
        # items resting on a support may touch it from above; exclude supports below
        blocked = False
        w, d = scene.room_size
        if amin[0] < 0 or amin[1] < 0 or amax[0] > w or amax[1] > d or amax[2] > scene.room_height:
            blocked = True
        if not blocked:
            for wmin, wmax in interior_wall_boxes(scene.config):
                if np.all(amin < wmax) and np.all(wmin < amax):
                    blocked = True
                    break
        if not blocked:
            for other in scene.instances.values():
                if other.id == obj.id:
                    continue
                omin, omax = other.aabb()
                overlap_xy = amin[0] < omax[0] and omin[0] < amax[0] and amin[1] < omax[1] and omin[1] < amax[1]
                overlap_z = amin[2] < omax[2] - 1e-9 and omin[2] < amax[2]
                if overlap_xy and overlap_z:
                    blocked = True
                    break
        if not blocked:
            return Pose((float(x), float(y), float(z)), obj.pose.yaw)
    return None


def step(
    scene: Scene,
    agent: AgentState,
    action: int,
    camera: CameraConfig,
    cfg: ActionConfig | None = None,
    targets: ResolvedTargets | None = None,
    inferred: bool = False,
    noise_seed: int = 0,
    step_index: int = 0,
) -> StepResult:
    """Execute one action, mutating scene/agent, and render the resulting frame.

    Navigation failures (collisions, pitch limits) report success=False with no
    state change. Interaction attempts always report the (instance, affordance)
    pair so the caller can annotate both outcomes.
    """
    cfg = cfg or ActionConfig()
    targets = targets or ResolvedTargets()
    kind, arg = decode_action(action, inferred=inferred)
    success = False
    moved: list[tuple[int, Pose, Pose]] = []
    attempt: tuple[int, str] | None = None

    if kind == "forward":
        fwd = agent.forward_xy()
        nx = agent.position[0] + fwd[0] * cfg.forward_step
        ny = agent.position[1] + fwd[1] * cfg.forward_step
        if position_free(scene, cfg, nx, ny, ignore=agent.inventory):
            agent.position = (nx, ny)
            success = True
            if agent.inventory is not None:
                obj = scene.instances[agent.inventory]
                old = obj.pose
                new = _held_pose(scene, cfg, camera, agent, obj)
                scene.set_pose(obj.id, new)
                moved.append((obj.id, old, new))
    elif kind in ("rotate_right", "rotate_left"):
        delta = -1 if kind == "rotate_right" else 1
        agent.yaw_idx = (agent.yaw_idx + delta) % YAW_BINS
        success = True
        if agent.inventory is not None:
            obj = scene.instances[agent.inventory]
            old = obj.pose
            new = _held_pose(scene, cfg, camera, agent, obj)
            scene.set_pose(obj.id, new)
            moved.append((obj.id, old, new))
    elif kind in ("look_up", "look_down"):
        delta = 1 if kind == "look_up" else -1
        np_idx = agent.pitch_idx + delta
        if PITCH_IDX_RANGE[0] <= np_idx <= PITCH_IDX_RANGE[1]:
            agent.pitch_idx = np_idx
            success = True
    elif kind == "drop":
        if agent.inventory is not None:
            obj = scene.instances[agent.inventory]
            pose = _try_drop(scene, cfg, agent, obj)
            if pose is not None:
                old = obj.pose
                scene.set_pose(obj.id, pose)
                obj.held = False
                agent.inventory = None
                moved.append((obj.id, old, pose))
                success = True
    elif kind == "move_held":
        if agent.inventory is not None:
            axis, sign = arg
            obj = scene.instances[agent.inventory]
            pos = list(obj.pose.position)
            pos[axis] += sign * cfg.move_held_step
            amin, amax = _moved_aabb(obj, pos)
            if _aabb_free(scene, obj.id, amin, amax):
                old = obj.pose
                new = Pose(tuple(pos), obj.pose.yaw)
                scene.set_pose(obj.id, new)
                moved.append((obj.id, old, new))
                success = True
    elif kind in ("pickup", "push", "interact"):
        resolved = targets.lookup(kind, arg)
        if resolved is not None:
            iid, affordance = resolved
            attempt = (iid, affordance)
            if affordance == "pickup":
                ok = (
                    agent.inventory is None
                    and scene.gt_flag(iid, "pickup")
                    and _reach_distance(scene, camera, agent, iid) <= cfg.reach_radius
                )
                if ok:
                    obj = scene.instances[iid]
                    old = obj.pose
                    new = _held_pose(scene, cfg, camera, agent, obj)
                    scene.set_pose(iid, new)
                    obj.held = True
                    agent.inventory = iid
                    moved.append((iid, old, new))
                    success = True
            else:
                ok = (
                    scene.gt_flag(iid, "push")
                    and not scene.instances[iid].held
                    and _reach_distance(scene, camera, agent, iid) <= cfg.reach_radius
                )
                if ok:
                    obj = scene.instances[iid]
                    fwd = agent.forward_xy()
                    pos = (
                        obj.pose.position[0] + fwd[0] * cfg.push_distance,
                        obj.pose.position[1] + fwd[1] * cfg.push_distance,
                        obj.pose.position[2],
                    )
                    amin, amax = _moved_aabb(obj, pos)
                    if _aabb_free(scene, iid, amin, amax):
                        old = obj.pose
                        new = Pose(pos, obj.pose.yaw)
                        scene.set_pose(iid, new)
                        moved.append((iid, old, new))
                        success = True
    else:  # pragma: no cover - decode_action is exhaustive
        raise ContractViolation(f"unhandled action kind {kind!r}")

    frame = render(scene, agent, camera, noise_seed=noise_seed, step_index=step_index)
    return StepResult(
        action=int(action),
        success=success,
        frame=frame,
        moved_instances=moved,
        attempt=attempt,
    )
