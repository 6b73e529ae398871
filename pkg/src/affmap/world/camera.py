"""Raycast rendering of depth / instance-id / appearance frames.

The room is a closed box (floor, ceiling, four boundary walls); objects and
interior walls are cuboids. Depth is the Euclidean ray length to the nearest
hit, +inf past max range. Instance ids: 0 = floor, -1 = walls/ceiling,
-2 = no hit, positive = objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scene import Scene, interior_wall_boxes

FLOOR_ID = 0
WALL_ID = -1
NO_HIT_ID = -2

YAW_BINS = 12  # 30 degree steps
PITCH_STEP_DEG = 15.0
PITCH_IDX_RANGE = (-4, 4)  # +-60 degrees


@dataclass
class CameraConfig:
    resolution: int = 64
    fov_deg: float = 90.0
    max_range: float = 10.0
    height: float = 1.2
    noise_sigma: float = 0.02
    ambient: float = 0.35
    light_dir: tuple[float, float, float] = (0.35, 0.2, -0.91)
    arm_drop: float = 0.5  # arm base sits this far below the camera


@dataclass
class CameraPose:
    """Quantized 6-DoF camera pose (roll is always zero)."""

    position: tuple[float, float, float]
    yaw_idx: int
    pitch_idx: int

    @property
    def yaw(self) -> float:
        return self.yaw_idx * (2.0 * math.pi / YAW_BINS)

    @property
    def pitch(self) -> float:
        return math.radians(self.pitch_idx * PITCH_STEP_DEG)


@dataclass
class Frame:
    depth: np.ndarray  # (H, W) float32, +inf where nothing within range
    instance_ids: np.ndarray  # (H, W) int16
    appearance: np.ndarray  # (H, W, 3) float32 in [0, 1]
    camera_pose: CameraPose
    step_index: int = 0


_DIR_CACHE: dict[tuple, np.ndarray] = {}

_FLOOR_COLOR = np.array([0.80, 0.78, 0.74], dtype=np.float32)
_WALL_COLOR = np.array([0.92, 0.92, 0.90], dtype=np.float32)


def ray_dirs(camera: CameraConfig, yaw_idx: int, pitch_idx: int) -> np.ndarray:
    """Unit world-frame ray directions, (H, W, 3) float32. Cached per pose bin."""
    key = (camera.resolution, round(camera.fov_deg, 6), yaw_idx % YAW_BINS, pitch_idx)
    cached = _DIR_CACHE.get(key)
    if cached is not None:
        return cached
    n = camera.resolution
    focal = (n / 2.0) / math.tan(math.radians(camera.fov_deg) / 2.0)
    cols = (np.arange(n) + 0.5 - n / 2.0) / focal
    rows = (n / 2.0 - np.arange(n) - 0.5) / focal
    u = np.broadcast_to(cols[None, :], (n, n))
    v = np.broadcast_to(rows[:, None], (n, n))
    yaw = (yaw_idx % YAW_BINS) * (2.0 * math.pi / YAW_BINS)
    pitch = math.radians(pitch_idx * PITCH_STEP_DEG)
    cy, sy, cp, sp = math.cos(yaw), math.sin(yaw), math.cos(pitch), math.sin(pitch)
    fwd = np.array([cy * cp, sy * cp, sp])
    right = np.array([sy, -cy, 0.0])
    up = np.array([-cy * sp, -sy * sp, cp])
    dirs = fwd[None, None, :] + u[..., None] * right[None, None, :] + v[..., None] * up[None, None, :]
    dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
    dirs = dirs.astype(np.float32)
    dirs.setflags(write=False)
    _DIR_CACHE[key] = dirs
    return dirs


def _plane_update(t_cand, id_val, color, normal, light, state):
    t_best, id_best, color_best, shade_best = state
    better = t_cand < t_best
    if not better.any():
        return
    lam = max(0.0, -float(np.dot(normal, light)))
    np.copyto(t_best, t_cand, where=better)
    id_best[better] = id_val
    color_best[better] = color
    shade_best[better] = lam


def _box_intersect(origin, dirs, center, half, yaw):
    """Slab test; returns (t, entry_axis, entry_sign) with t=+inf on miss."""
    if yaw != 0.0:
        c, s = math.cos(-yaw), math.sin(-yaw)
        o = origin - center
        o = np.array([c * o[0] - s * o[1], s * o[0] + c * o[1], o[2]])
        dx = c * dirs[:, 0] - s * dirs[:, 1]
        dy = s * dirs[:, 0] + c * dirs[:, 1]
        d = np.stack([dx, dy, dirs[:, 2]], axis=1)
    else:
        o = origin - center
        d = dirs
    d_safe = np.where(np.abs(d) < 1e-9, 1e-9, d)
    inv = 1.0 / d_safe
    lo = (-half - o) * inv
    hi = (half - o) * inv
    tmin = np.minimum(lo, hi)
    tmax = np.maximum(lo, hi)
    tnear = tmin.max(axis=1)
    tfar = tmax.min(axis=1)
    axis = np.argmax(tmin, axis=1)
    hit = (tfar >= tnear) & (tfar > 1e-6)
    t = np.where(tnear > 1e-6, tnear, tfar)
    t = np.where(hit, t, np.inf).astype(np.float32)
    sign = -np.sign(np.take_along_axis(d, axis[:, None], axis=1)[:, 0])
    return t, axis, sign


def render(scene: Scene, agent, camera: CameraConfig, noise_seed: int = 0, step_index: int = 0) -> Frame:
    """Nearest ray-cuboid intersections with Lambertian-style shading.

    `agent` is anything with .position (x, y), .yaw_idx, .pitch_idx.
    Deterministic for fixed inputs and noise_seed.
    """
    n = camera.resolution
    npix = n * n
    dirs_img = ray_dirs(camera, agent.yaw_idx, agent.pitch_idx)
    dirs = dirs_img.reshape(npix, 3)
    ox, oy = float(agent.position[0]), float(agent.position[1])
    origin = np.array([ox, oy, camera.height])
    light = np.asarray(camera.light_dir, dtype=np.float64)
    light = light / np.linalg.norm(light)

    t_best = np.full(npix, np.inf, dtype=np.float32)
    id_best = np.full(npix, NO_HIT_ID, dtype=np.int16)
    color_best = np.zeros((npix, 3), dtype=np.float32)
    shade_best = np.zeros(npix, dtype=np.float32)
    state = (t_best, id_best, color_best, shade_best)

    w, d = scene.room_size
    h = scene.room_height
    dz = dirs[:, 2]
    dxs = dirs[:, 0]
    dys = dirs[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(dz < 0, -origin[2] / dz, np.inf).astype(np.float32)
        _plane_update(t, FLOOR_ID, _FLOOR_COLOR, (0, 0, 1.0), light, state)
        t = np.where(dz > 0, (h - origin[2]) / dz, np.inf).astype(np.float32)
        _plane_update(t, WALL_ID, _WALL_COLOR, (0, 0, -1.0), light, state)
        t = np.where(dxs < 0, -origin[0] / dxs, np.inf).astype(np.float32)
        _plane_update(t, WALL_ID, _WALL_COLOR, (1.0, 0, 0), light, state)
        t = np.where(dxs > 0, (w - origin[0]) / dxs, np.inf).astype(np.float32)
        _plane_update(t, WALL_ID, _WALL_COLOR, (-1.0, 0, 0), light, state)
        t = np.where(dys < 0, -origin[1] / dys, np.inf).astype(np.float32)
        _plane_update(t, WALL_ID, _WALL_COLOR, (0, 1.0, 0), light, state)
        t = np.where(dys > 0, (d - origin[1]) / dys, np.inf).astype(np.float32)
        _plane_update(t, WALL_ID, _WALL_COLOR, (0, -1.0, 0), light, state)

    boxes = []
    for wmin, wmax in interior_wall_boxes(scene.config):
        boxes.append((WALL_ID, (wmin + wmax) / 2.0, (wmax - wmin) / 2.0, 0.0, _WALL_COLOR))
    ids, centers, halves, yaws, colors = scene.render_arrays()
    for k in range(len(ids)):
        boxes.append((int(ids[k]), centers[k], halves[k], float(yaws[k]), colors[k]))

    for iid, center, half, yaw, color in boxes:
        t, axis, sign = _box_intersect(origin, dirs, center, half, yaw)
        better = t < t_best
        if not better.any():
            continue
        # world-frame normal of the entry face
        nx = np.zeros(npix)
        ny = np.zeros(npix)
        nz = np.zeros(npix)
        nx[axis == 0] = sign[axis == 0]
        ny[axis == 1] = sign[axis == 1]
        nz[axis == 2] = sign[axis == 2]
        if yaw != 0.0:
            c, s = math.cos(yaw), math.sin(yaw)
            nx, ny = c * nx - s * ny, s * nx + c * ny
        lam = np.maximum(0.0, -(nx * light[0] + ny * light[1] + nz * light[2]))
        np.copyto(t_best, t, where=better)
        id_best[better] = iid
        color_best[better] = color
        shade_best[better] = lam[better].astype(np.float32)

    out_of_range = t_best > camera.max_range
    t_best[out_of_range] = np.inf
    id_best[out_of_range] = NO_HIT_ID
    color_best[out_of_range] = 0.0
    shade_best[out_of_range] = 0.0

    amb = camera.ambient
    appearance = color_best * (amb + (1.0 - amb) * shade_best[:, None])
    if camera.noise_sigma > 0:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=noise_seed)))
        appearance = appearance + rng.standard_normal((npix, 3), dtype=np.float32) * camera.noise_sigma
    np.clip(appearance, 0.0, 1.0, out=appearance)
    appearance[id_best == NO_HIT_ID] = 0.0

    pose = CameraPose(position=(ox, oy, camera.height), yaw_idx=agent.yaw_idx % YAW_BINS, pitch_idx=agent.pitch_idx)
    return Frame(
        depth=t_best.reshape(n, n),
        instance_ids=id_best.reshape(n, n),
        appearance=appearance.reshape(n, n, 3),
        camera_pose=pose,
        step_index=step_index,
    )


def backproject(frame: Frame, camera: CameraConfig) -> np.ndarray:
    """Per-pixel 3D hit points, (H, W, 3); non-finite where depth is +inf."""
    dirs = ray_dirs(camera, frame.camera_pose.yaw_idx, frame.camera_pose.pitch_idx)
    origin = np.asarray(frame.camera_pose.position, dtype=np.float32)
    return origin + dirs * frame.depth[..., None]


def arm_base(frame: Frame, camera: CameraConfig) -> np.ndarray:
    pos = np.asarray(frame.camera_pose.position, dtype=np.float64)
    return pos - np.array([0.0, 0.0, camera.arm_drop])


def distance_image(frame: Frame, camera: CameraConfig, arm_base_pos: np.ndarray | None = None) -> np.ndarray:
    """Euclidean distance from the arm base to each back-projected point.

    +inf depth propagates to +inf distance.
    """
    base = arm_base(frame, camera) if arm_base_pos is None else np.asarray(arm_base_pos, dtype=np.float64)
    pts = backproject(frame, camera)
    diff = pts - base.astype(np.float32)
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    dist[~np.isfinite(frame.depth)] = np.inf
    return dist
