"""Procedural cuboid scenes: generation, per-episode re-placement, JSON i/o."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .categories import ObjectCategory, default_categories

AFFORDANCES = ("pickup", "push")

SCENE_SCHEMA = "scene-v1"


class SceneGenerationError(RuntimeError):
    pass


@dataclass
class Pose:
    """Cuboid center position plus yaw about the vertical axis."""

    position: tuple[float, float, float]
    yaw: float = 0.0

    def to_list(self) -> list[float]:
        return [*self.position, self.yaw]

    @staticmethod
    def from_list(v) -> "Pose":
        return Pose(position=(float(v[0]), float(v[1]), float(v[2])), yaw=float(v[3]))


@dataclass
class ObjectInstance:
    id: int
    category: ObjectCategory
    pose: Pose
    extent: tuple[float, float, float]  # (w, d, h) in the object frame
    color: tuple[float, float, float]
    held: bool = False

    def horizontal_half_extents(self) -> tuple[float, float]:
        """Half extents of the enclosing axis-aligned footprint at current yaw."""
        hx, hy = self.extent[0] / 2.0, self.extent[1] / 2.0
        c, s = abs(math.cos(self.pose.yaw)), abs(math.sin(self.pose.yaw))
        return (c * hx + s * hy, s * hx + c * hy)

    def aabb(self) -> tuple[np.ndarray, np.ndarray]:
        """Enclosing axis-aligned bounding box (min, max) at the current pose."""
        ex, ey = self.horizontal_half_extents()
        hz = self.extent[2] / 2.0
        cx, cy, cz = self.pose.position
        return (
            np.array([cx - ex, cy - ey, cz - hz]),
            np.array([cx + ex, cy + ey, cz + hz]),
        )

    def top_z(self) -> float:
        return self.pose.position[2] + self.extent[2] / 2.0


@dataclass
class SceneConfig:
    room_size: tuple[float, float] = (10.0, 10.0)
    room_height: float = 3.0
    object_count: tuple[int, int] = (6, 10)
    # Interior wall footprints as (x0, y0, x1, y1); full room height.
    interior_walls: list[tuple[float, float, float, float]] = field(default_factory=list)
    wall_margin: float = 0.1  # clearance between objects and walls
    object_gap: float = 0.05  # clearance between object AABBs
    max_place_attempts: int = 200
    color_jitter: float = 0.08

    def categories(self) -> list[ObjectCategory]:
        return default_categories()


@dataclass
class Scene:
    config: SceneConfig
    seed: int
    instances: dict[int, ObjectInstance]

    def __post_init__(self):
        self._arrays = None

    @property
    def room_size(self) -> tuple[float, float]:
        return self.config.room_size

    @property
    def room_height(self) -> float:
        return self.config.room_height

    def mark_dirty(self):
        self._arrays = None

    def set_pose(self, iid: int, pose: Pose):
        self.instances[iid].pose = pose
        self.mark_dirty()

    def render_arrays(self):
        """Packed per-instance arrays for the vectorized raycaster.

        Returns (ids, centers, half_extents, yaws, colors) over all instances.
        """
        if self._arrays is None:
            inst = list(self.instances.values())
            if inst:
                ids = np.array([o.id for o in inst], dtype=np.int16)
                centers = np.array([o.pose.position for o in inst], dtype=np.float64)
                half = np.array([o.extent for o in inst], dtype=np.float64) / 2.0
                yaws = np.array([o.pose.yaw for o in inst], dtype=np.float64)
                colors = np.array([o.color for o in inst], dtype=np.float32)
            else:
                ids = np.zeros(0, dtype=np.int16)
                centers = np.zeros((0, 3))
                half = np.zeros((0, 3))
                yaws = np.zeros(0)
                colors = np.zeros((0, 3), dtype=np.float32)
            self._arrays = (ids, centers, half, yaws, colors)
        return self._arrays

    def gt_flag(self, iid: int, affordance: str) -> bool:
        """Ground-truth capability of an instance; floor/walls are never interactable."""
        obj = self.instances.get(int(iid))
        if obj is None:
            return False
        return obj.category.pickupable if affordance == "pickup" else obj.category.pushable

    def interactable_ids(self, affordance: str | None = None) -> list[int]:
        out = []
        for iid, obj in self.instances.items():
            if affordance is None:
                ok = obj.category.pickupable or obj.category.pushable
            else:
                ok = self.gt_flag(iid, affordance)
            if ok:
                out.append(iid)
        return out

    def copy(self) -> "Scene":
        insts = {
            iid: replace(o, pose=Pose(o.pose.position, o.pose.yaw))
            for iid, o in self.instances.items()
        }
        return Scene(config=self.config, seed=self.seed, instances=insts)


def _overlaps(amin, amax, bmin, bmax, gap: float) -> bool:
    return bool(
        np.all(amin - gap < bmax) and np.all(bmin - gap < amax)
    )


def _inside_room(amin, amax, cfg: SceneConfig, margin: float) -> bool:
    w, d = cfg.room_size
    return (
        amin[0] >= margin
        and amin[1] >= margin
        and amax[0] <= w - margin
        and amax[1] <= d - margin
        and amin[2] >= -1e-9
        and amax[2] <= cfg.room_height + 1e-9
    )


def interior_wall_boxes(cfg: SceneConfig) -> list[tuple[np.ndarray, np.ndarray]]:
    boxes = []
    for x0, y0, x1, y1 in cfg.interior_walls:
        boxes.append(
            (np.array([x0, y0, 0.0]), np.array([x1, y1, cfg.room_height]))
        )
    return boxes


def _collides(candidate: ObjectInstance, placed: list[ObjectInstance], cfg: SceneConfig) -> bool:
    cmin, cmax = candidate.aabb()
    if not _inside_room(cmin, cmax, cfg, cfg.wall_margin):
        return True
    for wmin, wmax in interior_wall_boxes(cfg):
        if _overlaps(cmin, cmax, wmin, wmax, cfg.object_gap):
            return True
    for other in placed:
        if other.id == candidate.id:
            continue
        omin, omax = other.aabb()
        if _overlaps(cmin, cmax, omin, omax, cfg.object_gap):
            return True
    return False


_YAW_CHOICES = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


def _place_one(
    obj: ObjectInstance,
    placed: list[ObjectInstance],
    cfg: SceneConfig,
    rng: np.random.Generator,
) -> ObjectInstance:
    w, d = cfg.room_size
    for _ in range(cfg.max_place_attempts):
        yaw = float(rng.choice(_YAW_CHOICES))
        obj.pose = Pose((0.0, 0.0, 0.0), yaw)
        if obj.category.placement == "floor":
            x = float(rng.uniform(0.0, w))
            y = float(rng.uniform(0.0, d))
            z = obj.extent[2] / 2.0
            obj.pose = Pose((x, y, z), yaw)
        else:
            ex, ey = obj.horizontal_half_extents()
            supports = [
                p
                for p in placed
                if p.category.placement == "floor" and _fits_on(obj, (ex, ey), p)
            ]
            if not supports:
                raise SceneGenerationError(
                    f"no support surface available for category {obj.category.name!r}"
                )
            sup = supports[int(rng.integers(len(supports)))]
            sx, sy = sup.horizontal_half_extents()
            cx, cy, _ = sup.pose.position
            x = float(rng.uniform(cx - sx + ex, cx + sx - ex))
            y = float(rng.uniform(cy - sy + ey, cy + sy - ey))
            z = sup.top_z() + obj.extent[2] / 2.0
            obj.pose = Pose((x, y, z), yaw)
            # only collide against other on-surface items and walls, not the support
            others = [p for p in placed if p.id != sup.id]
            if not _collides_on_surface(obj, sup, others, cfg):
                return obj
            continue
        if not _collides(obj, placed, cfg):
            return obj
    raise SceneGenerationError(
        f"could not place category {obj.category.name!r} after "
        f"{cfg.max_place_attempts} attempts"
    )


def _fits_on(obj: ObjectInstance, half_xy: tuple[float, float], support: ObjectInstance) -> bool:
    ex, ey = half_xy
    sx, sy = support.horizontal_half_extents()
    if support.top_z() + obj.extent[2] > 2.5:  # unreachable stack heights are pointless
        return False
    return sx > ex + 0.02 and sy > ey + 0.02


def _collides_on_surface(obj, support, others, cfg: SceneConfig) -> bool:
    cmin, cmax = obj.aabb()
    if not _inside_room(cmin, cmax, cfg, cfg.wall_margin):
        return True
    for wmin, wmax in interior_wall_boxes(cfg):
        if _overlaps(cmin, cmax, wmin, wmax, cfg.object_gap):
            return True
    for other in others:
        omin, omax = other.aabb()
        if _overlaps(cmin, cmax, omin, omax, cfg.object_gap):
            return True
    return False


def _sample_category_mix(
    n: int, categories: list[ObjectCategory], rng: np.random.Generator
) -> list[ObjectCategory]:
    """Pick n categories; guarantees a support surface, a pickupable item and a
    non-interactable item whenever n allows."""
    floor_cats = [c for c in categories if c.placement == "floor"]
    inert_floor = [c for c in floor_cats if not (c.pickupable or c.pushable)]
    pickup_cats = [c for c in categories if c.pickupable]
    mix: list[ObjectCategory] = []
    if n >= 1:
        pool = inert_floor or floor_cats
        mix.append(pool[int(rng.integers(len(pool)))])
    if n >= 2:
        mix.append(pickup_cats[int(rng.integers(len(pickup_cats)))])
    while len(mix) < n:
        mix.append(categories[int(rng.integers(len(categories)))])
    return mix


def _build_instances(
    mix: list[ObjectCategory], cfg: SceneConfig, rng: np.random.Generator
) -> list[ObjectInstance]:
    out = []
    for i, cat in enumerate(mix, start=1):
        extent = tuple(
            float(rng.uniform(lo, hi)) for lo, hi in zip(cat.extent_min, cat.extent_max)
        )
        jitter = rng.uniform(-cfg.color_jitter, cfg.color_jitter, size=3)
        color = tuple(float(np.clip(c + j, 0.0, 1.0)) for c, j in zip(cat.base_color, jitter))
        out.append(
            ObjectInstance(
                id=i,
                category=cat,
                pose=Pose((0.0, 0.0, 0.0)),
                extent=extent,
                color=color,
            )
        )
    return out


def place_instances(instances: list[ObjectInstance], cfg: SceneConfig, rng: np.random.Generator):
    """(Re)place every instance collision-free; floor categories first so
    on-surface items always have supports."""
    placed: list[ObjectInstance] = []
    ordered = [o for o in instances if o.category.placement == "floor"] + [
        o for o in instances if o.category.placement != "floor"
    ]
    for obj in ordered:
        obj.held = False
        _place_one(obj, placed, cfg, rng)
        placed.append(obj)


def generate_scene(seed: int, config: SceneConfig | None = None) -> Scene:
    """Deterministic scene for (seed, config)."""
    cfg = config or SceneConfig()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed)))
    lo, hi = cfg.object_count
    if lo > hi or lo < 0:
        raise ValueError(f"bad object_count range {cfg.object_count}")
    n = int(rng.integers(lo, hi + 1))
    mix = _sample_category_mix(n, cfg.categories(), rng)
    instances = _build_instances(mix, cfg, rng)
    place_instances(instances, cfg, rng)
    return Scene(config=cfg, seed=seed, instances={o.id: o for o in instances})


def randomize_poses(scene: Scene, rng: np.random.Generator) -> Scene:
    """Fresh collision-free poses for an episode; ids, extents, colors are kept."""
    fresh = scene.copy()
    place_instances(list(fresh.instances.values()), fresh.config, rng)
    fresh.mark_dirty()
    return fresh


# --- serialization ---------------------------------------------------------


def _cat_to_dict(c: ObjectCategory) -> dict:
    return {
        "name": c.name,
        "extent_min": list(c.extent_min),
        "extent_max": list(c.extent_max),
        "pickupable": c.pickupable,
        "pushable": c.pushable,
        "placement": c.placement,
        "base_color": list(c.base_color),
    }


def _cat_from_dict(d: dict) -> ObjectCategory:
    return ObjectCategory(
        name=d["name"],
        extent_min=tuple(d["extent_min"]),
        extent_max=tuple(d["extent_max"]),
        pickupable=bool(d["pickupable"]),
        pushable=bool(d["pushable"]),
        placement=d["placement"],
        base_color=tuple(d["base_color"]),
    )


def scene_to_dict(scene: Scene) -> dict:
    cfg = scene.config
    return {
        "schema": SCENE_SCHEMA,
        "seed": scene.seed,
        "room": {
            "size": list(cfg.room_size),
            "height": cfg.room_height,
            "interior_walls": [list(w) for w in cfg.interior_walls],
        },
        "categories": [_cat_to_dict(c) for c in {o.category.name: o.category for o in scene.instances.values()}.values()],
        "instances": [
            {
                "id": o.id,
                "category": o.category.name,
                "pose": o.pose.to_list(),
                "extent": list(o.extent),
                "color": list(o.color),
            }
            for o in scene.instances.values()
        ],
    }


def save_scene(scene: Scene, path: str | Path):
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=1, sort_keys=True))


def load_scene(path: str | Path) -> Scene:
    d = json.loads(Path(path).read_text())
    if d.get("schema") != SCENE_SCHEMA:
        raise ValueError(f"unsupported scene schema {d.get('schema')!r}")
    cfg = SceneConfig(
        room_size=tuple(d["room"]["size"]),
        room_height=float(d["room"]["height"]),
        interior_walls=[tuple(w) for w in d["room"]["interior_walls"]],
    )
    cats = {c["name"]: _cat_from_dict(c) for c in d["categories"]}
    instances = {}
    for rec in d["instances"]:
        instances[int(rec["id"])] = ObjectInstance(
            id=int(rec["id"]),
            category=cats[rec["category"]],
            pose=Pose.from_list(rec["pose"]),
            extent=tuple(rec["extent"]),
            color=tuple(rec["color"]),
        )
    return Scene(config=cfg, seed=int(d["seed"]), instances=instances)
