"""Object category library."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ObjectCategory:
    """A kind of object with ground-truth interaction capabilities.

    extent_min/extent_max bound the per-instance cuboid dimensions (m).
    placement is "floor" (stands on the ground) or "on_surface" (sits on
    top of a floor-placed object).
    """

    name: str
    extent_min: tuple[float, float, float]
    extent_max: tuple[float, float, float]
    pickupable: bool
    pushable: bool
    placement: str  # "floor" | "on_surface"
    base_color: tuple[float, float, float]

    def __post_init__(self):
        for lo, hi in zip(self.extent_min, self.extent_max):
            if lo > hi:
                raise ValueError(f"category {self.name}: extent min > max")
        if self.placement not in ("floor", "on_surface"):
            raise ValueError(f"category {self.name}: bad placement {self.placement!r}")


# 12 categories spanning all four (pickupable, pushable) combinations.
# Small on-surface items include sub-0.1 m extents so sphere-style
# annotation baselines have something to spill over on.
_DEFAULTS = [
    # name, extent_min, extent_max, pickup, push, placement, color
    ("sofa", (1.4, 0.7, 0.6), (2.0, 0.95, 0.85), False, False, "floor", (0.55, 0.30, 0.25)),
    ("table", (0.9, 0.6, 0.55), (1.5, 1.0, 0.75), False, False, "floor", (0.45, 0.32, 0.18)),
    ("cabinet", (0.7, 0.4, 1.1), (1.2, 0.6, 1.8), False, False, "floor", (0.35, 0.25, 0.20)),
    ("shelf", (0.6, 0.28, 1.0), (1.0, 0.4, 1.6), False, False, "floor", (0.50, 0.42, 0.30)),
    ("box", (0.35, 0.35, 0.3), (0.6, 0.6, 0.55), False, True, "floor", (0.70, 0.58, 0.35)),
    ("chair", (0.42, 0.42, 0.75), (0.55, 0.55, 1.0), False, True, "floor", (0.25, 0.35, 0.55)),
    ("stool", (0.32, 0.32, 0.38), (0.45, 0.45, 0.5), False, True, "floor", (0.30, 0.50, 0.35)),
    ("cup", (0.06, 0.06, 0.07), (0.1, 0.1, 0.12), True, False, "on_surface", (0.85, 0.85, 0.90)),
    ("book", (0.14, 0.11, 0.03), (0.24, 0.18, 0.05), True, False, "on_surface", (0.60, 0.15, 0.15)),
    ("bottle", (0.06, 0.06, 0.2), (0.09, 0.09, 0.3), True, False, "on_surface", (0.20, 0.55, 0.25)),
    ("laptop", (0.28, 0.2, 0.02), (0.35, 0.25, 0.03), True, True, "on_surface", (0.25, 0.25, 0.28)),
    ("block", (0.05, 0.05, 0.05), (0.09, 0.09, 0.09), True, True, "on_surface", (0.90, 0.65, 0.15)),
]


def default_categories() -> list[ObjectCategory]:
    return [
        ObjectCategory(
            name=n,
            extent_min=lo,
            extent_max=hi,
            pickupable=pk,
            pushable=ps,
            placement=pl,
            base_color=c,
        )
        for n, lo, hi, pk, ps, pl, c in _DEFAULTS
    ]
