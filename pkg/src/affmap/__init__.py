"""Interactive affordance learning in a synthetic cuboid world.

An agent explores procedurally generated indoor scenes, stores interaction
outcomes in an object-level voxel map, propagates them into dense pixel
labels, and concurrently trains a pixel-wise affordance predictor and a
PPO exploration policy.
"""

__version__ = "0.1.0"
