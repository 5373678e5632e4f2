"""Micro-swimmer controllability toolkit for the no-slip half space."""

from .greens import blake_tensor, point_force_velocity, self_image, stokeslet
from .swimmer import (
    FourSphereState,
    SwimmerParams,
    ThreeSphereState,
    four_sphere_fields,
    four_sphere_positions,
    three_sphere_fields,
    three_sphere_positions,
)

__all__ = [
    "stokeslet",
    "blake_tensor",
    "self_image",
    "point_force_velocity",
    "SwimmerParams",
    "ThreeSphereState",
    "FourSphereState",
    "three_sphere_positions",
    "three_sphere_fields",
    "four_sphere_positions",
    "four_sphere_fields",
]

__version__ = "0.1.0"
