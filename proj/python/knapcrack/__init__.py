"""Lattice attacks on subset-sum and binary linear Diophantine systems."""

from ._core import (
    KnapcrackError,
    System,
    attack,
    attack_scenario,
    brute_force,
    density,
    gamma,
    generate,
    jump_points,
    kernel_basis,
    kernel_features,
    modular_transform,
    parse_system,
    read_system,
)

__all__ = [
    "KnapcrackError",
    "System",
    "attack",
    "attack_scenario",
    "brute_force",
    "density",
    "gamma",
    "generate",
    "jump_points",
    "kernel_basis",
    "kernel_features",
    "modular_transform",
    "parse_system",
    "read_system",
]
