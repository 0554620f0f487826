"""Bundled two-subsystem benchmark systems and their square-wave signal."""

from __future__ import annotations

import numpy as np

from .model import SubSystem, SwitchedSystem

A1 = np.array([[-2.1, -2.0],
               [0.5, 1.0]])
A2 = np.array([[1.0, 2.0],
               [0.1, -2.0]])


def example_1() -> SwitchedSystem:
    """Two unstable affine subsystems sharing the equilibrium (0, -1)."""
    return SwitchedSystem((
        SubSystem(A1, np.array([-2.0, 1.0])),
        SubSystem(A2, np.array([2.0, -2.0])),
    ))


def example_2() -> SwitchedSystem:
    """Same dynamics matrices, distinct equilibria; admits a limit cycle."""
    return SwitchedSystem((
        SubSystem(A1, np.array([-2.0, 1.0])),
        SubSystem(A2, np.array([2.0, 2.0])),
    ))


def preset(number: int) -> SwitchedSystem:
    if number == 1:
        return example_1()
    if number == 2:
        return example_2()
    raise ValueError(f"unknown preset {number}; available presets are 1 and 2")
