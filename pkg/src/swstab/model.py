"""Switched linear/affine system models, convex combinations and equilibria."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .linalg import DimensionError, SingularMatrixError

WEIGHT_SUM_TOL = 1e-12
DEFAULT_EQUILIBRIUM_TOL = 1e-9


class EquilibriumError(Exception):
    """A subsystem matrix is singular, so -A^{-1} b is undefined."""

    def __init__(self, message: str, subsystem: Optional[int] = None):
        super().__init__(message)
        self.subsystem = subsystem


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SubSystem:
    """One mode of the switched system: dx/dt = A x + b."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = linalg.as_square(self.A)
        b = linalg.as_vector(self.b)
        if b.shape[0] != A.shape[0]:
            raise DimensionError(
                f"b has length {b.shape[0]}, expected {A.shape[0]}")
        object.__setattr__(self, "A", _freeze(A))
        object.__setattr__(self, "b", _freeze(b))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def is_linear(self) -> bool:
        return bool(np.all(self.b == 0.0))


@dataclass(frozen=True)
class SwitchedSystem:
    """An ordered family of subsystems sharing a state dimension."""

    subsystems: tuple[SubSystem, ...]

    def __post_init__(self):
        subs = tuple(self.subsystems)
        if not subs:
            raise ValueError("a switched system needs at least one subsystem")
        n = subs[0].n
        for k, sub in enumerate(subs):
            if sub.n != n:
                raise DimensionError(
                    f"subsystem {k + 1} has dimension {sub.n}, expected {n}")
        object.__setattr__(self, "subsystems", subs)

    @property
    def m(self) -> int:
        return len(self.subsystems)

    @property
    def n(self) -> int:
        return self.subsystems[0].n

    @property
    def is_linear(self) -> bool:
        return all(sub.is_linear for sub in self.subsystems)

    def linear_part(self) -> "SwitchedSystem":
        """The same system with every affine drift zeroed."""
        return SwitchedSystem(tuple(
            SubSystem(sub.A, np.zeros(self.n)) for sub in self.subsystems))


@dataclass(frozen=True)
class Weights:
    """Normalised activation fractions on the simplex plus a cycle period.

    The fractions always sum to one; the time scale lives entirely in the
    period, so scaling a signal is a single multiplication of the period.
    """

    alpha: np.ndarray
    period: float = 1.0

    def __post_init__(self):
        a = linalg.as_vector(self.alpha)
        if a.size == 0:
            raise ValueError("weights must be nonempty")
        if np.any(a < 0.0):
            raise ValueError(f"weights must be nonnegative, got {a}")
        if abs(float(a.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got sum {a.sum()!r}")
        if not self.period > 0.0:
            raise ValueError(f"period must be positive, got {self.period}")
        object.__setattr__(self, "alpha", _freeze(a))
        object.__setattr__(self, "period", float(self.period))

    @property
    def m(self) -> int:
        return self.alpha.shape[0]


def average_system(sys: SwitchedSystem, w: Weights) -> SubSystem:
    """Convex combination (sum_i alpha_i A_i, sum_i alpha_i b_i)."""
    if w.m != sys.m:
        raise DimensionError(
            f"weights have length {w.m}, system has {sys.m} subsystems")
    A = sum(a * sub.A for a, sub in zip(w.alpha, sys.subsystems))
    b = sum(a * sub.b for a, sub in zip(w.alpha, sys.subsystems))
    return SubSystem(A, b)


def equilibrium(sub: SubSystem) -> np.ndarray:
    """Unique equilibrium -A^{-1} b of an affine subsystem."""
    try:
        return linalg.solve(sub.A, -sub.b)
    except SingularMatrixError as exc:
        raise EquilibriumError(
            f"singular dynamics matrix, no unique equilibrium: {exc}") from exc


def common_equilibrium(sys: SwitchedSystem,
                       tol: float = DEFAULT_EQUILIBRIUM_TOL) -> Optional[np.ndarray]:
    """Shared equilibrium of all subsystems, or None if they disagree.

    Agreement is pairwise in the infinity norm; the returned point is the
    mean of the per-subsystem equilibria.
    """
    points = []
    for k, sub in enumerate(sys.subsystems):
        try:
            points.append(equilibrium(sub))
        except EquilibriumError as exc:
            raise EquilibriumError(
                f"subsystem {k + 1}: {exc}", subsystem=k + 1) from exc
    for p in points[1:]:
        if np.max(np.abs(p - points[0])) > tol:
            return None
    return np.mean(points, axis=0)


# -- JSON system specification ------------------------------------------------

def system_to_dict(sys: SwitchedSystem) -> dict:
    return {
        "n": sys.n,
        "subsystems": [
            {"A": sub.A.tolist(), "b": sub.b.tolist()}
            for sub in sys.subsystems
        ],
    }


def system_from_dict(spec: dict) -> SwitchedSystem:
    """Parse {"n": int, "subsystems": [{"A": [[..]], "b": [..]?}, ..]}.

    An omitted "b" means the zero vector (linear subsystem).
    """
    if "subsystems" not in spec:
        raise ValueError('system spec is missing "subsystems"')
    subs = []
    for entry in spec["subsystems"]:
        A = np.asarray(entry["A"], dtype=float)
        b = np.asarray(entry.get("b", np.zeros(A.shape[0])), dtype=float)
        subs.append(SubSystem(A, b))
    sys_ = SwitchedSystem(tuple(subs))
    if "n" in spec and int(spec["n"]) != sys_.n:
        raise ValueError(
            f'declared dimension n={spec["n"]} does not match matrices (n={sys_.n})')
    return sys_


def load_system(path) -> SwitchedSystem:
    with open(path) as fh:
        return system_from_dict(json.load(fh))
