"""Points of the slit tangent bundle in a single chart."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChartPoint:
    """A point (x^i, xdot^i); xdot is one representative of its ray."""

    x: tuple[float, float, float, float]
    v: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.x) != 4 or len(self.v) != 4:
            raise ValueError(f"ChartPoint needs 4 + 4 coordinates, got {self.x}, {self.v}")
        if not any(self.v):
            raise ValueError("ChartPoint velocity must be nonzero")

    @classmethod
    def of(cls, x: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> "ChartPoint":
        return cls(
            tuple(float(c) for c in x),  # type: ignore[arg-type]
            tuple(float(c) for c in v),  # type: ignore[arg-type]
        )

    @property
    def x_array(self) -> np.ndarray:
        return np.array(self.x)

    @property
    def v_array(self) -> np.ndarray:
        return np.array(self.v)

    @property
    def coordinates(self) -> np.ndarray:
        """All eight chart coordinates, x first."""
        return np.array([*self.x, *self.v])

    def scaled(self, alpha: float) -> "ChartPoint":
        """Same position, velocity representative alpha * xdot."""
        return ChartPoint.of(self.x, [alpha * c for c in self.v])


@dataclass(frozen=True, eq=False)
class ChartBatch:
    """One position with many velocity representatives, evaluated together.

    Jets seeded from a batch carry the batch as their leading tensor axis.
    Equality is identity: jets combine only when seeded from the same batch.
    """

    x: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float).reshape(4)
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 2 or v.shape[1] != 4 or len(v) == 0:
            raise ValueError(f"ChartBatch velocities must have shape (n, 4), got {v.shape}")
        if np.any(np.all(v == 0.0, axis=1)):
            raise ValueError("ChartBatch velocities must be nonzero")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)

    def __len__(self) -> int:
        return len(self.v)

    @property
    def x_array(self) -> np.ndarray:
        return self.x

    @property
    def v_array(self) -> np.ndarray:
        return self.v

    @property
    def coordinates(self) -> np.ndarray:
        """Shape (n, 8)."""
        return np.concatenate([np.broadcast_to(self.x, self.v.shape), self.v], axis=1)

    def point(self, i: int) -> ChartPoint:
        return ChartPoint.of(self.x, self.v[i])


AnyPoint = ChartPoint | ChartBatch


def batch_ndim(point: AnyPoint) -> int:
    """Number of leading batch axes carried by jets seeded at ``point``."""
    return 1 if isinstance(point, ChartBatch) else 0
