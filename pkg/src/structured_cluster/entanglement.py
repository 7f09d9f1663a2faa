"""Bipartition enumeration and the PPT scan over the pump rotation angle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidArgument
from .gaussian import evolve, ppt_value
from .hamiltonian import quadripartite_G

MAX_MODES = 20


@dataclass(frozen=True)
class Bipartition:
    """A cut of modes 0..n-1; ``left`` is the side written first in the label."""

    left: frozenset[int]
    n_modes: int

    def __post_init__(self):
        object.__setattr__(self, "left", frozenset(self.left))
        if not self.left or len(self.left) >= self.n_modes:
            raise InvalidArgument("a bipartition side must be nonempty and proper")

    @property
    def right(self) -> frozenset[int]:
        return frozenset(range(self.n_modes)) - self.left

    @property
    def label(self) -> str:
        sep = "," if self.n_modes > 9 else ""
        fmt = lambda side: sep.join(str(i + 1) for i in sorted(side))  # noqa: E731
        return f"{fmt(self.left)}|{fmt(self.right)}"

    def __str__(self):
        return self.label


def enumerate_bipartitions(n_modes: int) -> list[Bipartition]:
    """All 2^(n-1) - 1 cuts, smaller side first.

    Ordered by the size of the smaller side, then lexicographically; for an even
    split only the side containing mode 1 is listed. For four modes this gives
    1|234, 2|134, 3|124, 4|123, 12|34, 13|24, 14|23.
    """
    if not 2 <= n_modes <= MAX_MODES:
        raise InvalidArgument(f"n_modes must lie in [2, {MAX_MODES}], got {n_modes}")
    out = []
    for size in range(1, n_modes // 2 + 1):
        for side in combinations(range(n_modes), size):
            if 2 * size == n_modes and side[0] != 0:
                continue
            out.append(Bipartition(frozenset(side), n_modes))
    return out


@dataclass(frozen=True, eq=False)
class PPTScan:
    thetas: np.ndarray
    bipartitions: tuple[Bipartition, ...]
    values: np.ndarray  # shape (len(thetas), len(bipartitions))
    gamma: float

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.bipartitions]

    def rows(self) -> Iterator[tuple[float, str, float]]:
        for i, theta in enumerate(self.thetas):
            for j, b in enumerate(self.bipartitions):
                yield float(theta), b.label, float(self.values[i, j])

    def value(self, theta_index: int, label: str) -> float:
        return float(self.values[theta_index, self.labels.index(label)])


def ppt_values(theta: float, gamma: float, bipartitions: Sequence[Bipartition] | None = None) -> np.ndarray:
    state = evolve(quadripartite_G(theta), gamma)
    if bipartitions is None:
        bipartitions = enumerate_bipartitions(4)
    return np.array([ppt_value(state.V, b) for b in bipartitions])


def ppt_scan(theta_grid: Sequence[float], gamma: float) -> PPTScan:
    """PPT value of every bipartition of the quadripartite state for each theta."""
    thetas = np.asarray(list(theta_grid), dtype=float)
    if thetas.size == 0:
        raise InvalidArgument("theta grid is empty")
    if gamma < 0:
        raise InvalidArgument(f"gamma must be >= 0, got {gamma}")
    bips = tuple(enumerate_bipartitions(4))
    values = np.vstack([ppt_values(t, gamma, bips) for t in thetas])
    return PPTScan(thetas, bips, values, gamma)


def default_theta_grid(n_points: int = 101) -> np.ndarray:
    return np.linspace(0.0, math.pi / 4, n_points)


def genuinely_entangled(values: np.ndarray, margin: float = 0.0) -> bool:
    """Every bipartition violates the PPT bound by more than ``margin``."""
    return bool(np.all(np.asarray(values) < 1.0 - margin))
