"""Adjacency matrices of the parametric Hamiltonian graph.

A second-order pump rotated by theta couples the first-order pair at comb index
``n`` to the pair at ``p - n`` through the 2x2 block

    alpha(theta) = [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]] / sqrt(2)

in the (h, v) basis. The overall coupling constant is absorbed into ``gamma``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument, UnsupportedConfiguration
from .modes import SPATIAL, ModeId, PumpComponent, PumpSpec, cos_sin_2theta

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreqWindow:
    n_min: int
    n_max: int

    def __post_init__(self):
        if self.n_max - self.n_min + 1 < 2:
            raise InvalidArgument(f"frequency window [{self.n_min}, {self.n_max}] must hold at least 2 indices")

    def __contains__(self, n: int) -> bool:
        return self.n_min <= n <= self.n_max

    def __iter__(self):
        return iter(range(self.n_min, self.n_max + 1))

    def __len__(self):
        return self.n_max - self.n_min + 1

    def shifted(self, dn: int) -> "FreqWindow":
        return FreqWindow(self.n_min + dn, self.n_max + dn)


@dataclass(frozen=True, eq=False)
class HamiltonianGraph:
    modes: tuple[ModeId, ...]
    G: np.ndarray
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        G = np.array(self.G, dtype=float)
        if G.shape != (len(self.modes), len(self.modes)):
            raise InvalidArgument(f"G has shape {G.shape} for {len(self.modes)} modes")
        G.setflags(write=False)
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "G", G)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def index(self, mode: ModeId) -> int:
        return self.modes.index(mode)

    def coupling(self, u: ModeId, v: ModeId) -> float:
        return float(self.G[self.index(u), self.index(v)])

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.G, self.G.T))


def alpha_block(theta: float) -> np.ndarray:
    c, s = cos_sin_2theta(theta)
    return np.array([[c, s], [s, -c]]) / math.sqrt(2)


def quadripartite_modes() -> tuple[ModeId, ...]:
    """Signal (comb index 0) and idler (comb index 1) in h and v: modes 1..4."""
    return (ModeId(0, "h"), ModeId(0, "v"), ModeId(1, "h"), ModeId(1, "v"))


def quadripartite_G(theta: float) -> HamiltonianGraph:
    alpha = alpha_block(theta)
    zero = np.zeros((2, 2))
    return HamiltonianGraph(quadripartite_modes(), np.block([[zero, alpha], [alpha, zero]]))


def _check_components(components: Sequence[PumpComponent]):
    if not components:
        raise InvalidArgument("pump needs at least one component")
    if len(components) > 2:
        raise UnsupportedConfiguration(f"at most two pump frequency components are supported, got {len(components)}")
    if len(components) == 2 and components[0].p == components[1].p:
        raise InvalidArgument(f"pump indices must differ, got p1 = p2 = {components[0].p}")


def _fill_comb(G, index, components, window, time, warnings):
    for comp in components:
        alpha = comp.amplitude * alpha_block(comp.theta_at(time))
        for n in window:
            m = comp.p - n
            if m not in window:
                continue
            if m == n:
                msg = f"degenerate mode n={n} for pump p={comp.p} excluded"
                if time != 0:
                    msg += f" (bin {time})"
                if msg not in warnings:
                    warnings.append(msg)
                continue
            for i, s in enumerate(SPATIAL):
                for j, s2 in enumerate(SPATIAL):
                    G[index[ModeId(n, s, time)], index[ModeId(m, s2, time)]] = alpha[i, j]


def comb_G(pump: PumpSpec, window: FreqWindow) -> HamiltonianGraph:
    """Hamiltonian graph of a one- or two-frequency pump over a finite comb window.

    Modes whose energy-conserving partner ``p - n`` lies outside the window keep
    zero rows; the self-paired index ``n = p / 2`` is skipped with a warning.
    """
    _check_components(pump.components)
    modes = tuple(ModeId(n, s) for n in window for s in SPATIAL)
    index = {mode: i for i, mode in enumerate(modes)}
    G = np.zeros((len(modes), len(modes)))
    warnings: list[str] = []
    _fill_comb(G, index, pump.components, window, 0, warnings)
    for msg in warnings:
        log.warning(msg)
    return HamiltonianGraph(modes, G, tuple(warnings))


def binned_G(pump: PumpSpec, window: FreqWindow, bins: Iterable[int]) -> HamiltonianGraph:
    """Comb graph repeated over independent time bins, using each bin's pump angles.

    Time bins never couple to one another, so the result is block diagonal in ``time``.
    """
    _check_components(pump.components)
    bins = list(bins)
    modes = tuple(sorted(ModeId(n, s, k) for k in bins for n in window for s in SPATIAL))
    index = {mode: i for i, mode in enumerate(modes)}
    G = np.zeros((len(modes), len(modes)))
    warnings: list[str] = []
    for k in bins:
        _fill_comb(G, index, pump.components, window, k, warnings)
    return HamiltonianGraph(modes, G, tuple(warnings))
