"""Mode bookkeeping, the rotated second-order pump, and transverse selection rules.

Transverse modes are Hermite-Gaussian functions

    u_mn(x, y) = C_m C_n H_m(sqrt(2) x / w) H_n(sqrt(2) y / w) exp(-(x^2 + y^2) / w^2)

normalised to unit power, with physicists' Hermite polynomials ``H``. Pump, signal
and idler are all taken with the same waist ``w = 1``. The overlap integral of
three such modes is therefore only meaningful up to a constant factor; it is used
here to decide which processes are allowed, never to set the coupling ratios of
the Hamiltonian graph (those come from :func:`pump_amplitudes`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss, hermval

from .errors import InvalidArgument, UnsupportedConfiguration

MIN_QUADRATURE_POINTS = 32
DEFAULT_QUADRATURE_POINTS = 64

SPATIAL = ("h", "v")


@dataclass(frozen=True, order=True)
class HGIndex:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise InvalidArgument(f"Hermite-Gaussian indices must be >= 0, got ({self.m}, {self.n})")

    @property
    def order(self) -> int:
        return self.m + self.n

    def __str__(self):
        return f"HG{self.m}{self.n}"


H = HGIndex(1, 0)
V = HGIndex(0, 1)
HG20, HG11, HG02 = HGIndex(2, 0), HGIndex(1, 1), HGIndex(0, 2)

_SPATIAL_TO_HG = {"h": H, "v": V}


@dataclass(frozen=True, order=True)
class ModeId:
    """A downconverted mode: first-order spatial shape, comb index and time bin.

    Field order defines the sort order (freq, spatial, time), which fixes the
    row/column order of every matrix built from a list of modes.
    """

    freq: int
    spatial: str
    time: int = 0

    def __post_init__(self):
        if self.spatial not in SPATIAL:
            raise InvalidArgument(f"spatial must be 'h' or 'v', got {self.spatial!r}")

    @property
    def hg(self) -> HGIndex:
        return _SPATIAL_TO_HG[self.spatial]

    def shifted(self, dk: int) -> "ModeId":
        return ModeId(self.freq, self.spatial, self.time + dk)

    def __str__(self):
        return f"{self.spatial}{self.freq}@{self.time}"


@dataclass(frozen=True)
class PumpComponent:
    """One spectral component of the pump, a rotated HG11 (petal) mode.

    ``schedule`` optionally maps time-bin index to the rotation angle in that bin,
    modelling a pump structure that is piecewise constant in time.
    """

    p: int
    theta: float
    amplitude: float = 1.0
    schedule: Mapping[int, float] | None = field(default=None, compare=True)

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise InvalidArgument(f"theta must be finite, got {self.theta}")
        if not self.amplitude > 0:
            raise InvalidArgument(f"pump amplitude must be > 0, got {self.amplitude}")
        if self.schedule is not None:
            object.__setattr__(self, "schedule", dict(self.schedule))

    def theta_at(self, k: int) -> float:
        if self.schedule is None:
            return self.theta
        try:
            return self.schedule[k]
        except KeyError:
            raise InvalidArgument(f"pump schedule for p={self.p} has no angle for time bin {k}") from None


@dataclass(frozen=True)
class PumpSpec:
    components: tuple[PumpComponent, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def dual(cls, p1: int, theta1: float, p2: int, theta2: float) -> "PumpSpec":
        return cls((PumpComponent(p1, theta1), PumpComponent(p2, theta2)))

    @property
    def is_scheduled(self) -> bool:
        return any(c.schedule is not None for c in self.components)

    def angles_at(self, k: int) -> tuple[float, ...]:
        return tuple(c.theta_at(k) for c in self.components)

    def frozen_at(self, k: int) -> "PumpSpec":
        """The constant pump seen during time bin ``k``."""
        return PumpSpec(tuple(PumpComponent(c.p, c.theta_at(k), c.amplitude) for c in self.components))


# cos(pi/2) evaluates to 6e-17; anything this small is a rounding residue of an exact zero
_ZERO_SNAP = 1e-15


def snap(x: float) -> float:
    return 0.0 if abs(x) < _ZERO_SNAP else x


def cos_sin_2theta(theta: float) -> tuple[float, float]:
    return snap(math.cos(2 * theta)), snap(math.sin(2 * theta))


def pump_amplitudes(theta: float) -> tuple[float, float, float]:
    """Amplitudes (alpha20, alpha11, alpha02) of the HG11 mode rotated by theta - pi/4."""
    c, s = cos_sin_2theta(theta)
    return c / math.sqrt(2), s, -c / math.sqrt(2)


def pump_mode_amplitudes(theta: float) -> dict[HGIndex, float]:
    a20, a11, a02 = pump_amplitudes(theta)
    return {HG20: a20, HG11: a11, HG02: a02}


def _hg_norm_1d(m: int) -> float:
    return (2 / math.pi) ** 0.25 / math.sqrt(2.0**m * math.factorial(m))


def hg_profile_1d(m: int, x: np.ndarray) -> np.ndarray:
    """Unit-waist, power-normalised 1D Hermite-Gaussian profile."""
    coef = np.zeros(m + 1)
    coef[m] = 1.0
    return _hg_norm_1d(m) * hermval(np.sqrt(2) * x, coef) * np.exp(-(x**2))


def parity_allowed(pump: HGIndex, signal: HGIndex, idler: HGIndex) -> bool:
    return (pump.m + signal.m + idler.m) % 2 == 0 and (pump.n + signal.n + idler.n) % 2 == 0


def overlap_integral(
    pump: HGIndex,
    signal: HGIndex,
    idler: HGIndex,
    n_points: int = DEFAULT_QUADRATURE_POINTS,
) -> float:
    """Transverse overlap of pump, signal and idler mode functions.

    Odd-parity integrands return exactly 0.0 without touching the quadrature.
    Otherwise the x and y factors are integrated separately with ``n_points``
    Gauss-Hermite nodes, exact for the polynomial degrees in play.
    """
    if n_points < MIN_QUADRATURE_POINTS:
        raise InvalidArgument(f"quadrature needs >= {MIN_QUADRATURE_POINTS} points per axis, got {n_points}")
    if not parity_allowed(pump, signal, idler):
        return 0.0
    t, w = hermgauss(n_points)
    # three Gaussians exp(-x^2) multiply to exp(-3 x^2); rescale nodes to weight exp(-t^2)
    x = t / math.sqrt(3)

    def axis(orders):
        poly = np.ones_like(x)
        for k in orders:
            coef = np.zeros(k + 1)
            coef[k] = 1.0
            poly = poly * _hg_norm_1d(k) * hermval(np.sqrt(2) * x, coef)
        return float(np.dot(w, poly)) / math.sqrt(3)

    return axis((pump.m, signal.m, idler.m)) * axis((pump.n, signal.n, idler.n))


def allowed_processes(
    pump_order: int = 2,
    pump_modes: Sequence[HGIndex] | Mapping[HGIndex, float] | None = None,
) -> list[tuple[HGIndex, HGIndex, HGIndex]]:
    """Downconversion processes pump -> signal + idler permitted by transverse parity.

    Only second-order pumps feeding first-order signal/idler pairs are supported.
    ``pump_modes`` restricts the pump family (a mapping drops zero amplitudes);
    signal/idler pairs are unordered.
    """
    if pump_order != 2:
        raise UnsupportedConfiguration(f"only order-2 pumps coupling to order-1 modes are supported, got order {pump_order}")
    family = [HG20, HG11, HG02]
    if pump_modes is not None:
        if isinstance(pump_modes, Mapping):
            pump_modes = [k for k, amp in pump_modes.items() if amp != 0]
        for mode in pump_modes:
            if mode.order != 2:
                raise UnsupportedConfiguration(f"pump mode {mode} is not second order")
        family = [mode for mode in family if mode in set(pump_modes)]
    out = []
    for pump in family:
        for signal, idler in combinations_with_replacement((H, V), 2):
            if parity_allowed(pump, signal, idler):
                out.append((pump, signal, idler))
    return out
