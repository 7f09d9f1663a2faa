"""Time-staggered dual rails: from 1D spectral clusters to 2D spectro-temporal lattices.

The optics after the OPO (transverse-mode beam splitter, one-bin delay of the v
line, pi/4 mode rotation) act on every comb index independently and map the
output quadratures (stage 0) to the detected ones (stage 2) as

    Q0[h, k] = (Q2[h, k] - Q2[v, k]) / sqrt(2)
    Q0[v, k] = (Q2[h, k+1] + Q2[v, k+1]) / sqrt(2)

Nullifiers are tracked as Q-forms only. A macronode groups (h, n, k) with
(v, n, k).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .clusters import (
    ClusterGraph,
    EdgeWeights,
    QuadratureForm,
    _dual_pump,
    complete_indices,
    dual_rail_nullifiers,
    edge_weights,
    graph_from_nullifiers,
)
from .errors import InvalidArgument, UnsupportedConfiguration
from .gaussian import CovarianceState
from .hamiltonian import FreqWindow
from .modes import ModeId, PumpComponent, PumpSpec

SQRT2 = math.sqrt(2)


@dataclass(frozen=True)
class BinRange:
    k_min: int
    k_max: int

    def __post_init__(self):
        if self.k_max - self.k_min + 1 < 3:
            raise InvalidArgument(f"bin range [{self.k_min}, {self.k_max}] needs at least 3 bins")

    def __contains__(self, k: int) -> bool:
        return self.k_min <= k <= self.k_max

    def __iter__(self):
        return iter(range(self.k_min, self.k_max + 1))

    def __len__(self):
        return self.k_max - self.k_min + 1

    def bulk(self) -> range:
        """Bins with both neighbours in range."""
        return range(self.k_min + 1, self.k_max)


@dataclass(frozen=True)
class PumpSchedule:
    """Per-bin rotation angles (theta1, theta2) of the two pump components."""

    angles: Mapping[int, tuple[float, float]]

    def __post_init__(self):
        object.__setattr__(self, "angles", {int(k): (float(a), float(b)) for k, (a, b) in self.angles.items()})

    @classmethod
    def constant(cls, theta1: float, theta2: float, bins: Iterable[int]) -> "PumpSchedule":
        return cls({k: (theta1, theta2) for k in bins})

    @classmethod
    def alternating(cls, first: tuple[float, float], second: tuple[float, float], bins: Iterable[int]) -> "PumpSchedule":
        """``first`` on even bins, ``second`` on odd bins."""
        return cls({k: (first if k % 2 == 0 else second) for k in bins})

    def __call__(self, k: int) -> tuple[float, float]:
        try:
            return self.angles[k]
        except KeyError:
            raise InvalidArgument(f"pump schedule has no angles for time bin {k}") from None

    def pump(self, p1: int, p2: int) -> PumpSpec:
        first = {k: a[0] for k, a in self.angles.items()}
        second = {k: a[1] for k, a in self.angles.items()}
        k0 = min(self.angles)
        return PumpSpec(
            (
                PumpComponent(p1, first[k0], schedule=first),
                PumpComponent(p2, second[k0], schedule=second),
            )
        )


def staggering_substitution(form: QuadratureForm) -> QuadratureForm:
    """Rewrite a stage-0 Q-form in stage-2 quadratures."""
    if "P" in form.quadratures:
        raise UnsupportedConfiguration("staggering substitution handles Q-forms only")
    terms: dict = {}
    for (mode, _), coef in form:
        if mode.spatial == "h":
            image = {ModeId(mode.freq, "h", mode.time): 1 / SQRT2, ModeId(mode.freq, "v", mode.time): -1 / SQRT2}
        else:
            k = mode.time + 1
            image = {ModeId(mode.freq, "h", k): 1 / SQRT2, ModeId(mode.freq, "v", k): 1 / SQRT2}
        for m, c in image.items():
            terms[(m, "Q")] = terms.get((m, "Q"), 0.0) + coef * c
    return QuadratureForm(terms)


def staggering_matrix(modes: Sequence[ModeId]) -> tuple[np.ndarray, tuple[ModeId, ...]]:
    """Matrix T with x0 = T x2 on the Q (or P) quadratures, and the stage-2 mode list.

    The stage-2 list covers every bin reached by the delay, so T has orthonormal
    rows but may have more columns than rows.
    """
    images = {}
    for mode in modes:
        if mode.spatial == "h":
            images[mode] = ((ModeId(mode.freq, "h", mode.time), 1 / SQRT2), (ModeId(mode.freq, "v", mode.time), -1 / SQRT2))
        else:
            k = mode.time + 1
            images[mode] = ((ModeId(mode.freq, "h", k), 1 / SQRT2), (ModeId(mode.freq, "v", k), 1 / SQRT2))
    out_modes = tuple(sorted({m for img in images.values() for m, _ in img}))
    col = {m: j for j, m in enumerate(out_modes)}
    T = np.zeros((len(modes), len(out_modes)))
    for i, mode in enumerate(modes):
        for m, c in images[mode]:
            T[i, col[m]] = c
    return T, out_modes


def stagger_state(state: CovarianceState) -> CovarianceState:
    """Covariance at stage 2; stage-2 directions not fed by any stage-0 mode are vacuum."""
    T, modes2 = staggering_matrix(state.modes)
    n0, n2 = len(state.modes), len(modes2)
    W = np.zeros((2 * n0, 2 * n2))
    W[:n0, :n2] = T
    W[n0:, n2:] = T
    V2 = W.T @ state.V @ W + (np.eye(2 * n2) - W.T @ W)
    return CovarianceState(modes2, (V2 + V2.T) / 2, state.gamma)


def _bins(bins) -> BinRange:
    return bins if isinstance(bins, BinRange) else BinRange(*bins)


def _staggered_pair(n: int, k: int, p1: int, p2: int, w: EdgeWeights) -> tuple[QuadratureForm, QuadratureForm]:
    """Closed forms X_{h,k}, X_{v,k} of a bin-k dual rail after staggering (times sqrt 2)."""
    m1, m2 = p1 - n, p2 - n

    def q(freq, s, t):
        return (ModeId(freq, s, t), "Q")

    xh = {
        q(n, "h", k): 1.0,
        q(n, "v", k): -1.0,
        q(m1, "h", k): -w.a,
        q(m1, "v", k): w.a,
        q(m1, "h", k + 1): -w.b,
        q(m1, "v", k + 1): -w.b,
        q(m2, "h", k): -w.c,
        q(m2, "v", k): w.c,
        q(m2, "h", k + 1): -w.d,
        q(m2, "v", k + 1): -w.d,
    }
    xv = {
        q(n, "h", k + 1): 1.0,
        q(n, "v", k + 1): 1.0,
        q(m1, "h", k): -w.b,
        q(m1, "v", k): w.b,
        q(m1, "h", k + 1): w.a,
        q(m1, "v", k + 1): w.a,
        q(m2, "h", k): -w.d,
        q(m2, "v", k): w.d,
        q(m2, "h", k + 1): w.c,
        q(m2, "v", k + 1): w.c,
    }
    return QuadratureForm(xh), QuadratureForm(xv)


def staggered_nullifiers(pump: PumpSpec, window: FreqWindow, bins) -> list[QuadratureForm]:
    """X_{h,k}, X_{v,k} for every complete comb index and every bin k with k+1 in range.

    These are the staggered dual-rail nullifiers scaled by sqrt(2); each uses the
    weights of the bin it was emitted in.
    """
    bins = _bins(bins)
    p1, p2 = _dual_pump(pump)
    out = []
    for k in range(bins.k_min, bins.k_max):
        w = edge_weights(*pump.angles_at(k))
        for n in complete_indices(window, p1, p2):
            out.extend(_staggered_pair(n, k, p1, p2, w))
    return out


def _constant_weights(pump: PumpSpec, bins: BinRange) -> EdgeWeights:
    angles = {pump.angles_at(k) for k in bins}
    if len(angles) != 1:
        raise InvalidArgument("a static lattice needs the same pump angles in every bin; use time_varying_lattice")
    return edge_weights(*angles.pop())


def macronode_nullifiers(pump: PumpSpec, window: FreqWindow, bins) -> list[QuadratureForm]:
    """Closed-form macronode nullifiers X+_k (anchor h) and X-_k (anchor v) for a constant pump.

    Emitted for every complete comb index n and every bin k with k-1 and k+1 in range.
    """
    bins = _bins(bins)
    p1, p2 = _dual_pump(pump)
    w = _constant_weights(pump, bins)
    a, b, c, d = w.a, w.b, w.c, w.d
    out = []
    for k in bins.bulk():
        for n in complete_indices(window, p1, p2):
            m1, m2 = p1 - n, p2 - n
            plus = {
                ModeId(m1, "v", k): -a,
                ModeId(m2, "v", k): -c,
                ModeId(m1, "h", k + 1): b / 2,
                ModeId(m1, "v", k + 1): b / 2,
                ModeId(m1, "h", k - 1): b / 2,
                ModeId(m1, "v", k - 1): -b / 2,
                ModeId(m2, "h", k + 1): d / 2,
                ModeId(m2, "v", k + 1): d / 2,
                ModeId(m2, "h", k - 1): d / 2,
                ModeId(m2, "v", k - 1): -d / 2,
            }
            minus = {
                ModeId(m1, "h", k): -a,
                ModeId(m2, "h", k): -c,
                ModeId(m1, "h", k + 1): -b / 2,
                ModeId(m1, "v", k + 1): -b / 2,
                ModeId(m1, "h", k - 1): b / 2,
                ModeId(m1, "v", k - 1): -b / 2,
                ModeId(m2, "h", k + 1): -d / 2,
                ModeId(m2, "v", k + 1): -d / 2,
                ModeId(m2, "h", k - 1): d / 2,
                ModeId(m2, "v", k - 1): -d / 2,
            }
            out.append(QuadratureForm.nullifier(ModeId(n, "h", k), plus))
            out.append(QuadratureForm.nullifier(ModeId(n, "v", k), minus))
    return out


def recombined_nullifiers(pump: PumpSpec, window: FreqWindow, bins) -> list[QuadratureForm]:
    """X+-_k = (X_{v,k-1} +- X_{h,k}) / 2 built from the per-bin staggered forms.

    X_{v,k-1} carries the weights of bin k-1 and X_{h,k} those of bin k, so this
    also covers pumps whose structure changes from bin to bin.
    """
    bins = _bins(bins)
    p1, p2 = _dual_pump(pump)
    ns = complete_indices(window, p1, p2)
    weights = {k: edge_weights(*pump.angles_at(k)) for k in bins}
    out = []
    for k in bins.bulk():
        for n in ns:
            _, xv_prev = _staggered_pair(n, k - 1, p1, p2, weights[k - 1])
            xh, _ = _staggered_pair(n, k, p1, p2, weights[k])
            out.append(((xv_prev + xh) * 0.5).with_anchor(ModeId(n, "h", k)))
            out.append(((xv_prev - xh) * 0.5).with_anchor(ModeId(n, "v", k)))
    return out


def substituted_nullifiers(pump: PumpSpec, window: FreqWindow, bins) -> list[QuadratureForm]:
    """Macronode nullifiers by brute substitution of the optics into per-bin dual rails.

    Independent of the closed forms: dual-rail nullifiers are labelled with their
    bin, pushed through :func:`staggering_substitution`, and recombined. The
    substitution carries a 1/sqrt(2), hence the recombination factor 1/sqrt(2)
    in place of 1/2.
    """
    bins = _bins(bins)
    _dual_pump(pump)
    staged = {}
    for k in bins:
        for form in dual_rail_nullifiers(pump, window, time=k):
            staged[form.anchor[0]] = staggering_substitution(form)
    out = []
    for k in bins.bulk():
        for mode in sorted(m for m in staged if m.time == k and m.spatial == "h"):
            xh = staged[mode]
            xv_prev = staged[ModeId(mode.freq, "v", k - 1)]
            out.append(((xv_prev + xh) * (1 / SQRT2)).with_anchor(ModeId(mode.freq, "h", k)))
            out.append(((xv_prev - xh) * (1 / SQRT2)).with_anchor(ModeId(mode.freq, "v", k)))
    return out


def lattice_2d(pump: PumpSpec, window: FreqWindow, bins) -> ClusterGraph:
    """2D macronode cluster of a pump whose structure is the same in every bin."""
    return graph_from_nullifiers(macronode_nullifiers(pump, window, bins))


def time_varying_lattice(pump: PumpSpec, window: FreqWindow, bins) -> ClusterGraph:
    """2D cluster of a pump whose angles follow a per-bin schedule."""
    bins = _bins(bins)
    for k in bins:
        pump.angles_at(k)
    return graph_from_nullifiers(recombined_nullifiers(pump, window, bins))


def bin_weights(pump: PumpSpec, bins) -> list[EdgeWeights]:
    return [edge_weights(*pump.angles_at(k)) for k in _bins(bins)]


def bulk_components(graph: ClusterGraph) -> int:
    return graph.bulk().n_components()


def bin_signature(graph: ClusterGraph, k: int, digits: int = 12) -> Counter:
    """Edges whose earlier endpoint sits in bin k, with times taken relative to k."""
    sig: Counter = Counter()
    for u, v, w in graph.edges:
        if min(u.time, v.time) != k:
            continue
        a = (u.freq, u.spatial, u.time - k)
        b = (v.freq, v.spatial, v.time - k)
        sig[(min(a, b), max(a, b), round(w, digits))] += 1
    return sig
