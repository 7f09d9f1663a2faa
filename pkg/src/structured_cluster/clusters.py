"""Nullifier algebra and cluster-graph compilation for the dual-frequency comb.

A nullifier in standard form reads ``Q_anchor - sum_j w_j Q_j``; each term turns
into a graph edge (anchor, j) of weight w_j.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InconsistentGraph, InvalidArgument, MalformedNullifier
from .gaussian import CovarianceState
from .hamiltonian import FreqWindow
from .modes import ModeId, PumpSpec, cos_sin_2theta, snap

RECIPROCITY_TOL = 1e-12

Key = tuple[ModeId, str]


def _key_order(key: Key):
    mode, quad = key
    return (quad, mode)


@dataclass(frozen=True, eq=False)
class QuadratureForm:
    """A real linear combination of quadratures, keyed by (mode, "Q" | "P").

    Exact zeros are never stored. ``anchor`` marks the quadrature a nullifier is
    attached to when it is compiled into a graph.
    """

    terms: Mapping[Key, float]
    anchor: Key | None = None

    def __post_init__(self):
        clean = {}
        for (mode, quad), coef in self.terms.items():
            if quad not in ("Q", "P"):
                raise InvalidArgument(f"quadrature must be 'Q' or 'P', got {quad!r}")
            if coef != 0.0:
                clean[(mode, quad)] = float(coef)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: _key_order(kv[0]))))

    @classmethod
    def nullifier(cls, anchor: ModeId, neighbours: Mapping[ModeId, float], quadrature: str = "Q") -> "QuadratureForm":
        """``X_anchor - sum_j w_j X_j`` for X = Q or P."""
        terms: dict[Key, float] = {}
        for mode, w in neighbours.items():
            terms[(mode, quadrature)] = terms.get((mode, quadrature), 0.0) - w
        if (anchor, quadrature) in terms:
            raise MalformedNullifier(f"anchor {anchor} also listed as a neighbour")
        terms[(anchor, quadrature)] = 1.0
        return cls(terms, (anchor, quadrature))

    def __add__(self, other: "QuadratureForm") -> "QuadratureForm":
        terms = dict(self.terms)
        for key, coef in other.terms.items():
            terms[key] = terms.get(key, 0.0) + coef
        return QuadratureForm(terms)

    def __neg__(self) -> "QuadratureForm":
        return QuadratureForm({k: -c for k, c in self.terms.items()}, self.anchor)

    def __sub__(self, other: "QuadratureForm") -> "QuadratureForm":
        return self + (-other)

    def __mul__(self, scalar: float) -> "QuadratureForm":
        return QuadratureForm({k: c * scalar for k, c in self.terms.items()}, self.anchor)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Key, float]]:
        return iter(self.terms.items())

    def coefficient(self, mode: ModeId, quadrature: str = "Q") -> float:
        return self.terms.get((mode, quadrature), 0.0)

    @property
    def modes(self) -> set[ModeId]:
        return {mode for mode, _ in self.terms}

    @property
    def quadratures(self) -> set[str]:
        return {quad for _, quad in self.terms}

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.terms.values()))

    def normalized(self) -> "QuadratureForm":
        return self * (1.0 / self.norm())

    def with_anchor(self, mode: ModeId, quadrature: str = "Q") -> "QuadratureForm":
        return QuadratureForm(self.terms, (mode, quadrature))

    def map_modes(self, fn: Callable[[ModeId], ModeId]) -> "QuadratureForm":
        terms: dict[Key, float] = {}
        for (mode, quad), coef in self.terms.items():
            key = (fn(mode), quad)
            terms[key] = terms.get(key, 0.0) + coef
        anchor = None if self.anchor is None else (fn(self.anchor[0]), self.anchor[1])
        return QuadratureForm(terms, anchor)

    def dot(self, other: "QuadratureForm") -> float:
        return sum(c * other.terms.get(k, 0.0) for k, c in self.terms.items())

    def vector(self, modes: Sequence[ModeId]) -> np.ndarray:
        """Coefficient vector over (Q_1..Q_N, P_1..P_N) for the given mode order."""
        index = {m: i for i, m in enumerate(modes)}
        n = len(modes)
        v = np.zeros(2 * n)
        for (mode, quad), coef in self.terms.items():
            if mode not in index:
                raise InvalidArgument(f"mode {mode} is not part of the basis")
            v[index[mode] + (n if quad == "P" else 0)] += coef
        return v

    def max_difference(self, other: "QuadratureForm") -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) for k in keys), default=0.0)

    def __str__(self):
        parts = [f"{c:+.6g}*{quad}[{mode}]" for (mode, quad), c in self.terms.items()]
        return " ".join(parts) or "0"


@dataclass(frozen=True)
class EdgeWeights:
    a: float
    b: float
    c: float
    d: float
    r: float
    theta1: float
    theta2: float

    def as_dict(self) -> dict[str, float]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "r": self.r}


def edge_weights(theta1: float, theta2: float) -> EdgeWeights:
    """Normalised dual-rail edge weights; a^2 + b^2 + c^2 + d^2 = 1 for all angles."""
    c1, s1 = cos_sin_2theta(theta1)
    c2, s2 = cos_sin_2theta(theta2)
    r = math.sqrt(6 - snap(math.cos(4 * theta1)) - snap(math.cos(4 * theta2))) / (2 * math.sqrt(2))
    return EdgeWeights(
        a=c1 / (2 * r),
        b=s1 / (math.sqrt(2) * r),
        c=c2 / (2 * r),
        d=s2 / (math.sqrt(2) * r),
        r=r,
        theta1=theta1,
        theta2=theta2,
    )


def _dual_pump(pump: PumpSpec) -> tuple[int, int]:
    if len(pump.components) != 2:
        raise InvalidArgument(f"dual-rail nullifiers need exactly two pump components, got {len(pump.components)}")
    p1, p2 = pump.components[0].p, pump.components[1].p
    if p1 == p2:
        raise InvalidArgument(f"pump indices must differ, got p1 = p2 = {p1}")
    return p1, p2


def dual_rail_neighbours(n: int, p1: int, p2: int, w: EdgeWeights, time: int = 0) -> dict[str, dict[ModeId, float]]:
    """Bracketed neighbour weights of X_h(n) and X_v(n) in a single time bin."""
    m1, m2 = p1 - n, p2 - n
    h1, v1, h2, v2 = (ModeId(m1, "h", time), ModeId(m1, "v", time), ModeId(m2, "h", time), ModeId(m2, "v", time))
    return {
        "h": {h1: w.a, v1: w.b, h2: w.c, v2: w.d},
        "v": {h1: w.b, v1: -w.a, h2: w.d, v2: -w.c},
    }


def complete_indices(window: FreqWindow, p1: int, p2: int) -> list[int]:
    """Comb indices whose nullifier partners all fall inside the window.

    Self-paired indices (n = p/2) have no coupling and are skipped.
    """
    return [n for n in window if (p1 - n) in window and (p2 - n) in window and 2 * n not in (p1, p2)]


def dual_rail_nullifiers(pump: PumpSpec, window: FreqWindow, time: int = 0, quadrature: str = "Q") -> list[QuadratureForm]:
    """X_h(n), X_v(n) for every comb index whose partners sit inside the window.

    With ``quadrature="P"`` the partner nullifiers are returned: same weights,
    opposite sign of the bracket.
    """
    p1, p2 = _dual_pump(pump)
    theta1, theta2 = pump.angles_at(time)
    w = edge_weights(theta1, theta2)
    ns = complete_indices(window, p1, p2)
    if not ns:
        warnings.warn(f"window [{window.n_min}, {window.n_max}] holds no complete nullifier for p=({p1}, {p2})", RuntimeWarning, stacklevel=2)
        return []
    sign = 1.0 if quadrature == "Q" else -1.0
    out = []
    for n in ns:
        nb = dual_rail_neighbours(n, p1, p2, w, time)
        for s in ("h", "v"):
            weights = {mode: sign * x for mode, x in nb[s].items()}
            out.append(QuadratureForm.nullifier(ModeId(n, s, time), weights, quadrature))
    return out


@dataclass(frozen=True, eq=False)
class ClusterGraph:
    nodes: tuple[ModeId, ...]
    edges: tuple[tuple[ModeId, ModeId, float], ...]
    anchors: frozenset[ModeId] = field(default=frozenset())

    def __post_init__(self):
        seen = set()
        for u, v, w in self.edges:
            if u == v:
                raise InconsistentGraph(f"self-loop on {u}")
            if w == 0.0:
                raise InconsistentGraph(f"zero-weight edge {u}-{v}")
            pair = frozenset((u, v))
            if pair in seen:
                raise InconsistentGraph(f"duplicate edge {u}-{v}")
            seen.add(pair)

    def weight(self, u: ModeId, v: ModeId) -> float:
        for a, b, w in self.edges:
            if (a, b) in ((u, v), (v, u)):
                return w
        return 0.0

    def neighbours(self, u: ModeId) -> dict[ModeId, float]:
        out = {}
        for a, b, w in self.edges:
            if a == u:
                out[b] = w
            elif b == u:
                out[a] = w
        return out

    def degree(self, u: ModeId) -> int:
        return len(self.neighbours(u))

    @property
    def macronodes(self) -> list[tuple[ModeId, ModeId]]:
        """(h, v) pairs sharing comb index and time bin, both present as nodes."""
        present = set(self.nodes)
        return [(m, ModeId(m.freq, "v", m.time)) for m in self.nodes if m.spatial == "h" and ModeId(m.freq, "v", m.time) in present]

    def subgraph(self, keep: Iterable[ModeId]) -> "ClusterGraph":
        keep = set(keep)
        return ClusterGraph(
            tuple(n for n in self.nodes if n in keep),
            tuple(e for e in self.edges if e[0] in keep and e[1] in keep),
            frozenset(self.anchors & keep),
        )

    def bulk(self) -> "ClusterGraph":
        """Subgraph induced by the nodes that carry a nullifier."""
        return self.subgraph(self.anchors)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_weighted_edges_from(self.edges)
        return g

    def n_components(self) -> int:
        import networkx as nx

        return nx.number_connected_components(self.to_networkx())

    def temporal_edges(self) -> list[tuple[ModeId, ModeId, float]]:
        return [e for e in self.edges if e[0].time != e[1].time]

    def same_bin_edges(self) -> list[tuple[ModeId, ModeId, float]]:
        return [e for e in self.edges if e[0].time == e[1].time]


def _split_anchor(form: QuadratureForm) -> tuple[ModeId, dict[ModeId, float]]:
    if form.anchor is not None:
        anchor_key = form.anchor
        coef = form.terms.get(anchor_key)
        if coef is None or abs(coef - 1.0) > RECIPROCITY_TOL:
            raise MalformedNullifier(f"anchor {anchor_key} must carry coefficient +1 in {form}")
    else:
        ones = [k for k, c in form.terms.items() if c == 1.0]
        if len(ones) != 1:
            raise MalformedNullifier(f"cannot identify a unique +1 anchor in {form}")
        anchor_key = ones[0]
    anchor, quad = anchor_key
    weights = {}
    for (mode, q), coef in form.terms.items():
        if (mode, q) == anchor_key:
            continue
        if q != quad:
            raise MalformedNullifier(f"mixed quadratures in {form}")
        weights[mode] = -coef
    if anchor in weights:
        raise MalformedNullifier(f"anchor mode {anchor} appears twice in {form}")
    return anchor, weights


def graph_from_nullifiers(nullifiers: Sequence[QuadratureForm]) -> ClusterGraph:
    """Compile standard-form nullifiers into a weighted graph.

    When both endpoints of an edge carry nullifiers, the two must reference each
    other with weights equal to within 1e-12.
    """
    rows: dict[ModeId, dict[ModeId, float]] = {}
    for form in nullifiers:
        anchor, weights = _split_anchor(form)
        if anchor in rows:
            raise MalformedNullifier(f"two nullifiers anchored on {anchor}")
        rows[anchor] = weights
    edges: dict[tuple[ModeId, ModeId], float] = {}
    for u, weights in rows.items():
        for v, w in weights.items():
            if v in rows:
                back = rows[v].get(u)
                if back is None:
                    raise InconsistentGraph(f"{u} references {v} but not vice versa")
                if abs(back - w) > RECIPROCITY_TOL:
                    raise InconsistentGraph(f"edge {u}-{v} has weights {w!r} and {back!r}")
            pair = (u, v) if u < v else (v, u)
            edges.setdefault(pair, w)
    nodes = set(rows)
    for u, v in edges:
        nodes.update((u, v))
    return ClusterGraph(
        tuple(sorted(nodes)),
        tuple((u, v, w) for (u, v), w in sorted(edges.items())),
        frozenset(rows),
    )


def nullifier_variances(state: CovarianceState, nullifiers: Iterable[QuadratureForm]) -> list[float]:
    """Variance of each nullifier after normalisation to unit coefficient norm."""
    out = []
    for form in nullifiers:
        missing = form.modes - set(state.modes)
        if missing:
            raise InvalidArgument(f"nullifier refers to modes outside the state: {sorted(missing)}")
        v = form.normalized().vector(state.modes)
        out.append(float(v @ state.V @ v))
    return out
