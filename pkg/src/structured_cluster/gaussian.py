"""Gaussian phase-space machinery: evolution, covariance, symplectic spectra.

Quadratures are ordered (Q_1..Q_N, P_1..P_N) with Q = a + a^dag and
P = -i(a - a^dag), so the vacuum covariance is the identity and a PPT value below
one flags entanglement. The parametric Hamiltonian with graph G evolves the
quadratures by S = exp(gamma M), M = diag[G, -G].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InconsistentInput, InvalidArgument
from .hamiltonian import HamiltonianGraph
from .modes import ModeId, cos_sin_2theta

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-8


def omega(n_modes: int) -> np.ndarray:
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def _as_matrix(G) -> np.ndarray:
    G = np.asarray(G.G if isinstance(G, HamiltonianGraph) else G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {G.shape}")
    if np.max(np.abs(G - G.T), initial=0.0) > SYMMETRY_TOL:
        raise InvalidArgument("G must be symmetric")
    return G


def expm_symmetric(A: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(t A) for symmetric A through its eigendecomposition."""
    w, U = np.linalg.eigh(A)
    return (U * np.exp(t * w)) @ U.T


def m_matrix(G) -> np.ndarray:
    G = _as_matrix(G)
    zero = np.zeros_like(G)
    return np.block([[G, zero], [zero, -G]])


def symplectic_from_G(G, gamma: float) -> np.ndarray:
    """S = exp(gamma M). M is block diagonal, so only G is diagonalised."""
    G = _as_matrix(G)
    if gamma < 0:
        raise InvalidArgument(f"gamma must be >= 0, got {gamma}")
    if gamma == 0:
        return np.eye(2 * G.shape[0])
    zero = np.zeros_like(G)
    return np.block([[expm_symmetric(G, gamma), zero], [zero, expm_symmetric(G, -gamma)]])


def symplectic_defect(S: np.ndarray) -> float:
    O = omega(S.shape[0] // 2)
    return float(np.max(np.abs(S @ O @ S.T - O)))


@dataclass(frozen=True, eq=False)
class CovarianceState:
    modes: tuple[ModeId, ...]
    V: np.ndarray
    gamma: float | None = None
    source_G: HamiltonianGraph | None = None

    def __post_init__(self):
        V = np.array(self.V, dtype=float)
        if V.shape != (2 * len(self.modes),) * 2:
            raise InvalidArgument(f"covariance shape {V.shape} does not match {len(self.modes)} modes")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def quadrature_index(self, mode: ModeId, quadrature: str) -> int:
        i = self.modes.index(mode)
        return i if quadrature == "Q" else i + self.n_modes


def covariance(S: np.ndarray, graph: HamiltonianGraph | None = None, gamma: float | None = None) -> CovarianceState:
    """Covariance V = S S^T of the vacuum after the symplectic map S."""
    S = np.asarray(S, dtype=float)
    defect = symplectic_defect(S)
    if defect > SYMPLECTIC_TOL:
        raise InconsistentInput(f"matrix is not symplectic (defect {defect:.3g})")
    if graph is not None:
        modes = graph.modes
    else:
        modes = tuple(ModeId(i, "h") for i in range(S.shape[0] // 2))
    V = S @ S.T
    return CovarianceState(modes, (V + V.T) / 2, gamma, graph)


def evolve(graph: HamiltonianGraph, gamma: float) -> CovarianceState:
    return covariance(symplectic_from_G(graph, gamma), graph, gamma)


def vacuum(modes: Sequence[ModeId]) -> CovarianceState:
    return CovarianceState(tuple(modes), np.eye(2 * len(modes)), 0.0)


def _covariance_matrix(V) -> np.ndarray:
    return np.asarray(V.V if isinstance(V, CovarianceState) else V, dtype=float)


def symplectic_eigenvalues(V) -> np.ndarray:
    """The N symplectic eigenvalues of V in ascending order.

    With V = L L^T, Omega V is similar to the antisymmetric K = L^T Omega L, whose
    singular values are the symplectic eigenvalues, each appearing twice.
    """
    V = _covariance_matrix(V)
    if np.max(np.abs(V - V.T), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(V))):
        raise InvalidArgument("covariance matrix must be symmetric")
    try:
        L = np.linalg.cholesky(V)
    except np.linalg.LinAlgError:
        raise InvalidArgument("covariance matrix must be positive definite") from None
    K = L.T @ omega(V.shape[0] // 2) @ L
    nu = np.sort(np.linalg.svd(K, compute_uv=False))
    return nu[::2]


def partial_transpose(V, subset: Iterable[int]) -> np.ndarray:
    """Flip the sign of P_j for every mode index j in ``subset`` (local time reversal)."""
    V = _covariance_matrix(V)
    n = V.shape[0] // 2
    subset = set(subset)
    if not subset or len(subset) >= n:
        raise InvalidArgument("partial transpose needs a nonempty proper subset of modes")
    if not subset <= set(range(n)):
        raise InvalidArgument(f"mode indices {sorted(subset - set(range(n)))} out of range")
    sign = np.ones(2 * n)
    sign[[n + j for j in subset]] = -1.0
    return V * np.outer(sign, sign)


def ppt_value(V, bipartition) -> float:
    """Lowest symplectic eigenvalue of V partially transposed on one side of the cut.

    ``bipartition`` is either an object with a ``left`` attribute or an iterable of
    mode indices.
    """
    side = getattr(bipartition, "left", bipartition)
    return float(symplectic_eigenvalues(partial_transpose(V, side))[0])


@dataclass(frozen=True, eq=False)
class Supermode:
    coefficients: np.ndarray
    eigenvalue: float

    @property
    def squeezed(self) -> bool:
        return self.eigenvalue < 0

    def variance(self, V) -> float:
        return quadrature_variance(V, self.coefficients)


def supermodes(G) -> list[Supermode]:
    """All 2N eigenvectors of M = diag[G, -G], most squeezed first."""
    w, U = np.linalg.eigh(m_matrix(G))
    # uncoupled modes sit at zero; rounding must not flag them as squeezed
    w[np.abs(w) < SYMMETRY_TOL] = 0.0
    return [Supermode(U[:, i].copy(), float(w[i])) for i in range(len(w))]


def quadrature_variance(V, v: np.ndarray) -> float:
    V = _covariance_matrix(V)
    v = np.asarray(v, dtype=float)
    return float(v @ V @ v / (v @ v))


def quadripartite_squeezed_combinations(theta: float) -> np.ndarray:
    """Rows: the four closed-form squeezed combinations of the rotated-pump quadripartite state.

    Columns follow (Q1..Q4, P1..P4); each row has unit norm and M-eigenvalue -1/sqrt(2).
    """
    c, s = cos_sin_2theta(theta)
    rows = np.array(
        [
            [-c, -s, 1, 0, 0, 0, 0, 0],
            [s, -c, 0, -1, 0, 0, 0, 0],
            [0, 0, 0, 0, c, s, 1, 0],
            [0, 0, 0, 0, s, -c, 0, 1],
        ],
        dtype=float,
    )
    return rows / np.sqrt(2)


def subspace_residual(v: np.ndarray, basis_rows: np.ndarray) -> float:
    """Distance from unit vector v to the span of ``basis_rows``."""
    q, _ = np.linalg.qr(np.asarray(basis_rows, dtype=float).T)
    v = np.asarray(v, dtype=float) / np.linalg.norm(v)
    return float(np.linalg.norm(v - q @ (q.T @ v)))
