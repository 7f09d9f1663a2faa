"""Continuous-variable cluster states from an OPO pumped with spatially structured light."""

from .clusters import (
    ClusterGraph,
    EdgeWeights,
    QuadratureForm,
    dual_rail_nullifiers,
    edge_weights,
    graph_from_nullifiers,
    nullifier_variances,
)
from .entanglement import Bipartition, enumerate_bipartitions, ppt_scan
from .gaussian import (
    CovarianceState,
    covariance,
    evolve,
    partial_transpose,
    ppt_value,
    supermodes,
    symplectic_eigenvalues,
    symplectic_from_G,
)
from .hamiltonian import FreqWindow, HamiltonianGraph, comb_G, quadripartite_G
from .modes import HGIndex, ModeId, PumpComponent, PumpSpec, allowed_processes, overlap_integral, pump_amplitudes
from .staggering import (
    BinRange,
    PumpSchedule,
    lattice_2d,
    macronode_nullifiers,
    staggered_nullifiers,
    staggering_substitution,
    time_varying_lattice,
)

__version__ = "0.1.0"
