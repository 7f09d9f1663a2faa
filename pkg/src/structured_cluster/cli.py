"""Command-line recipes reproducing the PPT scan, supermodes, dual rails and 2D lattices.

Exit status: 0 success, 2 configuration error, 3 numerical contract violated,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import clusters, entanglement, gaussian, hamiltonian, modes, staggering
from .config import ConfigError, ExperimentConfig, build_config, load_file
from .errors import ClusterError, InconsistentInput
from .export import csv_text, graph_to_csv, graph_to_dot, graph_to_json, write_atomic

log = logging.getLogger("structured_cluster")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def ppt_scan_csv(cfg: ExperimentConfig) -> str:
    scan = entanglement.ppt_scan(cfg.thetas, cfg.gamma)
    return csv_text(["theta", "bipartition", "ppt_value"], scan.rows())


def supermodes_csv(cfg: ExperimentConfig) -> str:
    graph = hamiltonian.quadripartite_G(cfg.theta)
    state = gaussian.evolve(graph, cfg.gamma)
    squeezed_basis = gaussian.quadripartite_squeezed_combinations(cfg.theta)
    # the anti-squeezed subspace is the orthogonal complement
    _, _, vt = np.linalg.svd(squeezed_basis)
    antisqueezed_basis = vt[squeezed_basis.shape[0] :]
    n = graph.n_modes
    header = ["index", "eigenvalue", "squeezed", "variance", "subspace_residual"]
    header += [f"Q{i + 1}" for i in range(n)] + [f"P{i + 1}" for i in range(n)]
    rows = []
    for i, mode in enumerate(gaussian.supermodes(graph)):
        basis = squeezed_basis if mode.squeezed else antisqueezed_basis
        residual = gaussian.subspace_residual(mode.coefficients, basis)
        coefs = [float(c) + 0.0 for c in mode.coefficients]
        rows.append([i, mode.eigenvalue, int(mode.squeezed), mode.variance(state.V), residual, *coefs])
    return csv_text(header, rows)


def overlap_csv(cfg: ExperimentConfig) -> str:
    amplitudes = modes.pump_mode_amplitudes(cfg.theta)
    allowed = {(p, frozenset((s, i))) for p, s, i in modes.allowed_processes(2)}
    rows = []
    for pump in (modes.HG20, modes.HG11, modes.HG02):
        for signal in (modes.H, modes.V):
            for idler in (modes.H, modes.V):
                value = modes.overlap_integral(pump, signal, idler, cfg.n_points)
                key = (pump, frozenset((signal, idler)))
                rows.append([str(pump), str(signal), str(idler), value, int(key in allowed), amplitudes[pump]])
    return csv_text(["pump", "signal", "idler", "overlap", "allowed", "pump_amplitude"], rows)


def dual_rail_graph(cfg: ExperimentConfig):
    graph = clusters.graph_from_nullifiers(clusters.dual_rail_nullifiers(cfg.pump, cfg.window))
    (c1, c2) = cfg.pump.components
    w = clusters.edge_weights(c1.theta, c2.theta)
    meta = {
        "theta1": c1.theta,
        "theta2": c2.theta,
        "p1": c1.p,
        "p2": c2.p,
        "window": [cfg.window.n_min, cfg.window.n_max],
        "weights": w.as_dict(),
        "components": graph.n_components(),
    }
    return graph, meta


def _lattice_meta(cfg: ExperimentConfig, graph) -> dict:
    weights = staggering.bin_weights(cfg.pump, cfg.bins)
    (c1, c2) = cfg.pump.components
    return {
        "p1": c1.p,
        "p2": c2.p,
        "window": [cfg.window.n_min, cfg.window.n_max],
        "bins": [cfg.bins.k_min, cfg.bins.k_max],
        "theta1": [w.theta1 for w in weights],
        "theta2": [w.theta2 for w in weights],
        "weights": {name: [getattr(w, name) for w in weights] for name in ("a", "b", "c", "d", "r")},
        "components": graph.n_components(),
        "bulk_components": staggering.bulk_components(graph),
    }


def lattice_graph(cfg: ExperimentConfig):
    graph = staggering.lattice_2d(cfg.pump, cfg.window, cfg.bins)
    return graph, _lattice_meta(cfg, graph)


def time_varying_graph(cfg: ExperimentConfig):
    graph = staggering.time_varying_lattice(cfg.pump, cfg.window, cfg.bins)
    return graph, _lattice_meta(cfg, graph)


GRAPH_COMMANDS = {"dual-rail": dual_rail_graph, "lattice": lattice_graph, "time-varying": time_varying_graph}
TABLE_COMMANDS = {"ppt-scan": ppt_scan_csv, "supermodes": supermodes_csv, "overlap": overlap_csv}


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def run(cfg: ExperimentConfig) -> None:
    if cfg.command in TABLE_COMMANDS:
        _emit(TABLE_COMMANDS[cfg.command](cfg), cfg.out)
        return
    graph, meta = GRAPH_COMMANDS[cfg.command](cfg)
    macronodes = cfg.command != "dual-rail"
    fmt = cfg.format
    if fmt is None and cfg.out is not None:
        fmt = {".dot": "dot", ".csv": "csv"}.get(Path(cfg.out).suffix, None)
    renders = {
        "json": lambda: graph_to_json(graph, meta, macronodes),
        "dot": lambda: graph_to_dot(graph, "lattice" if macronodes else "dual_rail", macronodes),
        "csv": lambda: graph_to_csv(graph),
    }
    if fmt is not None:
        _emit(renders[fmt](), cfg.out)
        return
    # no explicit format: JSON, plus a DOT twin when writing to a file
    _emit(renders["json"](), cfg.out)
    if cfg.out is not None:
        write_atomic(Path(cfg.out).with_suffix(".dot"), renders["dot"]())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="structured-cluster", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("ppt-scan", "supermodes", "dual-rail", "lattice", "time-varying", "overlap"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML configuration file; flags override its values")
        p.add_argument("--out", help="output path (stdout when omitted)")
        if name in ("ppt-scan", "supermodes"):
            p.add_argument("--gamma", type=float)
        if name == "ppt-scan":
            p.add_argument("--thetas", help="comma-separated angles, e.g. 0,0.125pi,0.25pi")
            p.add_argument("--n-theta", dest="n_theta", type=int, help="uniform grid size on [0, pi/4]")
        if name in ("supermodes", "overlap"):
            p.add_argument("--theta")
        if name == "overlap":
            p.add_argument("--n-points", dest="n_points", type=int)
        if name in GRAPH_COMMANDS:
            p.add_argument("--p1", type=int)
            p.add_argument("--p2", type=int)
            p.add_argument("--window", help="comb window a:b (write --window=-2:4 for negatives)")
            p.add_argument("--format", choices=("json", "dot", "csv"))
        if name in ("dual-rail", "lattice"):
            p.add_argument("--theta1")
            p.add_argument("--theta2")
        if name in ("lattice", "time-varying"):
            p.add_argument("--bins", help="time-bin range a:b")
        if name == "time-varying":
            p.add_argument("--schedule", help="pairs cycled over bins, e.g. '0,0.25pi;0.25pi,0'")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    try:
        file_values = load_file(args.config) if args.config else {}
        cfg = build_config(args.command, file_values, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        run(cfg)
    except InconsistentInput as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ClusterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
