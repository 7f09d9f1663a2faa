"""Serialisation of scans and graphs: CSV, JSON and DOT, written atomically."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

from .clusters import ClusterGraph
from .modes import ModeId


def fmt(x: float) -> str:
    return f"{x:.12g}"


def num(x: float) -> float:
    """Round to 12 significant digits for JSON output."""
    return float(fmt(x))


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def node_dict(mode: ModeId) -> dict:
    return {"spatial": mode.spatial, "freq": mode.freq, "time": mode.time}


def _round_meta(obj):
    if isinstance(obj, float):
        return num(obj)
    if isinstance(obj, dict):
        return {k: _round_meta(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_meta(v) for v in obj]
    return obj


def graph_to_dict(graph: ClusterGraph, meta: dict | None = None, macronodes: bool = False) -> dict:
    """Nodes as {spatial, freq, time, anchor}; edges and macronode members refer to node positions."""
    index = {m: i for i, m in enumerate(graph.nodes)}
    out = {
        "nodes": [{**node_dict(m), "anchor": m in graph.anchors} for m in graph.nodes],
        "edges": [{"u": index[u], "v": index[v], "weight": num(w)} for u, v, w in graph.edges],
        "meta": _round_meta(meta or {}),
    }
    if macronodes:
        out["macronodes"] = [{"members": [index[h], index[v]]} for h, v in graph.macronodes]
    return out


def graph_to_json(graph: ClusterGraph, meta: dict | None = None, macronodes: bool = False) -> str:
    return json.dumps(graph_to_dict(graph, meta, macronodes), indent=2) + "\n"


def graph_from_dict(data: dict) -> ClusterGraph:
    nodes = [ModeId(n["freq"], n["spatial"], n["time"]) for n in data["nodes"]]
    anchors = frozenset(m for m, n in zip(nodes, data["nodes"]) if n.get("anchor", False))
    edges = tuple((nodes[e["u"]], nodes[e["v"]], float(e["weight"])) for e in data["edges"])
    return ClusterGraph(tuple(nodes), edges, anchors)


def graph_from_json(text: str) -> ClusterGraph:
    return graph_from_dict(json.loads(text))


def _dot_id(mode: ModeId) -> str:
    return f'"{mode.spatial}{mode.freq}_t{mode.time}"'


def graph_to_dot(graph: ClusterGraph, name: str = "cluster", macronodes: bool = False) -> str:
    lines = [f"graph {name} {{"]
    for m in graph.nodes:
        lines.append(f'  {_dot_id(m)} [spatial="{m.spatial}", freq={m.freq}, time={m.time}];')
    if macronodes:
        for i, (h, v) in enumerate(graph.macronodes):
            lines.append(f"  subgraph macronode_{i} {{ {_dot_id(h)}; {_dot_id(v)}; }}")
    for u, v, w in graph.edges:
        label = f"{w:.4f}"
        lines.append(f'  {_dot_id(u)} -- {_dot_id(v)} [weight={label}, label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_csv(graph: ClusterGraph) -> str:
    return csv_text(["u", "v", "weight"], ((str(u), str(v), float(w)) for u, v, w in graph.edges))
