"""Plain-text file formats for topologies and datasets.

Topology file: first line "N E", then E lines "i j" (0-based, i < j).
Dataset file: one configuration per line, space-separated "+1"/"-1"
(plain "1" also accepted); every line must have exactly N entries.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .model import Dataset, GraphTopology


def load_topology(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise InvalidInputError(f"{path}: empty topology file")
    head = lines[0].split()
    if len(head) != 2:
        raise InvalidInputError(f"{path}: first line must be 'N E'")
    n, e = int(head[0]), int(head[1])
    if len(lines) - 1 != e:
        raise InvalidInputError(
            f"{path}: expected {e} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidInputError(f"{path}: malformed edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return GraphTopology(n, tuple(edges))


def save_topology(graph, path):
    with open(path, "w") as fh:
        fh.write(f"{graph.num_nodes} {graph.num_edges}\n")
        for i, j in graph.edges:
            fh.write(f"{i} {j}\n")


def load_dataset(path, num_nodes):
    rows = []
    with open(path) as fh:
        for lineno, ln in enumerate(fh, start=1):
            ln = ln.strip()
            if not ln:
                continue
            parts = ln.split()
            if len(parts) != num_nodes:
                raise InvalidInputError(
                    f"{path}:{lineno}: expected {num_nodes} entries, got {len(parts)}")
            try:
                vals = [int(p) for p in parts]
            except ValueError as exc:
                raise InvalidInputError(f"{path}:{lineno}: {exc}") from None
            if any(v not in (-1, 1) for v in vals):
                raise InvalidInputError(
                    f"{path}:{lineno}: entries must be +1 or -1")
            rows.append(vals)
    if not rows:
        raise InvalidInputError(f"{path}: no configurations found")
    return Dataset(np.asarray(rows, dtype=np.int8))


def save_dataset(dataset, path):
    with open(path, "w") as fh:
        for row in dataset.examples:
            fh.write(" ".join("+1" if v > 0 else "-1" for v in row) + "\n")
