"""Weighted undirected graphs and the matrices derived from them.

Graphs are small and dense (a few hundred nodes), so every matrix here is a
plain ``numpy`` array.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DuplicateEdgeError,
    GraphValidationError,
    IsolatedNodeError,
    ParseError,
    SelfLoopError,
)

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph on nodes ``0..n-1`` with positive edge weights.

    Edges are stored canonically as ``(i, j, w)`` with ``i < j``, sorted by
    ``(i, j)``, so two graphs with the same edge set compare equal regardless
    of input order. ``coords`` carries optional node positions (geometric
    graphs) and does not take part in equality.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    coords: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __init__(self, n: int, edges: Iterable[Sequence], coords=None):
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise GraphValidationError(f"node count must be a positive integer, got {n!r}")
        n = int(n)
        seen = set()
        canon = []
        for e in edges:
            i, j, w = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= i < n and 0 <= j < n):
                raise GraphValidationError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise SelfLoopError(f"self-loop at node {i}")
            if not (math.isfinite(w) and w > 0):
                raise GraphValidationError(f"edge ({i}, {j}) has invalid weight {w!r}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}")
            seen.add(key)
            canon.append((key[0], key[1], w))
        canon.sort(key=lambda t: (t[0], t[1]))
        if coords is not None:
            coords = np.asarray(coords, dtype=float)
            if coords.shape[0] != n:
                raise DimensionMismatchError("coords must have one row per node")
            coords.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "coords", coords)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(i, j) for i, j, _ in self.edges}

    def isolated_nodes(self) -> list[int]:
        touched = np.zeros(self.n, dtype=bool)
        for i, j, _ in self.edges:
            touched[i] = touched[j] = True
        return [int(v) for v in np.flatnonzero(~touched)]

    def subgraph(self, nodes: Sequence[int]) -> "WeightedGraph":
        """Induced subgraph, relabelled to ``0..len(nodes)-1`` in the given order."""
        index = {int(v): k for k, v in enumerate(nodes)}
        edges = [
            (index[i], index[j], w)
            for i, j, w in self.edges
            if i in index and j in index
        ]
        coords = None if self.coords is None else self.coords[list(nodes)]
        return WeightedGraph(len(nodes), edges, coords=coords)


def adjacency_matrix(g: WeightedGraph) -> np.ndarray:
    W = np.zeros((g.n, g.n))
    for i, j, w in g.edges:
        W[i, j] = W[j, i] = w
    return W


def degree_vector(g: WeightedGraph) -> np.ndarray:
    """Weighted degree of every node (sum of incident edge weights)."""
    d = np.zeros(g.n)
    for i, j, w in g.edges:
        d[i] += w
        d[j] += w
    return d


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Combinatorial Laplacian ``D - W``."""
    W = adjacency_matrix(g)
    return np.diag(W.sum(axis=1)) - W


def normalized_laplacian(g: WeightedGraph) -> np.ndarray:
    """Symmetric normalized Laplacian ``I - D^{-1/2} W D^{-1/2}``.

    Raises IsolatedNodeError if any node has zero degree.
    """
    d = degree_vector(g)
    isolated = np.flatnonzero(d <= 0)
    if isolated.size:
        raise IsolatedNodeError(isolated.tolist())
    s = 1.0 / np.sqrt(d)
    L = np.eye(g.n) - s[:, None] * adjacency_matrix(g) * s[None, :]
    return symmetrize(L)


def check_symmetric(A: np.ndarray, tol: float = SYMMETRY_TOL) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {A.shape}")
    if A.size and np.max(np.abs(A - A.T)) > tol:
        raise GraphValidationError("matrix is not symmetric")
    return A


def symmetrize(A: np.ndarray) -> np.ndarray:
    A = check_symmetric(A)
    return 0.5 * (A + A.T)


def connected_components(g: WeightedGraph) -> list[list[int]]:
    """Components as sorted node lists, ordered by smallest member."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def is_connected(g: WeightedGraph) -> bool:
    return len(connected_components(g)) == 1


# ---------------------------------------------------------------------------
# File formats

def _format_weight(w: float) -> str:
    # 17 significant digits round-trip every double exactly
    return format(w, ".17g")


def dumps_graph(g: WeightedGraph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{i} {j} {_format_weight(w)}" for i, j, w in g.edges)
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> WeightedGraph:
    n = None
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise ParseError("first line must be the node count", lineno)
            try:
                n = int(parts[0])
            except ValueError:
                raise ParseError(f"invalid node count {parts[0]!r}", lineno) from None
            if n < 1:
                raise ParseError("node count must be positive", lineno)
            continue
        if len(parts) != 3:
            raise ParseError(f"expected 'i j w', got {line!r}", lineno)
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"cannot parse edge {line!r}", lineno) from None
        if i == j:
            raise SelfLoopError(f"line {lineno}: self-loop at node {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdgeError(
                f"line {lineno}: edge {key} already given on line {seen[key]}"
            )
        seen[key] = lineno
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"node index out of range for n={n}", lineno)
        if not (math.isfinite(w) and w > 0):
            raise ParseError(f"weight must be positive and finite, got {parts[2]}", lineno)
        edges.append((i, j, w))
    if n is None:
        raise ParseError("empty graph file", 1)
    return WeightedGraph(n, edges)


def load_graph(path: str | os.PathLike) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return loads_graph(fh.read())


def save_graph(g: WeightedGraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_graph(g))


def load_signal(path: str | os.PathLike, n: int | None = None) -> np.ndarray:
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ParseError(f"cannot parse value {line!r}", lineno) from None
    if n is not None and len(values) != n:
        raise DimensionMismatchError(f"signal has {len(values)} values, graph has {n} nodes")
    return np.array(values)


def save_signal(values: Sequence[float], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(_format_weight(float(v)) + "\n" for v in values)
