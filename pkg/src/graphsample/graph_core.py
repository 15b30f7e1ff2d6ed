"""Graph shift construction, normalization and edge-list I/O.

All shifts are undirected: the weight matrix is dense, symmetric and has a
zero diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "GraphShift",
    "EdgeListError",
    "build_ring_knn",
    "build_erdos_renyi",
    "build_star",
    "normalize_shift",
    "spectral_radius",
    "load_edge_list",
    "save_edge_list",
]

NORMALIZATION_TOL = 1e-9


class EdgeListError(ValueError):
    """Raised for malformed edge-list files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class GraphShift:
    """Weighted adjacency matrix of an undirected graph.

    Parameters
    ----------
    weights : (N, N) array_like
        Symmetric edge weights with zero diagonal.
    normalized : bool
        Whether ``weights`` has been scaled to unit spectral radius.
    """

    weights: np.ndarray
    normalized: bool = False
    n: int = field(init=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValueError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights contain non-finite entries")
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be exactly symmetric (undirected graph)")
        if np.any(np.diag(w) != 0):
            raise ValueError("weights must have a zero diagonal")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "n", w.shape[0])

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)


def build_ring_knn(n: int, k: int) -> GraphShift:
    """Ring where every node links to its ``k`` nearest neighbors (k/2 per side)."""
    if n < 3:
        raise ValueError(f"ring needs at least 3 nodes, got n={n}")
    if k % 2 != 0 or k < 2:
        raise ValueError(f"neighbor count k must be a positive even integer, got {k}")
    if k >= n:
        raise ValueError(f"neighbor count k={k} must be smaller than n={n}")
    w = np.zeros((n, n))
    rows = np.arange(n)
    for offset in range(1, k // 2 + 1):
        w[rows, (rows + offset) % n] = 1.0
        w[rows, (rows - offset) % n] = 1.0
    return GraphShift(w)


def build_erdos_renyi(n: int, p: float, seed=None) -> GraphShift:
    """G(n, p) random graph without self-loops.

    Pairs (i, j), i < j, are visited in row-major order and each consumes one
    uniform draw ``u`` from ``numpy.random.default_rng(seed)``; the edge is
    present when ``u < p``. Disconnected draws are returned as is.
    """
    if n < 2:
        raise ValueError(f"Erdos-Renyi graph needs n >= 2, got {n}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"edge probability must lie in (0, 1], got {p}")
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    # row-wise draws: same stream as one flat draw, without the n(n-1)/2 buffer
    for i in range(n - 1):
        hits = rng.random(n - 1 - i) < p
        w[i, i + 1:] = hits
    w = w + w.T
    return GraphShift(w)


def build_star(n: int) -> GraphShift:
    """Star graph with node 0 as the hub."""
    if n < 3:
        raise ValueError(f"star needs at least 3 nodes, got n={n}")
    w = np.zeros((n, n))
    w[0, 1:] = 1.0
    w[1:, 0] = 1.0
    return GraphShift(w)


def spectral_radius(a: GraphShift) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(a.weights))))


def normalize_shift(a: GraphShift) -> GraphShift:
    """Scale the shift so that its largest eigenvalue magnitude is one."""
    if not np.any(a.weights):
        raise ValueError("cannot normalize a graph without edges")
    radius = spectral_radius(a)
    return GraphShift(a.weights / radius, normalized=True)


def save_edge_list(a: GraphShift, path) -> None:
    """Write ``a`` as ``i j w`` lines (i < j) preceded by a ``# nodes: N`` header."""
    path = Path(path)
    iu, ju = np.nonzero(np.triu(a.weights, 1))
    try:
        with path.open("w") as fh:
            fh.write(f"# nodes: {a.n}\n")
            if a.normalized:
                fh.write("# normalized: true\n")
            for i, j in zip(iu, ju):
                fh.write(f"{i} {j} {float(a.weights[i, j])!r}\n")
    except OSError as exc:
        raise OSError(f"cannot write edge list to {path}: {exc}") from exc


def load_edge_list(path, n: int | None = None, normalized: bool | None = None) -> GraphShift:
    """Read an edge list written by :func:`save_edge_list` (or by hand).

    Lines are ``i j w`` with 0-based indices. ``i j`` and ``j i`` name the same
    undirected edge and may both appear if their weights agree. Lines starting
    with ``#`` are comments; ``# nodes: N`` declares the node count unless
    ``n`` is passed explicitly. Without either, N is one past the largest index.
    """
    path = Path(path)
    edges: dict[tuple[int, int], float] = {}
    declared = n
    header_normalized = False
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.lower().startswith("normalized:") and normalized is None:
                    flag = body.split(":", 1)[1].strip().lower() in ("true", "1", "yes")
                    header_normalized = flag
                elif body.lower().startswith("nodes:") and n is None:
                    try:
                        declared = int(body.split(":", 1)[1])
                    except ValueError:
                        raise EdgeListError(f"bad node-count header {line!r}", lineno) from None
                continue
            parts = line.split()
            if len(parts) != 3:
                raise EdgeListError(f"expected 'i j w', got {line!r}", lineno)
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise EdgeListError(f"cannot parse {line!r}", lineno) from None
            if i < 0 or j < 0 or (declared is not None and max(i, j) >= declared):
                raise EdgeListError(f"node index out of range for n={declared}: {line!r}", lineno)
            if i == j:
                raise EdgeListError(f"self-loop on node {i} not allowed", lineno)
            if not np.isfinite(w):
                raise EdgeListError(f"non-finite weight {parts[2]!r}", lineno)
            key = (min(i, j), max(i, j))
            if key in edges and edges[key] != w:
                raise EdgeListError(
                    f"edge {key} repeated with conflicting weight {w!r} (was {edges[key]!r})", lineno
                )
            edges[key] = w
    if declared is None:
        declared = 1 + max((j for _, j in edges), default=-1)
    if declared < 1:
        raise EdgeListError("edge list declares no nodes")
    weights = np.zeros((declared, declared))
    for (i, j), w in edges.items():
        weights[i, j] = weights[j, i] = w
    if normalized is None:
        normalized = header_normalized
    return GraphShift(weights, normalized=normalized)
