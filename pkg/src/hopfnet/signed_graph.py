"""Signed directed graphs: construction, switching and structural tests.

Entry ``adjacency[i, k]`` is the weight with which node ``i`` senses node
``k`` (+1 cooperative / aligned, -1 antagonistic / opposed). Nodes are
1-based in edge lists and 0-based in arrays.
"""

from __future__ import annotations

from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from . import spectral

# relative tolerance for treating an eigenvector entry as zero
ZERO_ENTRY_TOL = 1e-8


class GraphSpecError(ValueError):
    pass


class SignedGraph:
    """Immutable signed adjacency matrix with zero diagonal."""

    __slots__ = ("_adjacency",)

    def __init__(self, adjacency):
        a = np.array(adjacency, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphSpecError(f"adjacency must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise GraphSpecError("graph needs at least one node")
        if not np.all(np.isfinite(a)):
            raise GraphSpecError("adjacency entries must be finite")
        if np.any(np.diag(a) != 0):
            raise GraphSpecError("adjacency diagonal must be zero (no self-loops)")
        a.setflags(write=False)
        self._adjacency = a

    @property
    def adjacency(self) -> np.ndarray:
        return self._adjacency

    @property
    def n(self) -> int:
        return self._adjacency.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return np.array_equal(self._adjacency, other._adjacency)

    def __hash__(self):
        return hash(self._adjacency.tobytes())

    def __repr__(self):
        return f"SignedGraph(n={self.n}, adjacency={self._adjacency.tolist()})"

    def is_signed_unweighted(self) -> bool:
        return bool(np.all(np.isin(self._adjacency, (-1.0, 0.0, 1.0))))

    def edges(self) -> list[tuple[int, int, float]]:
        """Edge list ``(i, k, weight)`` with 1-based nodes, row-major."""
        rows, cols = np.nonzero(self._adjacency)
        return [(int(i) + 1, int(k) + 1, float(self._adjacency[i, k])) for i, k in zip(rows, cols)]

    def to_spec(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}


def graph_from_spec(spec: Mapping[str, Any]) -> SignedGraph:
    """Build a graph from ``{"n": ..., "edges": [[i, k, w], ...]}`` or ``{"adjacency": rows}``.

    Edges are 1-based ``(i, k, w)`` triples setting ``adjacency[i, k] = w``.
    """
    if "adjacency" in spec:
        rows = spec["adjacency"]
        try:
            a = np.array(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise GraphSpecError(f"adjacency is not a numeric matrix: {exc}") from None
        if "n" in spec and a.ndim == 2 and a.shape[0] != int(spec["n"]):
            raise GraphSpecError(f"n={spec['n']} does not match adjacency size {a.shape[0]}")
        return SignedGraph(a)

    if "n" not in spec:
        raise GraphSpecError("graph spec needs 'n' with 'edges', or 'adjacency'")
    n = spec["n"]
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise GraphSpecError(f"node count must be a positive integer, got {n!r}")
    a = np.zeros((n, n))
    seen = set()
    for idx, edge in enumerate(spec.get("edges", [])):
        if len(edge) != 3:
            raise GraphSpecError(f"edge {idx} must be (i, k, weight), got {edge!r}")
        i, k, w = edge
        for node in (i, k):
            if isinstance(node, bool) or not isinstance(node, (int, np.integer)) or not 1 <= node <= n:
                raise GraphSpecError(f"edge {idx}: node {node!r} out of range 1..{n}")
        if i == k:
            raise GraphSpecError(f"edge {idx}: self-loop at node {i}")
        if (i, k) in seen:
            raise GraphSpecError(f"edge {idx}: duplicate edge ({i}, {k})")
        w = float(w)
        if w == 0 or not np.isfinite(w):
            raise GraphSpecError(f"edge {idx}: weight must be finite and nonzero")
        seen.add((i, k))
        a[i - 1, k - 1] = w
    return SignedGraph(a)


def signed_cycle(n: int, negative_edges: Iterable[int] = (), reverse: bool = False) -> SignedGraph:
    """Directed cycle on ``n`` nodes with unit weights.

    Edge position ``k`` (1-based) joins node ``k`` and node ``k+1 (mod n)``
    and is stored at ``adjacency[k, k+1]``; with ``reverse=True`` it is
    stored at ``adjacency[k+1, k]`` instead (the transposed cycle). Edges
    listed in ``negative_edges`` get weight -1.
    """
    if n < 2:
        raise GraphSpecError("a cycle needs at least 2 nodes")
    negative = set(negative_edges)
    for pos in negative:
        if not 1 <= pos <= n:
            raise GraphSpecError(f"edge position {pos} out of range 1..{n}")
    a = np.zeros((n, n))
    for pos in range(1, n + 1):
        i, k = pos - 1, pos % n
        if reverse:
            i, k = k, i
        a[i, k] = -1.0 if pos in negative else 1.0
    return SignedGraph(a)


def complete_graph(n: int, weight: float = 1.0) -> SignedGraph:
    return SignedGraph(weight * (np.ones((n, n)) - np.eye(n)))


class SwitchingSigns:
    """Diagonal of a switching matrix: a vector of +1/-1 entries."""

    __slots__ = ("_signs",)

    def __init__(self, signs: Sequence[float]):
        s = np.array(signs, dtype=float, copy=True)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("signs must be a non-empty vector")
        if not np.all(np.abs(s) == 1.0):
            raise ValueError("switching signs must be exactly +1 or -1")
        s.setflags(write=False)
        self._signs = s

    @property
    def signs(self) -> np.ndarray:
        return self._signs

    def __len__(self):
        return self._signs.size

    def __eq__(self, other):
        if not isinstance(other, SwitchingSigns):
            return NotImplemented
        return np.array_equal(self._signs, other._signs)

    def __repr__(self):
        return f"SwitchingSigns({self._signs.astype(int).tolist()})"


def switch_graph(g: SignedGraph, m: SwitchingSigns | Sequence[float]) -> SignedGraph:
    """Return the graph with adjacency ``M A M``, ``M = diag(m)``."""
    if not isinstance(m, SwitchingSigns):
        m = SwitchingSigns(m)
    if len(m) != g.n:
        raise ValueError(f"switching signs have length {len(m)}, graph has {g.n} nodes")
    s = m.signs
    return SignedGraph(s[:, None] * g.adjacency * s[None, :])


def is_undirected(g: SignedGraph) -> bool:
    return bool(np.array_equal(g.adjacency, g.adjacency.T))


def find_switching_to_eventually_positive(g: SignedGraph) -> Optional[SwitchingSigns]:
    """Signs ``m`` making ``M A M`` eventually positive, or ``None``.

    Uses the sign pattern of the dominant right eigenvector; the candidate is
    accepted only if the left eigenvector shares that sign pattern and the
    switched matrix passes :func:`spectral.is_eventually_positive`.
    """
    spec = spectral.eig(g.adjacency)
    dom = spectral.dominant_pair(spec)
    if dom is None:
        return None
    v = np.real_if_close(dom.right, tol=1e6)
    w = np.real_if_close(dom.left, tol=1e6)
    if np.iscomplexobj(v) or np.iscomplexobj(w):
        return None
    if np.any(np.abs(v) <= ZERO_ENTRY_TOL * np.max(np.abs(v))):
        return None
    if np.any(np.abs(w) <= ZERO_ENTRY_TOL * np.max(np.abs(w))):
        return None
    m = np.sign(v)
    mw = m * w
    if not (np.all(mw > 0) or np.all(mw < 0)):
        return None
    switched = switch_graph(g, m)
    if not spectral.is_eventually_positive(switched.adjacency):
        return None
    return SwitchingSigns(m)


def is_eventually_balanced(g: SignedGraph) -> bool:
    """True if ``g`` is switching equivalent to an eventually positive graph."""
    return find_switching_to_eventually_positive(g) is not None
